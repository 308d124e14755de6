#include "hcrf/standardizer.hpp"

#include <cmath>

#include "hcrf/errors.hpp"

namespace hcrf {

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) throw InvalidInput("standardizer mean/std length mismatch");
  for (double s : stddev_) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("standard deviation must be finite and >= 0");
  }
}

Standardizer Standardizer::fit(std::span<const double> rows, std::size_t dim, const std::vector<bool>& enabled) {
  if (dim == 0 || rows.size() % dim != 0) throw InvalidInput("standardizer input is not a dim-column matrix");
  if (!enabled.empty() && enabled.size() != dim) throw InvalidInput("standardizer mask has the wrong length");
  const std::size_t n = rows.size() / dim;
  std::vector<double> mean(dim, 0.0), sd(dim, 1.0);
  if (n == 0) return Standardizer(std::move(mean), std::move(sd));
  for (std::size_t c = 0; c < dim; ++c) {
    if (!enabled.empty() && !enabled[c]) continue;
    double m = 0.0;
    for (std::size_t r = 0; r < n; ++r) m += rows[r * dim + c];
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = rows[r * dim + c] - m;
      v += d * d;
    }
    mean[c] = m;
    sd[c] = std::sqrt(v / static_cast<double>(n));
  }
  return Standardizer(std::move(mean), std::move(sd));
}

void Standardizer::apply_inplace(std::span<double> rows) const {
  const std::size_t dim = mean_.size();
  if (dim == 0 || rows.size() % dim != 0) throw InvalidInput("standardizer dimension mismatch");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t c = i % dim;
    const double centered = rows[i] - mean_[c];
    rows[i] = stddev_[c] > 0.0 ? centered / stddev_[c] : centered;
  }
}

std::vector<double> Standardizer::apply(std::span<const double> rows) const {
  std::vector<double> out(rows.begin(), rows.end());
  apply_inplace(out);
  return out;
}

}  // namespace hcrf
