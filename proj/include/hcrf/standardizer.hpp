#pragma once
// Per-dimension z-scoring fitted on training data (population std).
// Zero-variance dimensions are only centered; dimensions excluded from
// fitting pass through unchanged.

#include <span>
#include <vector>

namespace hcrf {

class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> stddev);

  /// rows is row-major with `dim` columns. Columns with enabled[c] == false
  /// get mean 0 and std 1. An empty mask enables every column.
  static Standardizer fit(std::span<const double> rows, std::size_t dim, const std::vector<bool>& enabled = {});

  void apply_inplace(std::span<double> rows) const;
  std::vector<double> apply(std::span<const double> rows) const;

  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

}  // namespace hcrf
