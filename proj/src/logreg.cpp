#include "hcrf/logreg.hpp"

#include <cmath>

#include "hcrf/errors.hpp"
#include "hcrf/kernels.hpp"
#include "hcrf/rng.hpp"

namespace hcrf {
namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Newton refinement is used below this many parameters; the Hessian is dense.
constexpr std::size_t kNewtonMaxParams = 1024;

// In-place Cholesky solve of the SPD system a x = b (a is n x n, row-major).
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a[i * n + k] * b[k];
    b[i] = v / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= a[k * n + i] * b[k];
    b[i] = v / a[i * n + i];
  }
  return true;
}

void check_rows(std::span<const double> rows, std::size_t dim, std::size_t n) {
  if (dim == 0) throw InvalidInput("document vectors must have positive dimension");
  if (rows.size() != n * dim) throw InvalidInput("document matrix size does not match labels and dimension");
}

}  // namespace

double logreg_objective(std::span<const double> rows, std::size_t dim, const std::vector<Label>& labels,
                        std::span<const double> weights, double intercept, double C, std::span<double> grad) {
  check_rows(rows, dim, labels.size());
  if (weights.size() != dim) throw InvalidInput("weight dimension mismatch");
  const bool with_grad = !grad.empty();
  if (with_grad) {
    if (grad.size() != dim + 1) throw InvalidInput("gradient buffer has the wrong size");
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  double f = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto x = rows.subspan(i * dim, dim);
    const double z = kernels::dot(weights, x) + intercept;
    const double y = labels[i] == 1 ? 1.0 : 0.0;
    f += softplus(z) - y * z;
    if (with_grad) {
      const double r = sigmoid(z) - y;
      kernels::axpy(r, x, grad.first(dim));
      grad[dim] += r;
    }
  }
  f += kernels::sum_squares(weights) / (2.0 * C);
  if (with_grad) kernels::axpy(1.0 / C, weights, grad.first(dim));
  return f;
}

LogRegFit train_logreg(std::span<const double> rows, std::size_t dim, const std::vector<Label>& labels,
                       const LogRegOptions& opts) {
  if (labels.empty()) throw InvalidInput("cannot train logistic regression on no documents");
  check_rows(rows, dim, labels.size());
  if (!(opts.C > 0.0) || !std::isfinite(opts.C)) throw ConfigError("C must be a positive finite value");
  bool seen[2] = {false, false};
  for (Label y : labels) {
    if (y > 1) throw InvalidInput("logistic regression labels must be 0 or 1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) throw InvalidInput("logistic regression needs both classes in the training data");
  for (double v : rows) {
    if (!std::isfinite(v)) throw InvalidInput("document vectors must be finite");
  }

  Rng rng(opts.seed);
  std::vector<double> x0(dim + 1);
  for (auto& v : x0) v = (2.0 * uniform01(rng) - 1.0) * opts.init_scale;

  const ObjectiveFn f = [&](std::span<const double> x, std::span<double> g) {
    return logreg_objective(rows, dim, labels, x.first(dim), x[dim], opts.C, g);
  };
  LbfgsOptions lo;
  lo.max_iterations = opts.max_iterations;
  lo.grad_tolerance = opts.grad_tolerance;
  auto res = minimize_lbfgs(f, std::move(x0), lo);

  // L-BFGS stalls where objective differences reach rounding level, usually
  // well above the gradient tolerance. Newton steps accepted on gradient-norm
  // decrease finish the job for moderate dimensions.
  const std::size_t m = dim + 1;
  std::vector<double> g(m), g_try(m), x_try(m);
  for (int it = 0; it < 50 && res.grad_norm > opts.grad_tolerance && m <= kNewtonMaxParams; ++it) {
    f(res.x, g);
    std::vector<double> h(m * m, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto x = rows.subspan(i * dim, dim);
      const double p = sigmoid(kernels::dot(std::span<const double>(res.x).first(dim), x) + res.x[dim]);
      const double s = p * (1.0 - p);
      for (std::size_t a = 0; a < m; ++a) {
        const double xa = a < dim ? x[a] : 1.0;
        if (xa == 0.0) continue;
        for (std::size_t b = 0; b <= a; ++b) h[a * m + b] += s * xa * (b < dim ? x[b] : 1.0);
      }
    }
    for (std::size_t a = 0; a < dim; ++a) h[a * m + a] += 1.0 / opts.C;
    std::vector<double> step(g);
    if (!cholesky_solve(h, step, m)) break;
    for (std::size_t a = 0; a < m; ++a) x_try[a] = res.x[a] - step[a];
    const double f_try = f(x_try, g_try);
    const double gn = std::sqrt(kernels::sum_squares(g_try));
    if (!std::isfinite(f_try) || !(gn < res.grad_norm)) break;
    res.x = x_try;
    res.objective = f_try;
    res.grad_norm = gn;
    if (gn <= opts.grad_tolerance) res.status = OptimizerStatus::kConverged;
  }

  LogRegFit fit;
  fit.model.weights.assign(res.x.begin(), res.x.begin() + static_cast<long>(dim));
  fit.model.intercept = res.x[dim];
  fit.model.C = opts.C;
  fit.objective = res.objective;
  fit.grad_norm = res.grad_norm;
  fit.status = res.status;
  return fit;
}

LogRegPrediction predict_logreg(const LogRegModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size()) throw InvalidInput("document vector dimension does not match the model");
  const double p = sigmoid(kernels::dot(model.weights, x) + model.intercept);
  return {p > 0.5 ? Label{1} : Label{0}, p};
}

std::vector<LogRegPrediction> predict_logreg_batch(const LogRegModel& model, std::span<const double> rows) {
  const std::size_t dim = model.weights.size();
  if (dim == 0 || rows.size() % dim != 0) throw InvalidInput("document matrix does not match the model");
  std::vector<LogRegPrediction> out;
  out.reserve(rows.size() / dim);
  for (std::size_t i = 0; i < rows.size() / dim; ++i) out.push_back(predict_logreg(model, rows.subspan(i * dim, dim)));
  return out;
}

std::vector<double> aggregate_document_vector(const ObservationSequence& seq) {
  std::vector<double> mean(seq.dim(), 0.0);
  for (std::size_t j = 0; j < seq.length(); ++j) kernels::axpy(1.0, seq.row(j), mean);
  for (auto& v : mean) v /= static_cast<double>(seq.length());
  return mean;
}

}  // namespace hcrf
