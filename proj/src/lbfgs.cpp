#include "hcrf/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "hcrf/errors.hpp"
#include "hcrf/kernels.hpp"

namespace hcrf {

std::string_view status_name(OptimizerStatus s) {
  switch (s) {
    case OptimizerStatus::kConverged: return "converged";
    case OptimizerStatus::kMaxIterations: return "max-iterations";
    case OptimizerStatus::kLineSearchFailed: return "line-search-failed";
    case OptimizerStatus::kStalled: return "stalled";
  }
  return "unknown";
}

namespace {

void require_finite(double f, std::span<const double> g, int iteration) {
  bool ok = std::isfinite(f);
  for (double v : g) ok = ok && std::isfinite(v);
  if (!ok) {
    throw NumericalError("non-finite objective or gradient at iteration " + std::to_string(iteration) +
                         " (objective = " + std::to_string(f) + ")");
  }
}

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

}  // namespace

LbfgsResult minimize_lbfgs(const ObjectiveFn& f, std::vector<double> x0, const LbfgsOptions& opts) {
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n), x_new(n), g_new(n), dir(n);

  double fx = f(res.x, g);
  require_finite(fx, g, 0);
  double gnorm = std::sqrt(kernels::sum_squares(g));
  res.trace.push_back({0, fx, gnorm, 0.0});

  std::deque<Correction> history;
  std::vector<double> alpha_coef;
  res.status = OptimizerStatus::kMaxIterations;
  int stalled = 0;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    if (gnorm <= opts.grad_tolerance) {
      res.status = OptimizerStatus::kConverged;
      break;
    }
    // Two-loop recursion: dir = -H g.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
    alpha_coef.assign(history.size(), 0.0);
    for (std::size_t k = history.size(); k-- > 0;) {
      alpha_coef[k] = history[k].rho * kernels::dot(history[k].s, dir);
      kernels::axpy(-alpha_coef[k], history[k].y, dir);
    }
    if (!history.empty()) {
      const auto& last = history.back();
      const double gamma = kernels::dot(last.s, last.y) / kernels::dot(last.y, last.y);
      for (double& d : dir) d *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double beta = history[k].rho * kernels::dot(history[k].y, dir);
      kernels::axpy(alpha_coef[k] - beta, history[k].s, dir);
    }

    double slope = kernels::dot(g, dir);
    if (!(slope < 0.0)) {
      // Not a descent direction; restart from steepest descent.
      history.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = -gnorm * gnorm;
    }

    double step = history.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + step * dir[i];
      f_new = f(x_new, g_new);
      require_finite(f_new, g_new, iter);
      if (f_new <= fx + opts.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.status = OptimizerStatus::kLineSearchFailed;
      break;
    }

    Correction c{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = x_new[i] - res.x[i];
      c.y[i] = g_new[i] - g[i];
    }
    const double sy = kernels::dot(c.s, c.y);
    if (sy > 1e-12 * std::sqrt(kernels::sum_squares(c.s) * kernels::sum_squares(c.y))) {
      c.rho = 1.0 / sy;
      history.push_back(std::move(c));
      if (static_cast<int>(history.size()) > opts.history) history.pop_front();
    }

    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fx));
    stalled = fx - f_new <= floor ? stalled + 1 : 0;
    res.x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    gnorm = std::sqrt(kernels::sum_squares(g));
    res.trace.push_back({iter, fx, gnorm, step});
    if (opts.stall_iterations > 0 && stalled >= opts.stall_iterations && gnorm > opts.grad_tolerance) {
      res.status = OptimizerStatus::kStalled;
      break;
    }
  }
  if (res.status == OptimizerStatus::kMaxIterations && gnorm <= opts.grad_tolerance) {
    res.status = OptimizerStatus::kConverged;
  }
  res.objective = fx;
  res.grad_norm = gnorm;
  return res;
}

}  // namespace hcrf
