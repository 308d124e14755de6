#pragma once
// Limited-memory BFGS with a backtracking (Armijo) line search.
//
// Every accepted iterate strictly satisfies the sufficient-decrease
// condition, so the objective trace is monotone non-increasing.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace hcrf {

struct LbfgsOptions {
  int max_iterations = 300;
  double grad_tolerance = 1e-5;  // on the Euclidean gradient norm
  int history = 10;
  double armijo = 1e-4;
  int max_backtracks = 50;
  // Stop after this many consecutive accepted steps whose decrease is at
  // the rounding level of the objective (0 disables).
  int stall_iterations = 5;
};

enum class OptimizerStatus { kConverged, kMaxIterations, kLineSearchFailed, kStalled };

std::string_view status_name(OptimizerStatus s);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct LbfgsResult {
  std::vector<double> x;
  double objective = 0.0;
  double grad_norm = 0.0;
  OptimizerStatus status = OptimizerStatus::kMaxIterations;
  std::vector<IterationRecord> trace;  // entry 0 is the starting point
};

/// Evaluates f(x) and writes its gradient into grad.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Throws NumericalError if the objective or gradient becomes non-finite.
LbfgsResult minimize_lbfgs(const ObjectiveFn& f, std::vector<double> x0, const LbfgsOptions& opts);

}  // namespace hcrf
