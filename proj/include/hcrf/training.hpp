#pragma once
// Regularized conditional likelihood training of the HCRF.
//
// objective(theta) = -sum_i log P(y_i | x_i, theta) + (lambda / 2) * ||theta||^2
//
// The 1/2 makes the regularizer's gradient exactly lambda * theta.

#include <cstdint>
#include <vector>

#include "hcrf/lbfgs.hpp"
#include "hcrf/model.hpp"

namespace hcrf {

struct LabeledSequence {
  ObservationSequence x;
  Label y = 0;
};

using Dataset = std::vector<LabeledSequence>;

struct TrainingConfig {
  std::size_t num_hidden_states = 3;  // searched over {2,3,4,5} in the original experiments
  std::size_t context_window = 0;     // {0,1,2}
  double l2_lambda = 0.1;             // {0.01,0.05,0.075,0.1,0.25,0.5,1}
  int max_iterations = 300;
  double grad_tolerance = 1e-4;
  std::uint64_t seed = 1;
  double init_scale = 0.01;  // initial weights ~ U(-init_scale, init_scale)
  int restarts = 1;          // extra seeds; the lowest final objective wins
  unsigned num_threads = 1;
};

struct TrainingTrace {
  std::vector<IterationRecord> iterations;
  OptimizerStatus status = OptimizerStatus::kMaxIterations;
  std::uint64_t seed = 0;  // seed of the selected restart
};

struct TrainResult {
  HcrfParameters params;
  TrainingTrace trace;
};

/// Value of the regularized negative log-likelihood.
double objective(const Dataset& data, const HcrfParameters& theta, double lambda);

/// Gradient of objective() with the same shape as theta.
HcrfParameters gradient(const Dataset& data, const HcrfParameters& theta, double lambda);

/// Objective and gradient in one pass. Per-sequence terms are evaluated in
/// fixed-size chunks whose partial sums are reduced in dataset order, so the
/// result is bitwise independent of num_threads.
double objective_and_gradient(const Dataset& data, const HcrfParameters& theta, double lambda,
                              std::span<double> grad, unsigned num_threads = 1);

/// Throws InvalidInput on an empty dataset, a missing label, or inconsistent
/// dimensions; NumericalError if optimization diverges.
TrainResult train(const Dataset& data, std::size_t num_labels, const TrainingConfig& config);

/// Replaces each vector with the concatenation of its 2w+1 neighbours
/// (zero-padded at the boundaries). Output dimension is (2w+1) * D.
ObservationSequence apply_context_window(const ObservationSequence& seq, std::size_t w);

/// Initial parameters ~ U(-scale, scale) drawn from seed.
HcrfParameters random_parameters(std::size_t num_labels, std::size_t num_states, std::size_t dim,
                                 std::uint64_t seed, double scale);

}  // namespace hcrf
