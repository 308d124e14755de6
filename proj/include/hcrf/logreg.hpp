#pragma once
// L2-regularized binary logistic regression on document vectors.
//
// objective(w, b) = sum_i [softplus(z_i) - y_i z_i] + ||w||^2 / (2C),
// z_i = <w, x_i> + b. The intercept is not regularized.

#include <cstdint>
#include <span>
#include <vector>

#include "hcrf/lbfgs.hpp"
#include "hcrf/model.hpp"

namespace hcrf {

struct LogRegModel {
  std::vector<double> weights;
  double intercept = 0.0;
  double C = 1.0;
};

struct LogRegOptions {
  double C = 1.0;
  double grad_tolerance = 1e-8;
  int max_iterations = 2000;
  std::uint64_t seed = 1;
  double init_scale = 0.01;
};

struct LogRegFit {
  LogRegModel model;
  double objective = 0.0;
  double grad_norm = 0.0;
  OptimizerStatus status = OptimizerStatus::kMaxIterations;
};

/// rows holds one document vector of width dim per label. Throws
/// InvalidInput on empty or single-class data and ConfigError when C <= 0.
LogRegFit train_logreg(std::span<const double> rows, std::size_t dim, const std::vector<Label>& labels,
                       const LogRegOptions& opts);

/// Objective at (weights, intercept); grad (size dim + 1, intercept last) may be empty.
double logreg_objective(std::span<const double> rows, std::size_t dim, const std::vector<Label>& labels,
                        std::span<const double> weights, double intercept, double C, std::span<double> grad);

struct LogRegPrediction {
  Label label = 0;
  double probability = 0.5;  // P(label 1 | x)
};

/// Label 1 iff probability > 0.5. Throws InvalidInput on a dimension mismatch.
LogRegPrediction predict_logreg(const LogRegModel& model, std::span<const double> x);
std::vector<LogRegPrediction> predict_logreg_batch(const LogRegModel& model, std::span<const double> rows);

/// Per-dimension mean of the sequence's vectors.
std::vector<double> aggregate_document_vector(const ObservationSequence& seq);

}  // namespace hcrf
