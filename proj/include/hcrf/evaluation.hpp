#pragma once
// Stratified k-fold cross-validation and classification metrics.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcrf/classifier.hpp"
#include "hcrf/model.hpp"

namespace hcrf {

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> fold_of;  // fold index per document

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  /// (train, test) document indices, each ascending.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split(std::size_t fold) const;
};

/// Each class is shuffled by seed and dealt round-robin over the folds, the
/// deal continuing where the previous class stopped. Per-fold class counts
/// therefore differ from k-th shares by less than one document. Throws
/// InvalidInput when k < 2 or a present class has fewer than k members.
FoldPlan stratified_k_fold(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed);

struct ClassMetrics {
  double precision = 0.0;  // 0 when the class is never predicted
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  std::vector<std::string> labels;
  std::vector<ClassMetrics> per_class;
  double weighted_f1 = 0.0;  // sum_c prior_c * F1_c with gold priors
  double accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][predicted]
  std::size_t total = 0;

  /// Percentage rounded half away from zero.
  static int percent(double fraction);
};

/// Throws InvalidInput on length mismatch, empty input, or a label outside the set.
MetricsReport compute_metrics(const std::vector<Label>& predicted, const std::vector<Label>& gold,
                              const std::vector<std::string>& label_names);

struct FoldResult {
  std::size_t fold = 0;
  MetricsReport metrics;
  std::uint64_t fitted_checksum = 0;  // 0 for models without fitted features
  std::string selected;               // resolved hyperparameters
};

struct CvReport {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  MetricsReport pooled;
  std::vector<FoldResult> folds;
  std::vector<Prediction> predictions;  // in corpus order
  std::vector<Label> gold;
};

/// Pooled cross-validation: features and model are fitted on each training
/// fold only. Folds run on up to num_threads threads; results are assembled
/// by fold index, so the report does not depend on scheduling.
CvReport cross_validate(const Corpus& docs, const FeatureConfig& features,
                        std::shared_ptr<const FeatureResources> resources, const ModelConfig& model, std::size_t k,
                        std::uint64_t seed, unsigned num_threads = 1);

struct SignificanceResult {
  double mean_difference = 0.0;
  double t = 0.0;
  std::size_t df = 0;
  double p = 1.0;           // two-sided
  bool degenerate = false;  // zero variance of the differences; p is then 1
};

/// Paired two-sided t-test over per-fold scores. Throws InvalidInput unless
/// both lists have the same length >= 2.
SignificanceResult fold_significance(const std::vector<double>& a, const std::vector<double>& b);

std::string describe(const ModelConfig& cfg);

nlohmann::ordered_json metrics_json(const MetricsReport& m);
nlohmann::ordered_json cv_report_json(const CvReport& r);
std::string format_metrics(const MetricsReport& m);
std::string format_cv_report(const CvReport& r);

}  // namespace hcrf
