#pragma once
// Document polarity classifiers over a feature pipeline: the HCRF, the
// document-level logistic regression baseline, and a majority-label dummy.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hcrf/corpus.hpp"
#include "hcrf/logreg.hpp"
#include "hcrf/model.hpp"
#include "hcrf/pipeline.hpp"
#include "hcrf/training.hpp"

namespace hcrf {

enum class ModelKind { kHcrf, kLogReg, kMajority };

std::string_view model_kind_name(ModelKind k);
ModelKind parse_model_kind(std::string_view name);

struct ModelConfig {
  ModelKind kind = ModelKind::kHcrf;
  TrainingConfig hcrf;
  LogRegOptions logreg;
  // Hyperparameter grids. A grid with more than one value is searched by
  // inner stratified cross-validation on the training documents, scored by
  // weighted F1 (ties keep the earlier candidate). Empty grids use the
  // single value above.
  std::vector<double> l2_grid;
  std::vector<std::size_t> hidden_state_grid;
  std::vector<std::size_t> context_window_grid;
  std::vector<double> c_grid;
  std::size_t inner_folds = 3;

  /// Every single-valued configuration spanned by the grids, in grid order.
  std::vector<ModelConfig> candidates() const;
};

struct Prediction {
  std::string doc_id;
  Label label = 0;
  std::vector<double> posterior;  // one entry per label
};

struct Classifier {
  ModelKind kind = ModelKind::kMajority;
  LabelSet labels = LabelSet::binary_polarity();
  ModelConfig config;  // resolved, single-valued
  std::shared_ptr<FeaturePipeline> pipeline;  // null for the majority model
  std::optional<HcrfParameters> hcrf;
  std::optional<LogRegModel> logreg;
  std::vector<double> priors;  // training label proportions
  std::optional<TrainingTrace> trace;

  Prediction predict(const Transcript& doc) const;
  std::vector<Prediction> predict(const Corpus& docs) const;
};

/// Labels of a corpus whose documents all have a polarity; throws InvalidInput otherwise.
std::vector<Label> require_polarities(const Corpus& docs);

/// Trains on labelled documents, running the inner grid search first when
/// the configuration spans more than one candidate.
Classifier fit_classifier(const Corpus& train, const FeatureConfig& features,
                          std::shared_ptr<const FeatureResources> resources, const ModelConfig& config);

/// Trains exactly the given single-valued configuration.
Classifier fit_single(const Corpus& train, const FeatureConfig& features,
                      std::shared_ptr<const FeatureResources> resources, const ModelConfig& config);

/// Feature sequence the HCRF consumes (standardized, context window applied).
ObservationSequence hcrf_input(const FeaturePipeline& pipeline, const Transcript& doc, std::size_t window);

}  // namespace hcrf
