#pragma once
// Batch commands behind the command-line tool. Each command is a
// deterministic function of its inputs and seeds, writes its outputs into
// one run directory, and records the fully resolved configuration there as
// run_config.json (which can be fed back through --config).
//
// Configuration file keys (JSON object, all optional; unknown keys are
// rejected):
//   corpus, out, model, archive       strings
//   threshold_ms                      integer > 0
//   unit                              "ipu" | "document"
//   features                          block list, e.g. "ours" or "bong,lexicon"
//   standardize                       bool
//   hidden_states, context_window     integer or array of integers (grid)
//   l2, C                             number or array of numbers (grid)
//   inner_folds, folds, seed, threads, max_iterations, restarts
//   bong                              {max_order, max_features, min_df}
//   resources                         {embeddings, embedding_case, lexicons,
//                                      stopwords, markers, modifiers, pos_lexicon}
//   compare                           model kind evaluated alongside
//   inspect                           {top_k, top_words, tau, words}
//   synthetic                         generator spec object

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hcrf/classifier.hpp"
#include "hcrf/evaluation.hpp"
#include "hcrf/introspection.hpp"
#include "hcrf/resource_set.hpp"
#include "hcrf/synthetic.hpp"

namespace hcrf {

struct RunConfig {
  std::string corpus;
  std::string out;
  std::string archive;  // model archive consumed by predict and inspect
  FeatureConfig features;
  ModelConfig model;
  std::optional<ModelKind> compare;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  ResourcePaths resources;
  StateReportOptions inspect;
  SyntheticSpec synthetic = SyntheticSpec::defaults();
};

nlohmann::ordered_json run_config_json(const RunConfig& cfg);
/// Overlays the keys present in j onto cfg. Throws ConfigError on unknown
/// keys or ill-typed values.
void apply_run_config(const nlohmann::ordered_json& j, RunConfig& cfg);
void apply_run_config_file(const std::string& path, RunConfig& cfg);

/// Segments every transcript and writes the corpus with materialized IPU
/// indices. Returns the total number of IPUs.
std::size_t cmd_segment(const RunConfig& cfg);
/// Trains on the polar documents and writes model.json, schema.json,
/// trace.tsv and train_predictions.tsv.
void cmd_train(const RunConfig& cfg);
/// Writes predictions.tsv, plus metrics when every document has a polarity.
void cmd_predict(const RunConfig& cfg);
/// Cross-validates and writes report.txt, report.json and predictions.tsv.
CvReport cmd_evaluate(const RunConfig& cfg);
/// Writes state_report.json and state_report.txt.
void cmd_inspect(const RunConfig& cfg);
/// Writes corpus/, embeddings.txt, lexicon.tsv, spec.json and bayes.json.
/// Returns the order-insensitive Bayes accuracy.
double cmd_generate(const RunConfig& cfg);

std::string format_predictions(const std::vector<Prediction>& predictions, const LabelSet& labels);

}  // namespace hcrf
