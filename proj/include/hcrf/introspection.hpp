#pragma once
// Read-only analyses of a trained HCRF: which features and words each hidden
// state responds to, and how states relate to labels.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcrf/embedding.hpp"
#include "hcrf/model.hpp"
#include "hcrf/pipeline.hpp"
#include "hcrf/standardizer.hpp"

namespace hcrf {

struct RankedFeature {
  std::size_t column = 0;
  std::string name;  // "<block>:<feature>"
  double weight = 0.0;
};

/// Per hidden state, the strictly positive observation weights in
/// descending order (ties by column), at most k each. Throws InvalidInput
/// when the schema dimension differs from theta's.
std::vector<std::vector<RankedFeature>> top_features_per_state(const HcrfParameters& theta,
                                                               const FeatureSchema& schema, std::size_t k);

/// How word embeddings are placed in front of the model. The optional
/// standardizer (fitted before any context window) maps raw embeddings to the
/// scale the weights were learned on.
struct EmbeddingProbe {
  const FeatureSchema* schema = nullptr;  // theta's schema, context window included
  const EmbeddingTable* table = nullptr;
  const Standardizer* standardizer = nullptr;
};

struct ScoredWord {
  std::string word;
  double score = 0.0;
};

/// Scores every vocabulary word covered by the table as the inner product
/// of its embedding with the state's weights on the (centre) embedding
/// block; returns the top k, ties in lexicographic order. Throws ConfigError
/// when the schema has no embedding block.
std::vector<ScoredWord> activation_words(const HcrfParameters& theta, std::size_t state, const EmbeddingProbe& probe,
                                         const std::vector<std::string>& vocabulary, std::size_t k);

/// Per-state scores of one word, or nullopt if the table does not cover it.
std::optional<std::vector<double>> word_state_profile(const std::string& word, const HcrfParameters& theta,
                                                      const EmbeddingProbe& probe);

struct StateCharacter {
  double tau = 0.0;
  std::vector<double> margin;                // theta_s(1, h) - theta_s(0, h)
  std::vector<std::optional<Label>> aligned;  // nullopt = neutral
  std::size_t aligned_count() const;
};

/// State h is aligned to label y when theta_s(y, h) - theta_s(y', h) > tau.
/// tau defaults to the population standard deviation of all theta_s entries.
/// Throws InvalidInput unless there are exactly two labels.
StateCharacter state_character(const HcrfParameters& theta, std::optional<double> tau = std::nullopt);

struct StateReportOptions {
  std::size_t top_k = 30;
  std::size_t top_words = 10;
  std::optional<double> tau;
  std::vector<std::string> profile_words;
};

nlohmann::ordered_json state_report_json(const HcrfParameters& theta, const LabelSet& labels,
                                         const FeatureSchema& schema, const EmbeddingProbe* probe,
                                         const std::vector<std::string>& vocabulary, const StateReportOptions& opts);
std::string format_state_report(const nlohmann::ordered_json& report);

}  // namespace hcrf
