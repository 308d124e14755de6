#pragma once
// Synthetic opinion-dynamics corpora with known ground truth.
//
// A document is a sequence of L segments, each separated from the next by a
// pause long enough to form its own IPU at any threshold up to 500 ms. The
// last ceil(tail_fraction * L) segments carry the document's polarity. Each
// earlier segment independently carries the opposite polarity with
// probability opposite_prob and is neutral otherwise. The label therefore
// depends on where opinions occur, not only on how many there are.
//
// Every segment has exactly tokens_per_segment words; a polar segment holds
// one polarity word at a random position. The token multiset thus reveals
// (L, #positive segments, #negative segments) and nothing else about the
// label, which makes the best order-insensitive accuracy a finite sum.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hcrf/corpus.hpp"
#include "hcrf/embedding.hpp"
#include "hcrf/lexicon.hpp"

namespace hcrf {

struct SyntheticSpec {
  std::size_t num_docs = 500;
  std::size_t min_segments = 4;
  std::size_t max_segments = 8;
  double tail_fraction = 1.0 / 3.0;
  double opposite_prob = 0.5;
  double positive_prior = 0.5;
  std::size_t tokens_per_segment = 3;
  double marker_prob = 0.15;  // per segment, independent of the label
  std::size_t embedding_dim = 8;
  double embedding_noise = 0.05;
  std::vector<std::string> positive_words;
  std::vector<std::string> negative_words;
  std::vector<std::string> neutral_words;

  /// Default word lists; none are stop words or modifiers.
  static SyntheticSpec defaults();
  /// Throws ConfigError on a degenerate or inconsistent spec.
  void validate() const;
  /// Segments carrying the label for a document of L segments.
  std::size_t tail_length(std::size_t L) const;

  nlohmann::json to_json() const;
  /// Missing keys keep their default values.
  static SyntheticSpec from_json(const nlohmann::json& j);
};

enum class SegmentKind { kNeutral, kPositive, kNegative };

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<std::vector<SegmentKind>> segments;  // ground truth per document
  EmbeddingTable embeddings;
  Lexicon lexicon;  // "so" column: +3 positive words, -3 negative words
  double bayes_accuracy = 0.0;
};

/// Best expected accuracy of any classifier that sees only the multiset of
/// segments, by exhaustive enumeration over (L, #opposite segments).
double order_insensitive_bayes_accuracy(const SyntheticSpec& spec);

/// Deterministic in (spec, seed).
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace hcrf
