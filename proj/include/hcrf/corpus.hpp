#pragma once
// Transcript corpora: in-memory form, the on-disk format, and filtering.
//
// On disk a corpus is a directory holding a manifest and one transcript file
// per document, all tab-separated with a leading format-version line:
//
//   manifest.tsv                     <doc>.tsv
//   # hcrf-corpus 1                  # hcrf-transcript 1
//   doc_id  valence  file            doc_id  text  start_ms  end_ms  pos  ipu
//   r001    4|5      r001.tsv        r001    I     0         120     PRON
//                                    r001    *chuckling*  130  130
//
// valence lists one score per annotator separated by '|', or '-' when the
// document is unannotated. A record whose text is wrapped in asterisks is a
// paralinguistic marker timestamped at start_ms. The pos and ipu columns are
// optional.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcrf/model.hpp"

namespace hcrf {

inline constexpr int kCorpusFormatVersion = 1;

struct TokenRecord {
  std::string text;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string pos;  // empty when untagged
  int ipu = -1;     // segment index when materialized, else -1
  bool operator==(const TokenRecord&) const = default;
};

struct MarkerRecord {
  std::string text;  // including the surrounding asterisks
  std::int64_t timestamp_ms = 0;
  bool operator==(const MarkerRecord&) const = default;
};

inline constexpr Label kNegative = 0;
inline constexpr Label kPositive = 1;

struct Transcript {
  std::string doc_id;
  std::vector<TokenRecord> tokens;
  std::vector<MarkerRecord> markers;
  std::vector<double> valences;  // one per annotator, each in [1, 5]

  /// Mean annotator valence, if annotated.
  std::optional<double> valence() const;
  /// Negative below 3, Positive above 3, none for neutral or unannotated.
  std::optional<Label> polarity() const;

  bool operator==(const Transcript&) const = default;
};

using Corpus = std::vector<Transcript>;

bool is_marker_text(std::string_view text);

/// Loads a corpus directory (or a path to its manifest). Every malformed
/// record is collected and reported in a single ParseError. An empty
/// directory yields an empty corpus and a warning.
Corpus load_corpus(const std::string& path);

/// Writes manifest.tsv and one transcript per document into dir (created if
/// needed). Output is deterministic.
void save_corpus(const Corpus& corpus, const std::string& dir);

/// Keeps documents with a polarity (drops neutral and unannotated ones).
Corpus filter_neutral(const Corpus& corpus);

/// Polarity labels of a corpus that has been through filter_neutral.
std::vector<Label> corpus_labels(const Corpus& corpus);

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t positive = 0;
  std::size_t unannotated = 0;
  std::size_t ipus = 0;
  std::size_t words = 0;
};

CorpusStats corpus_stats(const Corpus& corpus, std::int64_t threshold_ms);

}  // namespace hcrf
