#pragma once
// Bag of n-grams over Porter stems with TF-IDF weighting.
//
// Conventions:
//   term      lowercased Porter stems; n-grams joined with '_'
//   idf(t)    log(N / df(t)), N = number of fitting documents
//   weight    count(t) * idf(t) / number of tokens in the unit
// Out-of-vocabulary terms are ignored at transform time.

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace hcrf {

struct BongOptions {
  std::size_t max_order = 3;     // unigrams..trigrams
  std::size_t max_features = 0;  // 0 = unlimited; otherwise highest df kept
  std::size_t min_df = 1;
};

class NGramVocabulary {
 public:
  NGramVocabulary() = default;
  NGramVocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t num_docs,
                  std::size_t max_order);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t num_docs() const { return num_docs_; }
  std::size_t max_order() const { return max_order_; }
  /// Index of a term, or npos.
  std::size_t find(const std::string& term) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> terms_;  // sorted
  std::vector<std::size_t> doc_freq_;
  std::vector<double> idf_;
  std::size_t num_docs_ = 0;
  std::size_t max_order_ = 3;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Lowercased, stemmed unit tokens.
std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens);

/// All 1..max_order grams of already-stemmed tokens, in order of appearance.
std::vector<std::string> ngram_terms(const std::vector<std::string>& stems, std::size_t max_order);

/// Fits on raw document token lists. Throws ConfigError if the vocabulary
/// ends up empty.
NGramVocabulary fit_bong(const std::vector<std::vector<std::string>>& documents, const BongOptions& opts);

std::vector<double> vectorize_bong(const std::vector<std::string>& tokens, const NGramVocabulary& vocab);

}  // namespace hcrf
