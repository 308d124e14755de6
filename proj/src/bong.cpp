#include "hcrf/bong.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "hcrf/errors.hpp"
#include "hcrf/porter.hpp"
#include "hcrf/text.hpp"

namespace hcrf {

NGramVocabulary::NGramVocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
                                 std::size_t num_docs, std::size_t max_order)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), num_docs_(num_docs), max_order_(max_order) {
  if (terms_.size() != doc_freq_.size()) throw InvalidInput("vocabulary terms and frequencies differ in length");
  idf_.resize(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (doc_freq_[i] == 0 || doc_freq_[i] > num_docs_) throw InvalidInput("invalid document frequency");
    idf_[i] = std::log(static_cast<double>(num_docs_) / static_cast<double>(doc_freq_[i]));
    if (!index_.emplace(terms_[i], i).second) throw InvalidInput("duplicate vocabulary term: " + terms_[i]);
  }
}

std::size_t NGramVocabulary::find(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? npos : it->second;
}

std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(porter_stem(to_lower(t)));
  return out;
}

std::vector<std::string> ngram_terms(const std::vector<std::string>& stems, std::size_t max_order) {
  std::vector<std::string> out;
  for (std::size_t n = 1; n <= max_order; ++n) {
    for (std::size_t i = 0; i + n <= stems.size(); ++i) {
      std::string term = stems[i];
      for (std::size_t k = 1; k < n; ++k) term += "_" + stems[i + k];
      out.push_back(std::move(term));
    }
  }
  return out;
}

NGramVocabulary fit_bong(const std::vector<std::vector<std::string>>& documents, const BongOptions& opts) {
  if (opts.max_order < 1) throw ConfigError("n-gram order must be >= 1");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    const auto terms = ngram_terms(stem_tokens(doc), opts.max_order);
    const std::set<std::string> unique(terms.begin(), terms.end());
    for (const auto& t : unique) ++df[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, f] : df) {
    if (f >= opts.min_df) kept.emplace_back(term, f);
  }
  if (opts.max_features > 0 && kept.size() > opts.max_features) {
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    kept.resize(opts.max_features);
    std::sort(kept.begin(), kept.end());
  }
  if (kept.empty()) throw ConfigError("n-gram vocabulary is empty after fitting");
  std::vector<std::string> terms;
  std::vector<std::size_t> freqs;
  for (auto& [t, f] : kept) {
    terms.push_back(t);
    freqs.push_back(f);
  }
  return NGramVocabulary(std::move(terms), std::move(freqs), documents.size(), opts.max_order);
}

std::vector<double> vectorize_bong(const std::vector<std::string>& tokens, const NGramVocabulary& vocab) {
  std::vector<double> v(vocab.size(), 0.0);
  if (tokens.empty()) return v;
  for (const auto& term : ngram_terms(stem_tokens(tokens), vocab.max_order())) {
    const std::size_t i = vocab.find(term);
    if (i != NGramVocabulary::npos) v[i] += 1.0;
  }
  const double n = static_cast<double>(tokens.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) v[i] = v[i] * vocab.idf()[i] / n;
  }
  return v;
}

}  // namespace hcrf
