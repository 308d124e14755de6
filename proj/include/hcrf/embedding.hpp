#pragma once
// Word-vector table in the common text format: one record per line, the
// word followed by E space-separated decimals, with an optional leading
// "count dim" header line.

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hcrf {

enum class CaseMode {
  kExact,          // look the token up verbatim
  kLowerFallback,  // verbatim first, then lowercased
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim, CaseMode mode = CaseMode::kLowerFallback);

  /// Throws ParseError naming the line on ragged or non-numeric records.
  static EmbeddingTable load(const std::string& path, CaseMode mode = CaseMode::kLowerFallback);
  static EmbeddingTable parse(std::string_view text, const std::string& origin,
                              CaseMode mode = CaseMode::kLowerFallback);

  void add(const std::string& word, std::vector<double> vec);
  std::optional<std::span<const double>> lookup(std::string_view word) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  CaseMode case_mode() const { return mode_; }
  /// Words in insertion order.
  const std::vector<std::string>& words() const { return words_; }

  std::string serialize() const;

 private:
  std::size_t dim_ = 0;
  CaseMode mode_ = CaseMode::kLowerFallback;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// Mean of the vectors of covered, non-stop-word tokens followed by a
/// coverage flag (1 if at least one token was covered). An uncovered unit
/// yields E zeros and flag 0. Width E + 1.
std::vector<double> embed_unit(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                               const std::unordered_set<std::string>& stopwords);

}  // namespace hcrf
