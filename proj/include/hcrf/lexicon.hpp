#pragma once
// Subjectivity lexicons and valence shifters.
//
// A lexicon file is delimiter-separated (tab, or comma when the header has
// no tab) with a mandatory header row: the first column is the word, the
// remaining columns are named scores. Recognised score columns:
//   swn_pos swn_neg swn_neu        SentiWordNet-style triple
//   valence arousal dominance      affective norms
//   so                             semantic-orientation value in [-5, 5]
// Other columns are loaded and ignored by the feature extractor.

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hcrf {

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string name, std::vector<std::string> columns);

  /// Throws ParseError (with line number) on a missing header, ragged rows,
  /// non-numeric scores, or an SWN triple that does not sum to 1.
  static Lexicon load(const std::string& path, const std::string& name = "");
  static Lexicon parse(std::string_view text, const std::string& name, const std::string& origin);

  void add(const std::string& word, std::vector<double> scores);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::optional<std::size_t> column(const std::string& name) const;
  /// Scores of the lowercased word, or nullptr.
  const std::vector<double>* lookup(const std::string& word) const;
  std::size_t size() const { return entries_.size(); }
  /// Tab-separated text accepted by parse(), words sorted.
  std::string serialize() const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

/// Negators, intensifiers (multiplicative), and disfluency tokens.
struct Modifiers {
  std::unordered_set<std::string> negators;
  std::unordered_map<std::string, double> intensifiers;  // > 1 amplifier, < 1 downtoner
  std::unordered_set<std::string> disfluencies;

  static Modifiers parse(std::string_view text, const std::string& origin);
  static Modifiers defaults();

  bool is_amplifier(const std::string& w) const;
  bool is_downtoner(const std::string& w) const;
};

/// Shift applied to a negated semantic-orientation value, toward the
/// opposite polarity.
inline constexpr double kNegationShift = 4.0;

struct LexiconChannels {
  static const std::vector<std::string>& names();  // fixed output order
};

/// Per-unit lexicon scores, in LexiconChannels::names() order:
///   swn_pos swn_neg swn_neu valence arousal dominance so_pos so_neg so_neu
/// SWN and affective-norm channels are plain sums over matched tokens.
/// Semantic orientation: each matched value is multiplied by every
/// intensifier seen earlier in the unit, then shifted by kNegationShift
/// toward the opposite sign if a negator appeared earlier in the unit. The
/// result contributes max(v,0) to so_pos, max(-v,0) to so_neg, and 1 to
/// so_neu when it is exactly zero.
std::vector<double> lexicon_features(const std::vector<std::string>& tokens, const std::vector<Lexicon>& lexicons,
                                     const Modifiers& modifiers);

}  // namespace hcrf
