#pragma once
// Part-of-speech tagging and linguistic-pattern counts.

#include <string>
#include <unordered_map>
#include <vector>

#include "hcrf/lexicon.hpp"

namespace hcrf {

/// Small rule-based tagger: a closed-class word list first, then suffix
/// rules (-ly ADV; -ing/-ed VERB; -ous/-ful/-ive/-able/-ible/-al/-ic/-less/
/// -ish ADJ; -tion/-ment/-ness/-ity NOUN), digits NUM, otherwise NOUN.
/// Tags: ADJ ADP ADV CONJ DET INTJ NOUN NUM PRON VERB.
class PosTagger {
 public:
  PosTagger();  // built-in lexicon
  static PosTagger parse(std::string_view text, const std::string& origin);

  std::string tag_word(const std::string& word) const;
  std::vector<std::string> tag(const std::vector<std::string>& tokens) const;

 private:
  struct Empty {};
  explicit PosTagger(Empty) {}
  std::unordered_map<std::string, std::string> lexicon_;
};

/// Tags counted by pattern_features; configurable per pipeline.
std::vector<std::string> default_counted_tags();  // ADJ NOUN VERB ADV CONJ ADP INTJ PRON

/// Feature names in output order: adj_noun negation amplifier downtoner
/// disfluency capitalized pos_<TAG>...
std::vector<std::string> pattern_feature_names(const std::vector<std::string>& counted_tags);

/// Counts per unit. Throws InvalidInput if tags and tokens differ in length.
std::vector<double> pattern_features(const std::vector<std::string>& tokens, const std::vector<std::string>& tags,
                                     const Modifiers& modifiers, const std::vector<std::string>& counted_tags);

}  // namespace hcrf
