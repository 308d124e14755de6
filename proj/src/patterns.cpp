#include "hcrf/patterns.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "hcrf/errors.hpp"
#include "hcrf/resources.hpp"
#include "hcrf/text.hpp"

namespace hcrf {
namespace {

bool has_suffix(const std::string& w, std::string_view s) {
  return w.size() > s.size() + 1 && w.compare(w.size() - s.size(), s.size(), s) == 0;
}

bool is_number(const std::string& w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',';
  }) && std::isdigit(static_cast<unsigned char>(w.front()));
}

}  // namespace

PosTagger::PosTagger() : PosTagger(parse(resources::pos_lexicon_en(), "<builtin pos lexicon>")) {}

PosTagger PosTagger::parse(std::string_view text, const std::string& origin) {
  static const std::array<std::string_view, 10> kTags{"ADJ", "ADP", "ADV", "CONJ", "DET",
                                                      "INTJ", "NOUN", "NUM", "PRON", "VERB"};
  PosTagger t{Empty{}};
  bool header = true;
  for (const auto& line : content_lines(text)) {
    const auto f = split(line, '\t');
    if (header) {
      header = false;
      if (f.size() != 2 || trim(f[0]) != "word") throw ParseError(origin + ": expected header 'word tag'");
      continue;
    }
    if (f.size() != 2) throw ParseError(origin + ": malformed record '" + line + "'");
    const std::string tag(trim(f[1]));
    if (std::find(kTags.begin(), kTags.end(), tag) == kTags.end()) {
      throw ParseError(origin + ": unknown tag '" + tag + "'");
    }
    const std::string word = to_lower(trim(f[0]));
    if (!t.lexicon_.emplace(word, tag).second) throw ParseError(origin + ": duplicate word '" + word + "'");
  }
  return t;
}

std::string PosTagger::tag_word(const std::string& word) const {
  const std::string w = to_lower(word);
  if (auto it = lexicon_.find(w); it != lexicon_.end()) return it->second;
  if (is_number(w)) return "NUM";
  if (has_suffix(w, "ly")) return "ADV";
  if (has_suffix(w, "ing") || has_suffix(w, "ed")) return "VERB";
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish"}) {
    if (has_suffix(w, s)) return "ADJ";
  }
  return "NOUN";
}

std::vector<std::string> PosTagger::tag(const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(tag_word(t));
  return out;
}

std::vector<std::string> default_counted_tags() {
  return {"ADJ", "NOUN", "VERB", "ADV", "CONJ", "ADP", "INTJ", "PRON"};
}

std::vector<std::string> pattern_feature_names(const std::vector<std::string>& counted_tags) {
  std::vector<std::string> names{"adj_noun", "negation", "amplifier", "downtoner", "disfluency", "capitalized"};
  for (const auto& t : counted_tags) names.push_back("pos_" + t);
  return names;
}

std::vector<double> pattern_features(const std::vector<std::string>& tokens, const std::vector<std::string>& tags,
                                     const Modifiers& modifiers, const std::vector<std::string>& counted_tags) {
  if (tokens.size() != tags.size()) {
    throw InvalidInput("POS tags (" + std::to_string(tags.size()) + ") do not align with tokens (" +
                       std::to_string(tokens.size()) + ")");
  }
  std::vector<double> out(6 + counted_tags.size(), 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string w = to_lower(tokens[i]);
    if (i + 1 < tokens.size() && tags[i] == "ADJ" && tags[i + 1] == "NOUN") out[0] += 1;
    if (modifiers.negators.contains(w)) out[1] += 1;
    if (modifiers.is_amplifier(w)) out[2] += 1;
    if (modifiers.is_downtoner(w)) out[3] += 1;
    if (modifiers.disfluencies.contains(w)) out[4] += 1;
    if (!tokens[i].empty() && std::isupper(static_cast<unsigned char>(tokens[i].front()))) out[5] += 1;
    auto it = std::find(counted_tags.begin(), counted_tags.end(), tags[i]);
    if (it != counted_tags.end()) out[6 + static_cast<std::size_t>(it - counted_tags.begin())] += 1;
  }
  return out;
}

}  // namespace hcrf
