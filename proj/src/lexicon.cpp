#include "hcrf/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hcrf/errors.hpp"
#include "hcrf/resources.hpp"
#include "hcrf/text.hpp"

namespace hcrf {
namespace {

double parse_number(std::string_view s, const std::string& where) {
  s = trim(s);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(where + ": invalid number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Lexicon::Lexicon(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {}

std::optional<std::size_t> Lexicon::column(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

void Lexicon::add(const std::string& word, std::vector<double> scores) {
  if (scores.size() != columns_.size()) throw InvalidInput("lexicon entry '" + word + "' has the wrong width");
  entries_[to_lower(word)] = std::move(scores);
}

std::string Lexicon::serialize() const {
  std::vector<std::string> words;
  for (const auto& [w, _] : entries_) words.push_back(w);
  std::sort(words.begin(), words.end());
  std::string out = "# hcrf-lexicon 1\nword";
  for (const auto& c : columns_) out += "\t" + c;
  out += "\n";
  char buf[32];
  for (const auto& w : words) {
    out += w;
    for (double v : entries_.at(w)) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out += "\t" + std::string(buf, p);
    }
    out += "\n";
  }
  return out;
}

const std::vector<double>* Lexicon::lookup(const std::string& word) const {
  auto it = entries_.find(to_lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon Lexicon::parse(std::string_view text, const std::string& name, const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  char delim = '\t';
  Lexicon lex;
  bool have_header = false;
  std::optional<std::size_t> sp, sn, su;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (!have_header) {
      delim = line.find('\t') != std::string::npos ? '\t' : ',';
      auto cols = split(line, delim);
      if (cols.size() < 2) throw ParseError(where + ": header must name the word column and at least one score");
      std::vector<std::string> names;
      for (std::size_t i = 1; i < cols.size(); ++i) names.emplace_back(trim(cols[i]));
      lex = Lexicon(name, names);
      sp = lex.column("swn_pos");
      sn = lex.column("swn_neg");
      su = lex.column("swn_neu");
      have_header = true;
      continue;
    }
    const auto f = split(line, delim);
    if (f.size() != lex.columns_.size() + 1) {
      throw ParseError(where + ": expected " + std::to_string(lex.columns_.size() + 1) + " fields, found " +
                       std::to_string(f.size()));
    }
    std::vector<double> scores;
    for (std::size_t i = 1; i < f.size(); ++i) scores.push_back(parse_number(f[i], where));
    if (sp && sn && su) {
      const double s = scores[*sp] + scores[*sn] + scores[*su];
      if (std::abs(s - 1.0) > 1e-6) throw ParseError(where + ": SWN scores must sum to 1");
    }
    const std::string word(trim(f[0]));
    if (word.empty()) throw ParseError(where + ": empty word");
    lex.add(word, std::move(scores));
  }
  if (!have_header) throw ParseError(origin + ": missing header row");
  return lex;
}

Lexicon Lexicon::load(const std::string& path, const std::string& name) {
  std::string n = name;
  if (n.empty()) {
    const auto slash = path.find_last_of('/');
    n = path.substr(slash == std::string::npos ? 0 : slash + 1);
  }
  return parse(read_file(path), n, path);
}

Modifiers Modifiers::parse(std::string_view text, const std::string& origin) {
  Modifiers m;
  const auto lines = content_lines(text);
  bool header = true;
  std::size_t row = 0;
  for (const auto& line : lines) {
    ++row;
    const auto f = split(line, '\t');
    if (header) {
      header = false;
      if (f.size() != 3 || trim(f[0]) != "word") throw ParseError(origin + ": expected header 'word kind value'");
      continue;
    }
    const std::string where = origin + ": record " + std::to_string(row);
    if (f.size() != 3) throw ParseError(where + ": expected 3 fields");
    const std::string word = to_lower(trim(f[0]));
    const std::string kind(trim(f[1]));
    if (kind == "negator") {
      m.negators.insert(word);
    } else if (kind == "intensifier") {
      const double v = parse_number(f[2], where);
      if (v <= 0.0 || v == 1.0) throw ParseError(where + ": intensifier multiplier must be positive and != 1");
      m.intensifiers[word] = v;
    } else if (kind == "disfluency") {
      m.disfluencies.insert(word);
    } else {
      throw ParseError(where + ": unknown modifier kind '" + kind + "'");
    }
  }
  return m;
}

Modifiers Modifiers::defaults() { return parse(resources::modifiers_en(), "<builtin modifiers>"); }

bool Modifiers::is_amplifier(const std::string& w) const {
  auto it = intensifiers.find(w);
  return it != intensifiers.end() && it->second > 1.0;
}

bool Modifiers::is_downtoner(const std::string& w) const {
  auto it = intensifiers.find(w);
  return it != intensifiers.end() && it->second < 1.0;
}

const std::vector<std::string>& LexiconChannels::names() {
  static const std::vector<std::string> kNames{"swn_pos", "swn_neg", "swn_neu", "valence", "arousal",
                                                "dominance", "so_pos", "so_neg", "so_neu"};
  return kNames;
}

std::vector<double> lexicon_features(const std::vector<std::string>& tokens, const std::vector<Lexicon>& lexicons,
                                     const Modifiers& modifiers) {
  static const std::vector<std::string> kSumColumns{"swn_pos", "swn_neg", "swn_neu",
                                                    "valence", "arousal", "dominance"};
  std::vector<double> out(LexiconChannels::names().size(), 0.0);

  // Resolve each channel to the first lexicon providing it.
  struct Source {
    const Lexicon* lex = nullptr;
    std::size_t col = 0;
  };
  std::vector<Source> sum_src(kSumColumns.size());
  Source so_src;
  for (const auto& lex : lexicons) {
    for (std::size_t c = 0; c < kSumColumns.size(); ++c) {
      if (!sum_src[c].lex) {
        if (auto col = lex.column(kSumColumns[c])) sum_src[c] = {&lex, *col};
      }
    }
    if (!so_src.lex) {
      if (auto col = lex.column("so")) so_src = {&lex, *col};
    }
  }

  double multiplier = 1.0;
  bool negated = false;
  for (const auto& raw : tokens) {
    const std::string w = to_lower(raw);
    for (std::size_t c = 0; c < kSumColumns.size(); ++c) {
      if (!sum_src[c].lex) continue;
      if (const auto* s = sum_src[c].lex->lookup(w)) out[c] += (*s)[sum_src[c].col];
    }
    if (modifiers.negators.contains(w)) {
      negated = true;
      continue;
    }
    if (auto it = modifiers.intensifiers.find(w); it != modifiers.intensifiers.end()) {
      multiplier *= it->second;
      continue;
    }
    if (!so_src.lex) continue;
    const auto* s = so_src.lex->lookup(w);
    if (!s) continue;
    double v = (*s)[so_src.col] * multiplier;
    if (negated) {
      if (v > 0) {
        v -= kNegationShift;
      } else if (v < 0) {
        v += kNegationShift;
      }
    }
    if (v > 0) {
      out[6] += v;
    } else if (v < 0) {
      out[7] += -v;
    } else {
      out[8] += 1.0;
    }
  }
  return out;
}

}  // namespace hcrf
