#include "hcrf/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "hcrf/errors.hpp"
#include "hcrf/segment.hpp"
#include "hcrf/text.hpp"

namespace fs = std::filesystem;

namespace hcrf {
namespace {

constexpr std::string_view kManifestName = "manifest.tsv";

class ErrorList {
 public:
  void add(const std::string& where, const std::string& what) { errors_.push_back(where + ": " + what); }
  bool empty() const { return errors_.empty(); }
  [[noreturn]] void raise() const {
    std::string msg = std::to_string(errors_.size()) + " malformed record(s):";
    for (const auto& e : errors_) msg += "\n  " + e;
    throw ParseError(msg);
  }

 private:
  std::vector<std::string> errors_;
};

bool parse_int(std::string_view s, std::int64_t& out) {
  s = trim(s);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

bool parse_real(std::string_view s, double& out) {
  s = trim(s);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty() && std::isfinite(out);
}

std::string format_real(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// Splits into lines, returning (line number, text) for non-blank lines and
// checking the leading version line.
std::vector<std::pair<std::size_t, std::string>> versioned_lines(const std::string& text, const std::string& origin,
                                                                 std::string_view kind, ErrorList& errors) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  bool saw_version = false;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!saw_version) {
      saw_version = true;
      const std::string expected = "# hcrf-" + std::string(kind) + " ";
      if (line.rfind(expected, 0) != 0) {
        errors.add(origin + ":" + std::to_string(n), "missing '" + expected + "<version>' line");
        continue;
      }
      std::int64_t v = 0;
      if (!parse_int(line.substr(expected.size()), v) || v != kCorpusFormatVersion) {
        errors.add(origin + ":" + std::to_string(n), "unsupported format version");
      }
      continue;
    }
    if (line.front() == '#') continue;
    out.emplace_back(n, line);
  }
  return out;
}

void load_transcript(const fs::path& file, Transcript& doc, ErrorList& errors) {
  const std::string origin = file.string();
  std::string text;
  try {
    text = read_file(origin);
  } catch (const ParseError&) {
    errors.add(origin, "cannot read transcript file");
    return;
  }
  const auto lines = versioned_lines(text, origin, "transcript", errors);
  if (lines.empty()) {
    errors.add(origin, "missing header");
    return;
  }
  const auto header = split(lines.front().second, '\t');
  auto col = [&](std::string_view name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_doc = col("doc_id"), c_text = col("text"), c_start = col("start_ms"), c_end = col("end_ms");
  const int c_pos = col("pos"), c_ipu = col("ipu");
  if (c_doc < 0 || c_text < 0 || c_start < 0 || c_end < 0) {
    errors.add(origin + ":" + std::to_string(lines.front().first),
               "header must contain doc_id, text, start_ms and end_ms");
    return;
  }
  std::int64_t last_start = std::numeric_limits<std::int64_t>::min();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [n, line] = lines[i];
    const std::string where = origin + ":" + std::to_string(n);
    const auto f = split(line, '\t');
    auto field = [&](int c) -> std::string { return c >= 0 && c < static_cast<int>(f.size()) ? f[c] : ""; };
    if (f.size() < 4 || f.size() > header.size()) {
      errors.add(where, "expected between 4 and " + std::to_string(header.size()) + " fields");
      continue;
    }
    if (field(c_doc) != doc.doc_id) {
      errors.add(where, "doc_id '" + field(c_doc) + "' does not match manifest entry '" + doc.doc_id + "'");
      continue;
    }
    std::int64_t start = 0, end = 0;
    if (!parse_int(field(c_start), start) || !parse_int(field(c_end), end)) {
      errors.add(where, "start_ms/end_ms must be integers");
      continue;
    }
    if (end < start) {
      errors.add(where, "end_ms precedes start_ms");
      continue;
    }
    if (start < last_start) {
      errors.add(where, "timestamps are not non-decreasing");
      continue;
    }
    last_start = start;
    const std::string txt = field(c_text);
    if (trim(txt).empty()) {
      errors.add(where, "empty text");
      continue;
    }
    if (is_marker_text(txt)) {
      doc.markers.push_back({txt, start});
      continue;
    }
    TokenRecord tok{txt, start, end, field(c_pos), -1};
    if (!field(c_ipu).empty()) {
      std::int64_t ipu = 0;
      if (!parse_int(field(c_ipu), ipu) || ipu < 0) {
        errors.add(where, "ipu must be a non-negative integer");
        continue;
      }
      tok.ipu = static_cast<int>(ipu);
    }
    doc.tokens.push_back(std::move(tok));
  }
  if (doc.tokens.empty() && doc.markers.empty()) errors.add(origin, "transcript has no records");
}

}  // namespace

bool is_marker_text(std::string_view text) {
  text = trim(text);
  return text.size() > 2 && text.front() == '*' && text.back() == '*';
}

std::optional<double> Transcript::valence() const {
  if (valences.empty()) return std::nullopt;
  double s = 0.0;
  for (double v : valences) s += v;
  return s / static_cast<double>(valences.size());
}

std::optional<Label> Transcript::polarity() const {
  const auto v = valence();
  if (!v || *v == 3.0) return std::nullopt;
  return *v < 3.0 ? kNegative : kPositive;
}

Corpus load_corpus(const std::string& path) {
  fs::path manifest = path;
  if (!fs::exists(manifest)) throw ParseError("corpus path does not exist: " + path);
  if (fs::is_directory(manifest)) {
    if (fs::is_empty(manifest)) {
      spdlog::warn("corpus directory {} is empty", path);
      return {};
    }
    manifest /= kManifestName;
  }
  if (!fs::exists(manifest)) throw ParseError("corpus manifest not found: " + manifest.string());
  const fs::path dir = manifest.parent_path();

  ErrorList errors;
  const auto lines = versioned_lines(read_file(manifest.string()), manifest.string(), "corpus", errors);
  Corpus corpus;
  if (lines.empty()) {
    if (!errors.empty()) errors.raise();
    spdlog::warn("corpus manifest {} lists no documents", manifest.string());
    return corpus;
  }
  const auto header = split(lines.front().second, '\t');
  if (header != std::vector<std::string>{"doc_id", "valence", "file"}) {
    errors.add(manifest.string() + ":" + std::to_string(lines.front().first),
               "header must be 'doc_id<TAB>valence<TAB>file'");
    errors.raise();
  }
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [n, line] = lines[i];
    const std::string where = manifest.string() + ":" + std::to_string(n);
    const auto f = split(line, '\t');
    if (f.size() != 3) {
      errors.add(where, "expected 3 fields");
      continue;
    }
    Transcript doc;
    doc.doc_id = f[0];
    if (doc.doc_id.empty() || !seen.insert(doc.doc_id).second) {
      errors.add(where, "missing or duplicate doc_id '" + doc.doc_id + "'");
      continue;
    }
    bool ok = true;
    if (f[1] != "-") {
      for (const auto& part : split(f[1], '|')) {
        double v = 0.0;
        if (!parse_real(part, v) || v < 1.0 || v > 5.0) {
          errors.add(where, "valence '" + part + "' is not a number in [1, 5]");
          ok = false;
          break;
        }
        doc.valences.push_back(v);
      }
    }
    if (!ok) continue;
    load_transcript(dir / f[2], doc, errors);
    corpus.push_back(std::move(doc));
  }
  if (!errors.empty()) errors.raise();
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream man(fs::path(dir) / kManifestName, std::ios::binary);
  if (!man) throw ParseError("cannot write corpus manifest in " + dir);
  man << "# hcrf-corpus " << kCorpusFormatVersion << "\n";
  man << "doc_id\tvalence\tfile\n";
  for (const auto& doc : corpus) {
    std::string val = "-";
    if (!doc.valences.empty()) {
      val.clear();
      for (std::size_t i = 0; i < doc.valences.size(); ++i) val += (i ? "|" : "") + format_real(doc.valences[i]);
    }
    const std::string file = doc.doc_id + ".tsv";
    man << doc.doc_id << '\t' << val << '\t' << file << '\n';

    const bool with_pos = std::any_of(doc.tokens.begin(), doc.tokens.end(), [](auto& t) { return !t.pos.empty(); });
    const bool with_ipu = std::any_of(doc.tokens.begin(), doc.tokens.end(), [](auto& t) { return t.ipu >= 0; });
    std::ofstream out(fs::path(dir) / file, std::ios::binary);
    if (!out) throw ParseError("cannot write transcript " + file);
    out << "# hcrf-transcript " << kCorpusFormatVersion << "\n";
    out << "doc_id\ttext\tstart_ms\tend_ms" << (with_pos || with_ipu ? "\tpos" : "") << (with_ipu ? "\tipu" : "")
        << '\n';
    // Markers go before tokens sharing their timestamp.
    std::size_t ti = 0, mi = 0;
    while (ti < doc.tokens.size() || mi < doc.markers.size()) {
      const bool take_marker = mi < doc.markers.size() &&
                               (ti == doc.tokens.size() || doc.markers[mi].timestamp_ms <= doc.tokens[ti].start_ms);
      if (take_marker) {
        const auto& m = doc.markers[mi++];
        out << doc.doc_id << '\t' << m.text << '\t' << m.timestamp_ms << '\t' << m.timestamp_ms << '\n';
      } else {
        const auto& t = doc.tokens[ti++];
        out << doc.doc_id << '\t' << t.text << '\t' << t.start_ms << '\t' << t.end_ms;
        if (with_pos || with_ipu) out << '\t' << t.pos;
        if (with_ipu) out << '\t' << (t.ipu >= 0 ? std::to_string(t.ipu) : "");
        out << '\n';
      }
    }
  }
}

Corpus filter_neutral(const Corpus& corpus) {
  Corpus out;
  for (const auto& doc : corpus) {
    if (doc.polarity()) out.push_back(doc);
  }
  if (out.empty() && !corpus.empty()) spdlog::warn("no polar documents left after removing neutral ones");
  return out;
}

std::vector<Label> corpus_labels(const Corpus& corpus) {
  std::vector<Label> out;
  for (const auto& doc : corpus) {
    const auto p = doc.polarity();
    if (!p) throw InvalidInput("document '" + doc.doc_id + "' has no polarity label");
    out.push_back(*p);
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus, std::int64_t threshold_ms) {
  CorpusStats s;
  s.documents = corpus.size();
  for (const auto& doc : corpus) {
    if (doc.valences.empty()) {
      ++s.unannotated;
    } else if (auto p = doc.polarity()) {
      ++(*p == kPositive ? s.positive : s.negative);
    } else {
      ++s.neutral;
    }
    s.ipus += segment_into_ipus(doc, threshold_ms).size();
    s.words += doc.tokens.size();
  }
  return s;
}

}  // namespace hcrf
