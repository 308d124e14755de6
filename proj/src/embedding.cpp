#include "hcrf/embedding.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "hcrf/errors.hpp"
#include "hcrf/text.hpp"

namespace hcrf {
namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_size(std::string_view s, std::size_t& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, CaseMode mode) : dim_(dim), mode_(mode) {
  if (dim == 0) throw InvalidInput("embedding dimension must be >= 1");
}

void EmbeddingTable::add(const std::string& word, std::vector<double> vec) {
  if (vec.size() != dim_) throw InvalidInput("embedding for '" + word + "' has the wrong dimension");
  for (double v : vec) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite embedding value for '" + word + "'");
  }
  auto [it, inserted] = vectors_.emplace(word, std::move(vec));
  if (inserted) words_.push_back(word);
}

std::optional<std::span<const double>> EmbeddingTable::lookup(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  if (it == vectors_.end() && mode_ == CaseMode::kLowerFallback) it = vectors_.find(to_lower(word));
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

EmbeddingTable EmbeddingTable::parse(std::string_view text, const std::string& origin, CaseMode mode) {
  EmbeddingTable table;
  table.mode_ = mode;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared_count;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto f = fields(line);
    if (f.empty()) continue;
    std::size_t count = 0, dim = 0;
    if (line_no == 1 && f.size() == 2 && parse_size(f[0], count) && parse_size(f[1], dim)) {
      declared_count = count;
      table.dim_ = dim;
      continue;
    }
    if (f.size() < 2) throw ParseError(origin + ":" + std::to_string(line_no) + ": expected a word and a vector");
    if (table.dim_ == 0) table.dim_ = f.size() - 1;
    if (f.size() - 1 != table.dim_) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.dim_) +
                       " values, found " + std::to_string(f.size() - 1));
    }
    std::vector<double> vec(table.dim_);
    for (std::size_t i = 0; i < table.dim_; ++i) {
      if (!parse_double(f[i + 1], vec[i])) {
        throw ParseError(origin + ":" + std::to_string(line_no) + ": invalid number '" + std::string(f[i + 1]) + "'");
      }
    }
    table.add(std::string(f[0]), std::move(vec));
  }
  if (table.dim_ == 0) throw ParseError(origin + ": no embedding records");
  if (declared_count && *declared_count != table.size()) {
    throw ParseError(origin + ": header declares " + std::to_string(*declared_count) + " words, found " +
                     std::to_string(table.size()));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::string& path, CaseMode mode) {
  return parse(read_file(path), path, mode);
}

std::string EmbeddingTable::serialize() const {
  std::ostringstream out;
  out << words_.size() << ' ' << dim_ << '\n';
  char buf[32];
  for (const auto& w : words_) {
    out << w;
    for (double v : vectors_.at(w)) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(p - buf));
    }
    out << '\n';
  }
  return out.str();
}

std::vector<double> embed_unit(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                               const std::unordered_set<std::string>& stopwords) {
  std::vector<double> out(table.dim() + 1, 0.0);
  std::size_t covered = 0;
  for (const auto& t : tokens) {
    if (stopwords.contains(to_lower(t))) continue;
    const auto v = table.lookup(t);
    if (!v) continue;
    for (std::size_t i = 0; i < table.dim(); ++i) out[i] += (*v)[i];
    ++covered;
  }
  if (covered > 0) {
    for (std::size_t i = 0; i < table.dim(); ++i) out[i] /= static_cast<double>(covered);
    out[table.dim()] = 1.0;
  }
  return out;
}

}  // namespace hcrf
