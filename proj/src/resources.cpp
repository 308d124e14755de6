#include "hcrf/resources.hpp"

#include "hcrf/errors.hpp"
#include "hcrf/text.hpp"

namespace hcrf::resources {
namespace data {
extern const std::string_view kStopwordsEn;
extern const std::string_view kMarkers;
extern const std::string_view kModifiersEn;
extern const std::string_view kPosLexiconEn;
}  // namespace data

std::string_view stopwords_en() { return data::kStopwordsEn; }
std::string_view paralinguistic_markers() { return data::kMarkers; }
std::string_view modifiers_en() { return data::kModifiersEn; }
std::string_view pos_lexicon_en() { return data::kPosLexiconEn; }

int version_of(std::string_view text, std::string_view kind) {
  const auto eol = text.find('\n');
  const auto first = trim(text.substr(0, eol));
  const std::string prefix = "# hcrf-" + std::string(kind) + " ";
  if (first.substr(0, prefix.size()) != prefix) {
    throw ParseError("resource is missing its '" + prefix + "<version>' line");
  }
  try {
    return std::stoi(std::string(first.substr(prefix.size())));
  } catch (const std::exception&) {
    throw ParseError("resource version is not an integer");
  }
}

std::unordered_set<std::string> parse_stopwords(std::string_view text) {
  std::unordered_set<std::string> out;
  for (const auto& line : content_lines(text)) out.insert(to_lower(trim(line)));
  return out;
}

std::unordered_set<std::string> default_stopwords() { return parse_stopwords(stopwords_en()); }

}  // namespace hcrf::resources
