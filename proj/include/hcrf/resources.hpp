#pragma once
// Versioned resource files shipped under resources/ and compiled in as
// defaults. Each file starts with a "# hcrf-<kind> <version>" line.

#include <string>
#include <string_view>
#include <unordered_set>

namespace hcrf::resources {

std::string_view stopwords_en();
std::string_view paralinguistic_markers();
std::string_view modifiers_en();
std::string_view pos_lexicon_en();

/// Version field of a resource's leading "# hcrf-<kind> <version>" line.
/// Throws ParseError when the line is missing or names another kind.
int version_of(std::string_view text, std::string_view kind);

std::unordered_set<std::string> parse_stopwords(std::string_view text);
std::unordered_set<std::string> default_stopwords();

}  // namespace hcrf::resources
