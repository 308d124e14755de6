#pragma once
// Tokenization and normalization of transcript text.
//
// Tokenizer rules, applied to each whitespace-separated chunk:
//   1. leading and trailing punctuation is stripped (apostrophes inside a
//      word and hyphens between letters are kept);
//   2. the clitics n't 's 're 've 'll 'd 'm are split off as their own
//      tokens ("don't" -> "do" "n't"), following Penn Treebank practice;
//   3. chunks that are empty after stripping are dropped.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hcrf {

std::vector<std::string> tokenize(std::string_view text);

std::string to_lower(std::string_view s);

/// Spelling/normalization hook applied to each token before feature
/// extraction. The default is the identity.
using Normalizer = std::function<std::string(std::string_view)>;

Normalizer identity_normalizer();

/// Splits on `delim`, keeping empty fields.
std::vector<std::string> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

/// Lines of a resource file with comments ('#') and blank lines removed.
std::vector<std::string> content_lines(std::string_view text);

/// 64-bit FNV-1a, used for resource and fitted-state fingerprints.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 1469598103934665603ULL);

std::string read_file(const std::string& path);

}  // namespace hcrf
