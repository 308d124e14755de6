#pragma once
// Paralinguistic marker counts. Markers are transcribed as "*text*"; the
// marker -> category map is a versioned resource.

#include <string>
#include <unordered_map>
#include <vector>

namespace hcrf {

class MarkerMap {
 public:
  MarkerMap();  // built-in map
  static MarkerMap parse(std::string_view text, const std::string& origin);

  /// Category of a marker ("*Chuckling*", "chuckling" both accepted), or
  /// "other" for unknown markers.
  std::string category(std::string_view marker) const;

  /// intonation pronunciation laughter volume other
  static const std::vector<std::string>& categories();

 private:
  struct Empty {};
  explicit MarkerMap(Empty) {}
  std::unordered_map<std::string, std::string> map_;
};

/// Strips surrounding asterisks and whitespace, lowercases.
std::string normalize_marker(std::string_view marker);

/// Counts per category in MarkerMap::categories() order. Unknown markers are
/// counted under "other" and logged once per distinct marker.
std::vector<double> paralinguistic_features(const std::vector<std::string>& markers, const MarkerMap& map);

}  // namespace hcrf
