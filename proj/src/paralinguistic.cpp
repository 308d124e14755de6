#include "hcrf/paralinguistic.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include <spdlog/spdlog.h>

#include "hcrf/errors.hpp"
#include "hcrf/resources.hpp"
#include "hcrf/text.hpp"

namespace hcrf {

std::string normalize_marker(std::string_view marker) {
  auto t = trim(marker);
  while (!t.empty() && t.front() == '*') t.remove_prefix(1);
  while (!t.empty() && t.back() == '*') t.remove_suffix(1);
  return to_lower(trim(t));
}

const std::vector<std::string>& MarkerMap::categories() {
  static const std::vector<std::string> kCats{"intonation", "pronunciation", "laughter", "volume", "other"};
  return kCats;
}

MarkerMap::MarkerMap() : MarkerMap(parse(resources::paralinguistic_markers(), "<builtin markers>")) {}

MarkerMap MarkerMap::parse(std::string_view text, const std::string& origin) {
  MarkerMap m{Empty{}};
  bool header = true;
  for (const auto& line : content_lines(text)) {
    const auto f = split(line, '\t');
    if (header) {
      header = false;
      if (f.size() != 2 || trim(f[0]) != "marker") throw ParseError(origin + ": expected header 'marker category'");
      continue;
    }
    if (f.size() != 2) throw ParseError(origin + ": malformed record '" + line + "'");
    const std::string cat(trim(f[1]));
    const auto& cats = categories();
    if (std::find(cats.begin(), cats.end(), cat) == cats.end()) {
      throw ParseError(origin + ": unknown category '" + cat + "'");
    }
    m.map_[normalize_marker(f[0])] = cat;
  }
  return m;
}

std::string MarkerMap::category(std::string_view marker) const {
  auto it = map_.find(normalize_marker(marker));
  return it == map_.end() ? "other" : it->second;
}

std::vector<double> paralinguistic_features(const std::vector<std::string>& markers, const MarkerMap& map) {
  static std::mutex mu;
  static std::set<std::string> reported;
  const auto& cats = MarkerMap::categories();
  std::vector<double> out(cats.size(), 0.0);
  for (const auto& m : markers) {
    const std::string cat = map.category(m);
    out[static_cast<std::size_t>(std::find(cats.begin(), cats.end(), cat) - cats.begin())] += 1.0;
    if (cat == "other") {
      std::lock_guard lock(mu);
      if (reported.insert(normalize_marker(m)).second) {
        spdlog::warn("unknown paralinguistic marker '{}' counted as other", m);
      }
    }
  }
  return out;
}

}  // namespace hcrf
