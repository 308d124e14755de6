#include "hcrf/segment.hpp"

#include <algorithm>
#include <limits>

#include "hcrf/errors.hpp"

namespace hcrf {
namespace {

void attach_markers(const Transcript& t, std::vector<Ipu>& units) {
  for (const auto& m : t.markers) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (units[i].start_ms <= m.timestamp_ms) target = i;
    }
    units[target].para_events.push_back(m.text);
  }
}

std::vector<Ipu> marker_only_unit(const Transcript& t) {
  Ipu u;
  u.start_ms = t.markers.front().timestamp_ms;
  u.end_ms = t.markers.back().timestamp_ms;
  for (const auto& m : t.markers) {
    u.start_ms = std::min(u.start_ms, m.timestamp_ms);
    u.end_ms = std::max(u.end_ms, m.timestamp_ms);
    u.para_events.push_back(m.text);
  }
  return {u};
}

}  // namespace

std::vector<Ipu> segment_into_ipus(const Transcript& t, std::int64_t threshold_ms) {
  if (threshold_ms <= 0) throw InvalidInput("pause threshold must be positive");
  if (t.tokens.empty()) return t.markers.empty() ? std::vector<Ipu>{} : marker_only_unit(t);

  std::vector<Ipu> units;
  for (std::size_t k = 0; k < t.tokens.size(); ++k) {
    const auto& tok = t.tokens[k];
    if (k == 0 || tok.start_ms - t.tokens[k - 1].end_ms > threshold_ms) {
      if (!units.empty()) units.back().following_pause_ms = tok.start_ms - units.back().end_ms;
      units.emplace_back();
      units.back().start_ms = tok.start_ms;
      units.back().end_ms = tok.end_ms;
    }
    Ipu& u = units.back();
    u.tokens.push_back(tok.text);
    u.pos.push_back(tok.pos);
    u.end_ms = std::max(u.end_ms, tok.end_ms);
  }
  attach_markers(t, units);
  return units;
}

Ipu whole_document_unit(const Transcript& t) {
  if (t.tokens.empty()) {
    if (t.markers.empty()) return Ipu{};
    return marker_only_unit(t).front();
  }
  auto units = segment_into_ipus(t, std::numeric_limits<std::int64_t>::max());
  return units.front();
}

}  // namespace hcrf
