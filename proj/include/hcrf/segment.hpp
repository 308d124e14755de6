#pragma once
// Pause-based segmentation into inter-pausal units (IPUs).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcrf/corpus.hpp"

namespace hcrf {

struct Ipu {
  std::vector<std::string> tokens;
  std::vector<std::string> pos;  // per-token tags from the transcript, "" if untagged
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::vector<std::string> para_events;
  std::optional<std::int64_t> following_pause_ms;  // absent for the last unit
};

/// A boundary falls between consecutive tokens exactly when the silence
/// between them (next start - previous end) is strictly greater than
/// threshold_ms. A marker joins the last unit starting at or before its
/// timestamp (the first unit if it precedes them all). A transcript with
/// markers but no tokens becomes one token-less unit; an empty transcript
/// gives no units. Throws InvalidInput if threshold_ms <= 0.
std::vector<Ipu> segment_into_ipus(const Transcript& transcript, std::int64_t threshold_ms);

/// The whole transcript as a single unit.
Ipu whole_document_unit(const Transcript& transcript);

}  // namespace hcrf
