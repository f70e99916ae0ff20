#pragma once

#include <string>

#include "lampwalk/construction.hpp"

namespace lampwalk {

// Versioned structured text for a built construction. Keyed by content
// digests of the group spec and the schedule; reading validates both against
// the caller's configuration and rejects mismatches. Derived per-level sets
// are recomputed on load, so write/read round-trips bit-exactly.
std::string cache_to_text(const Construction& c,
                          const std::string& config_digest);

Construction cache_from_text(const std::string& text, const GroupSpec& spec,
                             const GrowthSchedule& schedule);

}  // namespace lampwalk
