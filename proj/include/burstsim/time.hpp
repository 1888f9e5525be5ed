#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace burstsim {

// Virtual time in whole seconds. Integer arithmetic keeps every run
// bit-stable, which the replay and determinism checks rely on.
using SimTime = std::int64_t;

inline constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

// Renders seconds as H:MM:SS (hours unpadded, e.g. "1:05:40", "0:02:40").
std::string format_hms(SimTime seconds);

}  // namespace burstsim
