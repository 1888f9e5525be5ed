#include "burstsim/time.hpp"

#include <cstdio>

namespace burstsim {

std::string format_hms(SimTime seconds) {
    if (seconds < 0) seconds = 0;
    const SimTime h = seconds / 3600;
    const int m = static_cast<int>((seconds % 3600) / 60);
    const int s = static_cast<int>(seconds % 60);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld:%02d:%02d", static_cast<long long>(h), m, s);
    return buf;
}

}  // namespace burstsim
