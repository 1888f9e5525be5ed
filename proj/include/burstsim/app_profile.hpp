#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "burstsim/errors.hpp"
#include "burstsim/time.hpp"

namespace burstsim {

// Per-application performance profile: measured runtime on the HPC system
// at a reference node/task count, and the scalar slowdown observed when the
// same binary runs on cloud nodes. The slowdown is deliberately a single
// number per application; node-count effects are out of scope.
struct AppProfile {
    std::string name;
    std::int64_t base_runtime_s = 1;
    double cloud_slowdown = 1.0;  // cloud runtime / HPC runtime, > 0
    int reference_nodes = 1;
    int reference_tasks = 1;
};

// Scales a base runtime by a slowdown factor and applies the ceiling rule.
// Products within 1e-6 of an integer are treated as that integer first, so
// profiles expressed as exact runtime quotients survive the float round trip.
std::int64_t scaled_runtime(std::int64_t base_s, double slowdown);

class AppRegistry {
public:
    void add(AppProfile profile);
    bool has(const std::string& name) const { return profiles_.count(name) > 0; }
    const AppProfile& get(const std::string& name) const;  // throws UnknownApp
    const std::map<std::string, AppProfile>& all() const { return profiles_; }

private:
    std::map<std::string, AppProfile> profiles_;
};

}  // namespace burstsim
