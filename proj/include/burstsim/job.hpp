#pragma once

#include <cstdint>
#include <string>

#include "burstsim/app_profile.hpp"
#include "burstsim/time.hpp"

namespace burstsim {

enum class Target { Hpc, Cloud };

const char* to_string(Target target);

enum class ClusterHint { Hpc, Cloud, Auto };

// A batch request. base_runtime_s is the time the job would actually run on
// the HPC system; it may exceed req_walltime_s, in which case the scheduler
// kills the job at the walltime bound.
struct Job {
    std::string id;
    std::string user = "anon";
    SimTime submit_time = 0;
    std::string app;
    int nodes = 1;
    int tasks_per_node = 1;
    std::int64_t req_walltime_s = 1;
    std::int64_t base_runtime_s = 1;
    ClusterHint cluster_hint = ClusterHint::Auto;
};

// Runtime of `job` on the given target, capped at the requested walltime.
// HPC runs at base speed; cloud scales by the application's slowdown factor.
std::int64_t runtime_on(const Job& job, Target target, const AppRegistry& apps);

// Same, without the walltime cap; used to decide the WalltimeKilled outcome.
std::int64_t uncapped_runtime_on(const Job& job, Target target, const AppRegistry& apps);

}  // namespace burstsim
