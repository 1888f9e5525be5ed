#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "burstsim/job.hpp"
#include "burstsim/rng.hpp"

namespace burstsim {

// A workload: jobs sorted by submit time, ids unique.
struct Trace {
    std::vector<Job> jobs;
};

// JSONL trace: one job object per line. Required fields: id, submit_time_s,
// app, nodes, req_walltime_s, base_runtime_s. Optional: user, tasks_per_node,
// cluster_hint ("hpc"|"cloud"|"auto"). Unknown fields are ignored.
Trace load_trace_jsonl(const std::string& path);
Trace parse_trace_jsonl(std::istream& in, const std::string& name);

// Standard Workload Format ingestion. Column mapping (1-based):
//   1 -> id, 2 -> submit_time_s, 4 -> base_runtime_s, 8 -> req_walltime_s,
//   5 (allocated processors) -> nodes = ceil(processors / cores_per_node).
// Records with a missing (-1) runtime or processor count are dropped and
// counted. `;` comment lines are skipped.
struct SwfLoadResult {
    Trace trace;
    int dropped = 0;
};
SwfLoadResult load_trace_swf(const std::string& path, int cores_per_node);
SwfLoadResult parse_trace_swf(std::istream& in, const std::string& name, int cores_per_node);

// Discrete distribution over integer values; probabilities must sum to 1
// within 1e-9.
struct DiscreteDist {
    std::vector<std::pair<std::int64_t, double>> items;
};

struct AppMixEntry {
    std::string app;
    double probability = 0.0;
};

// Synthetic workload: Poisson arrivals, nodes and walltimes drawn from the
// given discrete distributions, base runtime uniform in
// [runtime_frac_lo, runtime_frac_hi] x walltime.
struct SynthSpec {
    double rate_jobs_per_hour = 0.0;
    SimTime duration_s = 0;
    DiscreteDist node_dist;
    DiscreteDist walltime_dist;
    std::vector<AppMixEntry> app_mix;
    double runtime_frac_lo = 0.2;
    double runtime_frac_hi = 1.0;
    std::string id_prefix = "synth";
};

Trace synth_workload(const SynthSpec& spec, Rng& rng);

}  // namespace burstsim
