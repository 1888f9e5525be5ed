#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "burstsim/app_profile.hpp"
#include "burstsim/cloud_pool.hpp"
#include "burstsim/hpc_cluster.hpp"
#include "burstsim/router.hpp"
#include "burstsim/trace.hpp"

namespace burstsim {

// Where the workload comes from.
enum class TraceSourceKind { Jsonl, Swf, Synthetic };

struct TraceSource {
    TraceSourceKind kind = TraceSourceKind::Synthetic;
    std::string path;          // jsonl / swf, resolved against the scenario dir
    int cores_per_node = 48;   // swf
    SynthSpec synth;           // synthetic
};

// A complete, self-contained simulation setup.
struct Scenario {
    HpcConfig hpc;
    CloudConfig cloud;
    AutoscalerConfig autoscaler;
    Policy policy;
    WaitSource wait_source = WaitSource::Table;
    std::optional<std::string> wait_table_path;
    std::vector<AppProfile> apps;
    TraceSource trace;
    std::uint64_t seed = 0;
    bool seed_set = false;
    SimTime horizon_s = 86400;
    std::string base_dir = ".";  // for resolving relative paths

    static Scenario from_json(const nlohmann::json& doc, const std::string& base_dir);
    static Scenario load(const std::string& path);

    // Full config check without running; collects human-readable problems.
    std::vector<std::string> validate() const;

    AppRegistry app_registry() const;
    WaitTable wait_table() const;
    Trace realize_trace() const;  // loads or synthesizes the workload
    std::string resolve_path(const std::string& path) const;
};

}  // namespace burstsim
