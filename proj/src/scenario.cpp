#include "burstsim/scenario.hpp"

#include <filesystem>
#include <fstream>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

DiscreteDist dist_from_json(const nlohmann::json& list, const char* what) {
    DiscreteDist dist;
    if (!list.is_array()) throw ConfigError(std::string(what) + " must be an array of {value, p}");
    for (const auto& item : list)
        dist.items.emplace_back(item.at("value").get<std::int64_t>(), item.at("p").get<double>());
    return dist;
}

}  // namespace

Scenario Scenario::from_json(const nlohmann::json& doc, const std::string& base_dir) {
    Scenario scenario;
    scenario.base_dir = base_dir;
    try {
        if (doc.contains("hpc")) {
            const auto& hpc = doc.at("hpc");
            scenario.hpc.name = hpc.value("name", scenario.hpc.name);
            scenario.hpc.total_nodes = hpc.value("total_nodes", scenario.hpc.total_nodes);
            scenario.hpc.cores_per_node = hpc.value("cores_per_node", scenario.hpc.cores_per_node);
            if (hpc.contains("partitions")) {
                scenario.hpc.partitions.clear();
                for (const auto& [name, nodes] : hpc.at("partitions").items())
                    scenario.hpc.partitions[name] = nodes.get<int>();
            }
            scenario.hpc.default_partition = hpc.value("default_partition", scenario.hpc.default_partition);
            scenario.hpc.backfill_enabled = hpc.value("backfill_enabled", scenario.hpc.backfill_enabled);
        }
        if (doc.contains("cloud")) {
            const auto& cloud = doc.at("cloud");
            scenario.cloud.name = cloud.value("name", scenario.cloud.name);
            scenario.cloud.host_count = cloud.value("host_count", scenario.cloud.host_count);
            scenario.cloud.vcpus_per_host = cloud.value("vcpus_per_host", scenario.cloud.vcpus_per_host);
            scenario.cloud.oversubscription = cloud.value("oversubscription", scenario.cloud.oversubscription);
            scenario.cloud.vm_vcpus = cloud.value("vm_vcpus", scenario.cloud.vm_vcpus);
            scenario.cloud.min_vms = cloud.value("min_vms", scenario.cloud.min_vms);
            scenario.cloud.max_vms = cloud.value("max_vms", scenario.cloud.max_vms);
            scenario.cloud.master_vm = cloud.value("master_vm", scenario.cloud.master_vm);
            scenario.cloud.login_vm = cloud.value("login_vm", scenario.cloud.login_vm);
            scenario.cloud.backfill_enabled = cloud.value("backfill_enabled", scenario.cloud.backfill_enabled);
            if (cloud.contains("stage_latencies_s")) {
                const auto& stages = cloud.at("stage_latencies_s");
                StageLatencies& lat = scenario.cloud.stage_latencies;
                lat.boot = stages.value("boot", lat.boot);
                lat.update = stages.value("update", lat.update);
                lat.packages = stages.value("packages", lat.packages);
                lat.mounts = stages.value("mounts", lat.mounts);
                lat.scheduler = stages.value("scheduler", lat.scheduler);
                lat.identity = stages.value("identity", lat.identity);
            }
        }
        if (doc.contains("autoscaler")) {
            const auto& autoscaler = doc.at("autoscaler");
            scenario.autoscaler.enabled = autoscaler.value("enabled", scenario.autoscaler.enabled);
            scenario.autoscaler.interval_s = autoscaler.value("interval_s", scenario.autoscaler.interval_s);
            scenario.autoscaler.headroom_factor =
                autoscaler.value("headroom_factor", scenario.autoscaler.headroom_factor);
            scenario.autoscaler.cooldown_s = autoscaler.value("cooldown_s", scenario.autoscaler.cooldown_s);
        }
        if (doc.contains("policy")) {
            const auto& policy = doc.at("policy");
            scenario.policy.variant = policy_variant_from_string(policy.value("variant", std::string("hint_only")));
            if (policy.contains("threshold_s") && !policy.at("threshold_s").is_null())
                scenario.policy.threshold_s = policy.at("threshold_s").get<std::int64_t>();
            const std::string source = policy.value("wait_source", std::string("table"));
            if (source == "table")
                scenario.wait_source = WaitSource::Table;
            else if (source == "live")
                scenario.wait_source = WaitSource::Live;
            else
                throw ConfigError("policy.wait_source must be \"table\" or \"live\"");
            if (policy.contains("wait_table_path") && !policy.at("wait_table_path").is_null())
                scenario.wait_table_path = policy.at("wait_table_path").get<std::string>();
        }
        if (doc.contains("apps")) {
            for (const auto& app : doc.at("apps")) {
                AppProfile profile;
                profile.name = app.at("name").get<std::string>();
                profile.base_runtime_s = app.at("base_runtime_s").get<std::int64_t>();
                profile.cloud_slowdown = app.at("cloud_slowdown").get<double>();
                profile.reference_nodes = app.value("reference_nodes", 1);
                profile.reference_tasks = app.value("reference_tasks", 1);
                scenario.apps.push_back(std::move(profile));
            }
        }
        if (doc.contains("trace")) {
            const auto& trace = doc.at("trace");
            const std::string kind = trace.value("type", std::string("synthetic"));
            if (kind == "jsonl") {
                scenario.trace.kind = TraceSourceKind::Jsonl;
                scenario.trace.path = trace.at("path").get<std::string>();
            } else if (kind == "swf") {
                scenario.trace.kind = TraceSourceKind::Swf;
                scenario.trace.path = trace.at("path").get<std::string>();
                scenario.trace.cores_per_node = trace.value("cores_per_node", scenario.hpc.cores_per_node);
            } else if (kind == "synthetic") {
                scenario.trace.kind = TraceSourceKind::Synthetic;
                SynthSpec& synth = scenario.trace.synth;
                synth.rate_jobs_per_hour = trace.value("rate_jobs_per_hour", 0.0);
                synth.duration_s = trace.value("duration_s", SimTime{0});
                if (trace.contains("node_dist")) synth.node_dist = dist_from_json(trace.at("node_dist"), "node_dist");
                if (trace.contains("walltime_dist"))
                    synth.walltime_dist = dist_from_json(trace.at("walltime_dist"), "walltime_dist");
                if (trace.contains("app_mix")) {
                    for (const auto& item : trace.at("app_mix"))
                        synth.app_mix.push_back(
                            AppMixEntry{item.at("app").get<std::string>(), item.at("p").get<double>()});
                }
                if (trace.contains("runtime_factor")) {
                    synth.runtime_frac_lo = trace.at("runtime_factor").at(0).get<double>();
                    synth.runtime_frac_hi = trace.at("runtime_factor").at(1).get<double>();
                }
            } else {
                throw ConfigError("trace.type must be jsonl, swf, or synthetic");
            }
        }
        if (doc.contains("seed")) {
            scenario.seed = doc.at("seed").get<std::uint64_t>();
            scenario.seed_set = true;
        }
        scenario.horizon_s = doc.value("horizon_s", scenario.horizon_s);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return scenario;
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scenario " + path + ": " + e.what());
    }
    return from_json(doc, std::filesystem::path(path).parent_path().string());
}

std::string Scenario::resolve_path(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> problems;
    const auto check = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            problems.emplace_back(e.what());
        }
    };
    check([&] { hpc.validate(); });
    check([&] { cloud.validate(); });
    check([&] { policy.validate(); });
    check([&] { app_registry(); });
    if (horizon_s < 0) problems.emplace_back("horizon_s must be >= 0");
    if (autoscaler.enabled && autoscaler.interval_s < 1)
        problems.emplace_back("autoscaler.interval_s must be >= 1");
    if (autoscaler.headroom_factor <= 0) problems.emplace_back("autoscaler.headroom_factor must be > 0");
    if (wait_table_path) check([&] { wait_table(); });
    switch (trace.kind) {
        case TraceSourceKind::Jsonl:
        case TraceSourceKind::Swf:
            if (!std::filesystem::exists(resolve_path(trace.path)))
                problems.push_back("trace file not found: " + resolve_path(trace.path));
            break;
        case TraceSourceKind::Synthetic:
            if (!seed_set) problems.emplace_back("synthetic workloads require a seed");
            check([&] {
                Rng probe(1);
                SynthSpec spec = trace.synth;
                spec.duration_s = std::min<SimTime>(spec.duration_s, 1);
                synth_workload(spec, probe);
            });
            break;
    }
    return problems;
}

AppRegistry Scenario::app_registry() const {
    AppRegistry registry;
    for (const AppProfile& profile : apps) registry.add(profile);
    return registry;
}

WaitTable Scenario::wait_table() const {
    if (wait_table_path) return WaitTable::load_csv(resolve_path(*wait_table_path));
    return WaitTable::bundled_default();
}

Trace Scenario::realize_trace() const {
    switch (trace.kind) {
        case TraceSourceKind::Jsonl:
            return load_trace_jsonl(resolve_path(trace.path));
        case TraceSourceKind::Swf:
            return load_trace_swf(resolve_path(trace.path), trace.cores_per_node).trace;
        case TraceSourceKind::Synthetic: {
            if (!seed_set) throw ConfigError("synthetic workloads require a seed");
            Rng rng(seed);
            return synth_workload(trace.synth, rng);
        }
    }
    throw ConfigError("unknown trace source");
}

}  // namespace burstsim
