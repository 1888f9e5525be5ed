#include "burstsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

void sort_and_check(Trace& trace, const std::string& name) {
    std::stable_sort(trace.jobs.begin(), trace.jobs.end(),
                     [](const Job& a, const Job& b) { return a.submit_time < b.submit_time; });
    std::set<std::string> seen;
    for (const Job& job : trace.jobs) {
        if (!seen.insert(job.id).second) throw DuplicateId(name + ": duplicate job id \"" + job.id + "\"");
    }
}

ClusterHint hint_from_string(const std::string& value, const std::string& where, std::size_t line) {
    if (value == "hpc") return ClusterHint::Hpc;
    if (value == "cloud") return ClusterHint::Cloud;
    if (value == "auto") return ClusterHint::Auto;
    throw ParseError(where, line, "invalid cluster_hint \"" + value + "\"");
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    return in;
}

}  // namespace

Trace parse_trace_jsonl(std::istream& in, const std::string& name) {
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(name, line_no, e.what());
        }
        Job job;
        try {
            job.id = record.at("id").get<std::string>();
            job.submit_time = record.at("submit_time_s").get<SimTime>();
            job.app = record.at("app").get<std::string>();
            job.nodes = record.at("nodes").get<int>();
            job.req_walltime_s = record.at("req_walltime_s").get<std::int64_t>();
            job.base_runtime_s = record.at("base_runtime_s").get<std::int64_t>();
            job.user = record.value("user", std::string("anon"));
            job.tasks_per_node = record.value("tasks_per_node", 1);
            job.cluster_hint = hint_from_string(record.value("cluster_hint", std::string("auto")), name, line_no);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(name, line_no, e.what());
        }
        if (job.nodes < 1 || job.req_walltime_s < 1 || job.base_runtime_s < 1 || job.tasks_per_node < 1 ||
            job.submit_time < 0)
            throw NonPositiveField(name + ":" + std::to_string(line_no) + ": field out of range for job \"" +
                                   job.id + "\"");
        trace.jobs.push_back(std::move(job));
    }
    sort_and_check(trace, name);
    return trace;
}

Trace load_trace_jsonl(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_trace_jsonl(in, path);
}

SwfLoadResult parse_trace_swf(std::istream& in, const std::string& name, int cores_per_node) {
    if (cores_per_node < 1) throw NonPositiveField("cores_per_node must be >= 1");
    SwfLoadResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == ';') continue;
        std::istringstream fields(line);
        // SWF is whitespace-separated; we consume the leading eight columns.
        long long id = 0, submit = 0, wait = 0, runtime = 0, procs = 0;
        double avg_cpu = 0, mem = 0;
        long long req8 = 0;
        if (!(fields >> id >> submit >> wait >> runtime >> procs >> avg_cpu >> mem >> req8))
            throw ParseError(name, line_no, "short record");
        if (runtime < 0 || procs <= 0) {
            ++result.dropped;
            continue;
        }
        Job job;
        job.id = std::to_string(id);
        job.submit_time = submit;
        job.app = "swf";
        job.nodes = static_cast<int>((procs + cores_per_node - 1) / cores_per_node);
        job.base_runtime_s = std::max<std::int64_t>(1, runtime);
        job.req_walltime_s = req8 > 0 ? req8 : job.base_runtime_s;
        result.trace.jobs.push_back(std::move(job));
    }
    sort_and_check(result.trace, name);
    return result;
}

SwfLoadResult load_trace_swf(const std::string& path, int cores_per_node) {
    auto in = open_or_throw(path);
    return parse_trace_swf(in, path, cores_per_node);
}

namespace {

void check_dist(const DiscreteDist& dist, const std::string& what) {
    if (dist.items.empty()) throw InvalidDistribution(what + ": empty distribution");
    double total = 0.0;
    for (const auto& [value, p] : dist.items) {
        if (p < 0.0) throw InvalidDistribution(what + ": negative probability");
        if (value < 1) throw InvalidDistribution(what + ": values must be >= 1");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidDistribution(what + ": probabilities sum to " + std::to_string(total));
}

std::int64_t draw_dist(const DiscreteDist& dist, Rng& rng) {
    std::vector<double> weights;
    weights.reserve(dist.items.size());
    for (const auto& [value, p] : dist.items) weights.push_back(p);
    return dist.items[rng.pick_weighted(weights)].first;
}

}  // namespace

Trace synth_workload(const SynthSpec& spec, Rng& rng) {
    if (spec.rate_jobs_per_hour < 0.0) throw InvalidDistribution("negative arrival rate");
    Trace trace;
    if (spec.rate_jobs_per_hour == 0.0 || spec.duration_s <= 0) return trace;
    check_dist(spec.node_dist, "node_dist");
    check_dist(spec.walltime_dist, "walltime_dist");
    if (spec.app_mix.empty()) throw InvalidDistribution("app_mix: empty");
    double mix_total = 0.0;
    std::vector<double> mix_weights;
    for (const auto& entry : spec.app_mix) {
        if (entry.probability < 0.0) throw InvalidDistribution("app_mix: negative probability");
        mix_total += entry.probability;
        mix_weights.push_back(entry.probability);
    }
    if (std::abs(mix_total - 1.0) > 1e-9) throw InvalidDistribution("app_mix: probabilities sum to " + std::to_string(mix_total));
    if (spec.runtime_frac_lo <= 0.0 || spec.runtime_frac_hi > 1.0 || spec.runtime_frac_lo > spec.runtime_frac_hi)
        throw InvalidDistribution("runtime fraction range must satisfy 0 < lo <= hi <= 1");

    const double mean_gap_s = 3600.0 / spec.rate_jobs_per_hour;
    double t = 0.0;
    int n = 0;
    while (true) {
        t += rng.exponential(mean_gap_s);
        if (t > static_cast<double>(spec.duration_s)) break;
        Job job;
        job.id = spec.id_prefix + "-" + std::to_string(++n);
        job.submit_time = static_cast<SimTime>(t);
        job.nodes = static_cast<int>(draw_dist(spec.node_dist, rng));
        job.req_walltime_s = draw_dist(spec.walltime_dist, rng);
        job.app = spec.app_mix[rng.pick_weighted(mix_weights)].app;
        const double frac = rng.uniform_real(spec.runtime_frac_lo, spec.runtime_frac_hi);
        job.base_runtime_s = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(frac * static_cast<double>(job.req_walltime_s))));
        trace.jobs.push_back(std::move(job));
    }
    sort_and_check(trace, "synthetic");
    return trace;
}

}  // namespace burstsim
