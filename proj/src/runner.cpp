#include "burstsim/runner.hpp"

#include <filesystem>
#include <fstream>

#include "burstsim/errors.hpp"
#include "burstsim/simulation.hpp"

namespace burstsim {

RunResult run_scenario(const Scenario& scenario) {
    return run_scenario(scenario, scenario.realize_trace());
}

RunResult run_scenario(const Scenario& scenario, const Trace& trace) {
    Simulation sim(scenario, trace);
    RunResult result;
    result.log = sim.run();
    result.records = collect(result.log.entries());
    result.summary = summarize(result.log.entries());
    return result;
}

std::string summary_json_text(const Summary& summary) {
    return summary.to_json().dump(2) + "\n";
}

void write_outputs(const RunResult& result, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    {
        std::ofstream out(dir / "events.jsonl");
        if (!out) throw ConfigError("cannot write to " + (dir / "events.jsonl").string());
        result.log.to_jsonl(out);
    }
    {
        std::ofstream out(dir / "records.csv");
        out << records_csv(result.records);
    }
    {
        std::ofstream out(dir / "wait_bins.csv");
        out << binned_wait_report(result.records).to_csv();
    }
    {
        std::ofstream out(dir / "summary.json");
        out << summary_json_text(result.summary);
    }
}

std::vector<PolicyOutcome> compare_policies(const Scenario& scenario, const std::vector<Policy>& policies) {
    if (policies.size() < 2) throw ConfigError("compare requires at least 2 policies");
    const Trace trace = scenario.realize_trace();
    std::vector<PolicyOutcome> outcomes;
    for (const Policy& policy : policies) {
        Scenario variant = scenario;
        variant.policy = policy;
        RunResult result = run_scenario(variant, trace);
        outcomes.push_back(PolicyOutcome{policy.name(), result.summary});
    }
    return outcomes;
}

RunResult replay_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open log: " + path);
    const std::vector<LogEntry> entries = EventLog::parse_jsonl(in);
    RunResult result;
    for (const LogEntry& entry : entries) result.log.append(entry.t, entry.kind, entry.payload);
    result.records = collect(result.log.entries());
    result.summary = summarize(result.log.entries());
    return result;
}

}  // namespace burstsim
