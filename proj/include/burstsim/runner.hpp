#pragma once

#include <string>
#include <vector>

#include "burstsim/metrics.hpp"
#include "burstsim/scenario.hpp"

namespace burstsim {

struct RunResult {
    EventLog log;
    std::vector<JobRecord> records;
    Summary summary;
};

// Runs a scenario to its horizon. The overload taking a trace allows paired
// policy comparisons over one realized workload.
RunResult run_scenario(const Scenario& scenario);
RunResult run_scenario(const Scenario& scenario, const Trace& trace);

// Writes events.jsonl, records.csv, wait_bins.csv and summary.json.
void write_outputs(const RunResult& result, const std::string& out_dir);

struct PolicyOutcome {
    std::string policy;
    Summary summary;
};

// One run per policy over the same realized trace (shared seed).
std::vector<PolicyOutcome> compare_policies(const Scenario& scenario, const std::vector<Policy>& policies);

// Rebuilds records and summary from a JSONL event log file.
RunResult replay_log(const std::string& path);

std::string summary_json_text(const Summary& summary);

}  // namespace burstsim
