#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "burstsim/event.hpp"
#include "burstsim/time.hpp"
#include "burstsim/wait_table.hpp"

namespace burstsim {

// One executed or cancelled job copy, reconstructed from the event log.
// tts == wait + run for executed copies.
struct JobRecord {
    std::string job_id;
    std::string app;
    std::string cluster;  // "hpc" | "cloud"
    SimTime submit_s = 0;
    std::optional<SimTime> start_s;
    std::optional<SimTime> end_s;
    std::int64_t wait_s = 0;
    std::int64_t run_s = 0;
    std::int64_t tts_s = 0;
    std::string outcome;  // finished | walltime_killed | cancelled | unroutable
    // Carried for binning; not part of the CSV schema.
    int nodes = 1;
    std::int64_t req_walltime_s = 1;
};

// Rebuilds per-copy records from a log. Cancelled duplicates are kept as
// records (outcome "cancelled") but excluded from wait statistics. Copies
// still pending or running at the end of the log are not reported.
std::vector<JobRecord> collect(std::span<const LogEntry> log);

bool is_executed(const JobRecord& record);

// CSV with the fixed header
// job_id,app,cluster,submit_s,start_s,end_s,wait_s,run_s,tts_s,outcome.
std::string records_csv(const std::vector<JobRecord>& records);

// Median of (wait / requested walltime) as a percentage, over executed
// copies, on the same 6x5 grid as the wait table. Cells with no jobs are
// empty, not zero. Median of an even-sized set is the lower-middle value.
struct BinnedWaitReport {
    std::optional<double> cells[WaitTable::kRows][WaitTable::kCols];
    int counts[WaitTable::kRows][WaitTable::kCols] = {};

    std::string to_csv() const;  // empty cells rendered as "-"
    Payload to_json() const;
};

BinnedWaitReport binned_wait_report(const std::vector<JobRecord>& records);

// Side-by-side per-application means for two record sets (e.g. an HPC-only
// and a cloud-only run of the same workload), with a run-time ratio column.
struct ComparisonRow {
    std::string app;
    std::int64_t mean_run_a_s = 0;
    std::int64_t mean_tts_a_s = 0;
    std::int64_t mean_run_b_s = 0;
    std::int64_t mean_tts_b_s = 0;
    double run_ratio = 0.0;  // b / a
};

std::vector<ComparisonRow> comparison_report(const std::vector<JobRecord>& records_a,
                                             const std::vector<JobRecord>& records_b);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_table(const std::vector<ComparisonRow>& rows);  // human-readable, H:MM:SS

// Run-level roll-up. vm_hours counts VM lifetime from creation through
// termination (or through the last event in the log for VMs still alive), so
// a replay of the log alone reproduces the summary byte for byte.
struct Summary {
    std::int64_t median_tts_s = 0;
    double mean_wait_s = 0.0;
    std::int64_t jobs_bursted = 0;
    double vm_hours = 0.0;
    std::int64_t jobs_executed = 0;
    std::int64_t jobs_cancelled_copies = 0;

    Payload to_json() const;
};

Summary summarize(std::span<const LogEntry> log);

// Lower-middle median; 0 for an empty set.
std::int64_t median_lower(std::vector<std::int64_t> values);

}  // namespace burstsim
