#include "burstsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

struct CopyTrack {
    std::optional<SimTime> start;
    std::optional<SimTime> end;
    std::string outcome;  // set when terminal
};

struct JobTrack {
    std::string app;
    std::string user;
    int nodes = 1;
    std::int64_t req_walltime_s = 1;
    SimTime submit = 0;
    std::vector<std::string> targets;          // in dispatch order, hpc first
    std::map<std::string, CopyTrack> copies;   // cluster -> copy
    bool unroutable = false;
};

struct VmTrack {
    SimTime created = 0;
    std::optional<SimTime> terminated;
};

std::string field_str(const Payload& payload, const char* key) {
    if (!payload.contains(key)) throw CorruptLog(std::string("event payload missing field ") + key);
    return payload.at(key).get<std::string>();
}

}  // namespace

bool is_executed(const JobRecord& record) {
    return record.outcome == "finished" || record.outcome == "walltime_killed";
}

std::vector<JobRecord> collect(std::span<const LogEntry> log) {
    std::map<std::string, JobTrack> jobs;
    std::vector<std::string> job_order;

    for (const LogEntry& entry : log) {
        switch (entry.kind) {
            case EventKind::JobArrival: {
                const std::string id = field_str(entry.payload, "id");
                JobTrack track;
                track.app = entry.payload.value("app", std::string("?"));
                track.user = entry.payload.value("user", std::string("anon"));
                track.nodes = entry.payload.value("nodes", 1);
                track.req_walltime_s = entry.payload.value("req_walltime_s", std::int64_t{1});
                track.submit = entry.t;
                if (entry.payload.contains("targets")) {
                    for (const auto& target : entry.payload.at("targets")) {
                        track.targets.push_back(target.get<std::string>());
                        track.copies[target.get<std::string>()] = CopyTrack{};
                    }
                }
                track.unroutable = entry.payload.value("unroutable", false);
                jobs[id] = std::move(track);
                job_order.push_back(id);
                break;
            }
            case EventKind::JobStart: {
                const std::string id = field_str(entry.payload, "id");
                const std::string cluster = field_str(entry.payload, "cluster");
                auto it = jobs.find(id);
                if (it == jobs.end()) throw CorruptLog("JobStart for unknown job \"" + id + "\"");
                it->second.copies[cluster].start = entry.t;
                break;
            }
            case EventKind::JobEnd: {
                const std::string id = field_str(entry.payload, "id");
                const std::string cluster = field_str(entry.payload, "cluster");
                auto it = jobs.find(id);
                if (it == jobs.end()) throw CorruptLog("JobEnd for unknown job \"" + id + "\"");
                CopyTrack& copy = it->second.copies[cluster];
                copy.end = entry.t;
                copy.outcome = entry.payload.value("outcome", std::string("finished"));
                break;
            }
            case EventKind::CancelRequest: {
                if (!entry.payload.value("applied", false)) break;
                const std::string id = field_str(entry.payload, "id");
                const std::string cluster = field_str(entry.payload, "cluster");
                auto it = jobs.find(id);
                if (it == jobs.end()) throw CorruptLog("CancelRequest for unknown job \"" + id + "\"");
                it->second.copies[cluster].outcome = "cancelled";
                break;
            }
            default:
                break;
        }
    }

    std::vector<JobRecord> records;
    for (const std::string& id : job_order) {
        const JobTrack& track = jobs.at(id);
        if (track.unroutable) {
            JobRecord record;
            record.job_id = id;
            record.app = track.app;
            record.cluster = "-";
            record.submit_s = track.submit;
            record.outcome = "unroutable";
            record.nodes = track.nodes;
            record.req_walltime_s = track.req_walltime_s;
            records.push_back(std::move(record));
            continue;
        }
        for (const std::string& cluster : track.targets) {
            const CopyTrack& copy = track.copies.at(cluster);
            if (copy.outcome.empty()) continue;  // still pending/running at log end
            JobRecord record;
            record.job_id = id;
            record.app = track.app;
            record.cluster = cluster;
            record.submit_s = track.submit;
            record.start_s = copy.start;
            record.end_s = copy.end;
            record.outcome = copy.outcome;
            record.nodes = track.nodes;
            record.req_walltime_s = track.req_walltime_s;
            if (is_executed(record)) {
                record.wait_s = *copy.start - track.submit;
                record.run_s = *copy.end - *copy.start;
                record.tts_s = *copy.end - track.submit;
            }
            records.push_back(std::move(record));
        }
    }
    return records;
}

std::string records_csv(const std::vector<JobRecord>& records) {
    std::ostringstream out;
    out << "job_id,app,cluster,submit_s,start_s,end_s,wait_s,run_s,tts_s,outcome\n";
    for (const JobRecord& record : records) {
        out << record.job_id << ',' << record.app << ',' << record.cluster << ',' << record.submit_s << ',';
        if (record.start_s) out << *record.start_s;
        out << ',';
        if (record.end_s) out << *record.end_s;
        out << ',';
        if (is_executed(record))
            out << record.wait_s << ',' << record.run_s << ',' << record.tts_s;
        else
            out << ",,";
        out << ',' << record.outcome << '\n';
    }
    return out.str();
}

std::int64_t median_lower(std::vector<std::int64_t> values) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

namespace {

double median_lower_double(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

}  // namespace

BinnedWaitReport binned_wait_report(const std::vector<JobRecord>& records) {
    std::vector<double> ratios[WaitTable::kRows][WaitTable::kCols];
    for (const JobRecord& record : records) {
        if (!is_executed(record)) continue;
        const int row = WaitTable::row_bin(record.req_walltime_s);
        const int col = WaitTable::col_bin(record.nodes);
        ratios[row][col].push_back(100.0 * static_cast<double>(record.wait_s) /
                                   static_cast<double>(record.req_walltime_s));
    }
    BinnedWaitReport report;
    for (int row = 0; row < WaitTable::kRows; ++row) {
        for (int col = 0; col < WaitTable::kCols; ++col) {
            report.counts[row][col] = static_cast<int>(ratios[row][col].size());
            if (!ratios[row][col].empty())
                report.cells[row][col] = median_lower_double(std::move(ratios[row][col]));
        }
    }
    return report;
}

std::string BinnedWaitReport::to_csv() const {
    std::ostringstream out;
    out << "req_minutes";
    for (const char* label : WaitTable::col_labels()) out << ',' << label;
    out << '\n';
    char buf[32];
    for (int row = 0; row < WaitTable::kRows; ++row) {
        out << WaitTable::row_labels()[static_cast<std::size_t>(row)];
        for (int col = 0; col < WaitTable::kCols; ++col) {
            if (cells[row][col]) {
                std::snprintf(buf, sizeof(buf), "%.2f", *cells[row][col]);
                out << ',' << buf;
            } else {
                out << ",-";
            }
        }
        out << '\n';
    }
    return out.str();
}

Payload BinnedWaitReport::to_json() const {
    Payload grid;
    grid["row_bins"] = WaitTable::row_labels();
    grid["col_bins"] = WaitTable::col_labels();
    Payload rows = Payload::array();
    for (int row = 0; row < WaitTable::kRows; ++row) {
        Payload cols = Payload::array();
        for (int col = 0; col < WaitTable::kCols; ++col) {
            Payload cell;
            cell["count"] = counts[row][col];
            if (cells[row][col])
                cell["median_wait_pct"] = *cells[row][col];
            else
                cell["median_wait_pct"] = nullptr;
            cols.push_back(cell);
        }
        rows.push_back(cols);
    }
    grid["cells"] = rows;
    return grid;
}

namespace {

struct MeanAcc {
    std::int64_t run_total = 0;
    std::int64_t tts_total = 0;
    std::int64_t count = 0;
};

std::int64_t mean_round(std::int64_t total, std::int64_t count) {
    return (total + count / 2) / count;
}

}  // namespace

std::vector<ComparisonRow> comparison_report(const std::vector<JobRecord>& records_a,
                                             const std::vector<JobRecord>& records_b) {
    if (records_a.empty() || records_b.empty())
        throw Error("comparison_report: both record sets must be nonempty");
    std::map<std::string, MeanAcc> a, b;
    for (const JobRecord& record : records_a) {
        if (!is_executed(record)) continue;
        MeanAcc& acc = a[record.app];
        acc.run_total += record.run_s;
        acc.tts_total += record.tts_s;
        ++acc.count;
    }
    for (const JobRecord& record : records_b) {
        if (!is_executed(record)) continue;
        MeanAcc& acc = b[record.app];
        acc.run_total += record.run_s;
        acc.tts_total += record.tts_s;
        ++acc.count;
    }
    std::vector<ComparisonRow> rows;
    for (const auto& [app, acc_a] : a) {
        const auto it = b.find(app);
        if (it == b.end() || acc_a.count == 0 || it->second.count == 0) continue;
        const MeanAcc& acc_b = it->second;
        ComparisonRow row;
        row.app = app;
        row.mean_run_a_s = mean_round(acc_a.run_total, acc_a.count);
        row.mean_tts_a_s = mean_round(acc_a.tts_total, acc_a.count);
        row.mean_run_b_s = mean_round(acc_b.run_total, acc_b.count);
        row.mean_tts_b_s = mean_round(acc_b.tts_total, acc_b.count);
        row.run_ratio = (static_cast<double>(acc_b.run_total) / static_cast<double>(acc_b.count)) /
                        (static_cast<double>(acc_a.run_total) / static_cast<double>(acc_a.count));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "app,mean_run_a_s,mean_tts_a_s,mean_run_b_s,mean_tts_b_s,run_ratio\n";
    char buf[32];
    for (const ComparisonRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.2f", row.run_ratio);
        out << row.app << ',' << row.mean_run_a_s << ',' << row.mean_tts_a_s << ',' << row.mean_run_b_s
            << ',' << row.mean_tts_b_s << ',' << buf << '\n';
    }
    return out.str();
}

std::string comparison_table(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-14s %12s %12s %12s %12s %7s\n", "app", "run(a)", "tts(a)",
                  "run(b)", "tts(b)", "ratio");
    out << buf;
    for (const ComparisonRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-14s %12s %12s %12s %12s %7.2f\n", row.app.c_str(),
                      format_hms(row.mean_run_a_s).c_str(), format_hms(row.mean_tts_a_s).c_str(),
                      format_hms(row.mean_run_b_s).c_str(), format_hms(row.mean_tts_b_s).c_str(),
                      row.run_ratio);
        out << buf;
    }
    return out.str();
}

Payload Summary::to_json() const {
    Payload out;
    out["median_tts_s"] = median_tts_s;
    out["mean_wait_s"] = mean_wait_s;
    out["jobs_bursted"] = jobs_bursted;
    out["vm_hours"] = vm_hours;
    out["jobs_executed"] = jobs_executed;
    out["jobs_cancelled_copies"] = jobs_cancelled_copies;
    return out;
}

Summary summarize(std::span<const LogEntry> log) {
    const std::vector<JobRecord> records = collect(log);
    Summary summary;

    std::vector<std::int64_t> tts;
    std::int64_t wait_total = 0;
    for (const JobRecord& record : records) {
        if (is_executed(record)) {
            tts.push_back(record.tts_s);
            wait_total += record.wait_s;
            ++summary.jobs_executed;
            if (record.cluster == "cloud") ++summary.jobs_bursted;
        } else if (record.outcome == "cancelled") {
            ++summary.jobs_cancelled_copies;
        }
    }
    summary.median_tts_s = median_lower(tts);
    summary.mean_wait_s = summary.jobs_executed == 0
                              ? 0.0
                              : static_cast<double>(wait_total) / static_cast<double>(summary.jobs_executed);

    // VM lifetime accounting from the log itself.
    std::map<int, VmTrack> vms;
    SimTime frontier = 0;
    for (const LogEntry& entry : log) {
        frontier = std::max(frontier, entry.t);
        const auto track_up = [&](const Payload& list) {
            for (const auto& item : list) vms[item.at("vm").get<int>()].created = entry.t;
        };
        const auto track_down = [&](const Payload& list) {
            for (const auto& item : list) vms[item.get<int>()].terminated = entry.t;
        };
        if (entry.kind == EventKind::AutoscaleTick) {
            if (entry.payload.contains("up")) track_up(entry.payload.at("up"));
            if (entry.payload.contains("down")) track_down(entry.payload.at("down"));
        } else if (entry.kind == EventKind::JobEnd) {
            if (entry.payload.contains("vm_terminated")) track_down(entry.payload.at("vm_terminated"));
        }
    }
    std::int64_t vm_seconds = 0;
    for (const auto& [id, vm] : vms) vm_seconds += (vm.terminated ? *vm.terminated : frontier) - vm.created;
    summary.vm_hours = static_cast<double>(vm_seconds) / 3600.0;
    return summary;
}

}  // namespace burstsim
