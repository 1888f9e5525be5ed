#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "burstsim/job.hpp"
#include "burstsim/scheduler_core.hpp"
#include "burstsim/time.hpp"

namespace burstsim {

enum class QueueState { Pending, Running, Finished, Cancelled, WalltimeKilled };

const char* to_string(QueueState state);

struct QueueEntry {
    Job job;
    SimTime enqueue_time = 0;
    QueueState state = QueueState::Pending;
    std::optional<SimTime> start_time;
    std::optional<SimTime> end_time;
    int assigned_nodes = 0;
    std::vector<int> vm_ids;       // cloud only; one VM per node
    std::int64_t run_s = 0;        // actual duration once started (walltime-capped)
    bool killed_at_walltime = false;

    SimTime walltime_end() const { return *start_time + job.req_walltime_s; }
};

// FCFS + EASY-backfill batch queue over an abstract node supply. The HPC
// cluster supplies a fixed partition; the cloud pool supplies its Ready VMs.
// Allocation is node-granular: a job occupies whole nodes (or whole VMs).
class ClusterScheduler {
public:
    virtual ~ClusterScheduler() = default;

    // Appends the job to the pending queue. Throws JobTooLarge if it can
    // never fit the target partition/pool.
    std::size_t submit(const Job& job, SimTime t);

    // Runs one scheduling pass; returns the entries started at t.
    std::vector<std::size_t> try_schedule(SimTime t);

    // Completes a running entry at t == start + run_s, freeing its nodes and
    // setting Finished or WalltimeKilled. Callers re-run try_schedule.
    void finish(std::size_t entry_id, SimTime t);

    // Cancels a pending entry. Running jobs are not preempted; returns false
    // for them and for unknown ids.
    bool cancel(const std::string& job_id, SimTime t);

    // Reverts a start that must not take effect (federated duplicate that
    // lost the tie-break): frees nodes, marks the entry Cancelled.
    void revoke_start(std::size_t entry_id);

    // Start time the scheduler would assign `job` if submitted at t, found by
    // running the current queue forward under walltime bounds. Does not
    // mutate state. Throws JobTooLarge.
    SimTime estimate_start(const Job& job, SimTime t) const;

    bool backfill_enabled() const { return backfill_; }
    const QueueEntry& entry(std::size_t id) const { return entries_.at(id); }
    std::size_t entry_count() const { return entries_.size(); }
    std::optional<std::size_t> find(const std::string& job_id) const;
    std::vector<std::size_t> pending_entries() const { return {pending_.begin(), pending_.end()}; }
    const std::vector<std::size_t>& running_entries() const { return running_; }
    int pending_node_demand() const;
    int used_nodes() const;

    // Largest job this cluster could ever run (capacity bound for submit).
    virtual int max_job_nodes() const = 0;

protected:
    explicit ClusterScheduler(Target target, bool backfill) : target_(target), backfill_(backfill) {}

    virtual int free_nodes() const = 0;
    // Reserves n nodes for a starting entry; returns VM ids on the cloud.
    virtual std::vector<int> claim_nodes(int n) = 0;
    // Returns an entry's nodes to the supply (job completed or revoked).
    virtual void release_nodes(QueueEntry& entry, SimTime t) = 0;
    // Nodes a running entry returns at its walltime expiration (cloud
    // excludes draining VMs).
    virtual int nodes_returned(const QueueEntry& entry) const { return entry.assigned_nodes; }
    // Actual duration of the job on this cluster, before the walltime cap.
    virtual std::int64_t resolve_runtime(const Job& job) const = 0;

    Target target_;
    bool backfill_ = true;

private:
    void start_entry(std::size_t id, SimTime t);
    std::vector<RunningBound> running_bounds() const;

    std::vector<QueueEntry> entries_;
    std::deque<std::size_t> pending_;
    std::vector<std::size_t> running_;
    std::map<std::string, std::size_t> by_job_id_;
};

}  // namespace burstsim
