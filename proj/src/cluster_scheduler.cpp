#include "burstsim/cluster_scheduler.hpp"

#include <algorithm>

#include "burstsim/errors.hpp"

namespace burstsim {

const char* to_string(QueueState state) {
    switch (state) {
        case QueueState::Pending: return "pending";
        case QueueState::Running: return "running";
        case QueueState::Finished: return "finished";
        case QueueState::Cancelled: return "cancelled";
        case QueueState::WalltimeKilled: return "walltime_killed";
    }
    return "unknown";
}

std::size_t ClusterScheduler::submit(const Job& job, SimTime t) {
    if (job.nodes > max_job_nodes())
        throw JobTooLarge("job \"" + job.id + "\" needs " + std::to_string(job.nodes) + " nodes, " +
                          to_string(target_) + " capacity is " + std::to_string(max_job_nodes()));
    if (by_job_id_.count(job.id) > 0)
        throw DuplicateId("job \"" + job.id + "\" already submitted to " + to_string(target_));
    QueueEntry entry;
    entry.job = job;
    entry.enqueue_time = t;
    const std::int64_t uncapped = resolve_runtime(job);
    entry.run_s = std::min(uncapped, job.req_walltime_s);
    entry.killed_at_walltime = uncapped > job.req_walltime_s;
    const std::size_t id = entries_.size();
    entries_.push_back(std::move(entry));
    pending_.push_back(id);
    by_job_id_[job.id] = id;
    return id;
}

std::vector<RunningBound> ClusterScheduler::running_bounds() const {
    std::vector<RunningBound> bounds;
    bounds.reserve(running_.size());
    for (std::size_t id : running_) {
        const QueueEntry& entry = entries_[id];
        const int back = nodes_returned(entry);
        if (back > 0) bounds.push_back(RunningBound{back, entry.walltime_end()});
    }
    return bounds;
}

std::vector<std::size_t> ClusterScheduler::try_schedule(SimTime t) {
    if (pending_.empty()) return {};
    std::vector<PendingReq> reqs;
    reqs.reserve(pending_.size());
    for (std::size_t id : pending_) {
        const Job& job = entries_[id].job;
        reqs.push_back(PendingReq{job.nodes, job.req_walltime_s});
    }
    const std::vector<std::size_t> picks = plan_starts(free_nodes(), running_bounds(), reqs, backfill_, t);
    std::vector<std::size_t> started;
    started.reserve(picks.size());
    for (std::size_t pick : picks) started.push_back(pending_[pick]);
    for (std::size_t id : started) start_entry(id, t);
    return started;
}

void ClusterScheduler::start_entry(std::size_t id, SimTime t) {
    QueueEntry& entry = entries_[id];
    entry.state = QueueState::Running;
    entry.start_time = t;
    entry.assigned_nodes = entry.job.nodes;
    entry.vm_ids = claim_nodes(entry.job.nodes);
    pending_.erase(std::find(pending_.begin(), pending_.end(), id));
    running_.push_back(id);
}

void ClusterScheduler::finish(std::size_t entry_id, SimTime t) {
    QueueEntry& entry = entries_.at(entry_id);
    if (entry.state != QueueState::Running)
        throw IllegalTransition("finish on entry in state " + std::string(to_string(entry.state)));
    if (t != *entry.start_time + entry.run_s)
        throw IllegalTransition("finish at t=" + std::to_string(t) + ", expected " +
                                std::to_string(*entry.start_time + entry.run_s));
    entry.state = entry.killed_at_walltime ? QueueState::WalltimeKilled : QueueState::Finished;
    entry.end_time = t;
    running_.erase(std::find(running_.begin(), running_.end(), entry_id));
    release_nodes(entry, t);
}

bool ClusterScheduler::cancel(const std::string& job_id, SimTime t) {
    const auto it = by_job_id_.find(job_id);
    if (it == by_job_id_.end()) return false;
    QueueEntry& entry = entries_[it->second];
    if (entry.state != QueueState::Pending) return false;
    entry.state = QueueState::Cancelled;
    entry.end_time = t;
    pending_.erase(std::find(pending_.begin(), pending_.end(), it->second));
    return true;
}

void ClusterScheduler::revoke_start(std::size_t entry_id) {
    QueueEntry& entry = entries_.at(entry_id);
    if (entry.state != QueueState::Running)
        throw IllegalTransition("revoke_start on entry in state " + std::string(to_string(entry.state)));
    running_.erase(std::find(running_.begin(), running_.end(), entry_id));
    release_nodes(entry, *entry.start_time);
    entry.state = QueueState::Cancelled;
    entry.end_time = entry.start_time;
    entry.assigned_nodes = 0;
    entry.vm_ids.clear();
}

SimTime ClusterScheduler::estimate_start(const Job& job, SimTime t) const {
    if (job.nodes > max_job_nodes())
        throw JobTooLarge("job \"" + job.id + "\" needs " + std::to_string(job.nodes) + " nodes, " +
                          to_string(target_) + " capacity is " + std::to_string(max_job_nodes()));
    std::vector<PendingReq> reqs;
    reqs.reserve(pending_.size() + 1);
    for (std::size_t id : pending_) {
        const Job& pending_job = entries_[id].job;
        reqs.push_back(PendingReq{pending_job.nodes, pending_job.req_walltime_s});
    }
    reqs.push_back(PendingReq{job.nodes, job.req_walltime_s});
    return project_start(free_nodes(), running_bounds(), std::move(reqs), backfill_, t);
}

std::optional<std::size_t> ClusterScheduler::find(const std::string& job_id) const {
    const auto it = by_job_id_.find(job_id);
    if (it == by_job_id_.end()) return std::nullopt;
    return it->second;
}

int ClusterScheduler::pending_node_demand() const {
    int demand = 0;
    for (std::size_t id : pending_) demand += entries_[id].job.nodes;
    return demand;
}

int ClusterScheduler::used_nodes() const {
    int used = 0;
    for (std::size_t id : running_) used += entries_[id].assigned_nodes;
    return used;
}

}  // namespace burstsim
