#include "burstsim/scheduler_core.hpp"

#include <algorithm>
#include <numeric>

#include "burstsim/errors.hpp"

namespace burstsim {

std::vector<std::size_t> plan_starts(int free_nodes,
                                     std::vector<RunningBound> running,
                                     const std::vector<PendingReq>& pending,
                                     bool backfill,
                                     SimTime now) {
    std::vector<std::size_t> started;
    std::size_t head = 0;

    // FCFS phase.
    while (head < pending.size() && pending[head].nodes <= free_nodes) {
        free_nodes -= pending[head].nodes;
        running.push_back(RunningBound{pending[head].nodes, now + pending[head].walltime_s});
        started.push_back(head);
        ++head;
    }
    if (!backfill || head >= pending.size()) return started;

    // Reservation for the blocked head: walk running jobs by walltime
    // expiration until enough nodes accumulate. `extra` is what remains free
    // at the reservation time beyond the head's need.
    std::sort(running.begin(), running.end(), [](const RunningBound& a, const RunningBound& b) {
        if (a.free_at != b.free_at) return a.free_at < b.free_at;
        return a.nodes < b.nodes;
    });
    SimTime shadow = kNever;
    int extra = 0;
    {
        int avail = free_nodes;
        std::size_t i = 0;
        for (; i < running.size(); ++i) {
            avail += running[i].nodes;
            if (avail >= pending[head].nodes) {
                shadow = running[i].free_at;
                break;
            }
        }
        if (shadow != kNever) {
            // Include every job expiring exactly at the reservation time.
            for (std::size_t j = i + 1; j < running.size() && running[j].free_at == shadow; ++j)
                avail += running[j].nodes;
            extra = avail - pending[head].nodes;
        }
        // If the head can never fit on current capacity there is nothing to
        // protect; later jobs may start whenever they fit.
    }

    for (std::size_t j = head + 1; j < pending.size(); ++j) {
        const PendingReq& cand = pending[j];
        if (cand.nodes > free_nodes) continue;
        const bool ends_by_reservation = shadow == kNever || now + cand.walltime_s <= shadow;
        if (!ends_by_reservation && cand.nodes > extra) continue;
        free_nodes -= cand.nodes;
        if (!ends_by_reservation) extra -= cand.nodes;
        started.push_back(j);
    }
    return started;
}

SimTime project_start(int free_nodes,
                      std::vector<RunningBound> running,
                      std::vector<PendingReq> pending,
                      bool backfill,
                      SimTime now) {
    if (pending.empty()) return now;
    const int probe_nodes = pending.back().nodes;
    {
        int attainable = free_nodes;
        for (const RunningBound& r : running) attainable += r.nodes;
        if (probe_nodes > attainable)
            throw JobTooLarge("job needs " + std::to_string(probe_nodes) + " nodes, cluster supplies " +
                              std::to_string(attainable));
    }

    // The probe is identified positionally; track it as entries start.
    std::size_t probe = pending.size() - 1;
    while (true) {
        const std::vector<std::size_t> starts = plan_starts(free_nodes, running, pending, backfill, now);
        for (std::size_t idx : starts) {
            if (idx == probe) return now;
        }
        // Apply the starts: move them from pending to running.
        std::vector<PendingReq> remaining;
        remaining.reserve(pending.size());
        std::size_t next_start = 0;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (next_start < starts.size() && starts[next_start] == i) {
                // plan_starts returns FCFS starts in order, then backfills in
                // order; re-scan keeps this branch correct either way.
                ++next_start;
                free_nodes -= pending[i].nodes;
                running.push_back(RunningBound{pending[i].nodes, now + pending[i].walltime_s});
                continue;
            }
            if (i == probe) probe = remaining.size();
            remaining.push_back(pending[i]);
        }
        pending = std::move(remaining);

        // Advance to the next walltime expiration.
        SimTime next = kNever;
        for (const RunningBound& r : running) next = std::min(next, r.free_at);
        if (next == kNever)
            throw JobTooLarge("queue cannot progress on current capacity");
        now = next;
        std::vector<RunningBound> still_running;
        for (const RunningBound& r : running) {
            if (r.free_at <= now)
                free_nodes += r.nodes;
            else
                still_running.push_back(r);
        }
        running = std::move(still_running);
    }
}

}  // namespace burstsim
