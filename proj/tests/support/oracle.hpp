#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

#include "burstsim/time.hpp"

// Brute-force strict-FCFS reference scheduler, independent of the production
// planning code: walks time step by step through submit and completion
// instants, starting queued jobs in submission order while the head fits.
namespace oracle {

struct OracleJob {
    burstsim::SimTime submit = 0;
    int nodes = 1;
    std::int64_t walltime_s = 1;
    std::int64_t run_s = 1;  // actual duration, <= walltime_s
};

struct Running {
    burstsim::SimTime end = 0;
    int nodes = 0;
};

// Returns each job's start time, indexed like `jobs`.
inline std::vector<burstsim::SimTime> fcfs_schedule(int total_nodes, const std::vector<OracleJob>& jobs) {
    std::vector<std::size_t> order(jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return jobs[a].submit < jobs[b].submit; });

    std::vector<burstsim::SimTime> starts(jobs.size(), -1);
    std::deque<std::size_t> queue;
    std::vector<Running> running;
    int free = total_nodes;
    std::size_t next_arrival = 0;
    burstsim::SimTime now = 0;

    const auto start_fitting = [&](burstsim::SimTime t) {
        while (!queue.empty() && jobs[queue.front()].nodes <= free) {
            const std::size_t j = queue.front();
            queue.pop_front();
            starts[j] = t;
            free -= jobs[j].nodes;
            running.push_back(Running{t + jobs[j].run_s, jobs[j].nodes});
        }
    };

    while (next_arrival < order.size() || !queue.empty() || !running.empty()) {
        burstsim::SimTime next = burstsim::kNever;
        if (next_arrival < order.size()) next = jobs[order[next_arrival]].submit;
        for (const Running& r : running) next = std::min(next, r.end);
        if (next == burstsim::kNever) break;  // stuck queue (job larger than cluster)
        now = next;
        // Completions first, then arrivals, then starts.
        for (std::size_t i = running.size(); i-- > 0;) {
            if (running[i].end == now) {
                free += running[i].nodes;
                running.erase(running.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
        while (next_arrival < order.size() && jobs[order[next_arrival]].submit == now)
            queue.push_back(order[next_arrival++]);
        start_fitting(now);
    }
    return starts;
}

}  // namespace oracle
