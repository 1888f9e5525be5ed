#pragma once

#include <cstdint>
#include <vector>

#include "burstsim/time.hpp"

namespace burstsim {

// A running job's contribution to future capacity: `nodes` come back no
// later than `free_at` (its walltime expiration). Draining cloud VMs are
// excluded by the caller since they never come back.
struct RunningBound {
    int nodes = 0;
    SimTime free_at = 0;
};

// A pending job as the scheduler sees it: node count and requested walltime.
struct PendingReq {
    int nodes = 0;
    std::int64_t walltime_s = 0;
};

// One scheduling pass at time `now` over a FIFO pending queue.
//
// FCFS phase: pending jobs start in queue order while free nodes suffice;
// the first job that does not fit blocks the queue. EASY phase (if
// `backfill`): a reservation is computed for the blocked head from the
// walltime expirations of running jobs, and any later job may start now iff
// it fits in free nodes and either finishes by the reservation time or uses
// only nodes the head does not need then.
//
// Returns indices into `pending` that start at `now`, in start order.
std::vector<std::size_t> plan_starts(int free_nodes,
                                     std::vector<RunningBound> running,
                                     const std::vector<PendingReq>& pending,
                                     bool backfill,
                                     SimTime now);

// Start time the last element of `pending` (the probe) would get if the
// queue were run forward from `now` under walltime bounds, with no further
// arrivals. Throws JobTooLarge if the probe can never fit.
SimTime project_start(int free_nodes,
                      std::vector<RunningBound> running,
                      std::vector<PendingReq> pending,
                      bool backfill,
                      SimTime now);

}  // namespace burstsim
