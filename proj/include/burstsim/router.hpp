#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "burstsim/cloud_pool.hpp"
#include "burstsim/hpc_cluster.hpp"
#include "burstsim/wait_table.hpp"

namespace burstsim {

enum class PolicyVariant { HintOnly, AlwaysHpc, AlwaysCloud, DualSubmit, WaitThreshold, CostModel };

const char* to_string(PolicyVariant variant);
PolicyVariant policy_variant_from_string(const std::string& name);

struct Policy {
    PolicyVariant variant = PolicyVariant::HintOnly;
    std::int64_t threshold_s = 0;  // WaitThreshold only, > 0

    std::string name() const;
    void validate() const;  // throws ConfigError
};

enum class WaitSource { Table, Live };

// The router's verdict for one job.
struct BurstDecision {
    std::string job_id;
    std::vector<Target> targets;  // non-empty; {Hpc}, {Cloud} or {Hpc, Cloud}
    std::optional<std::int64_t> est_tts_hpc_s;
    std::optional<std::int64_t> est_tts_cloud_s;
    std::string policy_name;
    std::string reason;
};

// Cross-cluster state of one federated job.
struct FederatedJob {
    Job job;
    BurstDecision decision;
    std::map<Target, std::size_t> copies;  // target -> cluster entry id
    std::optional<Target> winner;          // cluster whose copy executes
    SimTime winner_time = 0;
    bool done = false;
    std::string outcome;  // finished | walltime_killed | cancelled | unroutable
};

// Routes jobs to the HPC system, the cloud pool, or both, and tracks every
// copy so that exactly one executes. Equal-time duplicate starts resolve in
// favor of the HPC copy.
class FederationRouter {
public:
    FederationRouter(Policy policy, WaitSource wait_source, WaitTable table, HpcCluster& hpc,
                     CloudPool& cloud, const AppRegistry& apps);

    // Estimated queue wait for `job` on the HPC system.
    SimTime estimate_wait(const Job& job, SimTime t) const;

    // Picks targets for the job. Infeasible targets fall back to the other
    // cluster; throws UnroutableJob when neither cluster can hold the job.
    BurstDecision route(const Job& job, SimTime t) const;

    // Pure time-to-solution comparison used by the CostModel policy.
    static Target cost_choice(std::int64_t est_tts_hpc_s, std::int64_t est_tts_cloud_s) {
        return est_tts_cloud_s < est_tts_hpc_s ? Target::Cloud : Target::Hpc;
    }

    // Registry bookkeeping, driven by the simulation.
    void register_dispatch(const Job& job, BurstDecision decision, std::map<Target, std::size_t> copies);
    void register_unroutable(const Job& job, const std::string& reason);

    // Result of a copy claiming nodes at time t.
    enum class StartVerdict {
        Winner,          // proceed; cancel pending siblings
        LoserRevoke,     // duplicate of an already-running copy: revoke this start
        WinnerDisplaces  // HPC copy ties a cloud copy that started at the same t:
                         // revoke the cloud copy, this one proceeds
    };
    StartVerdict on_copy_start(const std::string& job_id, Target target, SimTime t);

    void on_copy_end(const std::string& job_id, Target target, const std::string& outcome);
    void on_copy_cancelled(const std::string& job_id, Target target);

    const FederatedJob* find(const std::string& job_id) const;
    const std::map<std::string, FederatedJob>& registry() const { return jobs_; }
    const Policy& policy() const { return policy_; }
    const WaitTable& wait_table() const { return table_; }

private:
    bool feasible(const Job& job, Target target) const;

    Policy policy_;
    WaitSource wait_source_;
    WaitTable table_;
    HpcCluster& hpc_;
    CloudPool& cloud_;
    const AppRegistry& apps_;
    std::map<std::string, FederatedJob> jobs_;
};

}  // namespace burstsim
