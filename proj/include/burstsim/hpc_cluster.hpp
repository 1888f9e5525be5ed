#pragma once

#include <map>
#include <string>

#include "burstsim/app_profile.hpp"
#include "burstsim/cluster_scheduler.hpp"

namespace burstsim {

// Fixed-capacity batch system. Jobs target one partition (the default one);
// other partitions are capacity bookkeeping only.
struct HpcConfig {
    std::string name = "hpc";
    int total_nodes = 5936;
    int cores_per_node = 48;
    std::map<std::string, int> partitions = {{"knl", 4200}, {"skx", 1736}};
    std::string default_partition = "skx";
    bool backfill_enabled = true;

    // Nodes in the partition jobs are scheduled on.
    int schedulable_nodes() const;
    void validate() const;  // throws ConfigError
};

class HpcCluster : public ClusterScheduler {
public:
    HpcCluster(HpcConfig config, const AppRegistry& apps);

    const HpcConfig& config() const { return config_; }
    int free_count() const { return free_nodes(); }
    int max_job_nodes() const override { return capacity_; }

protected:
    int free_nodes() const override { return free_; }
    std::vector<int> claim_nodes(int n) override;
    void release_nodes(QueueEntry& entry, SimTime t) override;
    std::int64_t resolve_runtime(const Job& job) const override;

private:
    HpcConfig config_;
    const AppRegistry& apps_;
    int capacity_ = 0;
    int free_ = 0;
};

}  // namespace burstsim
