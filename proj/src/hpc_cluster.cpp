#include "burstsim/hpc_cluster.hpp"

#include "burstsim/errors.hpp"

namespace burstsim {

int HpcConfig::schedulable_nodes() const {
    if (partitions.empty()) return total_nodes;
    const auto it = partitions.find(default_partition);
    if (it == partitions.end())
        throw ConfigError("hpc config: default partition \"" + default_partition + "\" not defined");
    return it->second;
}

void HpcConfig::validate() const {
    if (total_nodes < 1) throw ConfigError("hpc config: total_nodes must be >= 1");
    if (cores_per_node < 1) throw ConfigError("hpc config: cores_per_node must be >= 1");
    int partition_sum = 0;
    for (const auto& [partition, nodes] : partitions) {
        if (nodes < 1) throw ConfigError("hpc config: partition \"" + partition + "\" must have >= 1 nodes");
        partition_sum += nodes;
    }
    if (partition_sum > total_nodes)
        throw ConfigError("hpc config: partition nodes (" + std::to_string(partition_sum) +
                          ") exceed total_nodes (" + std::to_string(total_nodes) + ")");
    schedulable_nodes();  // checks the default partition exists
}

HpcCluster::HpcCluster(HpcConfig config, const AppRegistry& apps)
    : ClusterScheduler(Target::Hpc, config.backfill_enabled), config_(std::move(config)), apps_(apps) {
    config_.validate();
    capacity_ = config_.schedulable_nodes();
    free_ = capacity_;
}

std::vector<int> HpcCluster::claim_nodes(int n) {
    if (n > free_) throw InvariantViolation("hpc: claiming " + std::to_string(n) + " nodes with " +
                                            std::to_string(free_) + " free");
    free_ -= n;
    return {};  // nodes are anonymous on the HPC side
}

void HpcCluster::release_nodes(QueueEntry& entry, SimTime) {
    free_ += entry.assigned_nodes;
    if (free_ > capacity_) throw InvariantViolation("hpc: node accounting exceeded capacity");
}

std::int64_t HpcCluster::resolve_runtime(const Job& job) const {
    return uncapped_runtime_on(job, Target::Hpc, apps_);
}

}  // namespace burstsim
