#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "burstsim/app_profile.hpp"
#include "burstsim/cluster_scheduler.hpp"

namespace burstsim {

// Provisioning pipeline: a VM advances through these states in order and
// becomes schedulable only at Ready. Ready<->Busy toggles as jobs start and
// end; Draining and Terminated handle scale-down.
enum class VmState {
    Requested,
    Booting,
    Updating,
    InstallingPackages,
    MountingFilesystems,
    ConfiguringScheduler,
    ConfiguringIdentity,
    Ready,
    Busy,
    Draining,
    Terminated,
};

const char* to_string(VmState state);

// Durations of the six provisioning stages, in pipeline order.
struct StageLatencies {
    std::int64_t boot = 60;
    std::int64_t update = 120;
    std::int64_t packages = 90;
    std::int64_t mounts = 15;
    std::int64_t scheduler = 20;
    std::int64_t identity = 10;

    std::int64_t total() const { return boot + update + packages + mounts + scheduler + identity; }
    std::array<std::pair<const char*, std::int64_t>, 6> stages() const;
};

struct CloudConfig {
    std::string name = "cloud";
    int host_count = 320;
    int vcpus_per_host = 48;
    double oversubscription = 1.0;  // >= 1
    int vm_vcpus = 2;               // homogeneous flavor, 1..44
    StageLatencies stage_latencies;
    int min_vms = 0;
    int max_vms = 8;
    bool master_vm = true;  // persistent orchestration VM, no schedulable capacity
    bool login_vm = true;   // persistent front-end VM, no schedulable capacity
    bool backfill_enabled = true;

    int vcpu_capacity_per_host() const;
    int placement_capacity() const;  // max compute VMs the hosts can hold
    void validate() const;           // throws ConfigError
};

struct VmInstance {
    int id = 0;
    int host_id = 0;
    VmState state = VmState::Requested;
    SimTime stage_entered_at = 0;
    SimTime created_at = 0;
    std::optional<SimTime> terminated_at;
    bool persistent = false;  // master/login VMs
    std::vector<std::uint64_t> stage_event_tokens;
};

// A pending provisioning-stage completion the caller must schedule as a
// VmStageComplete event.
struct StageEvent {
    SimTime at = 0;
    int vm_id = 0;
    std::string stage;
};

struct ScaleDownResult {
    std::vector<int> terminated;  // removed immediately (idle or provisioning)
    std::vector<int> draining;    // busy; terminate when their job ends
    int count() const { return static_cast<int>(terminated.size() + draining.size()); }
};

struct AutoscalerConfig {
    bool enabled = true;
    SimTime interval_s = 300;
    double headroom_factor = 1.0;
    SimTime cooldown_s = 600;
};

// Elastic cloud cluster: physical hosts with vCPU colocation limits, an
// elastic VM pool, and the same batch-queue semantics as the HPC side with
// Ready VMs acting as nodes.
class CloudPool : public ClusterScheduler {
public:
    CloudPool(CloudConfig config, const AppRegistry& apps);

    // Creates n VMs placed first-fit onto hosts. Returns the stage events to
    // schedule. Throws AboveMax / PoolExhausted; scale_up(0) is a no-op.
    std::vector<StageEvent> scale_up(int n, SimTime t, std::vector<int>* created = nullptr);

    // Removes up to n VMs, preferring idle Ready VMs, then VMs still
    // provisioning, then Busy VMs (which drain). Never drops the pool below
    // min_vms. Returns what was done.
    ScaleDownResult scale_down(int n, SimTime t);

    // Applies a provisioning-stage completion. Returns the new state, or
    // nullopt if the VM was terminated while provisioning (stale event).
    std::optional<VmState> advance_stage(int vm_id, SimTime t);

    // Autoscaler step: moves the pool toward
    // clamp(ceil(pending_demand * headroom), min_vms, max_vms). Scale-down is
    // suppressed within cooldown_s of the last scale-up.
    struct TickAction {
        int target = 0;
        std::vector<StageEvent> stage_events;
        std::vector<int> scaled_up;
        ScaleDownResult scaled_down;
    };
    TickAction autoscale_tick(SimTime t, const AutoscalerConfig& autoscaler);

    // Estimated seconds until `job` could start on the cloud: 0 if enough
    // idle Ready VMs exist, else the provisioning latency for the shortfall
    // plus the queue wait over the pool's attainable capacity. nullopt if the
    // job can never fit (nodes > max_vms).
    std::optional<SimTime> estimate_ready_delay(const Job& job, SimTime t) const;

    const CloudConfig& config() const { return config_; }
    const std::vector<VmInstance>& vms() const { return vms_; }
    const VmInstance& vm(int id) const { return vms_.at(static_cast<std::size_t>(id)); }

    // Compute VMs not yet terminated (persistent master/login excluded).
    int vm_count() const;
    int ready_idle_count() const;
    int provisioning_count() const;
    std::vector<int> host_vcpus_used() const { return host_used_; }

    // VMs terminated at job end because they were draining; drained by the
    // simulation right after finish() to enrich the JobEnd record.
    std::vector<int> take_terminated_on_release();

    int max_job_nodes() const override { return config_.max_vms; }

protected:
    int free_nodes() const override;
    std::vector<int> claim_nodes(int n) override;
    void release_nodes(QueueEntry& entry, SimTime t) override;
    int nodes_returned(const QueueEntry& entry) const override;
    std::int64_t resolve_runtime(const Job& job) const override;

private:
    int place_on_host();  // first-fit; returns host id or -1
    void terminate_vm(VmInstance& vm, SimTime t);
    VmInstance& vm_mut(int id) { return vms_.at(static_cast<std::size_t>(id)); }

    CloudConfig config_;
    const AppRegistry& apps_;
    std::vector<VmInstance> vms_;
    std::vector<int> host_used_;       // vCPUs in use per host
    std::vector<int> idle_ready_;      // Ready VMs not running a job, ascending ids
    std::vector<int> terminated_on_release_;
    SimTime last_scale_up_ = -1;
};

}  // namespace burstsim
