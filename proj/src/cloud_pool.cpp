#include "burstsim/cloud_pool.hpp"

#include <algorithm>
#include <cmath>

#include "burstsim/errors.hpp"

namespace burstsim {

const char* to_string(VmState state) {
    switch (state) {
        case VmState::Requested: return "requested";
        case VmState::Booting: return "booting";
        case VmState::Updating: return "updating";
        case VmState::InstallingPackages: return "installing_packages";
        case VmState::MountingFilesystems: return "mounting_filesystems";
        case VmState::ConfiguringScheduler: return "configuring_scheduler";
        case VmState::ConfiguringIdentity: return "configuring_identity";
        case VmState::Ready: return "ready";
        case VmState::Busy: return "busy";
        case VmState::Draining: return "draining";
        case VmState::Terminated: return "terminated";
    }
    return "unknown";
}

std::array<std::pair<const char*, std::int64_t>, 6> StageLatencies::stages() const {
    return {{{"boot", boot},
             {"update", update},
             {"packages", packages},
             {"mounts", mounts},
             {"scheduler", scheduler},
             {"identity", identity}}};
}

int CloudConfig::vcpu_capacity_per_host() const {
    return static_cast<int>(std::floor(static_cast<double>(vcpus_per_host) * oversubscription));
}

int CloudConfig::placement_capacity() const {
    return host_count * (vcpu_capacity_per_host() / vm_vcpus);
}

void CloudConfig::validate() const {
    if (host_count < 1) throw ConfigError("cloud config: host_count must be >= 1");
    if (vcpus_per_host < 1) throw ConfigError("cloud config: vcpus_per_host must be >= 1");
    if (oversubscription < 1.0) throw ConfigError("cloud config: oversubscription must be >= 1");
    if (vm_vcpus < 1 || vm_vcpus > 44) throw ConfigError("cloud config: vm_vcpus must be in [1, 44]");
    if (min_vms < 0) throw ConfigError("cloud config: min_vms must be >= 0");
    if (max_vms < min_vms) throw ConfigError("cloud config: max_vms must be >= min_vms");
    if (max_vms > placement_capacity())
        throw ConfigError("cloud config: max_vms (" + std::to_string(max_vms) +
                          ") exceeds host placement capacity (" + std::to_string(placement_capacity()) + ")");
    for (const auto& [stage, latency] : stage_latencies.stages()) {
        if (latency < 0) throw ConfigError(std::string("cloud config: stage latency ") + stage + " must be >= 0");
    }
}

CloudPool::CloudPool(CloudConfig config, const AppRegistry& apps)
    : ClusterScheduler(Target::Cloud, config.backfill_enabled), config_(std::move(config)), apps_(apps) {
    config_.validate();
    host_used_.assign(static_cast<std::size_t>(config_.host_count), 0);
    // Persistent orchestration and front-end VMs occupy host capacity but
    // never run jobs and are not part of the elastic pool.
    for (bool wanted : {config_.master_vm, config_.login_vm}) {
        if (!wanted) continue;
        const int host = place_on_host();
        if (host < 0) throw PoolExhausted("cloud: no host capacity for persistent VMs");
        VmInstance vm;
        vm.id = static_cast<int>(vms_.size());
        vm.host_id = host;
        vm.state = VmState::Ready;
        vm.persistent = true;
        vms_.push_back(vm);
    }
}

int CloudPool::place_on_host() {
    const int cap = config_.vcpu_capacity_per_host();
    for (int host = 0; host < config_.host_count; ++host) {
        if (host_used_[static_cast<std::size_t>(host)] + config_.vm_vcpus <= cap) {
            host_used_[static_cast<std::size_t>(host)] += config_.vm_vcpus;
            return host;
        }
    }
    return -1;
}

int CloudPool::vm_count() const {
    int count = 0;
    for (const VmInstance& vm : vms_)
        if (!vm.persistent && vm.state != VmState::Terminated) ++count;
    return count;
}

int CloudPool::ready_idle_count() const { return static_cast<int>(idle_ready_.size()); }

int CloudPool::provisioning_count() const {
    int count = 0;
    for (const VmInstance& vm : vms_)
        if (!vm.persistent && vm.state >= VmState::Requested && vm.state < VmState::Ready &&
            vm.state != VmState::Terminated)
            ++count;
    return count;
}

std::vector<StageEvent> CloudPool::scale_up(int n, SimTime t, std::vector<int>* created) {
    if (n <= 0) return {};
    if (vm_count() + n > config_.max_vms)
        throw AboveMax("cloud: scale_up(" + std::to_string(n) + ") would exceed max_vms=" +
                       std::to_string(config_.max_vms));
    // Placement is atomic: check feasibility before committing.
    {
        std::vector<int> used = host_used_;
        const int cap = config_.vcpu_capacity_per_host();
        int placed = 0;
        for (int host = 0; host < config_.host_count && placed < n; ++host) {
            while (used[static_cast<std::size_t>(host)] + config_.vm_vcpus <= cap && placed < n) {
                used[static_cast<std::size_t>(host)] += config_.vm_vcpus;
                ++placed;
            }
        }
        if (placed < n) throw PoolExhausted("cloud: host capacity cannot place " + std::to_string(n) + " VMs");
    }
    std::vector<StageEvent> events;
    for (int i = 0; i < n; ++i) {
        VmInstance vm;
        vm.id = static_cast<int>(vms_.size());
        vm.host_id = place_on_host();
        // Requested is instantaneous: the request is granted within this
        // call and the VM starts booting at t. Each stage event marks the
        // completion of one pipeline stage; the last one yields Ready at
        // t + sum(stage latencies).
        vm.state = VmState::Booting;
        vm.stage_entered_at = t;
        vm.created_at = t;
        SimTime at = t;
        for (const auto& [stage, latency] : config_.stage_latencies.stages()) {
            at += latency;
            events.push_back(StageEvent{at, vm.id, stage});
        }
        if (created) created->push_back(vm.id);
        vms_.push_back(std::move(vm));
    }
    last_scale_up_ = t;
    return events;
}

std::optional<VmState> CloudPool::advance_stage(int vm_id, SimTime t) {
    VmInstance& vm = vm_mut(vm_id);
    if (vm.state == VmState::Terminated) return std::nullopt;
    switch (vm.state) {
        case VmState::Booting: vm.state = VmState::Updating; break;
        case VmState::Updating: vm.state = VmState::InstallingPackages; break;
        case VmState::InstallingPackages: vm.state = VmState::MountingFilesystems; break;
        case VmState::MountingFilesystems: vm.state = VmState::ConfiguringScheduler; break;
        case VmState::ConfiguringScheduler: vm.state = VmState::ConfiguringIdentity; break;
        case VmState::ConfiguringIdentity:
            vm.state = VmState::Ready;
            idle_ready_.push_back(vm_id);
            std::sort(idle_ready_.begin(), idle_ready_.end());
            break;
        default:
            throw IllegalTransition("vm " + std::to_string(vm_id) + ": stage event in state " +
                                    to_string(vm.state));
    }
    vm.stage_entered_at = t;
    return vm.state;
}

void CloudPool::terminate_vm(VmInstance& vm, SimTime t) {
    vm.state = VmState::Terminated;
    vm.terminated_at = t;
    host_used_[static_cast<std::size_t>(vm.host_id)] -= config_.vm_vcpus;
    if (host_used_[static_cast<std::size_t>(vm.host_id)] < 0)
        throw InvariantViolation("cloud: negative host vCPU accounting");
}

ScaleDownResult CloudPool::scale_down(int n, SimTime t) {
    ScaleDownResult result;
    if (n <= 0) return result;
    const int removable = vm_count() - config_.min_vms;
    n = std::min(n, std::max(0, removable));

    // Idle Ready VMs first, newest id first.
    while (n > 0 && !idle_ready_.empty()) {
        const int id = idle_ready_.back();
        idle_ready_.pop_back();
        terminate_vm(vm_mut(id), t);
        result.terminated.push_back(id);
        --n;
    }
    // Then VMs still in the provisioning pipeline, newest first.
    for (auto it = vms_.rbegin(); n > 0 && it != vms_.rend(); ++it) {
        if (it->persistent || it->state == VmState::Terminated) continue;
        if (it->state >= VmState::Requested && it->state < VmState::Ready) {
            terminate_vm(*it, t);
            result.terminated.push_back(it->id);
            --n;
        }
    }
    // Finally Busy VMs drain: they finish their job, then terminate.
    for (auto it = vms_.rbegin(); n > 0 && it != vms_.rend(); ++it) {
        if (it->persistent) continue;
        if (it->state == VmState::Busy) {
            it->state = VmState::Draining;
            it->stage_entered_at = t;
            result.draining.push_back(it->id);
            --n;
        }
    }
    return result;
}

CloudPool::TickAction CloudPool::autoscale_tick(SimTime t, const AutoscalerConfig& autoscaler) {
    TickAction action;
    const int demand = pending_node_demand();
    const int raw_target =
        static_cast<int>(std::ceil(static_cast<double>(demand) * autoscaler.headroom_factor));
    action.target = std::clamp(raw_target, config_.min_vms, config_.max_vms);

    // Supply that is or will become schedulable without new requests.
    const int incoming = ready_idle_count() + provisioning_count();
    if (incoming < action.target) {
        action.stage_events = scale_up(action.target - incoming, t, &action.scaled_up);
    } else if (incoming > action.target) {
        const bool in_cooldown = last_scale_up_ >= 0 && t - last_scale_up_ < autoscaler.cooldown_s;
        if (!in_cooldown) action.scaled_down = scale_down(incoming - action.target, t);
    }
    return action;
}

std::optional<SimTime> CloudPool::estimate_ready_delay(const Job& job, SimTime t) const {
    if (job.nodes > config_.max_vms) return std::nullopt;
    if (ready_idle_count() >= job.nodes && pending_node_demand() == 0) return 0;
    SimTime delay = config_.stage_latencies.total();
    // Queue wait over the capacity the pool can attain for this queue.
    int needed = job.nodes;
    for (std::size_t id : pending_entries()) needed = std::max(needed, entry(id).job.nodes);
    const int attainable = std::clamp(std::max(vm_count(), needed), config_.min_vms, config_.max_vms);
    std::vector<PendingReq> reqs;
    for (std::size_t id : pending_entries()) {
        const Job& pending_job = entry(id).job;
        reqs.push_back(PendingReq{pending_job.nodes, pending_job.req_walltime_s});
    }
    reqs.push_back(PendingReq{job.nodes, job.req_walltime_s});
    std::vector<RunningBound> running;
    int busy = 0;
    for (std::size_t id : running_entries()) {
        const QueueEntry& run = entry(id);
        busy += run.assigned_nodes;
        const int back = nodes_returned(run);
        if (back > 0) running.push_back(RunningBound{back, run.walltime_end()});
    }
    const int free = std::max(0, attainable - busy);
    delay += project_start(free, std::move(running), std::move(reqs), backfill_, t) - t;
    return delay;
}

int CloudPool::free_nodes() const { return ready_idle_count(); }

std::vector<int> CloudPool::claim_nodes(int n) {
    if (n > static_cast<int>(idle_ready_.size()))
        throw InvariantViolation("cloud: claiming " + std::to_string(n) + " VMs with " +
                                 std::to_string(idle_ready_.size()) + " idle");
    std::vector<int> claimed(idle_ready_.begin(), idle_ready_.begin() + n);
    idle_ready_.erase(idle_ready_.begin(), idle_ready_.begin() + n);
    for (int id : claimed) vm_mut(id).state = VmState::Busy;
    return claimed;
}

void CloudPool::release_nodes(QueueEntry& entry, SimTime t) {
    for (int id : entry.vm_ids) {
        VmInstance& vm = vm_mut(id);
        if (vm.state == VmState::Draining) {
            terminate_vm(vm, t);
            terminated_on_release_.push_back(id);
        } else if (vm.state == VmState::Busy) {
            vm.state = VmState::Ready;
            vm.stage_entered_at = t;
            idle_ready_.push_back(id);
        } else {
            throw InvariantViolation("cloud: released VM " + std::to_string(id) + " in state " +
                                     to_string(vm.state));
        }
    }
    std::sort(idle_ready_.begin(), idle_ready_.end());
}

int CloudPool::nodes_returned(const QueueEntry& entry) const {
    int back = 0;
    for (int id : entry.vm_ids)
        if (vm(id).state != VmState::Draining) ++back;
    return back;
}

std::int64_t CloudPool::resolve_runtime(const Job& job) const {
    return uncapped_runtime_on(job, Target::Cloud, apps_);
}

std::vector<int> CloudPool::take_terminated_on_release() {
    std::vector<int> out;
    out.swap(terminated_on_release_);
    return out;
}

}  // namespace burstsim
