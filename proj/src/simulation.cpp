#include "burstsim/simulation.hpp"

#include <algorithm>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

Payload job_payload(const Job& job) {
    Payload payload;
    payload["id"] = job.id;
    payload["user"] = job.user;
    payload["app"] = job.app;
    payload["nodes"] = job.nodes;
    payload["tasks_per_node"] = job.tasks_per_node;
    payload["req_walltime_s"] = job.req_walltime_s;
    payload["base_runtime_s"] = job.base_runtime_s;
    return payload;
}

Job job_from_payload(const Payload& payload) {
    Job job;
    job.id = payload.at("id").get<std::string>();
    job.user = payload.value("user", std::string("anon"));
    job.app = payload.at("app").get<std::string>();
    job.nodes = payload.at("nodes").get<int>();
    job.tasks_per_node = payload.value("tasks_per_node", 1);
    job.req_walltime_s = payload.at("req_walltime_s").get<std::int64_t>();
    job.base_runtime_s = payload.at("base_runtime_s").get<std::int64_t>();
    const std::string hint = payload.value("cluster_hint", std::string("auto"));
    job.cluster_hint = hint == "hpc" ? ClusterHint::Hpc : hint == "cloud" ? ClusterHint::Cloud : ClusterHint::Auto;
    return job;
}

Target target_from_string(const std::string& name) {
    if (name == "hpc") return Target::Hpc;
    if (name == "cloud") return Target::Cloud;
    throw CorruptLog("unknown cluster \"" + name + "\"");
}

}  // namespace

Simulation::Simulation(const Scenario& scenario, Trace trace)
    : scenario_(scenario), apps_(scenario.app_registry()), trace_(std::move(trace)) {
    hpc_ = std::make_unique<HpcCluster>(scenario_.hpc, apps_);
    cloud_ = std::make_unique<CloudPool>(scenario_.cloud, apps_);
    router_ = std::make_unique<FederationRouter>(scenario_.policy, scenario_.wait_source,
                                                 scenario_.wait_table(), *hpc_, *cloud_, apps_);
    engine_.set_handler([this](SimEvent& event) { on_event(event); });
}

ClusterScheduler& Simulation::cluster(Target target) {
    if (target == Target::Hpc) return *hpc_;
    return *cloud_;
}

void Simulation::setup() {
    if (setup_done_) return;
    setup_done_ = true;
    // Initial provisioning to the pool floor happens through a bootstrap
    // tick so VM creation is visible in the log.
    if (scenario_.cloud.min_vms > 0) {
        Payload payload;
        payload["action"] = "bootstrap";
        engine_.schedule(0, EventKind::AutoscaleTick, std::move(payload));
    }
    if (scenario_.autoscaler.enabled && scenario_.autoscaler.interval_s > 0 &&
        scenario_.autoscaler.interval_s <= scenario_.horizon_s) {
        Payload payload;
        payload["action"] = "tick";
        engine_.schedule(scenario_.autoscaler.interval_s, EventKind::AutoscaleTick, std::move(payload));
    }
    for (const Job& job : trace_.jobs) {
        if (job.submit_time > scenario_.horizon_s) continue;
        Payload payload = job_payload(job);
        if (job.cluster_hint != ClusterHint::Auto)
            payload["cluster_hint"] = job.cluster_hint == ClusterHint::Hpc ? "hpc" : "cloud";
        engine_.schedule(job.submit_time, EventKind::JobArrival, std::move(payload));
    }
}

const EventLog& Simulation::run() {
    setup();
    return engine_.run_until(scenario_.horizon_s);
}

void Simulation::advance_to(SimTime t) {
    setup();
    engine_.run_until(std::min(t, scenario_.horizon_s));
}

void Simulation::submit_job(const Job& job, SimTime t) {
    setup();
    Payload payload = job_payload(job);
    if (job.cluster_hint != ClusterHint::Auto)
        payload["cluster_hint"] = job.cluster_hint == ClusterHint::Hpc ? "hpc" : "cloud";
    engine_.schedule(t, EventKind::JobArrival, std::move(payload));
}

bool Simulation::cancel_job(const std::string& job_id, SimTime t) {
    const FederatedJob* record = router_->find(job_id);
    if (record == nullptr) return false;
    if (record->done) return record->outcome == "cancelled";
    bool still_runs = false;
    for (const auto& [target, entry_id] : record->copies) {
        const QueueState state = cluster(target).entry(entry_id).state;
        if (state == QueueState::Pending) {
            Payload payload;
            payload["id"] = job_id;
            payload["cluster"] = to_string(target);
            payload["origin"] = "api";
            engine_.schedule(t, EventKind::CancelRequest, std::move(payload));
        } else if (state == QueueState::Running) {
            still_runs = true;  // no preemption
        }
    }
    return !still_runs;
}

void Simulation::on_event(SimEvent& event) {
    switch (event.kind) {
        case EventKind::JobArrival: handle_arrival(event); break;
        case EventKind::JobStart: handle_job_start(event); break;
        case EventKind::JobEnd: handle_job_end(event); break;
        case EventKind::VmStageComplete: handle_vm_stage(event); break;
        case EventKind::AutoscaleTick: handle_autoscale_tick(event); break;
        case EventKind::CancelRequest: handle_cancel_request(event); break;
    }
    if (inspector) inspector(event);
}

void Simulation::handle_arrival(SimEvent& event) {
    const Job job = job_from_payload(event.payload);
    BurstDecision decision;
    try {
        decision = router_->route(job, event.time);
    } catch (const UnroutableJob& e) {
        router_->register_unroutable(job, e.what());
        event.payload["targets"] = Payload::array();
        event.payload["unroutable"] = true;
        event.payload["reason"] = e.what();
        return;
    }
    Payload targets = Payload::array();
    std::map<Target, std::size_t> copies;
    for (Target target : decision.targets) {
        copies[target] = cluster(target).submit(job, event.time);
        targets.push_back(to_string(target));
    }
    event.payload["targets"] = std::move(targets);
    event.payload["policy"] = decision.policy_name;
    event.payload["reason"] = decision.reason;
    if (decision.est_tts_hpc_s) event.payload["est_tts_hpc_s"] = *decision.est_tts_hpc_s;
    if (decision.est_tts_cloud_s) event.payload["est_tts_cloud_s"] = *decision.est_tts_cloud_s;
    router_->register_dispatch(job, decision, std::move(copies));
    pump(event.time);
}

// JobStart events only mark the claim in the queue order of the log; the
// state change happened synchronously in apply_start.
void Simulation::handle_job_start(SimEvent&) {}

void Simulation::apply_start(Target target, std::size_t entry_id, SimTime t) {
    ClusterScheduler& owner = cluster(target);
    const QueueEntry& entry = owner.entry(entry_id);
    const std::string& job_id = entry.job.id;
    const FederationRouter::StartVerdict verdict = router_->on_copy_start(job_id, target, t);

    if (verdict == FederationRouter::StartVerdict::LoserRevoke) {
        // A sibling copy already executes; undo this start before any
        // execution effects.
        owner.revoke_start(entry_id);
        Payload payload;
        payload["id"] = job_id;
        payload["cluster"] = to_string(target);
        payload["applied"] = true;
        payload["revoked"] = true;
        payload["reason"] = "duplicate start";
        engine_.log_now(EventKind::CancelRequest, std::move(payload));
        router_->on_copy_cancelled(job_id, target);
        return;
    }

    if (verdict == FederationRouter::StartVerdict::WinnerDisplaces) {
        // Equal-time tie: the HPC copy runs, the cloud copy is revoked.
        const FederatedJob* record = router_->find(job_id);
        const std::size_t cloud_entry = record->copies.at(Target::Cloud);
        cloud_->revoke_start(cloud_entry);
        const auto token = end_tokens_.find({job_id, static_cast<int>(Target::Cloud)});
        if (token != end_tokens_.end()) engine_.cancel(token->second);
        Payload payload;
        payload["id"] = job_id;
        payload["cluster"] = "cloud";
        payload["applied"] = true;
        payload["revoked"] = true;
        payload["reason"] = "hpc wins equal-time start";
        engine_.log_now(EventKind::CancelRequest, std::move(payload));
    }

    Payload started;
    started["id"] = job_id;
    started["cluster"] = to_string(target);
    started["nodes"] = entry.assigned_nodes;
    if (!entry.vm_ids.empty()) started["vm_ids"] = entry.vm_ids;
    engine_.log_now(EventKind::JobStart, std::move(started));

    Payload end_payload;
    end_payload["id"] = job_id;
    end_payload["cluster"] = to_string(target);
    end_tokens_[{job_id, static_cast<int>(target)}] =
        engine_.schedule(t + entry.run_s, EventKind::JobEnd, std::move(end_payload));

    // Ask the other cluster to drop its pending copy.
    const FederatedJob* record = router_->find(job_id);
    for (const auto& [sibling, sibling_entry] : record->copies) {
        if (sibling == target) continue;
        if (cluster(sibling).entry(sibling_entry).state != QueueState::Pending) continue;
        Payload payload;
        payload["id"] = job_id;
        payload["cluster"] = to_string(sibling);
        payload["origin"] = "federation";
        engine_.schedule(t, EventKind::CancelRequest, std::move(payload));
    }
}

bool Simulation::pump_once(Target target, SimTime t) {
    const std::vector<std::size_t> started = cluster(target).try_schedule(t);
    for (std::size_t entry_id : started) apply_start(target, entry_id, t);
    return !started.empty();
}

void Simulation::pump(SimTime t) {
    bool moved = true;
    while (moved) {
        moved = pump_once(Target::Hpc, t);
        moved = pump_once(Target::Cloud, t) || moved;
    }
}

void Simulation::handle_job_end(SimEvent& event) {
    const std::string job_id = event.payload.at("id").get<std::string>();
    const Target target = target_from_string(event.payload.at("cluster").get<std::string>());
    ClusterScheduler& owner = cluster(target);
    const std::size_t entry_id = router_->find(job_id)->copies.at(target);
    owner.finish(entry_id, event.time);
    const QueueEntry& entry = owner.entry(entry_id);
    const std::string outcome(to_string(entry.state));
    event.payload["outcome"] = outcome;
    event.payload["run_s"] = entry.run_s;
    if (target == Target::Cloud) {
        const std::vector<int> gone = cloud_->take_terminated_on_release();
        if (!gone.empty()) event.payload["vm_terminated"] = gone;
    }
    router_->on_copy_end(job_id, target, outcome);
    end_tokens_.erase({job_id, static_cast<int>(target)});
    pump(event.time);
}

void Simulation::handle_vm_stage(SimEvent& event) {
    const int vm_id = event.payload.at("vm").get<int>();
    const auto state = cloud_->advance_stage(vm_id, event.time);
    if (!state.has_value()) {
        event.payload["stale"] = true;
        return;
    }
    event.payload["state"] = to_string(*state);
    if (*state == VmState::Ready) pump(event.time);
}

void Simulation::schedule_stage_events(const std::vector<StageEvent>& stages) {
    for (const StageEvent& stage : stages) {
        Payload payload;
        payload["vm"] = stage.vm_id;
        payload["stage"] = stage.stage;
        vm_stage_tokens_[stage.vm_id].push_back(
            engine_.schedule(stage.at, EventKind::VmStageComplete, std::move(payload)));
    }
}

void Simulation::handle_autoscale_tick(SimEvent& event) {
    const bool bootstrap = event.payload.value("action", std::string()) == "bootstrap";
    CloudPool::TickAction action;
    if (bootstrap) {
        const int shortfall = scenario_.cloud.min_vms - cloud_->vm_count();
        if (shortfall > 0) action.stage_events = cloud_->scale_up(shortfall, event.time, &action.scaled_up);
        action.target = scenario_.cloud.min_vms;
    } else {
        action = cloud_->autoscale_tick(event.time, scenario_.autoscaler);
        const SimTime next = event.time + scenario_.autoscaler.interval_s;
        if (next <= scenario_.horizon_s) {
            Payload payload;
            payload["action"] = "tick";
            engine_.schedule(next, EventKind::AutoscaleTick, std::move(payload));
        }
    }
    schedule_stage_events(action.stage_events);
    event.payload["target"] = action.target;
    if (!action.scaled_up.empty()) {
        Payload up = Payload::array();
        for (int vm_id : action.scaled_up) {
            Payload item;
            item["vm"] = vm_id;
            item["host"] = cloud_->vm(vm_id).host_id;
            up.push_back(std::move(item));
        }
        event.payload["up"] = std::move(up);
    }
    if (!action.scaled_down.terminated.empty()) {
        event.payload["down"] = action.scaled_down.terminated;
        for (int vm_id : action.scaled_down.terminated) {
            for (const Engine::Token token : vm_stage_tokens_[vm_id]) engine_.cancel(token);
            vm_stage_tokens_.erase(vm_id);
        }
    }
    if (!action.scaled_down.draining.empty()) event.payload["draining"] = action.scaled_down.draining;
}

void Simulation::handle_cancel_request(SimEvent& event) {
    const std::string job_id = event.payload.at("id").get<std::string>();
    const Target target = target_from_string(event.payload.at("cluster").get<std::string>());
    const bool applied = cluster(target).cancel(job_id, event.time);
    event.payload["applied"] = applied;
    if (applied) router_->on_copy_cancelled(job_id, target);
}

}  // namespace burstsim
