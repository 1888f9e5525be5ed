#include "burstsim/router.hpp"

#include <algorithm>

#include "burstsim/errors.hpp"

namespace burstsim {

const char* to_string(PolicyVariant variant) {
    switch (variant) {
        case PolicyVariant::HintOnly: return "hint_only";
        case PolicyVariant::AlwaysHpc: return "always_hpc";
        case PolicyVariant::AlwaysCloud: return "always_cloud";
        case PolicyVariant::DualSubmit: return "dual_submit";
        case PolicyVariant::WaitThreshold: return "wait_threshold";
        case PolicyVariant::CostModel: return "cost_model";
    }
    return "unknown";
}

PolicyVariant policy_variant_from_string(const std::string& name) {
    if (name == "hint_only") return PolicyVariant::HintOnly;
    if (name == "always_hpc") return PolicyVariant::AlwaysHpc;
    if (name == "always_cloud") return PolicyVariant::AlwaysCloud;
    if (name == "dual_submit") return PolicyVariant::DualSubmit;
    if (name == "wait_threshold") return PolicyVariant::WaitThreshold;
    if (name == "cost_model") return PolicyVariant::CostModel;
    throw ConfigError("unknown policy variant \"" + name + "\"");
}

std::string Policy::name() const {
    if (variant == PolicyVariant::WaitThreshold)
        return std::string(to_string(variant)) + ":" + std::to_string(threshold_s);
    return to_string(variant);
}

void Policy::validate() const {
    if (variant == PolicyVariant::WaitThreshold && threshold_s <= 0)
        throw ConfigError("wait_threshold policy requires threshold_s > 0");
}

FederationRouter::FederationRouter(Policy policy, WaitSource wait_source, WaitTable table,
                                   HpcCluster& hpc, CloudPool& cloud, const AppRegistry& apps)
    : policy_(std::move(policy)), wait_source_(wait_source), table_(std::move(table)), hpc_(hpc),
      cloud_(cloud), apps_(apps) {
    policy_.validate();
}

SimTime FederationRouter::estimate_wait(const Job& job, SimTime t) const {
    if (wait_source_ == WaitSource::Table) return table_.estimate_wait_s(job.nodes, job.req_walltime_s);
    return hpc_.estimate_start(job, t) - t;
}

bool FederationRouter::feasible(const Job& job, Target target) const {
    return target == Target::Hpc ? job.nodes <= hpc_.max_job_nodes()
                                 : job.nodes <= cloud_.max_job_nodes();
}

BurstDecision FederationRouter::route(const Job& job, SimTime t) const {
    const bool hpc_ok = feasible(job, Target::Hpc);
    const bool cloud_ok = feasible(job, Target::Cloud);
    if (!hpc_ok && !cloud_ok)
        throw UnroutableJob("job \"" + job.id + "\" exceeds both clusters' capacity");

    BurstDecision decision;
    decision.job_id = job.id;
    decision.policy_name = policy_.name();

    // A target a policy asks for but that cannot hold the job falls back to
    // the other cluster; with the cloud pool disabled every policy therefore
    // degenerates to always_hpc.
    const auto pick = [&](Target wanted, const std::string& reason) {
        if (wanted == Target::Cloud && !cloud_ok) {
            decision.targets = {Target::Hpc};
            decision.reason = reason + "; cloud infeasible, fell back to hpc";
        } else if (wanted == Target::Hpc && !hpc_ok) {
            decision.targets = {Target::Cloud};
            decision.reason = reason + "; hpc infeasible, fell back to cloud";
        } else {
            decision.targets = {wanted};
            decision.reason = reason;
        }
    };

    switch (policy_.variant) {
        case PolicyVariant::HintOnly: {
            const Target wanted = job.cluster_hint == ClusterHint::Cloud ? Target::Cloud : Target::Hpc;
            pick(wanted, job.cluster_hint == ClusterHint::Auto ? "hint auto resolves to hpc"
                                                               : "user hint");
            break;
        }
        case PolicyVariant::AlwaysHpc:
            pick(Target::Hpc, "fixed policy");
            break;
        case PolicyVariant::AlwaysCloud:
            pick(Target::Cloud, "fixed policy");
            break;
        case PolicyVariant::DualSubmit:
            if (hpc_ok && cloud_ok) {
                decision.targets = {Target::Hpc, Target::Cloud};
                decision.reason = "submitted to all federated clusters";
            } else {
                pick(hpc_ok ? Target::Hpc : Target::Cloud, "dual submit");
            }
            break;
        case PolicyVariant::WaitThreshold: {
            const SimTime wait = estimate_wait(job, t);
            decision.est_tts_hpc_s = wait + runtime_on(job, Target::Hpc, apps_);
            pick(wait > policy_.threshold_s ? Target::Cloud : Target::Hpc,
                 "estimated wait " + std::to_string(wait) + "s vs threshold " +
                     std::to_string(policy_.threshold_s) + "s");
            break;
        }
        case PolicyVariant::CostModel: {
            const SimTime wait = estimate_wait(job, t);
            const std::int64_t tts_hpc = wait + runtime_on(job, Target::Hpc, apps_);
            decision.est_tts_hpc_s = tts_hpc;
            const auto delay = cloud_ok ? cloud_.estimate_ready_delay(job, t) : std::nullopt;
            if (!delay.has_value()) {
                pick(Target::Hpc, "cloud infeasible for cost model");
                break;
            }
            const std::int64_t tts_cloud = *delay + runtime_on(job, Target::Cloud, apps_);
            decision.est_tts_cloud_s = tts_cloud;
            pick(cost_choice(tts_hpc, tts_cloud),
                 "est tts hpc " + std::to_string(tts_hpc) + "s vs cloud " + std::to_string(tts_cloud) + "s");
            break;
        }
    }
    return decision;
}

void FederationRouter::register_dispatch(const Job& job, BurstDecision decision,
                                         std::map<Target, std::size_t> copies) {
    FederatedJob record;
    record.job = job;
    record.decision = std::move(decision);
    record.copies = std::move(copies);
    jobs_[job.id] = std::move(record);
}

void FederationRouter::register_unroutable(const Job& job, const std::string& reason) {
    FederatedJob record;
    record.job = job;
    record.decision.job_id = job.id;
    record.decision.policy_name = policy_.name();
    record.decision.reason = reason;
    record.done = true;
    record.outcome = "unroutable";
    jobs_[job.id] = std::move(record);
}

FederationRouter::StartVerdict FederationRouter::on_copy_start(const std::string& job_id, Target target,
                                                               SimTime t) {
    FederatedJob& record = jobs_.at(job_id);
    if (!record.winner.has_value()) {
        record.winner = target;
        record.winner_time = t;
        return StartVerdict::Winner;
    }
    // A duplicate start. Equal-time ties resolve in favor of the HPC copy;
    // anything else is a straggler that loses to the established winner.
    if (record.winner_time == t && *record.winner == Target::Cloud && target == Target::Hpc) {
        record.winner = Target::Hpc;
        record.winner_time = t;
        return StartVerdict::WinnerDisplaces;
    }
    return StartVerdict::LoserRevoke;
}

void FederationRouter::on_copy_end(const std::string& job_id, Target target, const std::string& outcome) {
    FederatedJob& record = jobs_.at(job_id);
    if (record.winner != target)
        throw InvariantViolation("job \"" + job_id + "\": non-winning copy reported an end");
    record.done = true;
    record.outcome = outcome;
}

void FederationRouter::on_copy_cancelled(const std::string& job_id, Target) {
    FederatedJob& record = jobs_.at(job_id);
    if (record.winner.has_value() || record.done) return;
    // Cancelled everywhere?
    bool any_live = false;
    for (const auto& [target, entry_id] : record.copies) {
        const ClusterScheduler& cluster =
            target == Target::Hpc ? static_cast<const ClusterScheduler&>(hpc_) : cloud_;
        const QueueState state = cluster.entry(entry_id).state;
        if (state == QueueState::Pending || state == QueueState::Running) any_live = true;
    }
    if (!any_live) {
        record.done = true;
        record.outcome = "cancelled";
    }
}

const FederatedJob* FederationRouter::find(const std::string& job_id) const {
    const auto it = jobs_.find(job_id);
    return it == jobs_.end() ? nullptr : &it->second;
}

}  // namespace burstsim
