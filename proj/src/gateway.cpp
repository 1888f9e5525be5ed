#include "burstsim/gateway.hpp"

#include <algorithm>

#include "burstsim/errors.hpp"

namespace burstsim {

ApiResult GatewayService::create_system(const Payload& body) {
    if (!body.is_object() || !body.contains("id") || !body.at("id").is_string())
        return ApiResult::error(400, "system registration requires a string id");
    SystemRegistration system;
    system.id = body.at("id").get<std::string>();
    system.kind = body.value("kind", std::string("hpc"));
    if (system.kind != "hpc" && system.kind != "cloud" && system.kind != "storage")
        return ApiResult::error(400, "kind must be hpc, cloud, or storage");
    system.description = body.value("description", std::string());
    system.root_path = body.value("root_path", std::string());
    for (const SystemRegistration& existing : systems_)
        if (existing.id == system.id) return ApiResult::error(409, "system id already registered");
    systems_.push_back(system);
    Payload out;
    out["id"] = system.id;
    out["kind"] = system.kind;
    out["description"] = system.description;
    if (!system.root_path.empty()) out["root_path"] = system.root_path;
    return ApiResult::ok(std::move(out), 201);
}

ApiResult GatewayService::list_systems() const {
    Payload out = Payload::array();
    for (const SystemRegistration& system : systems_) {
        Payload item;
        item["id"] = system.id;
        item["kind"] = system.kind;
        item["description"] = system.description;
        if (!system.root_path.empty()) item["root_path"] = system.root_path;
        out.push_back(std::move(item));
    }
    return ApiResult::ok(std::move(out));
}

ApiResult GatewayService::create_app(const Payload& body) {
    if (!body.is_object() || !body.contains("id") || !body.at("id").is_string())
        return ApiResult::error(400, "app registration requires a string id");
    AppRegistration app;
    app.id = body.at("id").get<std::string>();
    app.name = body.value("name", app.id);
    app.version = body.value("version", std::string("1.0"));
    app.profile = body.value("profile", app.name);
    app.default_system = body.value("default_system", std::string());
    if (!sim_.apps().has(app.profile))
        return ApiResult::error(400, "unknown application profile \"" + app.profile + "\"");
    for (const AppRegistration& existing : apps_) {
        if (existing.id == app.id) return ApiResult::error(409, "app id already registered");
        if (existing.name == app.name && existing.version == app.version)
            return ApiResult::error(409, "app (name, version) already registered");
    }
    if (!app.default_system.empty()) {
        const bool known = std::any_of(systems_.begin(), systems_.end(),
                                       [&](const SystemRegistration& s) { return s.id == app.default_system; });
        if (!known) return ApiResult::error(404, "unknown default_system \"" + app.default_system + "\"");
    }
    apps_.push_back(app);
    Payload out;
    out["id"] = app.id;
    out["name"] = app.name;
    out["version"] = app.version;
    out["profile"] = app.profile;
    if (!app.default_system.empty()) out["default_system"] = app.default_system;
    return ApiResult::ok(std::move(out), 201);
}

ApiResult GatewayService::list_apps() const {
    Payload out = Payload::array();
    for (const AppRegistration& app : apps_) {
        Payload item;
        item["id"] = app.id;
        item["name"] = app.name;
        item["version"] = app.version;
        item["profile"] = app.profile;
        if (!app.default_system.empty()) item["default_system"] = app.default_system;
        out.push_back(std::move(item));
    }
    return ApiResult::ok(std::move(out));
}

ApiResult GatewayService::submit_job(const Payload& body, std::optional<SimTime> sim_time) {
    if (!body.is_object() || !body.contains("app_id") || !body.at("app_id").is_string())
        return ApiResult::error(400, "job submission requires app_id");
    const std::string app_id = body.at("app_id").get<std::string>();
    const auto app = std::find_if(apps_.begin(), apps_.end(),
                                  [&](const AppRegistration& a) { return a.id == app_id; });
    if (app == apps_.end()) return ApiResult::error(404, "unknown app \"" + app_id + "\"");

    GatewayJob job;
    job.app_id = app_id;
    job.nodes = body.value("nodes", 1);
    job.tasks_per_node = body.value("tasks_per_node", 1);
    const AppProfile& profile = sim_.apps().get(app->profile);
    job.base_runtime_s = body.value("base_runtime_s", profile.base_runtime_s);
    job.req_walltime_s = body.value("req_walltime_s", std::int64_t{0});
    if (job.req_walltime_s == 0) job.req_walltime_s = std::max<std::int64_t>(job.base_runtime_s * 2, 60);
    job.target = body.value("target", std::string());
    if (job.target.empty()) job.target = app->default_system.empty() ? "auto" : app->default_system;
    if (job.nodes < 1 || job.tasks_per_node < 1 || job.req_walltime_s < 1 || job.base_runtime_s < 1)
        return ApiResult::error(400, "nodes, tasks_per_node, walltime and runtime must be >= 1");

    ClusterHint hint = ClusterHint::Auto;
    if (job.target != "auto") {
        const auto system = std::find_if(systems_.begin(), systems_.end(),
                                         [&](const SystemRegistration& s) { return s.id == job.target; });
        if (system == systems_.end()) return ApiResult::error(404, "unknown system \"" + job.target + "\"");
        if (system->kind == "storage") return ApiResult::error(400, "target must be an execution system");
        hint = system->kind == "cloud" ? ClusterHint::Cloud : ClusterHint::Hpc;
    }

    if (sim_time.has_value()) {
        if (*sim_time < sim_.engine().clock())
            return ApiResult::error(400, "X-Sim-Time is behind the virtual clock");
        sim_.advance_to(*sim_time);
    }
    const SimTime now = sim_.engine().clock();

    job.id = "gw-" + std::to_string(next_job_number_++);
    job.submitted_at = now;

    Job sim_job;
    sim_job.id = job.id;
    sim_job.user = body.value("user", std::string("gateway"));
    sim_job.submit_time = now;
    sim_job.app = app->profile;
    sim_job.nodes = job.nodes;
    sim_job.tasks_per_node = job.tasks_per_node;
    sim_job.req_walltime_s = job.req_walltime_s;
    sim_job.base_runtime_s = job.base_runtime_s;
    sim_job.cluster_hint = hint;
    sim_.submit_job(sim_job, now);
    jobs_.push_back(job);

    if (sim_time.has_value()) {
        // Stepped mode: process what is due at this instant, no further.
        sim_.advance_to(now);
    } else {
        // Blocking mode: advance until the job reaches a terminal state.
        while (derive_status(job) != "FINISHED" && derive_status(job) != "FAILED" &&
               derive_status(job) != "CANCELLED") {
            const SimTime next = sim_.engine().next_event_time();
            if (next == kNever || next > sim_.horizon()) break;
            sim_.advance_to(next);
        }
    }
    return ApiResult::ok(job_status_json(jobs_.back()), 201);
}

std::string GatewayService::derive_status(const GatewayJob& job) const {
    const FederatedJob* record = sim_.router().find(job.id);
    if (record == nullptr) return "SUBMITTED";  // arrival not yet processed
    if (record->done) {
        if (record->outcome == "finished") return "FINISHED";
        if (record->outcome == "cancelled") return "CANCELLED";
        return "FAILED";  // walltime_killed or unroutable
    }
    for (const auto& [target, entry_id] : record->copies) {
        const ClusterScheduler& owner = target == Target::Hpc
                                            ? static_cast<const ClusterScheduler&>(sim_.hpc())
                                            : sim_.cloud();
        if (owner.entry(entry_id).state == QueueState::Running) return "RUNNING";
    }
    return "QUEUED";
}

Payload GatewayService::job_status_json(const GatewayJob& job) const {
    Payload out;
    out["id"] = job.id;
    out["app_id"] = job.app_id;
    out["status"] = derive_status(job);
    Payload parameters;
    parameters["nodes"] = job.nodes;
    parameters["tasks_per_node"] = job.tasks_per_node;
    parameters["req_walltime_s"] = job.req_walltime_s;
    parameters["base_runtime_s"] = job.base_runtime_s;
    out["parameters"] = parameters;
    out["target"] = job.target;

    // Traceability record: inputs, versions, chosen system, timings.
    Payload provenance;
    provenance["inputs"] = parameters;
    const auto app = std::find_if(apps_.begin(), apps_.end(),
                                  [&](const AppRegistration& a) { return a.id == job.app_id; });
    if (app != apps_.end()) {
        provenance["app_version"] = app->version;
        provenance["app_profile"] = app->profile;
    }
    provenance["submit_s"] = job.submitted_at;
    const FederatedJob* record = sim_.router().find(job.id);
    if (record != nullptr) {
        if (record->winner.has_value()) {
            provenance["chosen_system"] = to_string(*record->winner);
            const std::size_t entry_id = record->copies.at(*record->winner);
            const ClusterScheduler& owner = *record->winner == Target::Hpc
                                                ? static_cast<const ClusterScheduler&>(sim_.hpc())
                                                : sim_.cloud();
            const QueueEntry& entry = owner.entry(entry_id);
            if (entry.start_time) provenance["start_s"] = *entry.start_time;
            if (entry.end_time) provenance["end_s"] = *entry.end_time;
        }
        provenance["policy"] = record->decision.policy_name;
        provenance["routing_reason"] = record->decision.reason;
    }
    out["provenance"] = provenance;
    return out;
}

ApiResult GatewayService::get_job(const std::string& id) const {
    const auto job = std::find_if(jobs_.begin(), jobs_.end(),
                                  [&](const GatewayJob& j) { return j.id == id; });
    if (job == jobs_.end()) return ApiResult::error(404, "unknown job \"" + id + "\"");
    return ApiResult::ok(job_status_json(*job));
}

ApiResult GatewayService::list_jobs() const {
    Payload out = Payload::array();
    for (const GatewayJob& job : jobs_) out.push_back(job_status_json(job));
    return ApiResult::ok(std::move(out));
}

ApiResult GatewayService::cancel_job(const std::string& id, std::optional<SimTime> sim_time) {
    const auto job = std::find_if(jobs_.begin(), jobs_.end(),
                                  [&](const GatewayJob& j) { return j.id == id; });
    if (job == jobs_.end()) return ApiResult::error(404, "unknown job \"" + id + "\"");
    if (sim_time.has_value()) sim_.advance_to(*sim_time);
    const SimTime now = sim_.engine().clock();
    const bool cancelled = sim_.cancel_job(id, now);
    sim_.advance_to(now);  // apply the cancel events due now
    Payload out;
    out["id"] = id;
    out["cancelled"] = cancelled;
    out["status"] = derive_status(*job);
    return ApiResult::ok(std::move(out));
}

}  // namespace burstsim
