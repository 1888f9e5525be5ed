#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "burstsim/simulation.hpp"

namespace burstsim {

// Registered compute or storage endpoint. Compute systems carry kind
// "hpc" or "cloud"; storage systems carry kind "storage" and a root path.
struct SystemRegistration {
    std::string id;
    std::string kind;
    std::string description;
    std::string root_path;  // storage systems only
};

struct AppRegistration {
    std::string id;
    std::string name;
    std::string version;
    std::string profile;         // application profile name in the scenario
    std::string default_system;  // optional execution system id
};

struct GatewayJob {
    std::string id;
    std::string app_id;
    int nodes = 1;
    int tasks_per_node = 1;
    std::int64_t req_walltime_s = 1;
    std::int64_t base_runtime_s = 1;
    std::string target = "auto";  // execution system id or "auto"
    SimTime submitted_at = 0;
};

// HTTP-agnostic request outcome; the HTTP layer maps it 1:1.
struct ApiResult {
    int status = 200;
    Payload body;

    static ApiResult ok(Payload body, int status = 200) { return {status, std::move(body)}; }
    static ApiResult error(int status, const std::string& message) {
        Payload body;
        body["error"] = message;
        body["code"] = status;
        return {status, std::move(body)};
    }
};

// Jobs-API facade over one simulation instance. Submissions enter the
// simulator through the same arrival path as trace jobs, so gateway use
// leaves timing unchanged. Virtual time is advanced explicitly: requests may
// carry a virtual timestamp (X-Sim-Time); a job submission without one
// blocks until the job reaches a terminal state.
class GatewayService {
public:
    explicit GatewayService(Simulation& sim) : sim_(sim) {}

    ApiResult create_system(const Payload& body);
    ApiResult list_systems() const;
    ApiResult create_app(const Payload& body);
    ApiResult list_apps() const;

    ApiResult submit_job(const Payload& body, std::optional<SimTime> sim_time);
    ApiResult get_job(const std::string& id) const;
    ApiResult list_jobs() const;
    ApiResult cancel_job(const std::string& id, std::optional<SimTime> sim_time);

    // Advances virtual time for requests carrying X-Sim-Time.
    void advance(SimTime t) { sim_.advance_to(t); }

    Simulation& simulation() { return sim_; }

    // Serializes HTTP access; the simulation has a single owner.
    std::mutex& command_mutex() const { return mutex_; }

private:
    Payload job_status_json(const GatewayJob& job) const;
    std::string derive_status(const GatewayJob& job) const;

    mutable std::mutex mutex_;
    Simulation& sim_;
    std::vector<SystemRegistration> systems_;
    std::vector<AppRegistration> apps_;
    std::vector<GatewayJob> jobs_;
    int next_job_number_ = 1;
};

}  // namespace burstsim
