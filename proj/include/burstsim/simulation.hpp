#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "burstsim/engine.hpp"
#include "burstsim/metrics.hpp"
#include "burstsim/scenario.hpp"

namespace burstsim {

// One simulation instance: the event engine plus both clusters, the
// federation router, and the glue that turns cluster state changes into
// events and log entries. Single-threaded; independent instances may run
// concurrently.
class Simulation {
public:
    Simulation(const Scenario& scenario, Trace trace);

    // Schedules initial provisioning, autoscaler ticks and all trace
    // arrivals within the horizon. Called by run(); exposed for stepped use.
    void setup();

    // Runs to the scenario horizon and returns the log.
    const EventLog& run();

    // Advances virtual time without finishing the run (gateway stepping).
    void advance_to(SimTime t);

    // Injects a job at virtual time t (t >= clock). Same code path as a
    // trace arrival, so gateway submissions behave identically.
    void submit_job(const Job& job, SimTime t);

    // Cancels all pending copies of a job. Running copies are not preempted.
    // Returns true iff the job will no longer execute.
    bool cancel_job(const std::string& job_id, SimTime t);

    Engine& engine() { return engine_; }
    const Engine& engine() const { return engine_; }
    HpcCluster& hpc() { return *hpc_; }
    CloudPool& cloud() { return *cloud_; }
    FederationRouter& router() { return *router_; }
    const AppRegistry& apps() const { return apps_; }
    const Scenario& scenario() const { return scenario_; }
    SimTime horizon() const { return scenario_.horizon_s; }

    Summary summary() const { return summarize(engine_.log().entries()); }

    // Invoked after every processed event; used by invariant-checking tests.
    std::function<void(const SimEvent&)> inspector;

private:
    void on_event(SimEvent& event);
    void handle_arrival(SimEvent& event);
    void handle_job_start(SimEvent& event);
    void handle_job_end(SimEvent& event);
    void handle_vm_stage(SimEvent& event);
    void handle_autoscale_tick(SimEvent& event);
    void handle_cancel_request(SimEvent& event);

    // Runs scheduling passes on both clusters until no more jobs start,
    // adjudicating federated duplicates as starts are claimed.
    void pump(SimTime t);
    bool pump_once(Target target, SimTime t);
    void apply_start(Target target, std::size_t entry_id, SimTime t);
    void schedule_stage_events(const std::vector<StageEvent>& stages);
    ClusterScheduler& cluster(Target target);

    Scenario scenario_;
    AppRegistry apps_;
    Engine engine_;
    std::unique_ptr<HpcCluster> hpc_;
    std::unique_ptr<CloudPool> cloud_;
    std::unique_ptr<FederationRouter> router_;
    Trace trace_;
    bool setup_done_ = false;
    // End-event tokens per (job id, target), for duplicate revocation.
    std::map<std::pair<std::string, int>, Engine::Token> end_tokens_;
    std::map<int, std::vector<Engine::Token>> vm_stage_tokens_;
};

}  // namespace burstsim
