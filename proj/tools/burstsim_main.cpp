#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "burstsim/errors.hpp"
#include "burstsim/gateway.hpp"
#include "burstsim/gateway_http.hpp"
#include "burstsim/runner.hpp"
#include "burstsim/simulation.hpp"

namespace {

constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

burstsim::Policy parse_policy(const std::string& text) {
    burstsim::Policy policy;
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        policy.variant = burstsim::policy_variant_from_string(text);
    } else {
        policy.variant = burstsim::policy_variant_from_string(text.substr(0, colon));
        policy.threshold_s = std::stoll(text.substr(colon + 1));
    }
    policy.validate();
    return policy;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir) {
    const burstsim::Scenario scenario = burstsim::Scenario::load(scenario_path);
    const auto problems = scenario.validate();
    if (!problems.empty()) {
        for (const std::string& problem : problems) std::cerr << "config error: " << problem << "\n";
        return kExitConfigError;
    }
    const burstsim::RunResult result = burstsim::run_scenario(scenario);
    burstsim::write_outputs(result, out_dir);
    std::cout << burstsim::summary_json_text(result.summary);
    return 0;
}

int cmd_compare(const std::string& scenario_path, const std::vector<std::string>& policy_names,
                const std::string& out_dir) {
    if (policy_names.size() < 2) {
        std::cerr << "config error: compare requires at least 2 policies\n";
        return kExitConfigError;
    }
    const burstsim::Scenario scenario = burstsim::Scenario::load(scenario_path);
    const auto problems = scenario.validate();
    if (!problems.empty()) {
        for (const std::string& problem : problems) std::cerr << "config error: " << problem << "\n";
        return kExitConfigError;
    }
    std::vector<burstsim::Policy> policies;
    for (const std::string& name : policy_names) policies.push_back(parse_policy(name));
    const auto outcomes = burstsim::compare_policies(scenario, policies);
    std::printf("%-24s %14s %14s %12s %10s\n", "policy", "median_tts_s", "mean_wait_s", "bursted",
                "vm_hours");
    std::string csv = "policy,median_tts_s,mean_wait_s,jobs_bursted,vm_hours\n";
    for (const auto& outcome : outcomes) {
        std::printf("%-24s %14lld %14.1f %12lld %10.2f\n", outcome.policy.c_str(),
                    static_cast<long long>(outcome.summary.median_tts_s), outcome.summary.mean_wait_s,
                    static_cast<long long>(outcome.summary.jobs_bursted), outcome.summary.vm_hours);
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%lld,%.3f,%lld,%.3f\n", outcome.policy.c_str(),
                      static_cast<long long>(outcome.summary.median_tts_s), outcome.summary.mean_wait_s,
                      static_cast<long long>(outcome.summary.jobs_bursted), outcome.summary.vm_hours);
        csv += line;
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(std::filesystem::path(out_dir) / "compare.csv");
        out << csv;
    }
    return 0;
}

int cmd_replay(const std::string& log_path) {
    const burstsim::RunResult result = burstsim::replay_log(log_path);
    std::cout << burstsim::summary_json_text(result.summary);
    return 0;
}

int cmd_validate(const std::string& scenario_path) {
    const burstsim::Scenario scenario = burstsim::Scenario::load(scenario_path);
    const auto problems = scenario.validate();
    if (problems.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const std::string& problem : problems) std::cerr << "config error: " << problem << "\n";
    return kExitConfigError;
}

int cmd_serve(const std::string& scenario_path, const std::string& host, int port) {
    const burstsim::Scenario scenario = burstsim::Scenario::load(scenario_path);
    const auto problems = scenario.validate();
    if (!problems.empty()) {
        for (const std::string& problem : problems) std::cerr << "config error: " << problem << "\n";
        return kExitConfigError;
    }
    // The gateway drives virtual time itself; trace jobs (if any) arrive as
    // the clock advances past their submit times.
    burstsim::Simulation sim(scenario, scenario.realize_trace());
    sim.setup();
    burstsim::GatewayService service(sim);
    std::cout << "listening on " << host << ":" << port << "\n";
    if (!burstsim::serve_gateway(service, host, port)) {
        std::cerr << "failed to bind " << host << ":" << port << "\n";
        return kExitConfigError;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator for cloud-bursting batch schedulers"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string log_path;
    std::vector<std::string> policies;
    std::string host = "127.0.0.1";
    int port = 8080;

    auto* run = app.add_subcommand("run", "Run a scenario and write outputs");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--out", out_dir, "Output directory");

    auto* compare = app.add_subcommand("compare", "Run one scenario under several policies");
    compare->add_option("--scenario", scenario_path, "Scenario file")->required();
    compare->add_option("--policies", policies, "Comma-separated policy list")->required()->delimiter(',');
    compare->add_option("--out", out_dir, "Optional output directory");

    auto* replay = app.add_subcommand("replay", "Recompute the summary from an event log");
    replay->add_option("--log", log_path, "events.jsonl produced by run")->required();

    auto* validate = app.add_subcommand("validate", "Check a scenario without running it");
    validate->add_option("--scenario", scenario_path, "Scenario file")->required();

    auto* serve = app.add_subcommand("serve", "Serve the jobs API over HTTP");
    serve->add_option("--scenario", scenario_path, "Scenario file")->required();
    serve->add_option("--port", port, "TCP port")->required();
    serve->add_option("--host", host, "Bind address");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_dir);
        if (compare->parsed()) return cmd_compare(scenario_path, policies, compare->count("--out") ? out_dir : "");
        if (replay->parsed()) return cmd_replay(log_path);
        if (validate->parsed()) return cmd_validate(scenario_path);
        if (serve->parsed()) return cmd_serve(scenario_path, host, port);
    } catch (const burstsim::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitRuntimeError;
    } catch (const burstsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const burstsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return 0;
}
