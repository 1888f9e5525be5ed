#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "burstsim/metrics.hpp"
#include "burstsim/runner.hpp"
#include "burstsim/scenario.hpp"
#include "burstsim/simulation.hpp"
#include "burstsim/wait_table.hpp"

namespace py = pybind11;
using namespace burstsim;

namespace {

py::object json_to_py(const nlohmann::ordered_json& value) {
    const py::module_ json = py::module_::import("json");
    return json.attr("loads")(value.dump());
}

py::dict summary_dict(const Summary& summary) {
    py::dict out;
    out["median_tts_s"] = summary.median_tts_s;
    out["mean_wait_s"] = summary.mean_wait_s;
    out["jobs_bursted"] = summary.jobs_bursted;
    out["vm_hours"] = summary.vm_hours;
    out["jobs_executed"] = summary.jobs_executed;
    out["jobs_cancelled_copies"] = summary.jobs_cancelled_copies;
    return out;
}

py::dict record_dict(const JobRecord& record) {
    py::dict out;
    out["job_id"] = record.job_id;
    out["app"] = record.app;
    out["cluster"] = record.cluster;
    out["submit_s"] = record.submit_s;
    out["start_s"] = record.start_s ? py::cast(*record.start_s) : py::none();
    out["end_s"] = record.end_s ? py::cast(*record.end_s) : py::none();
    out["wait_s"] = record.wait_s;
    out["run_s"] = record.run_s;
    out["tts_s"] = record.tts_s;
    out["outcome"] = record.outcome;
    out["nodes"] = record.nodes;
    out["req_walltime_s"] = record.req_walltime_s;
    return out;
}

py::dict run_result_dict(const RunResult& result) {
    py::dict out;
    out["summary"] = summary_dict(result.summary);
    py::list records;
    for (const JobRecord& record : result.records) records.append(record_dict(record));
    out["records"] = records;
    out["events_jsonl"] = result.log.to_jsonl();
    out["wait_bins_csv"] = binned_wait_report(result.records).to_csv();
    return out;
}

Scenario scenario_from_text(const std::string& text, const std::string& base_dir) {
    return Scenario::from_json(nlohmann::json::parse(text), base_dir);
}

}  // namespace

PYBIND11_MODULE(_burstsim, m) {
    m.doc() = "Discrete-event simulator for cloud-bursting batch schedulers";

    py::register_exception<Error>(m, "SimError");

    py::class_<Scenario>(m, "Scenario")
        .def_static("load", &Scenario::load, py::arg("path"))
        .def_static("from_text", &scenario_from_text, py::arg("text"), py::arg("base_dir") = ".")
        .def("validate", &Scenario::validate)
        .def_property_readonly("seed", [](const Scenario& s) { return s.seed; })
        .def_property_readonly("horizon_s", [](const Scenario& s) { return s.horizon_s; })
        .def("with_seed",
             [](Scenario scenario, std::uint64_t seed) {
                 scenario.seed = seed;
                 scenario.seed_set = true;
                 return scenario;
             })
        .def("with_policy", [](Scenario scenario, const std::string& name, std::int64_t threshold_s) {
            scenario.policy.variant = policy_variant_from_string(name);
            scenario.policy.threshold_s = threshold_s;
            return scenario;
        }, py::arg("name"), py::arg("threshold_s") = 0);

    py::class_<WaitTable>(m, "WaitTable")
        .def_static("bundled_default", &WaitTable::bundled_default)
        .def_static("load_csv", &WaitTable::load_csv, py::arg("path"))
        .def("cell_percent", &WaitTable::cell_percent, py::arg("row"), py::arg("col"))
        .def("estimate_wait_s", &WaitTable::estimate_wait_s, py::arg("nodes"), py::arg("req_walltime_s"))
        .def_static("row_bin", &WaitTable::row_bin, py::arg("req_walltime_s"))
        .def_static("col_bin", &WaitTable::col_bin, py::arg("nodes"))
        .def("to_csv", &WaitTable::to_csv);

    m.def("scaled_runtime", &scaled_runtime, py::arg("base_s"), py::arg("slowdown"),
          "Ceiling-scaled runtime with near-integer snapping");

    m.def(
        "run",
        [](const Scenario& scenario) { return run_result_dict(run_scenario(scenario)); },
        py::arg("scenario"), "Run a scenario to its horizon");

    m.def(
        "compare",
        [](const Scenario& scenario, const std::vector<std::string>& policy_names) {
            std::vector<Policy> policies;
            for (const std::string& name : policy_names) {
                Policy policy;
                const auto colon = name.find(':');
                if (colon == std::string::npos) {
                    policy.variant = policy_variant_from_string(name);
                } else {
                    policy.variant = policy_variant_from_string(name.substr(0, colon));
                    policy.threshold_s = std::stoll(name.substr(colon + 1));
                }
                policies.push_back(policy);
            }
            py::dict out;
            for (const PolicyOutcome& outcome : compare_policies(scenario, policies))
                out[py::str(outcome.policy)] = summary_dict(outcome.summary);
            return out;
        },
        py::arg("scenario"), py::arg("policies"),
        "Run one workload realization under several routing policies");

    m.def(
        "replay",
        [](const std::string& events_jsonl_text) {
            std::istringstream in(events_jsonl_text);
            const std::vector<LogEntry> entries = EventLog::parse_jsonl(in);
            return summary_dict(summarize(entries));
        },
        py::arg("events_jsonl_text"), "Recompute the run summary from an event log");

    m.def(
        "load_trace_jsonl",
        [](const std::string& path) {
            py::list out;
            for (const Job& job : load_trace_jsonl(path).jobs) {
                py::dict item;
                item["id"] = job.id;
                item["submit_time_s"] = job.submit_time;
                item["app"] = job.app;
                item["nodes"] = job.nodes;
                item["req_walltime_s"] = job.req_walltime_s;
                item["base_runtime_s"] = job.base_runtime_s;
                out.append(item);
            }
            return out;
        },
        py::arg("path"));

    m.def("format_hms", &format_hms, py::arg("seconds"));

    m.def(
        "estimate_wait_table",
        [](int nodes, std::int64_t req_walltime_s) {
            return WaitTable::bundled_default().estimate_wait_s(nodes, req_walltime_s);
        },
        py::arg("nodes"), py::arg("req_walltime_s"),
        "Wait estimate from the bundled historical table");

#ifdef BURSTSIM_VERSION
    m.attr("__version__") = BURSTSIM_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
