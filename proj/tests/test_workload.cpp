#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "burstsim/errors.hpp"
#include "burstsim/trace.hpp"

using namespace burstsim;

namespace {

AppRegistry reference_apps() {
    AppRegistry apps;
    apps.add({"GROMACS", 3940, 6366.0 / 3940.0, 4, 2});
    apps.add({"NAMD", 160, 238.0 / 160.0, 8, 2});
    apps.add({"OpenSeesSP", 226, 403.0 / 226.0, 1, 1});
    apps.add({"WRF", 230, 369.0 / 230.0, 2, 2});
    return apps;
}

// Poisson CDF by direct summation; the oracle for the arrival-count bound.
double poisson_cdf(double lambda, int k) {
    double term = std::exp(-lambda);
    double sum = term;
    for (int i = 1; i <= k; ++i) {
        term *= lambda / i;
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("jsonl loader reads a full record") {
    std::istringstream in(
        R"({"id":"j1","submit_time_s":0,"user":"u1","app":"NAMD","nodes":8,"tasks_per_node":2,"req_walltime_s":600,"base_runtime_s":160})"
        "\n");
    const Trace trace = parse_trace_jsonl(in, "test");
    REQUIRE(trace.jobs.size() == 1);
    const Job& job = trace.jobs[0];
    CHECK(job.id == "j1");
    CHECK(job.user == "u1");
    CHECK(job.app == "NAMD");
    CHECK(job.nodes == 8);
    CHECK(job.base_runtime_s == 160);
    CHECK(job.cluster_hint == ClusterHint::Auto);
}

TEST_CASE("jsonl loader: empty input, defaults, sorting") {
    std::istringstream empty("");
    CHECK(parse_trace_jsonl(empty, "test").jobs.empty());

    std::istringstream two(
        R"({"id":"late","submit_time_s":50,"app":"NAMD","nodes":1,"req_walltime_s":60,"base_runtime_s":10})"
        "\n"
        R"({"id":"early","submit_time_s":5,"app":"NAMD","nodes":1,"req_walltime_s":60,"base_runtime_s":10})"
        "\n");
    const Trace trace = parse_trace_jsonl(two, "test");
    REQUIRE(trace.jobs.size() == 2);
    CHECK(trace.jobs[0].id == "early");
    CHECK(trace.jobs[1].user == "anon");
    CHECK(trace.jobs[1].tasks_per_node == 1);
}

TEST_CASE("jsonl loader rejects duplicates and bad fields") {
    std::istringstream dup(
        R"({"id":"j1","submit_time_s":0,"app":"A","nodes":1,"req_walltime_s":60,"base_runtime_s":10})"
        "\n"
        R"({"id":"j1","submit_time_s":1,"app":"A","nodes":1,"req_walltime_s":60,"base_runtime_s":10})"
        "\n");
    CHECK_THROWS_AS(parse_trace_jsonl(dup, "test"), DuplicateId);

    std::istringstream zero_nodes(
        R"({"id":"j1","submit_time_s":0,"app":"A","nodes":0,"req_walltime_s":60,"base_runtime_s":10})"
        "\n");
    CHECK_THROWS_AS(parse_trace_jsonl(zero_nodes, "test"), NonPositiveField);

    std::istringstream junk("not json\n");
    try {
        parse_trace_jsonl(junk, "test");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 1);
    }

    std::istringstream missing(R"({"id":"j1","submit_time_s":0})" "\n");
    CHECK_THROWS_AS(parse_trace_jsonl(missing, "test"), ParseError);
}

TEST_CASE("swf loader maps columns and applies the node ceiling") {
    // id submit wait run procs avg_cpu mem req_time ... (trailing columns ignored)
    std::istringstream in(
        "; comment line\n"
        "1 0 -1 300 96 -1 -1 600 -1 -1 1 1 1 1 1 1 1 1\n"
        "2 10 -1 -1 48 -1 -1 600 -1 -1 1 1 1 1 1 1 1 1\n"
        "3 20 -1 100 49 -1 -1 200 -1 -1 1 1 1 1 1 1 1 1\n");
    const SwfLoadResult result = parse_trace_swf(in, "test", 48);
    CHECK(result.dropped == 1);  // record 2 has runtime -1
    REQUIRE(result.trace.jobs.size() == 2);
    CHECK(result.trace.jobs[0].id == "1");
    CHECK(result.trace.jobs[0].nodes == 2);  // 96 / 48
    CHECK(result.trace.jobs[0].base_runtime_s == 300);
    CHECK(result.trace.jobs[0].req_walltime_s == 600);
    CHECK(result.trace.jobs[1].nodes == 2);  // ceil(49 / 48)
}

TEST_CASE("swf loader: hand-written three-job file") {
    std::istringstream in(
        "; hand-built fixture\n"
        "10 0 0 120 48 -1 -1 240 -1 -1 1 7 1 1 1 1 1 1\n"
        "11 5 0 60 24 -1 -1 120 -1 -1 1 7 1 1 1 1 1 1\n"
        "12 9 0 600 96 -1 -1 1200 -1 -1 1 7 1 1 1 1 1 1\n");
    const SwfLoadResult result = parse_trace_swf(in, "test", 24);
    CHECK(result.dropped == 0);
    REQUIRE(result.trace.jobs.size() == 3);
    CHECK(result.trace.jobs[0].id == "10");
    CHECK(result.trace.jobs[0].nodes == 2);
    CHECK(result.trace.jobs[1].nodes == 1);
    CHECK(result.trace.jobs[2].nodes == 4);
    CHECK(result.trace.jobs[2].submit_time == 9);
}

TEST_CASE("synthetic workload basics") {
    SynthSpec spec;
    spec.rate_jobs_per_hour = 0.0;
    Rng rng(1);
    CHECK(synth_workload(spec, rng).jobs.empty());

    spec.rate_jobs_per_hour = 60.0;
    spec.duration_s = 3600;
    spec.node_dist.items = {{1, 0.5}, {4, 0.5}};
    spec.walltime_dist.items = {{600, 1.0}};
    spec.app_mix = {{"NAMD", 1.0}};

    Rng a(42), b(42);
    const Trace t1 = synth_workload(spec, a);
    const Trace t2 = synth_workload(spec, b);
    REQUIRE(t1.jobs.size() == t2.jobs.size());
    for (std::size_t i = 0; i < t1.jobs.size(); ++i) {
        CHECK(t1.jobs[i].id == t2.jobs[i].id);
        CHECK(t1.jobs[i].submit_time == t2.jobs[i].submit_time);
        CHECK(t1.jobs[i].nodes == t2.jobs[i].nodes);
        CHECK(t1.jobs[i].base_runtime_s == t2.jobs[i].base_runtime_s);
    }
    for (const Job& job : t1.jobs) {
        CHECK(job.base_runtime_s >= 1);
        CHECK(job.base_runtime_s <= job.req_walltime_s);
    }
}

TEST_CASE("synthetic arrival counts stay in the 0.9999 Poisson band") {
    // Oracle first: the two-sided 0.9999 interval for lambda=60 is [30, 95].
    CHECK(poisson_cdf(60.0, 29) < 5e-5);
    CHECK(1.0 - poisson_cdf(60.0, 95) < 5e-5);

    SynthSpec spec;
    spec.rate_jobs_per_hour = 60.0;
    spec.duration_s = 3600;
    spec.node_dist.items = {{1, 1.0}};
    spec.walltime_dist.items = {{600, 1.0}};
    spec.app_mix = {{"NAMD", 1.0}};
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 42ULL, 1234ULL}) {
        Rng rng(seed);
        const std::size_t count = synth_workload(spec, rng).jobs.size();
        CHECK(count >= 30);
        CHECK(count <= 95);
    }
}

TEST_CASE("malformed distributions are rejected") {
    SynthSpec spec;
    spec.rate_jobs_per_hour = 10.0;
    spec.duration_s = 600;
    spec.node_dist.items = {{1, 0.5}, {2, 0.4}};  // sums to 0.9
    spec.walltime_dist.items = {{600, 1.0}};
    spec.app_mix = {{"NAMD", 1.0}};
    Rng rng(1);
    CHECK_THROWS_AS(synth_workload(spec, rng), InvalidDistribution);
}

TEST_CASE("runtime scaling reproduces the reference application table") {
    const AppRegistry apps = reference_apps();

    Job job;
    job.app = "GROMACS";
    job.nodes = 4;
    job.req_walltime_s = 14400;
    job.base_runtime_s = 3940;
    CHECK(runtime_on(job, Target::Hpc, apps) == 3940);
    CHECK(runtime_on(job, Target::Cloud, apps) == 6366);  // 1:46:06

    job.app = "NAMD";
    job.base_runtime_s = 160;
    job.req_walltime_s = 600;
    CHECK(runtime_on(job, Target::Cloud, apps) == 238);  // 0:03:58

    job.app = "OpenSeesSP";
    job.base_runtime_s = 226;
    CHECK(runtime_on(job, Target::Cloud, apps) == 403);  // 0:06:43

    job.app = "WRF";
    job.base_runtime_s = 230;
    CHECK(runtime_on(job, Target::Cloud, apps) == 369);  // 0:06:09
}

TEST_CASE("runtime scaling: identity, cap, unknown app") {
    AppRegistry apps;
    apps.add({"flat", 100, 1.0, 1, 1});
    Job job;
    job.app = "flat";
    job.base_runtime_s = 100;
    job.req_walltime_s = 600;
    CHECK(runtime_on(job, Target::Cloud, apps) == 100);

    job.base_runtime_s = 700;  // exceeds walltime: killed at the bound
    CHECK(runtime_on(job, Target::Hpc, apps) == 600);
    CHECK(uncapped_runtime_on(job, Target::Hpc, apps) == 700);

    job.app = "nope";
    CHECK_THROWS_AS(runtime_on(job, Target::Cloud, apps), UnknownApp);
}

TEST_CASE("scaled runtime is monotone in the slowdown factor") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t base = rng.uniform_int(1, 50000);
        const double s1 = rng.uniform_real(0.5, 4.0);
        const double s2 = s1 + rng.uniform_real(0.0, 2.0);
        CHECK(scaled_runtime(base, s1) <= scaled_runtime(base, s2));
    }
    CHECK(scaled_runtime(3940, 1.6157) == 6366);
    CHECK(scaled_runtime(230, 1.6043) == 369);
}
