#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "burstsim/errors.hpp"
#include "burstsim/hpc_cluster.hpp"
#include "burstsim/rng.hpp"
#include "support/oracle.hpp"

using namespace burstsim;

namespace {

AppRegistry one_app() {
    AppRegistry apps;
    apps.add({"NAMD", 160, 1.4875, 8, 2});
    apps.add({"any", 100, 1.5, 1, 1});
    return apps;
}

HpcConfig small_cluster(int nodes, bool backfill = true) {
    HpcConfig config;
    config.name = "test";
    config.total_nodes = nodes;
    config.partitions = {{"main", nodes}};
    config.default_partition = "main";
    config.backfill_enabled = backfill;
    return config;
}

Job make_job(const std::string& id, int nodes, std::int64_t walltime, std::int64_t runtime,
             SimTime submit = 0) {
    Job job;
    job.id = id;
    job.app = "any";
    job.nodes = nodes;
    job.req_walltime_s = walltime;
    job.base_runtime_s = runtime;
    job.submit_time = submit;
    return job;
}

// Drives the cluster through submit/end instants with no router in the way.
// Returns realized start times by job index.
std::vector<SimTime> drive(HpcCluster& cluster, const std::vector<Job>& jobs) {
    std::vector<SimTime> starts(jobs.size(), -1);
    std::vector<std::pair<SimTime, std::size_t>> pending_ends;  // (end, entry)
    std::size_t next = 0;
    SimTime now = 0;
    const auto record_starts = [&](const std::vector<std::size_t>& started, SimTime t) {
        for (std::size_t entry_id : started) {
            const QueueEntry& entry = cluster.entry(entry_id);
            for (std::size_t j = 0; j < jobs.size(); ++j)
                if (jobs[j].id == entry.job.id) starts[j] = t;
            pending_ends.emplace_back(t + entry.run_s, entry_id);
        }
    };
    while (next < jobs.size() || !pending_ends.empty()) {
        SimTime t = kNever;
        if (next < jobs.size()) t = jobs[next].submit_time;
        for (const auto& [end, entry] : pending_ends) t = std::min(t, end);
        now = t;
        for (std::size_t i = pending_ends.size(); i-- > 0;) {
            if (pending_ends[i].first == now) {
                cluster.finish(pending_ends[i].second, now);
                pending_ends.erase(pending_ends.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
        while (next < jobs.size() && jobs[next].submit_time == now) cluster.submit(jobs[next++], now);
        record_starts(cluster.try_schedule(now), now);
    }
    return starts;
}

}  // namespace

TEST_CASE("submit: empty partition starts immediately, oversize rejected") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(4200), apps);
    cluster.submit(make_job("j1", 1, 600, 100), 5);
    const auto started = cluster.try_schedule(5);
    REQUIRE(started.size() == 1);
    CHECK(*cluster.entry(started[0]).start_time == 5);

    CHECK_THROWS_AS(cluster.submit(make_job("big", 5000, 600, 100), 5), JobTooLarge);
}

TEST_CASE("two 3-node jobs on a 4-node partition run back to back") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(4), apps);
    const std::vector<Job> jobs = {make_job("a", 3, 100, 100), make_job("b", 3, 100, 100)};
    const auto starts = drive(cluster, jobs);
    CHECK(starts[0] == 0);
    CHECK(starts[1] == 100);

    // Cross-check with the independent FCFS reference.
    const auto oracle_starts = oracle::fcfs_schedule(4, {{0, 3, 100, 100}, {0, 3, 100, 100}});
    CHECK(starts == oracle_starts);
}

TEST_CASE("EASY backfill lets a short job jump the blocked head") {
    const AppRegistry apps = one_app();
    // J1 holds 2 of 4 nodes until t=100 (its walltime). J2 (head) needs all
    // 4. J3 needs 2 nodes for 50s: it finishes before the reservation and
    // may start at once.
    HpcCluster cluster(small_cluster(4), apps);
    cluster.submit(make_job("J1", 2, 100, 100), 0);
    REQUIRE(cluster.try_schedule(0).size() == 1);
    cluster.submit(make_job("J2", 4, 100, 100), 0);
    cluster.submit(make_job("J3", 2, 50, 50), 0);
    const auto started = cluster.try_schedule(0);
    REQUIRE(started.size() == 1);
    CHECK(cluster.entry(started[0]).job.id == "J3");
}

TEST_CASE("EASY backfill refuses jobs that would delay the reservation") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(4), apps);
    cluster.submit(make_job("J1", 2, 100, 100), 0);
    REQUIRE(cluster.try_schedule(0).size() == 1);
    cluster.submit(make_job("J2", 4, 100, 100), 0);
    cluster.submit(make_job("J3", 2, 150, 150), 0);  // would push J2 past t=100
    CHECK(cluster.try_schedule(0).empty());
}

TEST_CASE("with backfill disabled, start order equals submission order") {
    const AppRegistry apps = one_app();
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int nodes = static_cast<int>(rng.uniform_int(2, 8));
        HpcCluster cluster(small_cluster(nodes, false), apps);
        std::vector<Job> jobs;
        const int n = static_cast<int>(rng.uniform_int(2, 15));
        for (int i = 0; i < n; ++i) {
            const std::int64_t wall = rng.uniform_int(1, 200);
            jobs.push_back(make_job("j" + std::to_string(i), static_cast<int>(rng.uniform_int(1, nodes)),
                                    wall, wall, rng.uniform_int(0, 50)));
        }
        std::stable_sort(jobs.begin(), jobs.end(),
                         [](const Job& a, const Job& b) { return a.submit_time < b.submit_time; });
        const auto starts = drive(cluster, jobs);
        for (std::size_t i = 1; i < jobs.size(); ++i) CHECK(starts[i - 1] <= starts[i]);
    }
}

TEST_CASE("finish sets the terminal state and frees nodes") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(8), apps);
    Job namd = make_job("n", 8, 600, 160);
    namd.app = "NAMD";
    cluster.submit(namd, 0);
    const auto started = cluster.try_schedule(0);
    REQUIRE(started.size() == 1);
    cluster.finish(started[0], 160);
    CHECK(cluster.entry(started[0]).state == QueueState::Finished);
    CHECK(*cluster.entry(started[0]).end_time == 160);
    CHECK(cluster.free_count() == 8);
}

TEST_CASE("a job that exceeds its walltime is killed at the bound") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(2), apps);
    cluster.submit(make_job("k", 1, 600, 700), 0);
    const auto started = cluster.try_schedule(0);
    REQUIRE(started.size() == 1);
    CHECK(cluster.entry(started[0]).run_s == 600);
    cluster.finish(started[0], 600);
    CHECK(cluster.entry(started[0]).state == QueueState::WalltimeKilled);
}

TEST_CASE("finish on a pending entry is an illegal transition") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(2), apps);
    const std::size_t id = cluster.submit(make_job("p", 2, 100, 100), 0);
    CHECK_THROWS_AS(cluster.finish(id, 100), IllegalTransition);
}

TEST_CASE("cancel applies to pending entries only") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(2), apps);
    cluster.submit(make_job("r", 2, 100, 100), 0);
    cluster.try_schedule(0);
    cluster.submit(make_job("q", 1, 100, 100), 0);

    CHECK(cluster.cancel("q", 1));  // pending
    CHECK(cluster.entry(*cluster.find("q")).state == QueueState::Cancelled);
    CHECK_FALSE(cluster.cancel("r", 1));  // running: no preemption
    CHECK_FALSE(cluster.cancel("ghost", 1));
    CHECK(cluster.used_nodes() == 2);
}

TEST_CASE("estimate_start: empty cluster and full cluster") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(4), apps);
    CHECK(cluster.estimate_start(make_job("e", 2, 100, 100), 7) == 7);

    cluster.submit(make_job("busy", 4, 100, 100), 0);
    cluster.try_schedule(0);
    CHECK(cluster.estimate_start(make_job("whole", 4, 100, 100), 0) == 100);
    CHECK_THROWS_AS(cluster.estimate_start(make_job("big", 5, 100, 100), 0), JobTooLarge);
}

TEST_CASE("estimate_start is exact when walltimes are accurate and nothing else arrives") {
    const AppRegistry apps = one_app();
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int nodes = static_cast<int>(rng.uniform_int(2, 8));
        const bool backfill = rng.uniform_int(0, 1) == 1;
        HpcCluster cluster(small_cluster(nodes, backfill), apps);
        std::vector<Job> jobs;
        const int n = static_cast<int>(rng.uniform_int(1, 12));
        for (int i = 0; i < n; ++i) {
            const std::int64_t wall = rng.uniform_int(1, 300);
            jobs.push_back(
                make_job("j" + std::to_string(i), static_cast<int>(rng.uniform_int(1, nodes)), wall, wall));
        }
        // All submitted at t=0; the probe is the last job in the queue.
        for (std::size_t i = 0; i + 1 < jobs.size(); ++i) cluster.submit(jobs[i], 0);
        const Job probe = jobs.back();
        const SimTime predicted = cluster.estimate_start(probe, 0);
        cluster.submit(probe, 0);

        std::vector<std::pair<SimTime, std::size_t>> ends;
        SimTime now = 0;
        SimTime realized = -1;
        const auto absorb = [&](const std::vector<std::size_t>& started, SimTime t) {
            for (std::size_t entry_id : started) {
                if (cluster.entry(entry_id).job.id == probe.id) realized = t;
                ends.emplace_back(t + cluster.entry(entry_id).run_s, entry_id);
            }
        };
        absorb(cluster.try_schedule(0), 0);
        while (realized < 0 && !ends.empty()) {
            SimTime t = kNever;
            for (const auto& [end, entry] : ends) t = std::min(t, end);
            now = t;
            for (std::size_t i = ends.size(); i-- > 0;) {
                if (ends[i].first == now) {
                    cluster.finish(ends[i].second, now);
                    ends.erase(ends.begin() + static_cast<std::ptrdiff_t>(i));
                }
            }
            absorb(cluster.try_schedule(now), now);
        }
        REQUIRE(realized >= 0);
        CHECK(predicted == realized);
    }
}

TEST_CASE("EASY safety: backfill never delays the first queued job") {
    const AppRegistry apps = one_app();
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int nodes = static_cast<int>(rng.uniform_int(2, 8));
        std::vector<Job> jobs;
        std::vector<oracle::OracleJob> oracle_jobs;
        const int n = static_cast<int>(rng.uniform_int(2, 20));
        for (int i = 0; i < n; ++i) {
            const std::int64_t wall = rng.uniform_int(1, 120);
            const SimTime submit = rng.uniform_int(0, 60);
            const int width = static_cast<int>(rng.uniform_int(1, nodes));
            jobs.push_back(make_job("j" + std::to_string(i), width, wall, wall, submit));
            oracle_jobs.push_back({submit, width, wall, wall});
        }
        std::stable_sort(jobs.begin(), jobs.end(),
                         [](const Job& a, const Job& b) { return a.submit_time < b.submit_time; });
        std::stable_sort(oracle_jobs.begin(), oracle_jobs.end(),
                         [](const oracle::OracleJob& a, const oracle::OracleJob& b) { return a.submit < b.submit; });

        HpcCluster with_bf(small_cluster(nodes, true), apps);
        const auto bf_starts = drive(with_bf, jobs);
        const auto fcfs_starts = oracle::fcfs_schedule(nodes, oracle_jobs);

        // The first job that had to queue is the protected head.
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (fcfs_starts[i] != jobs[i].submit_time) {
                CHECK(bf_starts[i] <= fcfs_starts[i]);
                break;
            }
        }
    }
}

TEST_CASE("node capacity is never exceeded") {
    const AppRegistry apps = one_app();
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int nodes = static_cast<int>(rng.uniform_int(2, 10));
        HpcCluster cluster(small_cluster(nodes), apps);
        std::vector<Job> jobs;
        for (int i = 0; i < 20; ++i) {
            const std::int64_t wall = rng.uniform_int(1, 100);
            const std::int64_t run = rng.uniform_int(1, wall);
            jobs.push_back(make_job("j" + std::to_string(i), static_cast<int>(rng.uniform_int(1, nodes)),
                                    wall, run, rng.uniform_int(0, 40)));
        }
        std::stable_sort(jobs.begin(), jobs.end(),
                         [](const Job& a, const Job& b) { return a.submit_time < b.submit_time; });
        // drive() schedules at every instant; capacity is checked inside
        // claim/release and here after the run.
        drive(cluster, jobs);
        CHECK(cluster.used_nodes() <= nodes);
    }
}

TEST_CASE("work conservation: a fitting head starts immediately") {
    const AppRegistry apps = one_app();
    HpcCluster cluster(small_cluster(4), apps);
    cluster.submit(make_job("a", 2, 50, 50), 0);
    cluster.submit(make_job("b", 2, 50, 50), 0);
    const auto started = cluster.try_schedule(0);
    CHECK(started.size() == 2);
}
