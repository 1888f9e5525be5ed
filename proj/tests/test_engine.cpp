#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "burstsim/engine.hpp"
#include "burstsim/errors.hpp"
#include "burstsim/rng.hpp"

using namespace burstsim;

TEST_CASE("events dequeue in time order") {
    Engine engine;
    std::vector<SimTime> seen;
    engine.set_handler([&](SimEvent& event) { seen.push_back(event.time); });
    engine.schedule(10, EventKind::JobArrival, Payload{{"id", "a"}});
    engine.schedule(3, EventKind::JobArrival, Payload{{"id", "b"}});
    engine.schedule(7, EventKind::JobArrival, Payload{{"id", "c"}});
    engine.run_until(100);
    CHECK(seen == std::vector<SimTime>{3, 7, 10});
    CHECK(engine.clock() == 100);
}

TEST_CASE("equal-time events tie-break by scheduling order") {
    Engine engine;
    std::vector<std::string> seen;
    engine.set_handler([&](SimEvent& event) { seen.push_back(event.payload.at("id")); });
    engine.schedule(10, EventKind::JobArrival, Payload{{"id", "A"}});
    engine.schedule(10, EventKind::JobArrival, Payload{{"id", "B"}});
    engine.run_until(10);
    CHECK(seen == std::vector<std::string>{"A", "B"});
}

TEST_CASE("scheduling in the past is rejected") {
    Engine engine;
    engine.schedule(7, EventKind::JobArrival, Payload::object());
    engine.run_until(7);
    CHECK(engine.clock() == 7);
    CHECK_THROWS_AS(engine.schedule(5, EventKind::JobArrival, Payload::object()), SchedulingInPast);
    CHECK_NOTHROW(engine.schedule(7, EventKind::JobArrival, Payload::object()));
}

TEST_CASE("run_until on an empty queue just advances the clock") {
    Engine engine;
    const EventLog& log = engine.run_until(100);
    CHECK(log.empty());
    CHECK(engine.clock() == 100);
}

TEST_CASE("a single event is logged exactly once at its time") {
    Engine engine;
    engine.schedule(3, EventKind::JobArrival, Payload{{"id", "j1"}});
    const EventLog& log = engine.run_until(100);
    REQUIRE(log.size() == 1);
    CHECK(log.entries()[0].t == 3);
    CHECK(log.entries()[0].kind == EventKind::JobArrival);
}

TEST_CASE("events beyond the horizon stay queued") {
    Engine engine;
    int handled = 0;
    engine.set_handler([&](SimEvent&) { ++handled; });
    engine.schedule(50, EventKind::JobArrival, Payload::object());
    engine.schedule(150, EventKind::JobArrival, Payload::object());
    engine.run_until(100);
    CHECK(handled == 1);
    CHECK(engine.clock() == 100);
    CHECK(engine.next_event_time() == 150);
}

TEST_CASE("cancelled events are neither dispatched nor logged") {
    Engine engine;
    int handled = 0;
    engine.set_handler([&](SimEvent&) { ++handled; });
    const Engine::Token token = engine.schedule(5, EventKind::JobEnd, Payload::object());
    engine.schedule(6, EventKind::JobArrival, Payload::object());
    engine.cancel(token);
    const EventLog& log = engine.run_until(10);
    CHECK(handled == 1);
    CHECK(log.size() == 1);
    CHECK(log.entries()[0].kind == EventKind::JobArrival);
}

TEST_CASE("log_now entries follow the event being processed") {
    Engine engine;
    engine.set_handler([&](SimEvent& event) {
        if (event.kind == EventKind::JobArrival)
            engine.log_now(EventKind::JobStart, Payload{{"id", "j"}});
    });
    engine.schedule(4, EventKind::JobArrival, Payload{{"id", "j"}});
    const EventLog& log = engine.run_until(10);
    REQUIRE(log.size() == 2);
    CHECK(log.entries()[0].kind == EventKind::JobArrival);
    CHECK(log.entries()[1].kind == EventKind::JobStart);
    CHECK(log.entries()[1].t == 4);
}

TEST_CASE("identical schedules produce byte-identical logs") {
    const auto run = [] {
        Engine engine;
        engine.set_handler([&](SimEvent& event) {
            if (event.time == 5) engine.log_now(EventKind::JobStart, Payload{{"id", "x"}});
        });
        Rng rng(42);
        for (int i = 0; i < 20; ++i)
            engine.schedule(static_cast<SimTime>(rng.uniform_int(0, 50)), EventKind::JobArrival,
                            Payload{{"n", i}});
        return engine.run_until(60).to_jsonl();
    };
    CHECK(run() == run());
}

TEST_CASE("processed event times never decrease") {
    Engine engine;
    SimTime last = 0;
    bool monotone = true;
    engine.set_handler([&](SimEvent& event) {
        if (event.time < last) monotone = false;
        last = event.time;
        // Handlers may keep scheduling at or after the current time.
        if (event.time < 40) engine.schedule(event.time + 3, EventKind::JobEnd, Payload::object());
    });
    Rng rng(7);
    for (int i = 0; i < 50; ++i)
        engine.schedule(static_cast<SimTime>(rng.uniform_int(0, 30)), EventKind::JobArrival, Payload::object());
    engine.run_until(100);
    CHECK(monotone);
}

TEST_CASE("jsonl round-trips through the parser") {
    Engine engine;
    engine.schedule(3, EventKind::JobArrival, Payload{{"id", "j1"}, {"nodes", 2}});
    engine.schedule(9, EventKind::AutoscaleTick, Payload{{"action", "tick"}});
    const std::string text = engine.run_until(10).to_jsonl();
    std::istringstream in(text);
    const auto entries = EventLog::parse_jsonl(in);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].t == 3);
    CHECK(entries[0].payload.at("nodes") == 2);
    CHECK(entries[1].kind == EventKind::AutoscaleTick);
}

TEST_CASE("seeded rng streams are reproducible and seed-sensitive") {
    Rng a(42), b(42), c(1), d(2);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(c.next_u64() != d.next_u64());

    Rng e(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = e.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const auto v = e.uniform_int(3, 7);
        CHECK(v >= 3);
        CHECK(v <= 7);
        CHECK(e.exponential(10.0) >= 0.0);
    }
}
