#pragma once

#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "burstsim/event.hpp"
#include "burstsim/time.hpp"

namespace burstsim {

// Deterministic discrete-event engine. Events dequeue in (time, sequence)
// order; the sequence counter makes the order total. Single-threaded: one
// engine per simulation instance.
class Engine {
public:
    using Handler = std::function<void(SimEvent&)>;
    using Token = std::uint64_t;

    SimTime clock() const { return clock_; }
    void set_handler(Handler handler) { handler_ = std::move(handler); }

    // Enqueues an event; returns a token usable with cancel().
    // Throws SchedulingInPast if t < clock().
    Token schedule(SimTime t, EventKind kind, Payload payload);

    // Removes a not-yet-processed event. Cancelled events are never
    // dispatched or logged. No-op if already processed.
    void cancel(Token token);

    // Appends an entry directly to the log at the current clock, ordered
    // after the event being processed. Used for state changes that happen
    // synchronously inside a handler (job starts, duplicate revocations).
    void log_now(EventKind kind, Payload payload);

    // Processes every event with time <= t_end; afterwards clock() == t_end
    // (or stays put if t_end is in the past). Returns the full log.
    const EventLog& run_until(SimTime t_end);

    // Timestamp of the next live event, or kNever if the queue is empty.
    // Prunes cancelled events from the front.
    SimTime next_event_time();

    const EventLog& log() const { return log_; }

private:
    struct QueuedEvent {
        SimEvent event;
        bool operator>(const QueuedEvent& other) const {
            if (event.time != other.event.time) return event.time > other.event.time;
            return event.sequence > other.event.sequence;
        }
    };

    SimTime clock_ = 0;
    std::uint64_t next_sequence_ = 0;
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue_;
    std::unordered_set<Token> cancelled_;
    std::vector<LogEntry> deferred_;  // log_now entries for the event in flight
    bool dispatching_ = false;
    EventLog log_;
    Handler handler_;
};

}  // namespace burstsim
