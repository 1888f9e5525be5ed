#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "burstsim/time.hpp"

namespace burstsim {

// Payloads use ordered JSON so a fixed construction order yields a fixed
// serialization; the event log's byte-identity guarantees depend on that.
using Payload = nlohmann::ordered_json;

enum class EventKind {
    JobArrival,
    JobStart,
    JobEnd,
    VmStageComplete,
    AutoscaleTick,
    CancelRequest,
};

const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& name);

struct SimEvent {
    SimTime time = 0;
    std::uint64_t sequence = 0;  // tie-breaker; global monotone counter
    EventKind kind = EventKind::JobArrival;
    Payload payload;
};

struct LogEntry {
    SimTime t = 0;
    EventKind kind = EventKind::JobArrival;
    Payload payload;
};

// Append-only record of everything that happened, in processing order.
// Identical (config, seed) runs produce byte-identical JSONL exports.
class EventLog {
public:
    void append(SimTime t, EventKind kind, Payload payload);
    const std::vector<LogEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // One event per line: {"t":..,"kind":"..","payload":{..}}.
    void to_jsonl(std::ostream& out) const;
    std::string to_jsonl() const;

    static std::vector<LogEntry> parse_jsonl(std::istream& in);

private:
    std::vector<LogEntry> entries_;
};

}  // namespace burstsim
