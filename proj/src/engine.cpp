#include "burstsim/engine.hpp"

#include <ostream>
#include <sstream>

#include "burstsim/errors.hpp"

namespace burstsim {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::JobArrival: return "JobArrival";
        case EventKind::JobStart: return "JobStart";
        case EventKind::JobEnd: return "JobEnd";
        case EventKind::VmStageComplete: return "VmStageComplete";
        case EventKind::AutoscaleTick: return "AutoscaleTick";
        case EventKind::CancelRequest: return "CancelRequest";
    }
    return "Unknown";
}

EventKind event_kind_from_string(const std::string& name) {
    if (name == "JobArrival") return EventKind::JobArrival;
    if (name == "JobStart") return EventKind::JobStart;
    if (name == "JobEnd") return EventKind::JobEnd;
    if (name == "VmStageComplete") return EventKind::VmStageComplete;
    if (name == "AutoscaleTick") return EventKind::AutoscaleTick;
    if (name == "CancelRequest") return EventKind::CancelRequest;
    throw CorruptLog("unknown event kind: " + name);
}

void EventLog::append(SimTime t, EventKind kind, Payload payload) {
    entries_.push_back(LogEntry{t, kind, std::move(payload)});
}

void EventLog::to_jsonl(std::ostream& out) const {
    for (const LogEntry& entry : entries_) {
        Payload line;
        line["t"] = entry.t;
        line["kind"] = to_string(entry.kind);
        line["payload"] = entry.payload;
        out << line.dump() << '\n';
    }
}

std::string EventLog::to_jsonl() const {
    std::ostringstream out;
    to_jsonl(out);
    return out.str();
}

std::vector<LogEntry> EventLog::parse_jsonl(std::istream& in) {
    std::vector<LogEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Payload parsed;
        try {
            parsed = Payload::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("event log", line_no, e.what());
        }
        if (!parsed.contains("t") || !parsed.contains("kind") || !parsed.contains("payload"))
            throw CorruptLog("event log line " + std::to_string(line_no) + " missing t/kind/payload");
        entries.push_back(LogEntry{parsed["t"].get<SimTime>(),
                                   event_kind_from_string(parsed["kind"].get<std::string>()),
                                   parsed["payload"]});
    }
    return entries;
}

Engine::Token Engine::schedule(SimTime t, EventKind kind, Payload payload) {
    if (t < clock_)
        throw SchedulingInPast("event at t=" + std::to_string(t) + " is before clock t=" +
                               std::to_string(clock_));
    SimEvent event{t, next_sequence_++, kind, std::move(payload)};
    Token token = event.sequence;
    queue_.push(QueuedEvent{std::move(event)});
    return token;
}

void Engine::cancel(Token token) {
    cancelled_.insert(token);
}

void Engine::log_now(EventKind kind, Payload payload) {
    if (dispatching_) {
        deferred_.push_back(LogEntry{clock_, kind, std::move(payload)});
    } else {
        log_.append(clock_, kind, std::move(payload));
    }
}

SimTime Engine::next_event_time() {
    while (!queue_.empty() && cancelled_.count(queue_.top().event.sequence) > 0) {
        cancelled_.erase(queue_.top().event.sequence);
        queue_.pop();
    }
    return queue_.empty() ? kNever : queue_.top().event.time;
}

const EventLog& Engine::run_until(SimTime t_end) {
    while (!queue_.empty() && queue_.top().event.time <= t_end) {
        SimEvent event = queue_.top().event;
        queue_.pop();
        if (cancelled_.erase(event.sequence) > 0) continue;
        clock_ = event.time;
        deferred_.clear();
        dispatching_ = true;
        if (handler_) handler_(event);
        dispatching_ = false;
        // The processed event is logged first, then anything the handler
        // recorded synchronously, preserving causal order.
        log_.append(event.time, event.kind, std::move(event.payload));
        for (LogEntry& entry : deferred_) log_.append(entry.t, entry.kind, std::move(entry.payload));
        deferred_.clear();
    }
    if (t_end > clock_) clock_ = t_end;
    return log_;
}

}  // namespace burstsim
