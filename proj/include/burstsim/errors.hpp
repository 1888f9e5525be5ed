#pragma once

#include <stdexcept>
#include <string>

namespace burstsim {

// Base type for every error raised by the simulator.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Event scheduled at a time earlier than the engine clock.
struct SchedulingInPast : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& where, std::size_t line, const std::string& what)
        : Error(where + ":" + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

struct DuplicateId : Error {
    using Error::Error;
};

struct NonPositiveField : Error {
    using Error::Error;
};

struct InvalidDistribution : Error {
    using Error::Error;
};

struct UnknownApp : Error {
    using Error::Error;
};

// Job requests more nodes than the target partition/pool can ever supply.
struct JobTooLarge : Error {
    using Error::Error;
};

struct IllegalTransition : Error {
    using Error::Error;
};

// VM placement infeasible on the physical hosts.
struct PoolExhausted : Error {
    using Error::Error;
};

struct AboveMax : Error {
    using Error::Error;
};

struct UnroutableJob : Error {
    using Error::Error;
};

struct CorruptLog : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// A runtime consistency check failed; maps to exit code 2 in the CLI.
struct InvariantViolation : Error {
    using Error::Error;
};

}  // namespace burstsim
