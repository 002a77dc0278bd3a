#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace burstgate {

/// User/configuration errors: bad scenario files, bad traces, bad flags.
/// The CLI maps these to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal consistency failure (capacity invariant, conservation,
/// event-order totality). The CLI maps these to exit code 2.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class TraceParseError : public ConfigError {
public:
    TraceParseError(std::size_t line, const std::string& what)
        : ConfigError("trace line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class NonMonotonicTimestamp : public ConfigError {
public:
    explicit NonMonotonicTimestamp(std::size_t line)
        : ConfigError("trace line " + std::to_string(line) + ": timestamp decreases"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class EmptyTrace : public ConfigError {
public:
    explicit EmptyTrace(const std::string& path) : ConfigError("trace has no records: " + path) {}
};

class UnknownTableEntry : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnresolvableRate : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class OutOfTinyRange : public ConfigError {
public:
    explicit OutOfTinyRange(std::uint32_t packets)
        : ConfigError("tiny buffers are tens of packets; " + std::to_string(packets) +
                      " is outside [10, 99]") {}
};

class NonPositiveFlows : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class InvalidCompletion : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

class NoVoipFlows : public ConfigError {
public:
    NoVoipFlows() : ConfigError("scenario has no VoIP flows to score") {}
};

class BadEdges : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace burstgate
