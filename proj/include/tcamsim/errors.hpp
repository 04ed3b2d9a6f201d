#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tcamsim {

/// Root of every exception raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed a value outside an operation's domain (negative duration, bad threshold).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Row/column index or word length does not fit the array.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A device or array configuration cannot perform the requested operation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A cell holds an encoding that no write can produce (both devices conducting).
class CorruptedStateError : public Error {
public:
    using Error::Error;
};

/// A refresh policy would destroy stored data, or does not apply to the technology.
class PolicyError : public Error {
public:
    using Error::Error;
};

class NotApplicableError : public Error {
public:
    using Error::Error;
};

/// Calibration targets imply a non-physical parameter. `target()` names the offender.
class CalibrationError : public Error {
public:
    CalibrationError(std::string target, const std::string& what)
        : Error(target + ": " + what), target_(std::move(target)) {}
    [[nodiscard]] const std::string& target() const noexcept { return target_; }

private:
    std::string target_;
};

/// Malformed text input. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace tcamsim
