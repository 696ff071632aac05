// error.hpp: exception types shared by all mhdlab modules.
#pragma once

#include <stdexcept>
#include <string>

namespace mhdlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Two fields that must share a grid do not.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// An operation's documented precondition does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A time lies outside the horizon on which a bound is asserted.
class HorizonError : public Error {
public:
    using Error::Error;
};

/// A segment scale exceeds half the box period.
class ScaleError : public Error {
public:
    using Error::Error;
};

/// No admissible constant was found below the search cap.
class CalibrationError : public Error {
public:
    CalibrationError(const std::string& what, std::size_t sample_index)
        : Error(what), sample_index_(sample_index) {}

    /// Index into the calibration sample of the first violating pair.
    std::size_t sample_index() const noexcept { return sample_index_; }

private:
    std::size_t sample_index_;
};

/// Malformed or out-of-range configuration text; carries the line number.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Snapshot file that cannot be decoded.
class SnapshotError : public Error {
public:
    using Error::Error;
};

} // namespace mhdlab
