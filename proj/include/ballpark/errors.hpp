#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ballpark {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two sketches (or counters) with different precision/seed/size were combined.
class ConfigError : public Error {
public:
    using Error::Error;
};

// An algorithm parameter is outside its documented range.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A text input could not be parsed; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Input exists but is unusable (empty graph, missing file, bad magic).
class InputError : public Error {
public:
    using Error::Error;
};

// The requested metric is undefined on this input.
class MetricError : public Error {
public:
    using Error::Error;
};

// A cooperative wall-clock budget ran out mid-computation.
class TimeBudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace ballpark
