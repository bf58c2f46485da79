#pragma once

#include <stdexcept>
#include <string>

namespace normcount {

// Bad input: malformed specs, out-of-range arguments.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A standing hypothesis of the counting problem does not hold for the input
// (no admissible base point, field not flagged as a PID, ...). The CLI maps
// this to exit code 2.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Memory budget or work cap exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace normcount
