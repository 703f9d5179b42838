#pragma once

#include <stdexcept>
#include <string>

namespace fairflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter outside the admissible range (theta < 1, capacity <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Graph-shape precondition violated: cycle in a support that must be acyclic,
// sink unreachable, parallel structure missing.
struct StructuralError : Error {
    using Error::Error;
};

// Enumeration or size budget exceeded (path limits and the like).
struct CapacityError : Error {
    using Error::Error;
};

// A supplied flow or instance fails consistency checks.
struct ValidationError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

// Operation not available for the given latency kind or data.
struct CapabilityError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace fairflow
