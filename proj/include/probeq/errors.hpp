#pragma once

#include <stdexcept>
#include <string>

namespace probeq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed instance document (bad JSON, bad indices, ...).
struct ParseError : Error {
    using Error::Error;
};

/// A precondition on an argument was violated.
struct InvalidArgument : Error {
    using Error::Error;
};

/// Request exceeds the configured memory / problem-size caps.
struct ResourceError : Error {
    using Error::Error;
};

/// An iterative numerical routine failed to converge.
struct NumericError : Error {
    using Error::Error;
};

/// File system failure (missing or unreadable input).
struct IoError : Error {
    using Error::Error;
};

} // namespace probeq
