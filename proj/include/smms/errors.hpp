#pragma once

#include <stdexcept>
#include <string>

namespace smms {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto its exit statuses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed configuration text or unknown registry id.
class ParseError : public Error {
public:
    using Error::Error;
};

// A module precondition was violated: bad parameter range, non-positive
// input where positivity is required, mismatched spaces, ...
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A numerical solve failed (singular system, Newton stall, positivity loss).
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace smms
