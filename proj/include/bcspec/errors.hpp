#pragma once

#include <stdexcept>
#include <string>

namespace bcspec {

// Raised when a caller hands in a value outside an operation's domain:
// non-unitary matrices, broken S^3 constraints, nonpositive windows, ...
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised by the numerical layers when a computation cannot be completed
// with the promised accuracy. The message names the offending bracket or
// check so the caller can report it verbatim.
class SolverDiagnostic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InconsistentRoot : public SolverDiagnostic {
public:
    using SolverDiagnostic::SolverDiagnostic;
};

} // namespace bcspec
