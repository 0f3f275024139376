#pragma once

#include <stdexcept>
#include <string>

namespace fg {

/// Invalid parameter or domain data (violated precondition named in what()).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Vector/matrix size disagreement in pointwise symbol evaluation.
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two fields that must share a grid do not.
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation requested outside the exponent range it is defined for.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Admissible time step fell below dt_min.
struct StepTooSmall : std::runtime_error {
    StepTooSmall(const std::string& msg, double t, double dt)
        : std::runtime_error(msg), time(t), dt_required(dt) {}
    double time;
    double dt_required;
};

/// Shooting bracket does not straddle a sign change.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted before the requested tolerance.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Not enough samples in the requested window.
struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A comparison was requested whose initial ordering does not hold.
struct PreconditionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Barrier evaluated outside its validity window.
struct OutOfWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fg
