#pragma once

#include <stdexcept>
#include <string>

namespace qstar {

/// Shape mismatch between operands (non-square input, incompatible sizes).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative kernel failed to converge or produced an unusable result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// edge_solution was asked for a null vector at a k that is not a root.
class NotARootError : public std::runtime_error {
public:
    NotARootError(const std::string& what, double gap)
        : std::runtime_error(what), singular_value_gap(gap) {}
    double singular_value_gap;
};

/// Root counts agree at both ends of the alpha bracket; no EP inside.
class NoTransitionError : public std::runtime_error {
public:
    NoTransitionError(const std::string& what, int count_lo, int count_hi)
        : std::runtime_error(what), count_at_lo(count_lo), count_at_hi(count_hi) {}
    int count_at_lo;
    int count_at_hi;
};

/// Winding number failed the integer test after boundary refinement.
class ContourResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// spectral_metric precondition violated (complex/degenerate spectrum, bad kappa).
class SpectralPreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qstar
