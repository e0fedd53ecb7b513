#pragma once

#include <stdexcept>
#include <string>

namespace catbell {

// Cat-state superposition whose branches cancel: the normalization
// denominator of the two-branch state drops below tolerance.
struct DegenerateStateError : std::domain_error {
    explicit DegenerateStateError(const std::string& what) : std::domain_error(what) {}
};

// Requested Fock truncation is below the selection rule for the largest
// displacement magnitude involved.
struct CutoffTooSmallError : std::invalid_argument {
    explicit CutoffTooSmallError(const std::string& what) : std::invalid_argument(what) {}
};

struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// A CHSH value above the quantum bound. Signals an implementation bug,
// not physics.
struct TsirelsonViolationError : std::logic_error {
    explicit TsirelsonViolationError(const std::string& what) : std::logic_error(what) {}
};

struct EmptyScanError : std::invalid_argument {
    explicit EmptyScanError(const std::string& what) : std::invalid_argument(what) {}
};

// Every optimizer start point fell on an invalid (degenerate) state.
struct DegenerateRegionError : std::domain_error {
    explicit DegenerateRegionError(const std::string& what) : std::domain_error(what) {}
};

// Analytic value and matrix-oracle recomputation of a reported optimum
// disagree beyond tolerance.
struct CertificationError : std::logic_error {
    explicit CertificationError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace catbell
