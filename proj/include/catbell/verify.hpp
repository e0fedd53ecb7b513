#pragma once

// Cross-checks of every closed form against the Fock-matrix route, plus
// the structural identities of the dichotomic operators. This is what the
// CLI `verify` command runs; tests reuse individual checks.

#include <cstdint>
#include <string>
#include <vector>

#include "catbell/analytic.hpp"

namespace catbell {

struct VerifyOptions {
    int cutoff = 64;
    int samples = 100;
    std::uint64_t seed = 1;
    int workers = 1;
    bool literal_vacuum = false;  // also report the joint-vacuum reading of the observables
};

struct VerifyCheck {
    std::string name;
    double value = 0.0;       // measured deviation (or magnitude, for *-nonzero checks)
    double threshold = 0.0;
    bool require_above = false;  // pass when value > threshold instead of <=
    bool informational = false;  // reported but never fails the suite
    bool passed = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    bool all_passed() const;
    const VerifyCheck* first_failure() const;
};

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace catbell
