#pragma once

// Derivative-free maximization of |CHSH| over measurement settings and,
// optionally, the cat-state parameters. Multi-start Nelder-Mead simplex
// seeded from a deterministic low-discrepancy sample of the bounds;
// identical (problem, seed) always reproduces the identical result.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "catbell/analytic.hpp"

namespace catbell {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool pinned() const { return hi - lo < 1e-15; }
};

// Parameter vector layout (13 slots):
//   0..7  Re/Im of z, z', w, w'
//   8..12 Re(sigma), Im(sigma), Re(eta), Im(eta), phi
// With a fixed state only the first 8 are active; a pinned interval
// (lo == hi) freezes a dimension at that value.
struct OptimizationProblem {
    std::optional<CatStateParams> fixed_state;
    std::array<Interval, 13> bounds{};
    long budget = 20000;   // max objective evaluations, >= 100
    int restarts = 8;      // >= 1
    std::uint64_t seed = 0;

    std::size_t dimensions() const { return fixed_state ? 8 : 13; }
};

// Settings bounded by |Re|, |Im| <= settings_box on all four displacements.
OptimizationProblem fixed_state_problem(const CatStateParams& state, double settings_box = 3.0,
                                        long budget = 20000, int restarts = 8,
                                        std::uint64_t seed = 0);

// The repository's documented search: sigma = alpha, eta = omega real in
// [0.3, 2.5], phi pinned to pi, settings Re/Im in [-3, 3].
OptimizationProblem reference_problem(long budget = 200000, int restarts = 64,
                                      std::uint64_t seed = 1);

struct OptimizationResult {
    double best_value = 0.0;
    MeasurementSettings best_settings;
    CatStateParams best_state;
    long evaluations_used = 0;
    std::uint64_t seed = 0;
    // (evaluation index, incumbent |CHSH|) at every improvement; non-decreasing.
    std::vector<std::pair<long, double>> trace;
};

// Maximizes |chsh| over the active dimensions. The returned best value is
// re-derived from scratch through both the closed forms and the Fock-matrix
// oracle; disagreement beyond 1e-7 throws CertificationError. Throws
// DegenerateRegionError when every start point is invalid.
OptimizationResult maximize_violation(const OptimizationProblem& problem, int workers = 1);

// {best_value, settings, state, evaluations_used, seed} with re/im pairs.
nlohmann::json result_to_json(const OptimizationResult& result);
OptimizationResult result_from_json(const nlohmann::json& j);

}  // namespace catbell
