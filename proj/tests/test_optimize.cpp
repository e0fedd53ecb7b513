#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "catbell/fock.hpp"
#include "catbell/optimize.hpp"

using namespace catbell;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

bool results_identical(const OptimizationResult& a, const OptimizationResult& b) {
    return a.best_value == b.best_value && a.evaluations_used == b.evaluations_used &&
           a.best_settings.z == b.best_settings.z &&
           a.best_settings.z_prime == b.best_settings.z_prime &&
           a.best_settings.w == b.best_settings.w &&
           a.best_settings.w_prime == b.best_settings.w_prime &&
           a.best_state.sigma == b.best_state.sigma && a.best_state.eta == b.best_state.eta &&
           a.best_state.phi == b.best_state.phi && a.trace == b.trace;
}

}  // namespace

TEST_CASE("problem validation") {
    const auto vac = make_cat_state({0.0, 0.0}, {0.0, 0.0}, 0.0);
    CHECK_THROWS_AS(maximize_violation(fixed_state_problem(vac, 3.0, 50, 1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(maximize_violation(fixed_state_problem(vac, 3.0, 200, 0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(maximize_violation(fixed_state_problem(vac, 3.0, 200, 300, 0)),
                    std::invalid_argument);
}

TEST_CASE("vacuum state: the separable maximum 2 is found and never exceeded") {
    const auto vac = make_cat_state({0.0, 0.0}, {0.0, 0.0}, 0.0);
    const auto result = maximize_violation(fixed_state_problem(vac, 3.0, 8000, 8, 0));
    CHECK(result.best_value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(result.best_value <= 2.0 + 1e-6);
    CHECK(result.evaluations_used <= 8000);
}

TEST_CASE("zero-amplitude superpositions with free phase cannot violate") {
    // Coarse exhaustive sweep first: the state is the vacuum up to a global
    // phase, so |CHSH| <= 2 everywhere away from the degenerate direction.
    std::mt19937_64 rng(8);
    const auto vac_like = [&](double phi) { return make_cat_state({0, 0}, {0, 0}, phi); };
    double coarse_max = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double phi = uniform(rng, 0.0, 2.8);
        const MeasurementSettings s{{uniform(rng, -3, 3), uniform(rng, -3, 3)},
                                    {uniform(rng, -3, 3), uniform(rng, -3, 3)},
                                    {uniform(rng, -3, 3), uniform(rng, -3, 3)},
                                    {uniform(rng, -3, 3), uniform(rng, -3, 3)}};
        coarse_max = std::max(coarse_max, std::abs(chsh(s, vac_like(phi)).value));
    }
    CHECK(coarse_max <= 2.0 + 1e-6);

    OptimizationProblem p;
    for (std::size_t k = 0; k < 8; ++k) p.bounds[k] = {-3.0, 3.0};
    p.bounds[8] = {0.0, 0.0};
    p.bounds[9] = {0.0, 0.0};
    p.bounds[10] = {0.0, 0.0};
    p.bounds[11] = {0.0, 0.0};
    p.bounds[12] = {0.0, 2.8};  // stays clear of the degenerate direction
    p.budget = 8000;
    p.restarts = 8;
    p.seed = 2;
    const auto result = maximize_violation(p);
    CHECK(result.best_value <= 2.0 + 1e-6);
}

TEST_CASE("reference search finds a certified violation") {
    const auto result = maximize_violation(reference_problem(60000, 27, 1));
    CHECK(result.best_value > 2.05);
    CHECK(result.best_value <= kTsirelsonBound + 1e-9);

    // Re-certify here as well: closed form and matrix route agree.
    const double analytic = std::abs(chsh(result.best_settings, result.best_state).value);
    const double extent =
        std::max({std::abs(result.best_state.sigma), std::abs(result.best_state.eta),
                  std::abs(result.best_settings.z), std::abs(result.best_settings.z_prime),
                  std::abs(result.best_settings.w), std::abs(result.best_settings.w_prime)});
    const double oracle =
        std::abs(oracle_chsh(result.best_settings, result.best_state, min_cutoff(extent)));
    CHECK(std::abs(analytic - result.best_value) == 0.0);
    CHECK(std::abs(analytic - oracle) < 1e-7);
}

TEST_CASE("identical problem and seed reproduce the identical result") {
    const auto a = maximize_violation(reference_problem(6000, 4, 11));
    const auto b = maximize_violation(reference_problem(6000, 4, 11));
    CHECK(results_identical(a, b));

    const auto c = maximize_violation(reference_problem(6000, 4, 11), /*workers=*/2);
    CHECK(results_identical(a, c));

    const auto other_seed = maximize_violation(reference_problem(6000, 4, 12));
    CHECK(other_seed.best_value >= 0.0);  // different seed still certifies
}

TEST_CASE("incumbent trace is non-decreasing and within budget") {
    const auto result = maximize_violation(reference_problem(5000, 5, 3));
    REQUIRE(!result.trace.empty());
    double last = -1.0;
    long last_index = 0;
    for (const auto& [index, value] : result.trace) {
        CHECK(value >= last);
        CHECK(index > last_index);
        last = value;
        last_index = index;
    }
    CHECK(result.trace.back().second == result.best_value);
    CHECK(result.evaluations_used <= 5000);
    CHECK(last_index <= result.evaluations_used);
}

TEST_CASE("optimizer respects the search box") {
    const auto result = maximize_violation(reference_problem(4000, 4, 5));
    for (const Amplitude v : {result.best_settings.z, result.best_settings.z_prime,
                              result.best_settings.w, result.best_settings.w_prime}) {
        CHECK(std::abs(v.real()) <= 3.0);
        CHECK(std::abs(v.imag()) <= 3.0);
    }
    CHECK(result.best_state.sigma.real() >= 0.3);
    CHECK(result.best_state.sigma.real() <= 2.5);
    CHECK(result.best_state.sigma.imag() == 0.0);
    CHECK(result.best_state.eta.imag() == 0.0);
    CHECK(result.best_state.phi == kPi);
}

TEST_CASE("an all-degenerate region is rejected") {
    OptimizationProblem p;
    for (std::size_t k = 0; k < 8; ++k) p.bounds[k] = {-1.0, 1.0};
    p.bounds[8] = {0.0, 0.0};
    p.bounds[9] = {0.0, 0.0};
    p.bounds[10] = {0.0, 0.0};
    p.bounds[11] = {0.0, 0.0};
    p.bounds[12] = {kPi, kPi};  // exactly the vanishing superposition
    p.budget = 500;
    p.restarts = 2;
    CHECK_THROWS_AS(maximize_violation(p), DegenerateRegionError);
}

TEST_CASE("result JSON round-trip") {
    const auto result = maximize_violation(reference_problem(3000, 3, 9));
    const auto j = result_to_json(result);
    CHECK(j.at("best_value").get<double>() == result.best_value);
    CHECK(j.at("seed").get<std::uint64_t>() == 9);
    const auto back = result_from_json(j);
    CHECK(back.best_value == result.best_value);
    CHECK(back.best_settings.z == result.best_settings.z);
    CHECK(back.best_state.sigma == result.best_state.sigma);
    CHECK(back.evaluations_used == result.evaluations_used);
}
