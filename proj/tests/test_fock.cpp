#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "catbell/fock.hpp"

using namespace catbell;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Amplitude random_amplitude(std::mt19937_64& rng, double max_mag) {
    return std::polar(uniform(rng, 0.0, max_mag), uniform(rng, 0.0, 2.0 * kPi));
}

double identity_residual(const Eigen::MatrixXcd& m, int block) {
    REQUIRE(block > 0);
    Eigen::MatrixXcd r = m.topLeftCorner(block, block);
    r.diagonal().array() -= 1.0;
    return r.cwiseAbs().maxCoeff();
}

// Independent construction: exponentiate the truncated generator
// xi a^dag - conj(xi) a by scaling and squaring with a Taylor series.
// Only trustworthy well inside small cutoffs; used as a cross-check.
Eigen::MatrixXcd displacement_by_exponential(Amplitude xi, int dim) {
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        gen(n, n - 1) = xi * std::sqrt(double(n));        // xi a^dag
        gen(n - 1, n) = -std::conj(xi) * std::sqrt(double(n));  // -conj(xi) a
    }
    int squarings = 0;
    while (gen.cwiseAbs().maxCoeff() * dim > 0.25 && squarings < 40) {
        gen /= 2.0;
        ++squarings;
    }
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 1; k < 30; ++k) {
        term = (term * gen) / double(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

}  // namespace

TEST_CASE("cutoff rule") {
    CHECK(min_cutoff(0.0) == 32);
    CHECK(min_cutoff(3.0) == 47);  // ceil(9 + 18 + 20)
    CHECK_NOTHROW(require_cutoff(64, 3.0));
    CHECK_THROWS_AS(require_cutoff(8, 3.0), CutoffTooSmallError);
    CHECK_THROWS_AS(require_cutoff(40, 3.0), CutoffTooSmallError);
    CHECK_THROWS_AS(build_displacement({3.0, 0.0}, 32), CutoffTooSmallError);
    CHECK(reliable_dim(64, 1.0) == 32);
    CHECK(reliable_dim(64, 3.0) == 0);
}

TEST_CASE("displacement matrix: zero displacement is the identity") {
    const FockOperator d = build_displacement({0.0, 0.0}, 32);
    CHECK(identity_residual(d.matrix, 32) == 0.0);
}

TEST_CASE("displacement matrix: vacuum-to-vacuum element and coherent column") {
    const Amplitude alpha{0.9, -0.6};
    const FockOperator d = build_displacement(alpha, 48);
    CHECK(std::abs(d.matrix(0, 0) - std::exp(-std::norm(alpha) / 2.0)) < 1e-14);
    const Eigen::VectorXcd coh = detail::coherent_amplitudes(alpha, 48);
    CHECK((d.matrix.col(0) - coh).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("displacement matrix: unitary on the reliable sub-block") {
    for (const Amplitude alpha : {Amplitude{1.0, 0.0}, Amplitude{0.8, 0.9}, Amplitude{0.0, 1.5}}) {
        const FockOperator d = build_displacement(alpha, 64);
        const int block = reliable_dim(64, std::abs(alpha));
        const double residual =
            identity_residual((d.matrix.adjoint() * d.matrix).eval(), block);
        CHECK(residual < 1e-8);
    }
}

TEST_CASE("displacement matrix agrees with the exponential construction at small cutoff") {
    for (const Amplitude alpha : {Amplitude{0.5, 0.0}, Amplitude{0.8, 0.3}, Amplitude{0.0, 1.0}}) {
        const Eigen::MatrixXcd lag = detail::displacement_matrix(alpha, 16);
        const Eigen::MatrixXcd exp = displacement_by_exponential(alpha, 16);
        CHECK((lag - exp).topLeftCorner(6, 6).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("weyl composition holds at the matrix level, phase included") {
    const Amplitude xi{0.0, 1.0};
    const Amplitude xi2{1.0, 0.0};
    const WeylComposition comp = weyl_compose(xi, xi2);
    const int cutoff = 40;
    const FockOperator d1 = build_displacement(xi, cutoff);
    const FockOperator d2 = build_displacement(xi2, cutoff);
    const FockOperator dt = build_displacement(comp.total, cutoff);
    const Eigen::MatrixXcd residual =
        d1.matrix * d2.matrix - std::polar(1.0, comp.phase) * dt.matrix;
    const int block = reliable_dim(cutoff, std::max(std::abs(xi), std::abs(xi2)));
    REQUIRE(block > 0);
    CHECK(residual.topLeftCorner(block, block).cwiseAbs().maxCoeff() < 1e-8);
    // The phase itself matters: without it the residual is order one.
    const Eigen::MatrixXcd bare = d1.matrix * d2.matrix - dt.matrix;
    CHECK(bare.topLeftCorner(block, block).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("dichotomic operator: joint vacuum is a -1 eigenvector at z = 0") {
    const int cutoff = 32;
    const FockOperator a = build_dichotomic({0.0, 0.0}, cutoff, Mode::A);
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(cutoff * cutoff);
    vac(0) = 1.0;
    CHECK((a.matrix * vac + vac).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dichotomic operator: Hermitian, idempotent, commuting across modes") {
    const int cutoff = 40;
    const Amplitude z{1.0, 0.0};
    const Amplitude zp{1.0, 1.0};
    const FockOperator a = build_dichotomic(z, cutoff, Mode::A);
    const FockOperator ap = build_dichotomic(zp, cutoff, Mode::A);
    const FockOperator b = build_dichotomic(z, cutoff, Mode::B);

    CHECK((a.matrix - a.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((b.matrix - b.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    const int block = reliable_dim(cutoff, std::abs(z));
    CHECK(identity_residual((a.matrix * a.matrix).eval(), block * cutoff) < 1e-8);
    CHECK(identity_residual((b.matrix * b.matrix).eval(), block) < 1e-8);

    CHECK(commutator_norm(a, b) == 0.0);
    CHECK(commutator_norm(a, ap) > 1e-3);
}

TEST_CASE("joint-vacuum-projector reading: A and B fail to commute") {
    const int cutoff = 32;
    const FockOperator al = build_dichotomic_literal({1.0, 0.0}, cutoff, Mode::A);
    const FockOperator bl = build_dichotomic_literal({1.0, 0.0}, cutoff, Mode::B);
    CHECK(commutator_norm(al, bl) > 0.1);  // measured ~0.54
}

TEST_CASE("commutator_norm rejects mismatched dimensions") {
    const FockOperator a = build_dichotomic({1.0, 0.0}, 32, Mode::A);
    const FockOperator b = build_dichotomic({1.0, 0.0}, 34, Mode::B);
    CHECK_THROWS_AS(commutator_norm(a, b), DimensionMismatchError);
}

TEST_CASE("cat state vector: zero parameters give the joint vacuum") {
    const FockVector psi = build_cat_state(make_cat_state({0, 0}, {0, 0}, 0.0), 32);
    CHECK(std::abs(psi.amplitudes(0) - 1.0) < 1e-14);
    CHECK(psi.amplitudes.tail(32 * 32 - 1).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cat state vector: unit norm and branch overlap") {
    const auto state = make_cat_state({2.0, 0.0}, {2.0, 0.0}, kPi);
    const FockVector psi = build_cat_state(state, 64);
    CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-10);

    // <sigma (x) eta | psi> = N (1 + e^{i phi} e^{-2(|sigma|^2 + |eta|^2)})
    const Eigen::VectorXcd vs = detail::coherent_amplitudes(state.sigma, 64);
    const Eigen::VectorXcd ve = detail::coherent_amplitudes(state.eta, 64);
    Eigen::VectorXcd branch(64 * 64);
    for (int i = 0; i < 64; ++i) branch.segment(i * 64, 64) = vs(i) * ve;
    const std::complex<double> overlap = branch.dot(psi.amplitudes);
    const std::complex<double> expected =
        state.norm_factor *
        (1.0 + std::polar(1.0, state.phi) *
                   std::exp(-2.0 * (std::norm(state.sigma) + std::norm(state.eta))));
    CHECK(std::abs(overlap - expected) < 1e-9);
}

TEST_CASE("cat state vector rejects hand-rolled inconsistent parameters") {
    CatStateParams bad;
    bad.sigma = {1.0, 0.0};
    bad.eta = {1.0, 0.0};
    bad.phi = 0.0;
    bad.norm_factor = 0.9;  // wrong on purpose
    CHECK_THROWS_AS(build_cat_state(bad, 64), DegenerateStateError);
}

TEST_CASE("matrix route reproduces the closed-form correlator") {
    std::mt19937_64 rng(1234);
    const int cutoff = 48;
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        CatStateParams state;
        try {
            state = make_cat_state(random_amplitude(rng, 2.0), random_amplitude(rng, 2.0),
                                   uniform(rng, 0.0, 2.0 * kPi));
        } catch (const DegenerateStateError&) {
            continue;
        }
        const Amplitude z = random_amplitude(rng, 2.0);
        const Amplitude w = random_amplitude(rng, 2.0);
        worst = std::max(worst, std::abs(oracle_correlator(z, w, state, cutoff) -
                                         correlator(z, w, state).value));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("matrix route reproduces the projector expectations") {
    std::mt19937_64 rng(99);
    const int cutoff = 48;
    for (int i = 0; i < 10; ++i) {
        CatStateParams state;
        try {
            state = make_cat_state(random_amplitude(rng, 2.0), random_amplitude(rng, 2.0),
                                   uniform(rng, 0.0, 2.0 * kPi));
        } catch (const DegenerateStateError&) {
            continue;
        }
        const Amplitude z = random_amplitude(rng, 2.0);
        const Amplitude w = random_amplitude(rng, 2.0);
        CHECK(std::abs(oracle_projector_expectation(z, state, Mode::A, cutoff) -
                       projector_expectation(z, state, Mode::A)) < 1e-8);
        CHECK(std::abs(oracle_joint_projector_expectation(z, w, state, cutoff) -
                       joint_projector_expectation(z, w, state)) < 1e-8);
    }
}

TEST_CASE("doubling the cutoff leaves expectations unchanged to 1e-10") {
    std::mt19937_64 rng(55);
    for (int i = 0; i < 4; ++i) {
        const auto state = make_cat_state(random_amplitude(rng, 1.0), random_amplitude(rng, 1.0),
                                          uniform(rng, 0.5, 2.0 * kPi - 0.5));
        const Amplitude z = random_amplitude(rng, 1.0);
        const Amplitude w = random_amplitude(rng, 1.0);
        CHECK(std::abs(oracle_correlator(z, w, state, 32) - oracle_correlator(z, w, state, 64)) <
              1e-10);
    }
}
