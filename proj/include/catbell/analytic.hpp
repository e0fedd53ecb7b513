#pragma once

// Closed-form evaluation of coherent-state overlaps, displacement
// composition, two-mode cat-state normalization, vacuum-projector
// expectations and the Bell-CHSH combination. Everything here is a pure
// function of its inputs; no truncation, no matrices.

#include <complex>

#include "catbell/errors.hpp"

namespace catbell {

using Amplitude = std::complex<double>;

inline constexpr double kTsirelsonBound = 2.8284271247461903;  // 2*sqrt(2)

// Which oscillator mode an operator acts on.
enum class Mode { A, B };

enum class Classification { Classical, Violating };

// Two-mode cat state: N * (|sigma>|eta> + e^{i phi} |-sigma>|-eta>).
// norm_factor is the N that makes the state unit-norm; construct through
// make_cat_state so the degenerate direction is rejected.
struct CatStateParams {
    Amplitude sigma;
    Amplitude eta;
    double phi = 0.0;
    double norm_factor = 0.0;
};

// The four displacements parameterizing the dichotomic observables.
struct MeasurementSettings {
    Amplitude z;
    Amplitude z_prime;
    Amplitude w;
    Amplitude w_prime;
};

// Expectation of a +/-1-eigenvalue observable pair; |value| <= 1.
struct CorrelatorValue {
    double value = 0.0;
};

struct ChshValue {
    double value = 0.0;
    Classification classification = Classification::Classical;

    bool violating() const { return classification == Classification::Violating; }
};

// Result of composing two displacements: D(xi) D(xi2) = e^{i phase} D(total).
struct WeylComposition {
    double phase = 0.0;
    Amplitude total;
};

// <u|v> = exp(conj(u) v - |u|^2/2 - |v|^2/2).
std::complex<double> coherent_overlap(Amplitude u, Amplitude v);

WeylComposition weyl_compose(Amplitude xi, Amplitude xi2);

// Throws DegenerateStateError when the two branches cancel (normalization
// denominator below 1e-12).
CatStateParams make_cat_state(Amplitude sigma, Amplitude eta, double phi);

// <psi| |z><z| on `mode` (x) identity on the other |psi>, in [0, 1].
double projector_expectation(Amplitude z, const CatStateParams& state, Mode mode);

// <psi| (|z><z| on A) (x) (|w><w| on B) |psi>.
double joint_projector_expectation(Amplitude z, Amplitude w, const CatStateParams& state);

// E(z, w) = <psi| A(z) B(w) |psi> with A(z) = 1 - 2|z><z| (x) 1 and
// B(w) = 1 (x) (1 - 2|w><w|).
CorrelatorValue correlator(Amplitude z, Amplitude w, const CatStateParams& state);

// E(z,w) + E(z',w) + E(z,w') - E(z',w'); classified as violating when
// |value| > 2. Throws TsirelsonViolationError past 2*sqrt(2) + 1e-6.
ChshValue chsh(const MeasurementSettings& settings, const CatStateParams& state);

}  // namespace catbell
