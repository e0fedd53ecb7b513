#include "catbell/analytic.hpp"

#include <cmath>
#include <string>

namespace catbell {

namespace {

constexpr double kDegeneracyTol = 1e-12;

void require_finite(Amplitude v, const char* name) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

double abs2(Amplitude v) { return std::norm(v); }

// Round-off on cancelling Gaussians can push an expectation a hair below
// zero; clamp within the documented window only.
double clamp_expectation(double p) {
    if (p < 0.0 && p >= -1e-12) return 0.0;
    return p;
}

// Shared body of the single-mode projector expectation; (mu, nu) is
// (sigma, eta) for mode A and (eta, sigma) for mode B.
double projector_expectation_impl(Amplitude z, Amplitude mu, Amplitude nu, double phi,
                                  double norm_factor) {
    const double n2 = norm_factor * norm_factor;
    const double dm = abs2(z - mu);
    const double dp = abs2(z + mu);
    const double cross = 2.0 * std::exp(-2.0 * abs2(nu)) * std::exp(-(dm + dp) / 2.0) *
                         std::cos(phi + 2.0 * std::imag(std::conj(mu) * z));
    return clamp_expectation(n2 * (std::exp(-dm) + std::exp(-dp) + cross));
}

}  // namespace

std::complex<double> coherent_overlap(Amplitude u, Amplitude v) {
    require_finite(u, "u");
    require_finite(v, "v");
    return std::exp(std::conj(u) * v - (abs2(u) + abs2(v)) / 2.0);
}

WeylComposition weyl_compose(Amplitude xi, Amplitude xi2) {
    require_finite(xi, "xi");
    require_finite(xi2, "xi2");
    return {xi.imag() * xi2.real() - xi.real() * xi2.imag(), xi + xi2};
}

CatStateParams make_cat_state(Amplitude sigma, Amplitude eta, double phi) {
    require_finite(sigma, "sigma");
    require_finite(eta, "eta");
    if (!std::isfinite(phi)) throw std::invalid_argument("phi must be finite");

    const double denom = 1.0 + std::cos(phi) * std::exp(-2.0 * (abs2(sigma) + abs2(eta)));
    if (denom < kDegeneracyTol) {
        throw DegenerateStateError("cat-state branches cancel: normalization denominator " +
                                   std::to_string(denom) + " below 1e-12");
    }
    return {sigma, eta, phi, 1.0 / std::sqrt(2.0 * denom)};
}

double projector_expectation(Amplitude z, const CatStateParams& state, Mode mode) {
    require_finite(z, "z");
    if (mode == Mode::A) {
        return projector_expectation_impl(z, state.sigma, state.eta, state.phi,
                                          state.norm_factor);
    }
    return projector_expectation_impl(z, state.eta, state.sigma, state.phi, state.norm_factor);
}

double joint_projector_expectation(Amplitude z, Amplitude w, const CatStateParams& state) {
    require_finite(z, "z");
    require_finite(w, "w");
    const double n2 = state.norm_factor * state.norm_factor;
    const double zm = abs2(z - state.sigma);
    const double zp = abs2(z + state.sigma);
    const double wm = abs2(w - state.eta);
    const double wp = abs2(w + state.eta);
    const double phase = state.phi + 2.0 * std::imag(std::conj(state.sigma) * z) +
                         2.0 * std::imag(std::conj(state.eta) * w);
    const double cross = 2.0 * std::exp(-(zm + zp + wm + wp) / 2.0) * std::cos(phase);
    return clamp_expectation(n2 * (std::exp(-zm - wm) + std::exp(-zp - wp) + cross));
}

CorrelatorValue correlator(Amplitude z, Amplitude w, const CatStateParams& state) {
    const double pa = projector_expectation(z, state, Mode::A);
    const double pb = projector_expectation(w, state, Mode::B);
    const double pj = joint_projector_expectation(z, w, state);
    return {1.0 - 2.0 * pa - 2.0 * pb + 4.0 * pj};
}

ChshValue chsh(const MeasurementSettings& settings, const CatStateParams& state) {
    const double e_zw = correlator(settings.z, settings.w, state).value;
    const double e_zpw = correlator(settings.z_prime, settings.w, state).value;
    const double e_zwp = correlator(settings.z, settings.w_prime, state).value;
    const double e_zpwp = correlator(settings.z_prime, settings.w_prime, state).value;
    const double value = e_zw + e_zpw + e_zwp - e_zpwp;

    if (std::abs(value) > kTsirelsonBound + 1e-6) {
        throw TsirelsonViolationError("CHSH value " + std::to_string(value) +
                                      " exceeds the quantum bound 2*sqrt(2); this indicates "
                                      "an implementation bug");
    }
    const auto cls =
        std::abs(value) > 2.0 ? Classification::Violating : Classification::Classical;
    return {value, cls};
}

}  // namespace catbell
