#include "catbell/fock.hpp"

#include <cmath>
#include <string>

namespace catbell {

namespace {

double max_settings_magnitude(const MeasurementSettings& s) {
    return std::max(std::max(std::abs(s.z), std::abs(s.z_prime)),
                    std::max(std::abs(s.w), std::abs(s.w_prime)));
}

void require_valid_state(const CatStateParams& state) {
    const double denom =
        1.0 + std::cos(state.phi) * std::exp(-2.0 * (std::norm(state.sigma) + std::norm(state.eta)));
    const double residual = state.norm_factor * state.norm_factor * 2.0 * denom - 1.0;
    if (!(state.norm_factor > 0.0) || std::abs(residual) > 1e-12) {
        throw DegenerateStateError("CatStateParams normalization inconsistent; construct via "
                                   "make_cat_state");
    }
}

Eigen::MatrixXcd kron_single(const Eigen::MatrixXcd& single, int cutoff, Mode mode) {
    const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) * cutoff;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    if (mode == Mode::A) {
        // kron(S, I): block (i, j) is S(i, j) * I
        for (int i = 0; i < cutoff; ++i)
            for (int j = 0; j < cutoff; ++j) {
                const auto v = single(i, j);
                if (v == std::complex<double>{}) continue;
                for (int k = 0; k < cutoff; ++k)
                    out(static_cast<Eigen::Index>(i) * cutoff + k,
                        static_cast<Eigen::Index>(j) * cutoff + k) = v;
            }
    } else {
        // kron(I, S): diagonal blocks all equal to S
        for (int b = 0; b < cutoff; ++b)
            out.block(static_cast<Eigen::Index>(b) * cutoff, static_cast<Eigen::Index>(b) * cutoff,
                      cutoff, cutoff) = single;
    }
    return out;
}

}  // namespace

int min_cutoff(double magnitude) {
    const double rule = magnitude * magnitude + 6.0 * magnitude + 20.0;
    return std::max(32, static_cast<int>(std::ceil(rule)));
}

void require_cutoff(int cutoff, double magnitude) {
    if (cutoff < 2) throw CutoffTooSmallError("cutoff must be at least 2");
    const int needed = min_cutoff(magnitude);
    if (cutoff < needed) {
        throw CutoffTooSmallError("cutoff " + std::to_string(cutoff) +
                                  " too small for displacement magnitude " +
                                  std::to_string(magnitude) + "; need at least " +
                                  std::to_string(needed));
    }
}

int reliable_dim(int cutoff, double magnitude) {
    const int margin = static_cast<int>(std::ceil(4.0 * magnitude * std::sqrt(double(cutoff))));
    return std::max(0, cutoff - margin);
}

namespace detail {

Eigen::MatrixXcd displacement_matrix(Amplitude alpha, int dim) {
    if (dim < 1) throw CutoffTooSmallError("displacement matrix dimension must be positive");
    const double x = std::norm(alpha);
    if (x == 0.0) return Eigen::MatrixXcd::Identity(dim, dim);

    Eigen::MatrixXcd d(dim, dim);
    const double log_mag = std::log(std::abs(alpha));
    const double theta = std::arg(alpha);
    // Walk each diagonal offset k = |m - n|; the associated-Laguerre value
    // L_p^(k)(x) advances with p along the diagonal.
    for (int k = 0; k < dim; ++k) {
        const std::complex<double> lower_phase = std::polar(1.0, k * theta);
        const std::complex<double> upper_phase =
            std::polar(k % 2 == 0 ? 1.0 : -1.0, -k * theta);
        double lag_prev = 0.0;
        double lag = 1.0;  // L_0^(k)(x)
        for (int p = 0; p + k < dim; ++p) {
            if (p == 1) {
                lag_prev = lag;
                lag = 1.0 + k - x;
            } else if (p >= 2) {
                const double next =
                    ((2.0 * (p - 1) + 1.0 + k - x) * lag - (p - 1.0 + k) * lag_prev) / p;
                lag_prev = lag;
                lag = next;
            }
            const double log_pref = 0.5 * (std::lgamma(p + 1.0) - std::lgamma(p + k + 1.0)) +
                                    k * log_mag - x / 2.0;
            const double pref = std::exp(log_pref) * lag;
            d(p + k, p) = pref * lower_phase;
            if (k > 0) d(p, p + k) = pref * upper_phase;
        }
    }
    return d;
}

Eigen::VectorXcd coherent_amplitudes(Amplitude alpha, int dim) {
    if (dim < 1) throw CutoffTooSmallError("coherent vector dimension must be positive");
    Eigen::VectorXcd v(dim);
    v(0) = std::exp(-std::norm(alpha) / 2.0);
    for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
    return v;
}

}  // namespace detail

FockOperator build_displacement(Amplitude alpha, int cutoff) {
    require_cutoff(cutoff, std::abs(alpha));
    return {cutoff, ModeTag::Single, detail::displacement_matrix(alpha, cutoff)};
}

FockVector coherent_state(Amplitude alpha, int cutoff) {
    require_cutoff(cutoff, std::abs(alpha));
    return {cutoff, detail::coherent_amplitudes(alpha, cutoff)};
}

FockOperator build_projector(Amplitude z, int cutoff, Mode mode) {
    require_cutoff(cutoff, std::abs(z));
    const Eigen::VectorXcd v = detail::coherent_amplitudes(z, cutoff);
    const Eigen::MatrixXcd p = v * v.adjoint();
    return {cutoff, ModeTag::Bipartite, kron_single(p, cutoff, mode)};
}

FockOperator build_dichotomic(Amplitude z, int cutoff, Mode mode) {
    require_cutoff(cutoff, std::abs(z));
    const Eigen::VectorXcd v = detail::coherent_amplitudes(z, cutoff);
    Eigen::MatrixXcd s = -2.0 * (v * v.adjoint());
    s.diagonal().array() += 1.0;
    return {cutoff, ModeTag::Bipartite, kron_single(s, cutoff, mode)};
}

FockOperator build_dichotomic_literal(Amplitude z, int cutoff, Mode mode) {
    require_cutoff(cutoff, std::abs(z));
    // D_mode^dag(z) |0,0> = |-z> on the displaced mode, vacuum on the other,
    // so the conjugated operator is 1 - 2 |u><u| with that product vector.
    Eigen::VectorXcd moved = detail::coherent_amplitudes(-z, cutoff);
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(cutoff);
    vac(0) = 1.0;
    const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) * cutoff;
    Eigen::VectorXcd u(dim);
    const Eigen::VectorXcd& first = (mode == Mode::A) ? moved : vac;
    const Eigen::VectorXcd& second = (mode == Mode::A) ? vac : moved;
    for (int i = 0; i < cutoff; ++i)
        u.segment(static_cast<Eigen::Index>(i) * cutoff, cutoff) = first(i) * second;
    Eigen::MatrixXcd m = -2.0 * (u * u.adjoint());
    m.diagonal().array() += 1.0;
    return {cutoff, ModeTag::Bipartite, std::move(m)};
}

FockVector build_cat_state(const CatStateParams& state, int cutoff) {
    require_valid_state(state);
    require_cutoff(cutoff, std::max(std::abs(state.sigma), std::abs(state.eta)));
    const Eigen::VectorXcd sp = detail::coherent_amplitudes(state.sigma, cutoff);
    const Eigen::VectorXcd ep = detail::coherent_amplitudes(state.eta, cutoff);
    const Eigen::VectorXcd sm = detail::coherent_amplitudes(-state.sigma, cutoff);
    const Eigen::VectorXcd em = detail::coherent_amplitudes(-state.eta, cutoff);
    const std::complex<double> branch_phase = std::polar(1.0, state.phi);

    const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) * cutoff;
    Eigen::VectorXcd psi(dim);
    for (int i = 0; i < cutoff; ++i)
        psi.segment(static_cast<Eigen::Index>(i) * cutoff, cutoff) =
            state.norm_factor * (sp(i) * ep + branch_phase * sm(i) * em);
    return {cutoff, std::move(psi)};
}

double commutator_norm(const FockOperator& op1, const FockOperator& op2) {
    if (op1.matrix.rows() != op2.matrix.rows() || op1.matrix.cols() != op2.matrix.cols()) {
        throw DimensionMismatchError("commutator operands have different dimensions");
    }
    const Eigen::MatrixXcd c = op1.matrix * op2.matrix - op2.matrix * op1.matrix;
    return c.cwiseAbs().maxCoeff();
}

std::complex<double> expectation(const FockOperator& op, const FockVector& v) {
    if (op.matrix.rows() != v.amplitudes.size()) {
        throw DimensionMismatchError("operator and vector dimensions differ");
    }
    return v.amplitudes.dot(op.matrix * v.amplitudes);
}

double oracle_projector_expectation(Amplitude z, const CatStateParams& state, Mode mode,
                                    int cutoff) {
    const FockVector psi = build_cat_state(state, cutoff);
    return expectation(build_projector(z, cutoff, mode), psi).real();
}

double oracle_joint_projector_expectation(Amplitude z, Amplitude w, const CatStateParams& state,
                                          int cutoff) {
    const FockVector psi = build_cat_state(state, cutoff);
    const FockOperator pa = build_projector(z, cutoff, Mode::A);
    const FockOperator pb = build_projector(w, cutoff, Mode::B);
    // <psi| Pa Pb |psi> without forming the matrix product; Pa is Hermitian.
    return (pa.matrix * psi.amplitudes).dot(pb.matrix * psi.amplitudes).real();
}

double oracle_correlator(Amplitude z, Amplitude w, const CatStateParams& state, int cutoff) {
    const FockVector psi = build_cat_state(state, cutoff);
    const FockOperator a = build_dichotomic(z, cutoff, Mode::A);
    const FockOperator b = build_dichotomic(w, cutoff, Mode::B);
    return (a.matrix * psi.amplitudes).dot(b.matrix * psi.amplitudes).real();
}

double oracle_chsh(const MeasurementSettings& settings, const CatStateParams& state, int cutoff) {
    require_cutoff(cutoff, std::max(max_settings_magnitude(settings),
                                    std::max(std::abs(state.sigma), std::abs(state.eta))));
    return oracle_correlator(settings.z, settings.w, state, cutoff) +
           oracle_correlator(settings.z_prime, settings.w, state, cutoff) +
           oracle_correlator(settings.z, settings.w_prime, state, cutoff) -
           oracle_correlator(settings.z_prime, settings.w_prime, state, cutoff);
}

}  // namespace catbell
