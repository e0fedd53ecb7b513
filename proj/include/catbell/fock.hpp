#pragma once

// Brute-force verification engine. States and operators are built as dense
// complex matrices in a truncated number basis and every closed-form
// quantity of analytic.hpp is recomputed by direct linear algebra.
//
// Bipartite objects use the explicit Kronecker convention: joint index
// i = i_a * cutoff + i_b, so an operator O_a (x) O_b maps to kron(Oa, Ob).

#include <Eigen/Dense>
#include <complex>

#include "catbell/analytic.hpp"
#include "catbell/errors.hpp"

namespace catbell {

enum class ModeTag { Single, Bipartite };

struct FockVector {
    int cutoff = 0;
    Eigen::VectorXcd amplitudes;

    bool bipartite() const {
        return amplitudes.size() == static_cast<Eigen::Index>(cutoff) * cutoff;
    }
};

struct FockOperator {
    int cutoff = 0;
    ModeTag mode_tag = ModeTag::Single;
    Eigen::MatrixXcd matrix;
};

// Smallest admissible truncation for displacement magnitude B:
// max(32, ceil(B^2 + 6B + 20)). Coherent occupation is Poisson with mean
// B^2; this pushes the tail mass below 1e-12.
int min_cutoff(double magnitude);

// Throws CutoffTooSmallError when `cutoff` violates the rule for `magnitude`.
void require_cutoff(int cutoff, double magnitude);

// Dimension of the sub-block unaffected by truncation artifacts:
// cutoff - ceil(4 B sqrt(cutoff)), floored at zero. Matrix-identity
// residuals are asserted on this block only.
int reliable_dim(int cutoff, double magnitude);

namespace detail {
// Raw displacement matrix, no cutoff-rule check. Element (m, n) for m >= n is
// sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2) L_n^(m-n)(|alpha|^2), with the
// conjugate-transpose relation below the diagonal; evaluated via
// log-factorials and the associated-Laguerre three-term recurrence.
Eigen::MatrixXcd displacement_matrix(Amplitude alpha, int dim);

// Coherent amplitudes e^(-|alpha|^2/2) alpha^n / sqrt(n!), no rule check.
Eigen::VectorXcd coherent_amplitudes(Amplitude alpha, int dim);
}  // namespace detail

// Single-mode displacement operator in the truncated basis.
FockOperator build_displacement(Amplitude alpha, int cutoff);

// Single-mode coherent state |alpha>.
FockVector coherent_state(Amplitude alpha, int cutoff);

// Bipartite 1 - 2 |z><z| on the designated mode, identity on the other.
FockOperator build_dichotomic(Amplitude z, int cutoff, Mode mode);

// Bipartite |z><z| on the designated mode, identity on the other.
FockOperator build_projector(Amplitude z, int cutoff, Mode mode);

// The literal bipartite reading where the reflected projector is the joint
// vacuum |0,0><0,0|: D_mode^dag(z) (1 - 2|0,0><0,0|) D_mode(z). Kept to
// quantify how far that reading is from commuting A/B observables.
FockOperator build_dichotomic_literal(Amplitude z, int cutoff, Mode mode);

// Bipartite cat-state vector for validated CatStateParams.
FockVector build_cat_state(const CatStateParams& state, int cutoff);

// Max-entry magnitude of op1*op2 - op2*op1.
double commutator_norm(const FockOperator& op1, const FockOperator& op2);

// <v| M |v>.
std::complex<double> expectation(const FockOperator& op, const FockVector& v);

// Matrix-route counterparts of the closed forms, used by the verification
// suite and the optimizer's certification step. Cutoff must satisfy the
// rule for every magnitude involved.
double oracle_projector_expectation(Amplitude z, const CatStateParams& state, Mode mode,
                                    int cutoff);
double oracle_joint_projector_expectation(Amplitude z, Amplitude w, const CatStateParams& state,
                                          int cutoff);
double oracle_correlator(Amplitude z, Amplitude w, const CatStateParams& state, int cutoff);
double oracle_chsh(const MeasurementSettings& settings, const CatStateParams& state, int cutoff);

}  // namespace catbell
