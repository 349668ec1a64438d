#ifndef SQUEEZENT_CLOSEDFORM_HPP
#define SQUEEZENT_CLOSEDFORM_HPP

#include <array>

#include "squeezent/complex_matrix.hpp"
#include "squeezent/system_params.hpp"
#include "squeezent/tripartite_state.hpp"

namespace squeezent::closedform {

/// sin/cos of the evolution phase with exact handling of integer multiples of
/// pi. Integer multiples (within a few ulp) are snapped so that sin(Omega)
/// vanishes identically there: the beta-dependent phases and, at even
/// multiples, the squeezing function must be exactly zero, not ~1e-16.
struct OmegaTrig {
    double sin_omega;
    double cos_omega;
    double one_minus_cos;
    double kerr;  // Omega - sin(Omega)
};
OmegaTrig omega_trig(double omega);

/// Squeezing function controlling the overlap decay between the displaced
/// branch states. Always >= 0.
double squeeze_f(double r, double phi_xi, double omega);

/// Analytic inner product <xi_u1 | xi_u2> between two evolved branch states
/// with displacement couplings u1, u2. |overlap| <= 1.
cplx overlap(double u1, double u2, const SystemParams& p);

/// Expansion of the four branch states over the orthonormalized vibrational
/// basis. Row 0 is implicitly (1, 0, 0, 0); a, b, c are the rows of the
/// remaining branches. rank counts the linearly independent branch states;
/// coefficients with basis index >= rank are exactly zero and the
/// normalizers a1, b2, c3 are real and >= 0.
struct OrthoCoefficients {
    std::array<cplx, 2> a{};
    std::array<cplx, 3> b{};
    std::array<cplx, 4> c{};
    int rank = 0;

    /// All four rows padded to length 4 (row 0 = (1,0,0,0)).
    std::array<std::array<cplx, 4>, 4> rows() const;
};

OrthoCoefficients ortho_coefficients(const SystemParams& p);

/// Evolved tripartite state: each (qubit, cavity) branch carries 1/2 times
/// its coefficient row over the orthonormal vibrational basis.
TripartiteState evolved_state(const SystemParams& p);

/// Squared overlap with the maximally entangled state of local rank (2,2,4):
/// (1 + a1 + b2 + c3)^2 / 16, in [1/16, 1].
double fidelity_max(const SystemParams& p);

/// Closed-form qubit-resonator negativity at g = 0: sqrt(1 - exp(-8 lambda^2 f)).
/// Rejects g != 0.
double limit_negativity_qv(const SystemParams& p);

/// Closed-form cavity-resonator negativity at lambda = 0: sqrt(1 - exp(-2 g^2 f)).
/// Rejects lambda != 0.
double limit_negativity_cv(const SystemParams& p);

namespace detail {
/// Gram-Schmidt rows for four unit vectors with the given Gram matrix
/// G(i,j) = <psi_i|psi_j>. A vector whose overlap modulus with an earlier one
/// reaches 1 - dup_tol is treated as a pure-phase duplicate; independent
/// residual norms below eps collapse as well.
struct GramSchmidtResult {
    std::array<std::array<cplx, 4>, 4> rows{};
    int rank = 0;
};
GramSchmidtResult gram_schmidt(const ComplexMatrix& gram, double dup_tol = 1e-10,
                               double eps = 1e-12);
}  // namespace detail

}  // namespace squeezent::closedform

#endif
