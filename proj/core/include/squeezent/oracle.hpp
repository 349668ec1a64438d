#ifndef SQUEEZENT_ORACLE_HPP
#define SQUEEZENT_ORACLE_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "squeezent/complex_matrix.hpp"
#include "squeezent/density_matrix.hpp"
#include "squeezent/system_params.hpp"
#include "squeezent/tripartite_state.hpp"

namespace squeezent::oracle {

/// Truncated-Fock-space controls. Construction and propagation grow the
/// cutoff by growth_factor until the truncation-tail bound holds, up to the
/// hard ceiling.
struct TruncationConfig {
    std::size_t n_f = 64;
    double leak_tol = 1e-8;
    double growth_factor = 1.5;
    std::size_t ceiling = 4096;
    bool fixed_cutoff = false;  // disable auto-growth (diagnostics)

    void validate() const;
};

struct FockVector {
    std::vector<cplx> amp;

    std::size_t size() const { return amp.size(); }
    double norm() const;
    /// Probability mass in the top `levels` Fock levels.
    double tail_mass(std::size_t levels) const;
};

/// Displaced squeezed vacuum D(beta) S(r e^{i phi_xi}) |0>, built by applying
/// the generator exponentials to the vacuum vector (short Taylor slices).
/// Grows the cutoff until the top-band mass is below leak_tol.
FockVector coherent_squeezed(double beta, double r, double phi_xi,
                             const TruncationConfig& cfg = {});

/// Same construction at a caller-pinned cutoff; no growth, no tail check.
FockVector coherent_squeezed_fixed(double beta, double r, double phi_xi, std::size_t n_f);

/// Evolve one (qubit, cavity) branch of the initial vibrational state for
/// dimensionless time Omega under the displaced-oscillator Hamiltonian
/// b†b - u(b + b†), via eigendecomposition of the truncated tridiagonal
/// matrix. Throws if the post-propagation boundary tail exceeds
/// 10 * leak_tol (cutoff too small).
FockVector propagate(int q, int c, const FockVector& v0, const SystemParams& p,
                     const TruncationConfig& cfg = {});

/// Full brute-force evolved state: the four propagated branches with weight
/// 1/2, plus everything needed to compare against the closed-form pipeline.
struct OracleState {
    std::size_t n_f = 0;
    std::array<FockVector, 4> branches;  // branch order (q,c) = 00, 01, 10, 11
    ComplexMatrix gram;                  // gram(i,j) = <v_i | v_j>
    TripartiteState span_state;          // state in the orthonormalized branch span (vib dim 4)
    int rank = 0;
    DensityMatrix rho_qc;                // 4x4 reduction over the Fock factor
};

OracleState oracle_state(const SystemParams& p, const TruncationConfig& cfg = {});

}  // namespace squeezent::oracle

#endif
