#ifndef SQUEEZENT_MEASURES_HPP
#define SQUEEZENT_MEASURES_HPP

#include "squeezent/density_matrix.hpp"
#include "squeezent/tripartite_state.hpp"

namespace squeezent::measures {

enum class Pair { qv, cv, qc };

/// Reduced density matrix of a pure tripartite state over the named pair,
/// computed by tensor contraction. Subsystem order in the output follows the
/// global convention (qubit, cavity, vibration).
DensityMatrix reduce_pure(const TripartiteState& state, Pair pair);

/// Negativity over a bipartite density matrix: sum of (|eta| - eta) over the
/// eigenvalues of the partial transpose, i.e. twice the absolute sum of the
/// negative ones. 1 for Bell states, 0 for PPT states.
double negativity(const DensityMatrix& rho);

/// Two-qubit concurrence.
double concurrence(const DensityMatrix& rho);

/// Concurrence of assistance: sum of the square roots of the same spectrum
/// the concurrence uses.
double coa(const DensityMatrix& rho);

/// Monogamy residuals on a two-qubit reduction. Values within -1e-9 of zero
/// clamp to zero; beyond -1e-6 they signal an invalid input regime and throw.
double tau_sq(const DensityMatrix& rho_qc);
double chi_sq(const DensityMatrix& rho_qc);

struct MeasureSet {
    double N_qv = 0.0;
    double N_cv = 0.0;
    double N_qc = 0.0;
    double C_qc = 0.0;
    double Ca_qc = 0.0;
    double tau_sq = 0.0;
    double chi_sq = 0.0;
};

MeasureSet measure_all(const TripartiteState& state);

/// Concurrence, CoA, negativity and both residuals of a 2x2 reduction in one
/// shot (shared spectrum work). Used by measure_all and the dissipative
/// pipeline.
struct QcMeasures {
    double C = 0.0;
    double Ca = 0.0;
    double N = 0.0;
    double tau_sq = 0.0;
    double chi_sq = 0.0;
};
QcMeasures qc_measures(const DensityMatrix& rho_qc);

}  // namespace squeezent::measures

#endif
