#ifndef SQUEEZENT_DME_HPP
#define SQUEEZENT_DME_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "squeezent/density_matrix.hpp"
#include "squeezent/numkit.hpp"
#include "squeezent/system_params.hpp"

namespace squeezent::dme {

/// Decay rates, all scaled by the vibrational frequency. Exactly one of
/// qubit_dephasing (used as-is) or qubit_pure_dephasing (dressed by
/// 4 gamma lambda^2 / ln((n_v+1)/n_v)) may be supplied.
struct DissipationParams {
    double kappa = 0.0;         // cavity decay
    double gamma = 0.0;         // resonator decay
    double qubit_relax = 0.0;   // qubit relaxation
    std::optional<double> qubit_dephasing;       // dressed dephasing, direct
    std::optional<double> qubit_pure_dephasing;  // pure dephasing, to be dressed
    double n_v = 0.0;           // bath phonon occupancy

    void validate() const;
};

/// Atomic ladder normalization: `paper` takes sigma_pm = sigma_x +- i sigma_y
/// literally (no 1/2, so the relaxation sandwich is 4x stronger),
/// `conventional` uses the halved operators.
enum class LadderConvention { conventional, paper };
std::string to_string(LadderConvention c);

struct ModelOptions {
    LadderConvention ladder = LadderConvention::conventional;
    bool dressed = true;  // false: standard master equation (undressed jumps)
};

namespace detail {
/// Precomputed per-sector data for the block RHS kernel. The Hamiltonian and
/// both resonator dissipators are block-diagonal over the four (qubit,
/// cavity) sectors, so the RHS reduces to banded stencils on n_f x n_f tiles
/// plus scalar inter-block couplings.
struct BlockGen {
    std::size_t n_f = 0;
    double rate_down = 0.0;  // gamma (n_v + 1)
    double rate_up = 0.0;    // gamma n_v
    double kappa = 0.0;
    double rate_minus = 0.0;  // qubit lowering sandwich rate (convention folded in)
    double rate_plus = 0.0;
    std::array<double, 4> shift{};            // g * (photon number of sector)
    std::array<std::vector<cplx>, 4> a_diag;  // -iH - (1/2) sum rate L†L, diagonal
    std::array<std::vector<cplx>, 4> a_off;   // same, first superdiagonal
    std::array<std::vector<cplx>, 4> a_diag_rot;  // a_diag without the free -i n part
    std::array<double, 16> w{};  // elementwise coefficient per (s, s') block
    std::vector<double> sq;      // sq[n] = sqrt(n), n = 0..n_f

    // stencil coefficient tables hoisted per (s, t) tile
    struct PairTables {
        std::vector<cplx> col_diag_lab;  // conj(a_diag[t][k]) + w
        std::vector<cplx> col_diag_rot;
        std::vector<cplx> col_right;  // conj(a_off[t][k]) - rd sh_s sq[k+1]
        std::vector<cplx> col_left;   // conj(a_off[t][k-1]) - ru sh_s sq[k]
        std::vector<cplx> row_dn;     // a_off[s][m] - rd sh_t sq[m+1]
        std::vector<cplx> row_up;     // a_off[s][m-1] - ru sh_t sq[m]
    };
    std::array<PairTables, 16> pairs;
};

/// Lab-frame generator (rotating = false), or the generator in the frame
/// co-rotating with the free vibrational evolution: there the single-offset
/// stencil legs carry phases exp(-+ i t) and the free phases drop out, which
/// is what lets the integrator take ~5x coarser steps. rho must be Hermitian;
/// only the upper sector tiles are computed, the rest is mirrored.
void block_rhs(const BlockGen& gen, const cplx* rho, cplx* out, double t, bool rotating);
}  // namespace detail

struct LindbladModel {
    std::size_t n_f = 0;
    std::size_t dim = 0;  // 4 * n_f
    numkit::SparseOperator hamiltonian;
    std::vector<std::pair<double, numkit::SparseOperator>> jumps;
    SystemParams params;
    DissipationParams diss;
    ModelOptions opts;
    double gamma_d = 0.0;         // dressed dephasing rate in effect
    double photon_dephasing = 0.0;  // 4 gamma g^2 / ln((n_v+1)/n_v), 0 if undressed
    detail::BlockGen blocks;
};

/// Model with the commutator of the full Hamiltonian plus the seven
/// dissipators: thermal resonator jumps dressed by the photon number, cavity
/// decay, qubit relaxation/excitation, qubit dephasing, photon dephasing.
/// The cavity factor is the exact two-level block the initial state occupies.
LindbladModel build_model(const SystemParams& p, const DissipationParams& d,
                          std::size_t n_f, const ModelOptions& opts = {});

/// Slow reference evaluation of the generator straight from the sparse
/// operator list. Test anchor for the block kernel.
ComplexMatrix rhs_reference(const LindbladModel& model, const ComplexMatrix& rho);

/// Fast structured evaluation (same generator).
void rhs_apply(const LindbladModel& model, const ComplexMatrix& rho, ComplexMatrix& out);

/// Initial product state with the truncated coherent-squeezed resonator mode.
/// `leakage` records the truncation tail mass of the mechanical factor.
struct InitialState {
    DensityMatrix rho;
    double leakage = 0.0;
};
InitialState initial_state(const SystemParams& p, std::size_t n_f);

struct TimeSeries {
    struct Sample {
        double t = 0.0;
        double C_qc = 0.0;
        double tau_sq = 0.0;
        double trace = 0.0;
        double min_eig = 0.0;
    };
    std::vector<Sample> samples;
};

struct IntegrateOptions {
    std::size_t steps = 0;        // 0: from the spectral-radius bound
    int max_doublings = 3;
    std::size_t sample_count = 9;
    double convergence_tol = 1e-4;  // step-halving acceptance on final C_qc, tau^2
    bool convergence_check = true;
};

struct IntegrateResult {
    TimeSeries series;
    DensityMatrix rho_final;
    double C_qc_final = 0.0;
    double tau_sq_final = 0.0;
    std::size_t steps = 0;        // accepted step count
    double convergence_delta = 0.0;
    bool converged = false;
};

/// Fixed-step RK4 over dimensionless time [0, omega_end]. The result is the
/// finer of two runs whose final C_qc and tau^2 agree within convergence_tol;
/// step counts double (at most max_doublings times) until they do.
IntegrateResult integrate(const LindbladModel& model, const DensityMatrix& rho0,
                          double omega_end, const IntegrateOptions& opts = {});

enum class Fig6Panel { qc, qcv };

struct DissipativeSweepRow {
    std::string panel;
    double kappa = 0.0;
    double gamma = 0.0;
    double C_qc_final = 0.0;
    double tau_sq_final = 0.0;
    std::string ladder_convention;
    std::size_t n_f = 0;
    std::size_t steps = 0;
};

/// One row per (kappa, gamma) with the end-of-run qubit-cavity measures.
/// panel qc pins phi_xi = pi, panel qcv pins phi_xi = 2 pi.
std::vector<DissipativeSweepRow> sweep_dissipative(
    const SystemParams& p, const DissipationParams& d, const std::vector<double>& kappas,
    const std::vector<double>& gammas, Fig6Panel panel, std::size_t n_f,
    const ModelOptions& opts = {}, const IntegrateOptions& iopts = {},
    std::size_t threads = 0);

}  // namespace squeezent::dme

#endif
