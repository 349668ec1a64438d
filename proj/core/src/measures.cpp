#include "squeezent/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "squeezent/numkit.hpp"

namespace squeezent::measures {

namespace {

void require_two_qubits(const DensityMatrix& rho, const char* who) {
    if (rho.dims != std::vector<std::size_t>{2, 2})
        throw std::invalid_argument(std::string(who) + ": expected a 2x2 subsystem split");
    rho.check_shape();
}

void require_valid_state(const DensityMatrix& rho, const char* who) {
    rho.check_shape();
    if (std::abs(rho.mat.trace() - cplx(1.0, 0.0)) >= 1e-8)
        throw std::invalid_argument(std::string(who) + ": trace differs from 1");
    const auto evs = numkit::hermitian_eigenvalues(rho.mat);
    if (evs.front() < -1e-10)
        throw std::invalid_argument(std::string(who) + ": input not PSD");
}

/// Spin-flipped matrix (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).
ComplexMatrix spin_flip(const ComplexMatrix& rho) {
    static constexpr std::array<double, 4> sign{-1.0, 1.0, 1.0, -1.0};
    ComplexMatrix out(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            out(i, j) = sign[i] * sign[j] * std::conj(rho(3 - i, 3 - j));
    return out;
}

/// Descending square roots of the eigenvalues of rho * rho_tilde, computed
/// through the Hermitian similarity sqrt(rho) * rho_tilde * sqrt(rho).
std::array<double, 4> flip_spectrum_roots(const DensityMatrix& rho) {
    const ComplexMatrix root = numkit::matrix_sqrt_psd(rho.mat);
    const ComplexMatrix herm = root * spin_flip(rho.mat) * root;
    auto evs = numkit::hermitian_eigenvalues(herm, 1e-10);
    std::array<double, 4> out{};
    for (std::size_t k = 0; k < 4; ++k)
        out[k] = std::sqrt(std::max(0.0, evs[3 - k]));  // descending
    return out;
}

double residual_sq(double ca, double other, const char* who) {
    const double v = ca * ca - other * other;
    if (v < -1e-6)
        throw std::runtime_error(std::string(who) + ": residual below -1e-6, invalid regime");
    return v < 0.0 ? 0.0 : v;
}

}  // namespace

DensityMatrix reduce_pure(const TripartiteState& state, Pair pair) {
    const std::size_t nv = state.vib_dim();
    DensityMatrix out;
    switch (pair) {
        case Pair::qc: {
            out.dims = {2, 2};
            out.mat = ComplexMatrix(4, 4);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) {
                    cplx acc = 0.0;
                    for (std::size_t n = 0; n < nv; ++n)
                        acc += state.flat()[i * nv + n] * std::conj(state.flat()[j * nv + n]);
                    out.mat(i, j) = acc;
                }
            return out;
        }
        case Pair::qv: {
            out.dims = {2, nv};
            out.mat = ComplexMatrix(2 * nv, 2 * nv);
            for (std::size_t q = 0; q < 2; ++q)
                for (std::size_t n = 0; n < nv; ++n)
                    for (std::size_t q2 = 0; q2 < 2; ++q2)
                        for (std::size_t n2 = 0; n2 < nv; ++n2) {
                            cplx acc = 0.0;
                            for (std::size_t c = 0; c < 2; ++c)
                                acc += state.amp(q, c, n) * std::conj(state.amp(q2, c, n2));
                            out.mat(q * nv + n, q2 * nv + n2) = acc;
                        }
            return out;
        }
        case Pair::cv: {
            out.dims = {2, nv};
            out.mat = ComplexMatrix(2 * nv, 2 * nv);
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t n = 0; n < nv; ++n)
                    for (std::size_t c2 = 0; c2 < 2; ++c2)
                        for (std::size_t n2 = 0; n2 < nv; ++n2) {
                            cplx acc = 0.0;
                            for (std::size_t q = 0; q < 2; ++q)
                                acc += state.amp(q, c, n) * std::conj(state.amp(q, c2, n2));
                            out.mat(c * nv + n, c2 * nv + n2) = acc;
                        }
            return out;
        }
    }
    throw std::logic_error("reduce_pure: unreachable");
}

double negativity(const DensityMatrix& rho) {
    if (rho.dims.size() != 2)
        throw std::invalid_argument("negativity: expected exactly two subsystem dims");
    require_valid_state(rho, "negativity");
    const ComplexMatrix pt = numkit::partial_transpose(rho.mat, rho.dims[0], rho.dims[1],
                                                       numkit::TransposeSide::a);
    double n = 0.0;
    for (double eta : numkit::hermitian_eigenvalues(pt))
        n += std::abs(eta) - eta;
    return n;
}

double concurrence(const DensityMatrix& rho) {
    require_two_qubits(rho, "concurrence");
    const auto roots = flip_spectrum_roots(rho);
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

double coa(const DensityMatrix& rho) {
    require_two_qubits(rho, "coa");
    const auto roots = flip_spectrum_roots(rho);
    return roots[0] + roots[1] + roots[2] + roots[3];
}

double tau_sq(const DensityMatrix& rho_qc) {
    const QcMeasures m = qc_measures(rho_qc);
    return m.tau_sq;
}

double chi_sq(const DensityMatrix& rho_qc) {
    const QcMeasures m = qc_measures(rho_qc);
    return m.chi_sq;
}

QcMeasures qc_measures(const DensityMatrix& rho_qc) {
    require_two_qubits(rho_qc, "qc_measures");
    QcMeasures out;
    const auto roots = flip_spectrum_roots(rho_qc);
    out.C = std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
    out.Ca = roots[0] + roots[1] + roots[2] + roots[3];
    out.N = negativity(rho_qc);
    out.tau_sq = residual_sq(out.Ca, out.C, "tau_sq");
    out.chi_sq = residual_sq(out.Ca, out.N, "chi_sq");
    return out;
}

MeasureSet measure_all(const TripartiteState& state) {
    if (std::abs(state.norm() - 1.0) >= 1e-8)
        throw std::invalid_argument("measure_all: state is not normalized");
    MeasureSet m;
    m.N_qv = negativity(reduce_pure(state, Pair::qv));
    m.N_cv = negativity(reduce_pure(state, Pair::cv));
    const QcMeasures qc = qc_measures(reduce_pure(state, Pair::qc));
    m.N_qc = qc.N;
    m.C_qc = qc.C;
    m.Ca_qc = qc.Ca;
    m.tau_sq = qc.tau_sq;
    m.chi_sq = qc.chi_sq;
    return m;
}

}  // namespace squeezent::measures
