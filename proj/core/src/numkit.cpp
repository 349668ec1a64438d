#include "squeezent/numkit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace squeezent::numkit {

namespace {

using EigenCMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenCMat> map_of(const ComplexMatrix& m) {
    return Eigen::Map<const EigenCMat>(m.data(), static_cast<Eigen::Index>(m.rows()),
                                       static_cast<Eigen::Index>(m.cols()));
}

void require_hermitian(const ComplexMatrix& m, double tol, const char* who) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": not square");
    const double defect = hermiticity_defect(m);
    const double scale = std::max(1.0, max_abs(m));
    if (defect >= tol * scale) {
        std::ostringstream os;
        os << who << ": input not Hermitian, max asymmetry " << defect;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

void SparseOperator::check() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& t : triplets) {
        if (t.row >= dim || t.col >= dim)
            throw std::invalid_argument("SparseOperator: index out of range");
        if (!seen.insert({t.row, t.col}).second)
            throw std::invalid_argument("SparseOperator: duplicate (row, col) entry");
    }
}

ComplexMatrix SparseOperator::to_dense() const {
    ComplexMatrix out(dim, dim);
    for (const auto& t : triplets) out(t.row, t.col) += t.value;
    return out;
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out;
    out.dim = dim;
    out.triplets.reserve(triplets.size());
    for (const auto& t : triplets) out.add(t.col, t.row, std::conj(t.value));
    return out;
}

Spectrum hermitian_eig(const ComplexMatrix& m, double tol) {
    require_hermitian(m, tol, "hermitian_eig");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(map_of(m));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver failed to converge");

    const std::size_t n = m.rows();
    Spectrum s;
    s.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    s.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s.eigenvectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j));
    return s;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
    require_hermitian(m, tol, "hermitian_eigenvalues");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(map_of(m), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigenvalues: eigensolver failed to converge");
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows()};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
    Spectrum s = hermitian_eig(m);
    const std::size_t n = m.rows();
    for (double ev : s.eigenvalues) {
        if (ev < -1e-10) {
            std::ostringstream os;
            os << "matrix_sqrt_psd: eigenvalue " << ev << " below -1e-10, input not PSD";
            throw std::invalid_argument(os.str());
        }
    }
    // V * sqrt(Lambda) * V^dagger
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double root = std::sqrt(std::max(0.0, s.eigenvalues[k]));
        if (root == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = s.eigenvectors(i, k) * root;
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += vik * std::conj(s.eigenvectors(j, k));
        }
    }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dim_a,
                                std::size_t dim_b, TransposeSide side) {
    const std::size_t d = dim_a * dim_b;
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("partial_transpose: dimension mismatch");
    ComplexMatrix out(d, d);
    for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k)
            for (std::size_t l = 0; l < dim_a; ++l)
                for (std::size_t m = 0; m < dim_b; ++m) {
                    if (side == TransposeSide::a)
                        out(j * dim_b + k, l * dim_b + m) = rho(l * dim_b + k, j * dim_b + m);
                    else
                        out(j * dim_b + k, l * dim_b + m) = rho(j * dim_b + m, l * dim_b + k);
                }
    return out;
}

DensityMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    if (rho.rows() != total || rho.cols() != total)
        throw std::invalid_argument("partial_trace: dims do not match matrix size");
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    for (std::size_t i = 0; i + 1 < keep.size(); ++i)
        if (keep[i] >= keep[i + 1])
            throw std::invalid_argument("partial_trace: keep set must be strictly increasing");
    if (keep.back() >= dims.size())
        throw std::invalid_argument("partial_trace: keep index out of range");

    std::vector<std::size_t> traced;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);

    // Strides of each factor in the flat index (leftmost factor is slowest).
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    std::size_t kept_dim = 1;
    for (auto i : keep) kept_dim *= dims[i];
    std::size_t traced_dim = 1;
    for (auto i : traced) traced_dim *= dims[i];

    auto expand = [&](std::size_t flat, const std::vector<std::size_t>& factors) {
        // flat multi-index over `factors` (row-major), converted to a base offset
        std::size_t offset = 0;
        for (std::size_t i = factors.size(); i-- > 0;) {
            const std::size_t f = factors[i];
            offset += (flat % dims[f]) * stride[f];
            flat /= dims[f];
        }
        return offset;
    };

    DensityMatrix out;
    for (auto i : keep) out.dims.push_back(dims[i]);
    out.mat = ComplexMatrix(kept_dim, kept_dim);
    for (std::size_t a = 0; a < kept_dim; ++a) {
        const std::size_t ra = expand(a, keep);
        for (std::size_t b = 0; b < kept_dim; ++b) {
            const std::size_t rb = expand(b, keep);
            cplx acc = 0.0;
            for (std::size_t t = 0; t < traced_dim; ++t) {
                const std::size_t rt = expand(t, traced);
                acc += rho(ra + rt, rb + rt);
            }
            out.mat(a, b) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    return partial_trace(rho.mat, rho.dims, keep);
}

ComplexMatrix sparse_apply(const SparseOperator& l, const ComplexMatrix& m, ApplySide side) {
    l.check();
    if (side == ApplySide::left) {
        if (l.dim != m.rows()) throw std::invalid_argument("sparse_apply: dimension mismatch");
        ComplexMatrix out(m.rows(), m.cols());
        for (const auto& t : l.triplets) {
            const cplx* src = m.data() + t.col * m.cols();
            cplx* dst = out.data() + t.row * m.cols();
            for (std::size_t j = 0; j < m.cols(); ++j) dst[j] += t.value * src[j];
        }
        return out;
    }
    if (l.dim != m.cols()) throw std::invalid_argument("sparse_apply: dimension mismatch");
    // M * L^dagger: triplet (r, c, v) of L contributes conj(v) * M[:, c] to out[:, r].
    ComplexMatrix out(m.rows(), m.cols());
    for (const auto& t : l.triplets) {
        const cplx v = std::conj(t.value);
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, t.row) += v * m(i, t.col);
    }
    return out;
}

TridiagSpectrum symmetric_tridiagonal_eig(const std::vector<double>& diag,
                                          const std::vector<double>& subdiag) {
    const std::size_t n = diag.size();
    if (n == 0 || subdiag.size() + 1 != n)
        throw std::invalid_argument("symmetric_tridiagonal_eig: bad band sizes");
    Eigen::Map<const Eigen::VectorXd> d(diag.data(), static_cast<Eigen::Index>(n));
    Eigen::Map<const Eigen::VectorXd> e(subdiag.data(), static_cast<Eigen::Index>(n - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric_tridiagonal_eig: failed to converge");
    TridiagSpectrum out;
    out.n = n;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.eigenvectors.assign(solver.eigenvectors().data(), solver.eigenvectors().data() + n * n);
    return out;
}

}  // namespace squeezent::numkit

namespace squeezent {

void DensityMatrix::check_shape() const {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("DensityMatrix: not square");
    if (dim() != mat.rows())
        throw std::invalid_argument("DensityMatrix: dims do not match matrix size");
}

void DensityMatrix::validate(double trace_tol, double herm_tol, double psd_tol) const {
    check_shape();
    const cplx tr = mat.trace();
    if (std::abs(tr - cplx(1.0, 0.0)) >= trace_tol)
        throw std::invalid_argument("DensityMatrix: trace differs from 1");
    const double scale = std::max(1.0, max_abs(mat));
    if (hermiticity_defect(mat) >= herm_tol * scale)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    const auto evs = numkit::hermitian_eigenvalues(mat);
    if (!evs.empty() && evs.front() < -psd_tol)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
}

}  // namespace squeezent
