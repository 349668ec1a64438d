#ifndef SQUEEZENT_NUMKIT_HPP
#define SQUEEZENT_NUMKIT_HPP

#include <cstddef>
#include <vector>

#include "squeezent/complex_matrix.hpp"
#include "squeezent/density_matrix.hpp"

namespace squeezent::numkit {

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvectors stored as the columns of a unitary matrix.
struct Spectrum {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Sparse operator in triplet form over a single dim x dim space.
struct SparseOperator {
    struct Triplet {
        std::size_t row;
        std::size_t col;
        cplx value;
    };

    std::size_t dim = 0;
    std::vector<Triplet> triplets;

    void add(std::size_t row, std::size_t col, cplx value) {
        triplets.push_back({row, col, value});
    }
    /// Throws on out-of-range indices or duplicate (row, col) pairs.
    void check() const;
    ComplexMatrix to_dense() const;
    SparseOperator adjoint() const;
};

enum class TransposeSide { a, b };
enum class ApplySide { left, right_adjoint };

/// Hermitian eigensolver. Rejects input whose hermiticity defect exceeds
/// tol * max(1, max|M|), reporting the measured asymmetry.
Spectrum hermitian_eig(const ComplexMatrix& m, double tol = 1e-12);

/// Eigenvalues only (ascending), same contract as hermitian_eig.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol = 1e-12);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-10, 0) are clamped to zero; anything below -1e-10 is rejected.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);

/// Partial transpose of a bipartite matrix with row index i*dim_b + k.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dim_a,
                                std::size_t dim_b, TransposeSide side);

/// Partial trace over the factors not listed in `keep` (kept order preserved,
/// must be strictly increasing).
DensityMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// L * M (left) or M * L^dagger (right_adjoint).
ComplexMatrix sparse_apply(const SparseOperator& l, const ComplexMatrix& m, ApplySide side);

/// Eigendecomposition of a real symmetric tridiagonal matrix; eigenvectors
/// returned column-major in a flat array of size n*n.
struct TridiagSpectrum {
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;
    std::size_t n = 0;
};
TridiagSpectrum symmetric_tridiagonal_eig(const std::vector<double>& diag,
                                          const std::vector<double>& subdiag);

}  // namespace squeezent::numkit

#endif
