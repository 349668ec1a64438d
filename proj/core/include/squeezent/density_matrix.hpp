#ifndef SQUEEZENT_DENSITY_MATRIX_HPP
#define SQUEEZENT_DENSITY_MATRIX_HPP

#include <cstddef>
#include <vector>

#include "squeezent/complex_matrix.hpp"

namespace squeezent {

/// Square complex matrix labeled with the dimensions of the tensor factors it
/// lives on (leftmost factor is the slowest index).
struct DensityMatrix {
    std::vector<std::size_t> dims;
    ComplexMatrix mat;

    std::size_t dim() const {
        std::size_t d = 1;
        for (auto x : dims) d *= x;
        return d;
    }

    /// Throws if dims do not multiply out to the matrix size.
    void check_shape() const;

    /// Full validity check: shape, trace = 1, Hermitian, eigenvalues >= -psd_tol.
    /// Costs an eigendecomposition; intended for small matrices and tests.
    void validate(double trace_tol = 1e-10, double herm_tol = 1e-12,
                  double psd_tol = 1e-10) const;
};

}  // namespace squeezent

#endif
