#ifndef SQUEEZENT_COMPLEX_MATRIX_HPP
#define SQUEEZENT_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace squeezent {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. The workhorse container for every
/// operator and state matrix in the library.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    cplx trace() const {
        if (rows_ != cols_) throw std::invalid_argument("trace: matrix not square");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matmul: dimension mismatch");
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                const cplx* brow = b.data() + k * b.cols_;
                cplx* orow = out.data() + i * out.cols_;
                for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
            }
        }
        return out;
    }

private:
    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline double max_abs(const ComplexMatrix& m) {
    double v = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) v = std::max(v, std::abs(m.data()[k]));
    return v;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) v = std::max(v, std::abs(a.data()[k] - b.data()[k]));
    return v;
}

/// Largest |M_ij - conj(M_ji)| over all entries.
inline double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_defect: not square");
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            v = std::max(v, std::abs(m(i, j) - std::conj(m(j, i))));
    return v;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
    return hermiticity_defect(m) < tol;
}

}  // namespace squeezent

#endif
