#ifndef SQUEEZENT_TRIPARTITE_STATE_HPP
#define SQUEEZENT_TRIPARTITE_STATE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "squeezent/complex_matrix.hpp"

namespace squeezent {

/// Pure state of qubit (2) x cavity (2) x vibrational mode (runtime dim).
/// Flat index (q*2 + c)*vib_dim + n, leftmost factor slowest.
class TripartiteState {
public:
    TripartiteState() = default;
    explicit TripartiteState(std::size_t vib_dim)
        : vib_dim_(vib_dim), amp_(4 * vib_dim, cplx(0.0, 0.0)) {}

    std::size_t vib_dim() const { return vib_dim_; }
    std::size_t size() const { return amp_.size(); }

    cplx& amp(std::size_t q, std::size_t c, std::size_t n) {
        return amp_[(q * 2 + c) * vib_dim_ + n];
    }
    const cplx& amp(std::size_t q, std::size_t c, std::size_t n) const {
        return amp_[(q * 2 + c) * vib_dim_ + n];
    }

    const std::vector<cplx>& flat() const { return amp_; }
    std::vector<cplx>& flat() { return amp_; }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return std::sqrt(s);
    }

    cplx inner(const TripartiteState& other) const {
        if (other.vib_dim_ != vib_dim_)
            throw std::invalid_argument("TripartiteState::inner: dimension mismatch");
        cplx s = 0.0;
        for (std::size_t k = 0; k < amp_.size(); ++k) s += std::conj(amp_[k]) * other.amp_[k];
        return s;
    }

private:
    std::size_t vib_dim_ = 0;
    std::vector<cplx> amp_;
};

}  // namespace squeezent

#endif
