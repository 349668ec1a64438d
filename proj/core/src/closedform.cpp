#include "squeezent/closedform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace squeezent::closedform {

namespace {

constexpr double kPi = std::numbers::pi;
// Overlap moduli at or above 1 - kDupTol mark numerically identical branch
// states; the verbatim coefficient formulas divide by quantities that vanish
// there, so those points go through the Gram-Schmidt fallback.
constexpr double kDupTol = 1e-10;
constexpr double kResidualEps = 1e-12;

ComplexMatrix branch_gram(const SystemParams& p) {
    const auto u = p.branch_couplings();
    ComplexMatrix g(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) g(i, j) = overlap(u[i], u[j], p);
    return g;
}

bool has_degenerate_pair(const ComplexMatrix& gram) {
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (std::abs(gram(i, j)) >= 1.0 - kDupTol) return true;
    return false;
}

double clamped_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

/// Verbatim closed-form coefficients; valid only when all four branch states
/// are comfortably independent (caller checks).
OrthoCoefficients direct_coefficients(const SystemParams& p) {
    const OmegaTrig t = omega_trig(p.Omega);
    const double f = squeeze_f(p.r, p.phi_xi, p.Omega);
    const double g = p.g;
    const double l = p.lambda;

    auto decay = [&](double x) { return std::exp(-x * f); };
    auto phase = [&](double kerr_coef, double beta_coef) {
        return std::polar(1.0, kerr_coef * t.kerr + beta_coef * p.beta * t.sin_omega);
    };

    const double eg = decay(g * g);            // exp(-g^2 f)
    const double e4l = decay(4.0 * l * l);     // exp(-4 lambda^2 f)
    const double egp = decay((g + 2.0 * l) * (g + 2.0 * l));
    const double egm = decay((g - 2.0 * l) * (g - 2.0 * l));
    const double denom = clamped_sqrt(1.0 - eg * eg);  // (1 - exp(-2 g^2 f))^(1/2)

    OrthoCoefficients o;
    o.rank = 4;
    o.a[0] = phase(g * (g + 2.0 * l), 2.0 * g) * eg;
    o.a[1] = clamped_sqrt(1.0 - std::norm(o.a[0]));

    o.b[0] = phase(0.0, -4.0 * l) * e4l;
    o.b[1] = phase(-g * (g + 2.0 * l), -2.0 * (g + 2.0 * l)) * ((egp - eg * e4l) / denom);
    o.b[2] = clamped_sqrt(1.0 - std::norm(o.b[0]) - std::norm(o.b[1]));

    o.c[0] = phase(g * (g - 2.0 * l), 2.0 * (g - 2.0 * l)) * egm;
    o.c[1] = phase(-4.0 * g * l, -4.0 * l) * ((e4l - egm * eg) / denom);
    const double b2 = o.b[2].real();
    const double c2_num = eg - e4l * egm -
                          ((e4l - egm * eg) * (egp - eg * e4l)) / (1.0 - eg * eg);
    o.c[2] = phase(g * (g - 2.0 * l), 2.0 * g) * (c2_num / b2);
    o.c[3] = clamped_sqrt(1.0 - std::norm(o.c[0]) - std::norm(o.c[1]) - std::norm(o.c[2]));
    return o;
}

OrthoCoefficients from_rows(const detail::GramSchmidtResult& gs) {
    OrthoCoefficients o;
    o.rank = gs.rank;
    o.a = {gs.rows[1][0], gs.rows[1][1]};
    o.b = {gs.rows[2][0], gs.rows[2][1], gs.rows[2][2]};
    o.c = gs.rows[3];
    return o;
}

}  // namespace

OmegaTrig omega_trig(double omega) {
    const double k = std::round(omega / kPi);
    if (std::abs(omega - k * kPi) <= 1e-12 * std::max(1.0, std::abs(omega))) {
        const bool even = (static_cast<long long>(k) % 2) == 0;
        return {0.0, even ? 1.0 : -1.0, even ? 0.0 : 2.0, omega};
    }
    const double s = std::sin(omega);
    const double c = std::cos(omega);
    return {s, c, 1.0 - c, omega - s};
}

double squeeze_f(double r, double phi_xi, double omega) {
    if (r < 0.0) throw std::invalid_argument("squeeze_f: r must be >= 0");
    const OmegaTrig t = omega_trig(omega);
    if (t.one_minus_cos == 0.0) return 0.0;
    return t.one_minus_cos *
           (std::cosh(2.0 * r) - std::sinh(2.0 * r) * std::cos(omega - phi_xi));
}

cplx overlap(double u1, double u2, const SystemParams& p) {
    const OmegaTrig t = omega_trig(p.Omega);
    const double f = squeeze_f(p.r, p.phi_xi, p.Omega);
    const double du = u2 - u1;
    const double dsq = u2 * u2 - u1 * u1;
    const double phase = dsq * t.kerr + 2.0 * p.beta * du * t.sin_omega;
    return std::polar(std::exp(-du * du * f), phase);
}

namespace detail {

GramSchmidtResult gram_schmidt(const ComplexMatrix& gram, double dup_tol, double eps) {
    if (gram.rows() != 4 || gram.cols() != 4)
        throw std::invalid_argument("gram_schmidt: expected 4x4 Gram matrix");
    GramSchmidtResult out;
    // slot_owner[k] = which input vector produced orthonormal basis slot k
    std::array<int, 4> slot_owner{-1, -1, -1, -1};

    for (int i = 0; i < 4; ++i) {
        // A vector whose overlap modulus with an earlier one reaches
        // 1 - dup_tol is dependent: distinct displaced states are linearly
        // independent, so residual norms vanish only this way. Collapsing on
        // the overlap modulus (rather than on the residual, whose subtractive
        // computation floors at ~1e-8) keeps degenerate ranks exact.
        bool dependent = false;
        for (int j = 0; j < i && !dependent; ++j)
            dependent = std::abs(gram(j, i)) >= 1.0 - dup_tol;

        double accum = 0.0;
        for (int k = 0; k < out.rank; ++k) {
            const int j = slot_owner[k];
            cplx proj = gram(j, i);
            for (int m = 0; m < k; ++m) proj -= std::conj(out.rows[j][m]) * out.rows[i][m];
            proj /= out.rows[j][k];  // residual norm of the slot owner, real > 0
            out.rows[i][k] = proj;
            accum += std::norm(proj);
        }
        const double residual = std::sqrt(std::max(0.0, 1.0 - accum));
        if (dependent || residual < eps) {
            // dependent row: exact projections onto the surviving basis,
            // renormalized (a no-op for exact duplicates)
            if (accum > 0.0) {
                const double scale = 1.0 / std::sqrt(accum);
                for (int k = 0; k < out.rank; ++k) out.rows[i][k] *= scale;
            }
            continue;
        }
        out.rows[i][out.rank] = residual;
        slot_owner[out.rank] = i;
        ++out.rank;
    }
    return out;
}

}  // namespace detail

std::array<std::array<cplx, 4>, 4> OrthoCoefficients::rows() const {
    std::array<std::array<cplx, 4>, 4> rows{};
    rows[0][0] = 1.0;
    rows[1] = {a[0], a[1], 0.0, 0.0};
    rows[2] = {b[0], b[1], b[2], 0.0};
    rows[3] = c;
    return rows;
}

OrthoCoefficients ortho_coefficients(const SystemParams& p) {
    p.validate();
    const ComplexMatrix gram = branch_gram(p);
    if (!has_degenerate_pair(gram)) {
        OrthoCoefficients o = direct_coefficients(p);
        // Residual norms below cancellation noise are not resolvable by the
        // verbatim formulas; redo the point through the Gram-Schmidt route.
        const double min_norm2 = std::min(
            {std::norm(o.a[1]), std::norm(o.b[2]), std::norm(o.c[3])});
        if (min_norm2 >= 1e-13) return o;
    }
    return from_rows(detail::gram_schmidt(gram, kDupTol, kResidualEps));
}

TripartiteState evolved_state(const SystemParams& p) {
    const auto rows = ortho_coefficients(p).rows();
    TripartiteState state(4);
    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t n = 0; n < 4; ++n)
                state.amp(q, c, n) = 0.5 * rows[q * 2 + c][n];
    return state;
}

double fidelity_max(const SystemParams& p) {
    const OrthoCoefficients o = ortho_coefficients(p);
    const double s = 1.0 + o.a[1].real() + o.b[2].real() + o.c[3].real();
    return s * s / 16.0;
}

double limit_negativity_qv(const SystemParams& p) {
    if (p.g != 0.0)
        throw std::invalid_argument("limit_negativity_qv: requires g = 0");
    const double f = squeeze_f(p.r, p.phi_xi, p.Omega);
    return std::sqrt(1.0 - std::exp(-8.0 * p.lambda * p.lambda * f));
}

double limit_negativity_cv(const SystemParams& p) {
    if (p.lambda != 0.0)
        throw std::invalid_argument("limit_negativity_cv: requires lambda = 0");
    const double f = squeeze_f(p.r, p.phi_xi, p.Omega);
    return std::sqrt(1.0 - std::exp(-2.0 * p.g * p.g * f));
}

}  // namespace squeezent::closedform
