#include "squeezent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "squeezent/closedform.hpp"
#include "squeezent/measures.hpp"
#include "squeezent/numkit.hpp"

namespace squeezent::oracle {

namespace {

constexpr std::size_t kMaxTerms = 64;
constexpr double kTermStop = 1e-14;

std::size_t guard_levels(std::size_t n_f) {
    return std::max<std::size_t>(8, n_f / 8);
}

std::size_t top_support(const std::vector<cplx>& v) {
    for (std::size_t n = v.size(); n-- > 0;)
        if (std::abs(v[n]) > 1e-18) return n;
    return 0;
}

/// Apply exp(G) to v by composing short Taylor slices exp(h G). The slice
/// width is chosen from a bound on ||G|| over the levels reachable within one
/// slice, so every series term shrinks by at least 1/2.
template <typename ApplyG, typename BoundFn>
void exp_generator_apply(std::vector<cplx>& v, ApplyG&& apply_g, BoundFn&& bound_fn) {
    const std::size_t n = v.size();
    std::vector<cplx> term(n), next(n), acc(n);
    double t = 0.0;
    while (t < 1.0) {
        const std::size_t reach = top_support(v);
        const double bound = std::max(bound_fn(reach), 1e-12);
        double h = std::min(1.0 - t, 0.5 / bound);
        bool done = false;
        while (!done) {
            term = v;
            acc = v;
            done = true;
            for (std::size_t k = 1; k <= kMaxTerms; ++k) {
                apply_g(term, next);
                const double scale = h / static_cast<double>(k);
                double term_norm = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    term[i] = scale * next[i];
                    acc[i] += term[i];
                    term_norm += std::norm(term[i]);
                }
                if (std::sqrt(term_norm) <= kTermStop) break;
                if (k == kMaxTerms) {
                    h *= 0.5;  // series too slow; retry with a narrower slice
                    done = false;
                }
            }
        }
        v = acc;
        t += h;
    }
}

void apply_squeeze(std::vector<cplx>& v, double r, double phi_xi) {
    if (r == 0.0) return;
    const std::size_t n_f = v.size();
    const cplx xi = std::polar(r, phi_xi);
    const cplx xi_conj = std::conj(xi);
    // G = (conj(xi) b^2 - xi b†^2) / 2
    auto apply_g = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (std::size_t n = 0; n < n_f; ++n) {
            cplx val = 0.0;
            if (n + 2 < n_f)
                val += 0.5 * xi_conj * std::sqrt(double((n + 1) * (n + 2))) * in[n + 2];
            if (n >= 2) val -= 0.5 * xi * std::sqrt(double(n * (n - 1))) * in[n - 2];
            out[n] = val;
        }
    };
    auto bound = [&](std::size_t reach) {
        const double m = static_cast<double>(reach + 2 * kMaxTerms + 2);
        return 0.5 * r * m;
    };
    exp_generator_apply(v, apply_g, bound);
}

void apply_displacement(std::vector<cplx>& v, double beta) {
    if (beta == 0.0) return;
    const std::size_t n_f = v.size();
    // G = beta (b† - b), beta real
    auto apply_g = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (std::size_t n = 0; n < n_f; ++n) {
            cplx val = 0.0;
            if (n >= 1) val += beta * std::sqrt(double(n)) * in[n - 1];
            if (n + 1 < n_f) val -= beta * std::sqrt(double(n + 1)) * in[n + 1];
            out[n] = val;
        }
    };
    auto bound = [&](std::size_t reach) {
        return 2.0 * std::abs(beta) * std::sqrt(double(reach + kMaxTerms + 2));
    };
    exp_generator_apply(v, apply_g, bound);
}

std::size_t grown(std::size_t n_f, double factor) {
    return std::max(n_f + 1, static_cast<std::size_t>(std::ceil(double(n_f) * factor)));
}

}  // namespace

void TruncationConfig::validate() const {
    if (n_f < 8) throw std::invalid_argument("TruncationConfig: n_f must be >= 8");
    if (!(leak_tol > 0.0 && leak_tol <= 1e-4))
        throw std::invalid_argument("TruncationConfig: leak_tol must lie in (0, 1e-4]");
    if (growth_factor <= 1.0)
        throw std::invalid_argument("TruncationConfig: growth_factor must exceed 1");
}

double FockVector::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

double FockVector::tail_mass(std::size_t levels) const {
    levels = std::min(levels, amp.size());
    double s = 0.0;
    for (std::size_t n = amp.size() - levels; n < amp.size(); ++n) s += std::norm(amp[n]);
    return s;
}

FockVector coherent_squeezed_fixed(double beta, double r, double phi_xi, std::size_t n_f) {
    if (n_f < 8) throw std::invalid_argument("coherent_squeezed_fixed: n_f must be >= 8");
    if (r < 0.0) throw std::invalid_argument("coherent_squeezed_fixed: r must be >= 0");
    FockVector v;
    v.amp.assign(n_f, cplx(0.0, 0.0));
    v.amp[0] = 1.0;
    apply_squeeze(v.amp, r, phi_xi);
    apply_displacement(v.amp, beta);
    return v;
}

FockVector coherent_squeezed(double beta, double r, double phi_xi, const TruncationConfig& cfg) {
    cfg.validate();
    std::size_t n_f = cfg.n_f;
    while (true) {
        FockVector v = coherent_squeezed_fixed(beta, r, phi_xi, n_f);
        const double leak = v.tail_mass(guard_levels(n_f)) + std::abs(1.0 - v.norm());
        if (leak < cfg.leak_tol || cfg.fixed_cutoff) {
            if (cfg.fixed_cutoff && leak >= cfg.leak_tol) {
                std::ostringstream os;
                os << "coherent_squeezed: fixed cutoff " << n_f
                   << " leaves truncation leakage " << leak << " (bound " << cfg.leak_tol
                   << ")";
                throw std::runtime_error(os.str());
            }
            return v;
        }
        if (n_f >= cfg.ceiling) {
            std::ostringstream os;
            os << "coherent_squeezed: cutoff ceiling " << cfg.ceiling
               << " reached with leakage " << leak;
            throw std::runtime_error(os.str());
        }
        n_f = std::min(cfg.ceiling, grown(n_f, cfg.growth_factor));
    }
}

FockVector propagate(int q, int c, const FockVector& v0, const SystemParams& p,
                     const TruncationConfig& cfg) {
    cfg.validate();
    p.validate();
    if (q < 0 || q > 1 || c < 0 || c > 1)
        throw std::invalid_argument("propagate: branch indices must be 0 or 1");
    if (std::abs(v0.norm() - 1.0) > 10.0 * cfg.leak_tol + 1e-12)
        throw std::invalid_argument("propagate: input vector not normalized");

    const std::size_t n_f = v0.size();
    const double u = (q == 0 ? p.lambda : -p.lambda) + p.g * static_cast<double>(c);

    // Parity conjugation maps the coupling u to -u, so a single
    // eigendecomposition at |u| serves both signs.
    std::vector<cplx> work = v0.amp;
    const bool flip = u < 0.0;
    if (flip)
        for (std::size_t n = 1; n < n_f; n += 2) work[n] = -work[n];

    std::vector<double> diag(n_f), sub(n_f - 1);
    const double au = std::abs(u);
    for (std::size_t n = 0; n < n_f; ++n) diag[n] = static_cast<double>(n);
    for (std::size_t n = 0; n + 1 < n_f; ++n) sub[n] = -au * std::sqrt(double(n + 1));
    const auto spec = numkit::symmetric_tridiagonal_eig(diag, sub);

    // v(Omega) = V exp(-i Lambda Omega) V^T v(0)
    std::vector<cplx> coeff(n_f, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n_f; ++k) {
        const double* col = spec.eigenvectors.data() + k * n_f;
        cplx acc = 0.0;
        for (std::size_t n = 0; n < n_f; ++n) acc += col[n] * work[n];
        coeff[k] = acc * std::polar(1.0, -spec.eigenvalues[k] * p.Omega);
    }
    std::vector<cplx> out(n_f, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n_f; ++k) {
        const double* col = spec.eigenvectors.data() + k * n_f;
        const cplx ck = coeff[k];
        for (std::size_t n = 0; n < n_f; ++n) out[n] += ck * col[n];
    }
    if (flip)
        for (std::size_t n = 1; n < n_f; n += 2) out[n] = -out[n];

    FockVector result{std::move(out)};
    const double leak =
        result.tail_mass(guard_levels(n_f)) + std::abs(1.0 - result.norm());
    if (leak > 10.0 * cfg.leak_tol) {
        std::ostringstream os;
        os << "propagate: truncation leakage " << leak << " after evolution at cutoff "
           << n_f << " (bound " << 10.0 * cfg.leak_tol << ")";
        throw std::runtime_error(os.str());
    }
    return result;
}

OracleState oracle_state(const SystemParams& p, const TruncationConfig& cfg) {
    cfg.validate();
    p.validate();

    // Displacement the evolution can add on top of the initial support.
    const auto couplings = p.branch_couplings();
    double alpha_max = 0.0;
    const double eta_mag =
        std::abs(cplx(1.0, 0.0) - std::polar(1.0, -p.Omega));
    for (double u : couplings) alpha_max = std::max(alpha_max, eta_mag * std::abs(u));

    TruncationConfig local = cfg;
    while (true) {
        FockVector v0 = coherent_squeezed(p.beta, p.r, p.phi_xi, local);
        // Pad for the displaced support edge before propagating.
        const double edge = std::sqrt(static_cast<double>(top_support(v0.amp))) + alpha_max;
        const std::size_t want =
            static_cast<std::size_t>(std::ceil(edge * edge)) + guard_levels(v0.size()) + 16;
        if (want > v0.size()) {
            if (want > local.ceiling)
                throw std::runtime_error("oracle_state: cutoff ceiling reached while padding");
            v0.amp.resize(want, cplx(0.0, 0.0));
        }

        try {
            OracleState out;
            out.n_f = v0.size();
            for (int q = 0; q < 2; ++q)
                for (int c = 0; c < 2; ++c)
                    out.branches[q * 2 + c] = propagate(q, c, v0, p, local);

            out.gram = ComplexMatrix(4, 4);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) {
                    cplx acc = 0.0;
                    for (std::size_t n = 0; n < out.n_f; ++n)
                        acc += std::conj(out.branches[i].amp[n]) * out.branches[j].amp[n];
                    out.gram(i, j) = acc;
                }

            const auto gs = closedform::detail::gram_schmidt(out.gram);
            out.rank = gs.rank;
            out.span_state = TripartiteState(4);
            for (std::size_t b = 0; b < 4; ++b)
                for (std::size_t k = 0; k < 4; ++k)
                    out.span_state.flat()[b * 4 + k] = 0.5 * gs.rows[b][k];

            // Partial trace over the Fock factor of the full pure state.
            TripartiteState fock_state(out.n_f);
            for (std::size_t b = 0; b < 4; ++b)
                for (std::size_t n = 0; n < out.n_f; ++n)
                    fock_state.flat()[b * out.n_f + n] = 0.5 * out.branches[b].amp[n];
            out.rho_qc = measures::reduce_pure(fock_state, measures::Pair::qc);
            return out;
        } catch (const std::runtime_error&) {
            if (local.fixed_cutoff || local.n_f >= local.ceiling) throw;
            local.n_f = std::min(local.ceiling, grown(std::max(local.n_f, v0.size()),
                                                      local.growth_factor));
        }
    }
}

}  // namespace squeezent::oracle
