#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "squeezent/closedform.hpp"
#include "squeezent/measures.hpp"
#include "squeezent/oracle.hpp"

using namespace squeezent;
namespace orc = squeezent::oracle;
namespace cf = squeezent::closedform;

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

TEST_CASE("coherent_squeezed with no displacement or squeezing is the vacuum") {
    const auto v = orc::coherent_squeezed(0.0, 0.0, 0.0);
    CHECK(v.amp[0] == cplx(1.0, 0.0));
    for (std::size_t n = 1; n < v.size(); ++n) CHECK(std::abs(v.amp[n]) == 0.0);
}

TEST_CASE("squeezed vacuum has exactly zero odd amplitudes") {
    const auto v = orc::coherent_squeezed(0.0, 1.3, 0.8);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t n = 1; n < v.size(); n += 2) CHECK(std::abs(v.amp[n]) == 0.0);
    // mean occupation sinh^2(r)
    double mean = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) mean += double(n) * std::norm(v.amp[n]);
    CHECK(mean == doctest::Approx(std::sinh(1.3) * std::sinh(1.3)).epsilon(1e-8));
}

TEST_CASE("pure displacement reproduces the Poisson amplitudes") {
    const auto v = orc::coherent_squeezed(1.0, 0.0, 0.0);
    for (int n = 0; n < 12; ++n) {
        const double expect = std::exp(-0.5) / std::sqrt(factorial(n));
        CHECK(v.amp[n].real() == doctest::Approx(expect).epsilon(1e-10));
        CHECK(std::abs(v.amp[n].imag()) < 1e-12);
    }
}

TEST_CASE("coherent_squeezed grows the cutoff for heavy squeezing") {
    orc::TruncationConfig cfg;
    cfg.n_f = 16;
    const auto v = orc::coherent_squeezed(0.0, 2.0, 0.0, cfg);
    CHECK(v.size() > 64);
    CHECK(v.tail_mass(std::max<std::size_t>(8, v.size() / 8)) < cfg.leak_tol);
}

TEST_CASE("coherent_squeezed reports failure at a pinned small cutoff") {
    orc::TruncationConfig cfg;
    cfg.n_f = 8;
    cfg.fixed_cutoff = true;
    CHECK_THROWS_AS((void)orc::coherent_squeezed(0.0, 2.0, 0.0, cfg), std::runtime_error);
}

TEST_CASE("free-oscillator branch only rotates the Fock phases") {
    SystemParams p;  // g = lambda = 0, so every branch has u = 0
    p.Omega = 1.234;
    p.r = 0.9;
    p.beta = 0.5;
    const auto v0 = orc::coherent_squeezed(p.beta, p.r, p.phi_xi);
    const auto v = orc::propagate(0, 0, v0, p);
    for (std::size_t n = 0; n < v0.size(); ++n) {
        const cplx expect = v0.amp[n] * std::polar(1.0, -double(n) * p.Omega);
        CHECK(std::abs(v.amp[n] - expect) < 1e-10);
    }
}

TEST_CASE("full revolution returns the branch up to the Kerr phase") {
    SystemParams p;
    p.g = 0.8;
    p.lambda = 0.25;
    p.Omega = 2.0 * kPi;
    p.r = 1.0;
    p.beta = 0.6;
    const auto v0 = orc::coherent_squeezed(p.beta, p.r, p.phi_xi);
    for (int q = 0; q < 2; ++q)
        for (int c = 0; c < 2; ++c) {
            const auto v = orc::propagate(q, c, v0, p);
            const double u = p.branch_couplings()[q * 2 + c];
            cplx ip = 0.0;
            for (std::size_t n = 0; n < v0.size(); ++n)
                ip += std::conj(v0.amp[n]) * v.amp[n];
            // expected global phase exp(i u^2 (Omega - sin Omega)) = exp(i u^2 2 pi)
            CHECK(std::abs(ip - std::polar(1.0, u * u * p.Omega)) < 1e-6);
        }
}

TEST_CASE("propagation preserves the norm") {
    SystemParams p;
    p.g = 0.7;
    p.lambda = 0.2;
    p.Omega = 4.1;
    p.r = 1.2;
    orc::TruncationConfig cfg;
    const auto state = orc::oracle_state(p, cfg);
    for (const auto& branch : state.branches)
        CHECK(std::abs(branch.norm() - 1.0) < 10.0 * cfg.leak_tol);
}

TEST_CASE("branch energy expectation is conserved") {
    SystemParams p;
    p.g = 0.6;
    p.lambda = 0.15;
    p.r = 1.0;
    p.beta = 0.3;
    const int q = 0, c = 1;
    const double u = p.g + p.lambda;

    auto energy = [&](const orc::FockVector& v) {
        // <b†b - u (b + b†)>
        double e = 0.0;
        for (std::size_t n = 0; n < v.size(); ++n) e += double(n) * std::norm(v.amp[n]);
        cplx cross = 0.0;
        for (std::size_t n = 0; n + 1 < v.size(); ++n)
            cross += std::conj(v.amp[n]) * v.amp[n + 1] * std::sqrt(double(n + 1));
        return e - 2.0 * u * cross.real();
    };

    const auto v0 = orc::coherent_squeezed(p.beta, p.r, p.phi_xi);
    const double e0 = energy(v0);
    for (double omega : {0.9, 3.7, 8.4}) {
        SystemParams pt = p;
        pt.Omega = omega;
        orc::FockVector padded = v0;
        padded.amp.resize(v0.size() + 128, cplx(0.0, 0.0));
        const auto v = orc::propagate(q, c, padded, pt);
        CHECK(energy(v) == doctest::Approx(e0).epsilon(1e-8));
    }
}

TEST_CASE("propagate rejects an obviously undersized space") {
    SystemParams p;
    p.g = 1.0;
    p.lambda = 0.3;
    p.Omega = kPi;
    orc::FockVector tiny;
    tiny.amp.assign(12, cplx(0.0, 0.0));
    tiny.amp[0] = 1.0;
    CHECK_THROWS_AS((void)orc::propagate(0, 1, tiny, p), std::runtime_error);
}

TEST_CASE("numeric branch overlaps match the analytic formulas") {
    std::mt19937_64 rng(0x5eed0020);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 6; ++k) {
        SystemParams p;
        p.g = u01(rng);
        p.lambda = u01(rng);
        p.Omega = 6.0 * kPi * u01(rng);
        p.beta = 4.0 * u01(rng) - 2.0;
        p.r = 1.5 * u01(rng);
        p.phi_xi = 4.0 * kPi * u01(rng);
        const auto state = orc::oracle_state(p);
        const auto u = p.branch_couplings();
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                CHECK(std::abs(state.gram(i, j) - cf::overlap(u[i], u[j], p)) < 1e-7);
    }
}

TEST_CASE("oracle state of the uncoupled system is separable") {
    SystemParams p;
    p.Omega = 2.3;
    p.r = 0.8;
    const auto state = orc::oracle_state(p);
    CHECK(state.rank == 1);
    const auto m = measures::measure_all(state.span_state);
    CHECK(m.N_qv < 1e-9);
    CHECK(m.N_cv < 1e-9);
    CHECK(m.C_qc < 1e-8);
    CHECK(m.tau_sq < 1e-7);
}

TEST_CASE("oracle measures match the closed-form pipeline") {
    std::mt19937_64 rng(0x5eed0021);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 4; ++k) {
        SystemParams p;
        p.g = u01(rng);
        p.lambda = u01(rng);
        p.Omega = 6.0 * kPi * u01(rng);
        p.beta = 4.0 * u01(rng) - 2.0;
        p.r = 1.2 * u01(rng);
        p.phi_xi = 4.0 * kPi * u01(rng);

        const auto closed = measures::measure_all(cf::evolved_state(p));
        const auto state = orc::oracle_state(p);
        const auto brute = measures::measure_all(state.span_state);
        CHECK(std::abs(brute.N_qv - closed.N_qv) < 5e-6);
        CHECK(std::abs(brute.N_cv - closed.N_cv) < 5e-6);
        CHECK(std::abs(brute.N_qc - closed.N_qc) < 5e-6);
        CHECK(std::abs(brute.C_qc - closed.C_qc) < 5e-6);
        CHECK(std::abs(brute.Ca_qc - closed.Ca_qc) < 5e-6);
        CHECK(std::abs(brute.tau_sq - closed.tau_sq) < 5e-6);
        CHECK(std::abs(brute.chi_sq - closed.chi_sq) < 5e-6);

        // the 4x4 reduction from the Fock tensor agrees with the closed form
        const auto rho_closed = measures::reduce_pure(cf::evolved_state(p), measures::Pair::qc);
        CHECK(max_abs_diff(state.rho_qc.mat, rho_closed.mat) < 5e-7);
    }
}

TEST_CASE("truncation config rejects invalid fields") {
    orc::TruncationConfig cfg;
    cfg.n_f = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_f = 64;
    cfg.leak_tol = 1e-3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.leak_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
