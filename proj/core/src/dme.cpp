#include "squeezent/dme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "squeezent/grid.hpp"
#include "squeezent/measures.hpp"
#include "squeezent/oracle.hpp"

namespace squeezent::dme {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Sector {
    int q;
    int c;
    double z;  // sigma_z eigenvalue, +1 on the excited branch q = 0
    double u;  // displacement coupling lambda * z + g * c
};

std::array<Sector, 4> sectors(const SystemParams& p) {
    std::array<Sector, 4> s{};
    for (int q = 0; q < 2; ++q)
        for (int c = 0; c < 2; ++c) {
            const double z = (q == 0) ? 1.0 : -1.0;
            s[q * 2 + c] = {q, c, z, p.lambda * z + p.g * c};
        }
    return s;
}

double thermal_log(double n_v) { return std::log((n_v + 1.0) / n_v); }

/// rho_qc from the full (2,2,n_f) density matrix, conditioned into a valid
/// 4x4 state (hermitized, spectrum clamped at zero, trace renormalized).
DensityMatrix reduced_qc(const DensityMatrix& rho, std::size_t n_f) {
    DensityMatrix red = numkit::partial_trace(rho.mat, {2, 2, n_f}, {0, 1});
    ComplexMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            m(i, j) = 0.5 * (red.mat(i, j) + std::conj(red.mat(j, i)));
    auto spec = numkit::hermitian_eig(m, 1e-6);
    ComplexMatrix proj(4, 4);
    double tr = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double ev = std::max(0.0, spec.eigenvalues[k]);
        tr += ev;
        if (ev == 0.0) continue;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                proj(i, j) += ev * spec.eigenvectors(i, k) * std::conj(spec.eigenvectors(j, k));
    }
    if (tr <= 0.0) throw std::runtime_error("reduced_qc: vanishing trace");
    proj *= cplx(1.0 / tr, 0.0);
    return DensityMatrix{{2, 2}, std::move(proj)};
}

struct RunOutput {
    ComplexMatrix rho_final;
    std::vector<ComplexMatrix> snapshots;
    std::vector<double> snapshot_times;
};

/// Undo the rotating-frame transform: rho_lab = e^{-i n t} rho~ e^{+i n t}
/// elementwise over the vibrational indices.
void to_lab_frame(ComplexMatrix& rho, std::size_t n_f, double t) {
    const std::size_t dim = rho.rows();
    std::vector<cplx> phase(n_f);
    for (std::size_t n = 0; n < n_f; ++n) phase[n] = std::polar(1.0, -double(n) * t);
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx pi_ = phase[i % n_f];
        for (std::size_t j = 0; j < dim; ++j)
            rho(i, j) *= pi_ * std::conj(phase[j % n_f]);
    }
}

RunOutput rk4_run(const LindbladModel& model, const ComplexMatrix& rho0, double omega_end,
                  std::size_t steps, std::size_t sample_count) {
    const std::size_t dim = model.dim;
    const double dt = omega_end / static_cast<double>(steps);

    std::vector<std::size_t> sample_steps;
    if (sample_count >= 2) {
        for (std::size_t i = 0; i < sample_count; ++i)
            sample_steps.push_back(static_cast<std::size_t>(
                std::llround(double(i) * double(steps) / double(sample_count - 1))));
    }

    RunOutput out;
    ComplexMatrix rho = rho0;
    ComplexMatrix k(dim, dim), stage(dim, dim), acc(dim, dim);
    const std::size_t total = dim * dim;

    auto rhs = [&](const ComplexMatrix& in, ComplexMatrix& dst, double t) {
        detail::block_rhs(model.blocks, in.data(), dst.data(), t, /*rotating=*/true);
    };

    auto record = [&](std::size_t step_idx) {
        if (sample_steps.empty()) return;
        for (std::size_t s : sample_steps)
            if (s == step_idx) {
                const double t = dt * double(step_idx);
                out.snapshots.push_back(rho);
                to_lab_frame(out.snapshots.back(), model.n_f, t);
                out.snapshot_times.push_back(t);
                return;  // sample indices are unique
            }
    };

    auto hermitize = [&]() {
        cplx* d = rho.data();
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) {
                const cplx avg = 0.5 * (d[i * dim + j] + std::conj(d[j * dim + i]));
                d[i * dim + j] = avg;
                d[j * dim + i] = std::conj(avg);
            }
    };

    record(0);
    for (std::size_t step = 0; step < steps; ++step) {
        const double t0 = dt * double(step);
        cplx* r = rho.data();
        cplx* kd = k.data();
        cplx* sd = stage.data();
        cplx* ad = acc.data();

        rhs(rho, k, t0);  // k1
        for (std::size_t i = 0; i < total; ++i) {
            ad[i] = r[i] + (dt / 6.0) * kd[i];
            sd[i] = r[i] + (0.5 * dt) * kd[i];
        }
        rhs(stage, k, t0 + 0.5 * dt);  // k2
        for (std::size_t i = 0; i < total; ++i) {
            ad[i] += (dt / 3.0) * kd[i];
            sd[i] = r[i] + (0.5 * dt) * kd[i];
        }
        rhs(stage, k, t0 + 0.5 * dt);  // k3
        for (std::size_t i = 0; i < total; ++i) {
            ad[i] += (dt / 3.0) * kd[i];
            sd[i] = r[i] + dt * kd[i];
        }
        rhs(stage, k, t0 + dt);  // k4
        for (std::size_t i = 0; i < total; ++i) r[i] = ad[i] + (dt / 6.0) * kd[i];

        if ((step & 31u) == 31u || step + 1 == steps) hermitize();
        record(step + 1);
    }
    to_lab_frame(rho, model.n_f, omega_end);
    out.rho_final = std::move(rho);
    return out;
}

std::size_t auto_steps(const LindbladModel& model, double omega_end) {
    const auto& d = model.diss;
    const double n_f = static_cast<double>(model.n_f);
    const double g = model.params.g;
    const double rd = model.blocks.rate_down;
    const double ru = model.blocks.rate_up;
    const double sh = g;  // largest sector shift
    // Rotating frame: the free b†b phases are gone; step size is limited by
    // the numerical range of the dissipative part, which the thermal
    // sandwich's corner legs (~rate * n_f) widen to roughly twice the
    // anticommutator diagonal.
    const double u_max = std::abs(model.params.lambda) + g;
    const double imag_bound = 2.0 * u_max * std::sqrt(n_f) + 1.0;
    const double diag_term = rd * (n_f + sh * sh) + ru * (n_f + 1.0 + sh * sh);
    const double corner_term = (rd + ru) * n_f;
    const double side_term = 2.0 * std::sqrt(n_f) * (u_max + (rd + ru) * sh);
    const double w_term = d.kappa + model.blocks.rate_minus + model.blocks.rate_plus +
                          2.0 * model.gamma_d + model.photon_dephasing;
    const double radius =
        std::hypot(imag_bound, diag_term + corner_term + side_term + w_term);
    const double dt = 2.5 / std::max(radius, 1.0);
    return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(omega_end / dt)));
}

}  // namespace

void DissipationParams::validate() const {
    if (kappa < 0.0 || gamma < 0.0 || qubit_relax < 0.0)
        throw std::invalid_argument("DissipationParams: rates must be >= 0");
    if (!(n_v > 0.0))
        throw std::invalid_argument("DissipationParams: n_v must be > 0");
    if (qubit_dephasing.has_value() == qubit_pure_dephasing.has_value())
        throw std::invalid_argument(
            "DissipationParams: supply exactly one of qubit_dephasing, qubit_pure_dephasing");
    if ((qubit_dephasing && *qubit_dephasing < 0.0) ||
        (qubit_pure_dephasing && *qubit_pure_dephasing < 0.0))
        throw std::invalid_argument("DissipationParams: dephasing rate must be >= 0");
}

std::string to_string(LadderConvention c) {
    return c == LadderConvention::paper ? "paper" : "conventional";
}

LindbladModel build_model(const SystemParams& p, const DissipationParams& d, std::size_t n_f,
                          const ModelOptions& opts) {
    p.validate();
    d.validate();
    if (n_f < 8) throw std::invalid_argument("build_model: n_f must be >= 8");

    LindbladModel model;
    model.n_f = n_f;
    model.dim = 4 * n_f;
    model.params = p;
    model.diss = d;
    model.opts = opts;

    const double log_term = thermal_log(d.n_v);
    model.gamma_d = d.qubit_dephasing
                        ? *d.qubit_dephasing
                        : *d.qubit_pure_dephasing +
                              4.0 * d.gamma * p.lambda * p.lambda / log_term;
    model.photon_dephasing = opts.dressed ? 4.0 * d.gamma * p.g * p.g / log_term : 0.0;

    const auto sec = sectors(p);
    const double ladder_scale = (opts.ladder == LadderConvention::paper) ? 2.0 : 1.0;
    const double dress = opts.dressed ? 1.0 : 0.0;

    auto idx = [n_f](int s, std::size_t n) { return static_cast<std::size_t>(s) * n_f + n; };

    // Hamiltonian: b†b - (lambda sigma_z + g a†a)(b + b†), block-diagonal.
    numkit::SparseOperator h;
    h.dim = model.dim;
    for (int s = 0; s < 4; ++s) {
        for (std::size_t n = 0; n < n_f; ++n) {
            if (n > 0) h.add(idx(s, n), idx(s, n), double(n));
            if (n + 1 < n_f) {
                const double v = -sec[s].u * std::sqrt(double(n + 1));
                if (v != 0.0) {
                    h.add(idx(s, n), idx(s, n + 1), v);
                    h.add(idx(s, n + 1), idx(s, n), v);
                }
            }
        }
    }
    model.hamiltonian = std::move(h);

    // Jump operators on the full space.
    numkit::SparseOperator jump_down, jump_up, cavity, sminus, splus, sz, photon_num;
    jump_down.dim = jump_up.dim = cavity.dim = sminus.dim = splus.dim = sz.dim =
        photon_num.dim = model.dim;
    for (int s = 0; s < 4; ++s) {
        const double shift = dress * p.g * double(sec[s].c);
        for (std::size_t n = 0; n < n_f; ++n) {
            if (shift != 0.0) {
                jump_down.add(idx(s, n), idx(s, n), -shift);
                jump_up.add(idx(s, n), idx(s, n), -shift);
            }
            if (n + 1 < n_f) {
                jump_down.add(idx(s, n), idx(s, n + 1), std::sqrt(double(n + 1)));
                jump_up.add(idx(s, n + 1), idx(s, n), std::sqrt(double(n + 1)));
            }
            if (sec[s].c == 1) {
                // a maps (q, 1, n) -> (q, 0, n); sector index drops by 1
                cavity.add(idx(s - 1, n), idx(s, n), 1.0);
                photon_num.add(idx(s, n), idx(s, n), 1.0);
            }
            if (sec[s].q == 0) {
                sminus.add(idx(s + 2, n), idx(s, n), ladder_scale);
                splus.add(idx(s, n), idx(s + 2, n), ladder_scale);
            }
            sz.add(idx(s, n), idx(s, n), sec[s].z);
        }
    }

    model.jumps.emplace_back(d.gamma * (d.n_v + 1.0), std::move(jump_down));
    model.jumps.emplace_back(d.gamma * d.n_v, std::move(jump_up));
    model.jumps.emplace_back(d.kappa, std::move(cavity));
    model.jumps.emplace_back(d.qubit_relax * (d.n_v + 1.0), std::move(sminus));
    model.jumps.emplace_back(d.qubit_relax * d.n_v, std::move(splus));
    model.jumps.emplace_back(model.gamma_d / 2.0, std::move(sz));
    if (model.photon_dephasing > 0.0)
        model.jumps.emplace_back(model.photon_dephasing, std::move(photon_num));

    // Block kernel tables.
    auto& b = model.blocks;
    b.n_f = n_f;
    b.rate_down = d.gamma * (d.n_v + 1.0);
    b.rate_up = d.gamma * d.n_v;
    b.kappa = d.kappa;
    b.rate_minus = d.qubit_relax * (d.n_v + 1.0) * ladder_scale * ladder_scale;
    b.rate_plus = d.qubit_relax * d.n_v * ladder_scale * ladder_scale;
    b.sq.resize(n_f + 1);
    for (std::size_t n = 0; n <= n_f; ++n) b.sq[n] = std::sqrt(double(n));
    for (int s = 0; s < 4; ++s) {
        b.shift[s] = dress * p.g * double(sec[s].c);
        const double sh2 = b.shift[s] * b.shift[s];
        b.a_diag[s].resize(n_f);
        b.a_diag_rot[s].resize(n_f);
        b.a_off[s].resize(n_f > 0 ? n_f - 1 : 0);
        for (std::size_t n = 0; n < n_f; ++n) {
            const double raise_sq = (n + 1 < n_f) ? double(n + 1) : 0.0;  // truncated b b†
            const double damp = -0.5 * (b.rate_down * (double(n) + sh2) +
                                        b.rate_up * (raise_sq + sh2));
            b.a_diag[s][n] = cplx(damp, -double(n));
            b.a_diag_rot[s][n] = cplx(damp, 0.0);
            if (n + 1 < n_f) {
                const double off_h = -sec[s].u * std::sqrt(double(n + 1));
                const double off_diss =
                    0.5 * (b.rate_down + b.rate_up) * b.shift[s] * std::sqrt(double(n + 1));
                b.a_off[s][n] = cplx(off_diss, -off_h);
            }
        }
    }
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) {
            const double dc = double(sec[s].c - sec[t].c);
            double w = -0.5 * d.kappa * double(sec[s].c + sec[t].c);
            w += -0.5 * b.rate_minus * ((sec[s].q == 0) + (sec[t].q == 0));
            w += -0.5 * b.rate_plus * ((sec[s].q == 1) + (sec[t].q == 1));
            w += 0.5 * model.gamma_d * (sec[s].z * sec[t].z - 1.0);
            w += -0.5 * model.photon_dephasing * dc * dc;
            b.w[s * 4 + t] = w;
        }

    // hoisted stencil tables (the thermal sandwich couples both sectors'
    // shifts into the side-leg coefficients)
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) {
            auto& pt = b.pairs[s * 4 + t];
            const double pair_w =
                b.w[s * 4 + t] + (b.rate_down + b.rate_up) * b.shift[s] * b.shift[t];
            pt.col_diag_lab.resize(n_f);
            pt.col_diag_rot.resize(n_f);
            pt.col_right.assign(n_f, cplx(0.0, 0.0));
            pt.col_left.assign(n_f, cplx(0.0, 0.0));
            pt.row_dn.assign(n_f, cplx(0.0, 0.0));
            pt.row_up.assign(n_f, cplx(0.0, 0.0));
            for (std::size_t k = 0; k < n_f; ++k) {
                pt.col_diag_lab[k] = std::conj(b.a_diag[t][k]) + pair_w;
                pt.col_diag_rot[k] = std::conj(b.a_diag_rot[t][k]) + pair_w;
                if (k + 1 < n_f)
                    pt.col_right[k] =
                        std::conj(b.a_off[t][k]) - b.rate_down * b.shift[s] * b.sq[k + 1];
                if (k > 0)
                    pt.col_left[k] =
                        std::conj(b.a_off[t][k - 1]) - b.rate_up * b.shift[s] * b.sq[k];
            }
            for (std::size_t m = 0; m < n_f; ++m) {
                if (m + 1 < n_f)
                    pt.row_dn[m] = b.a_off[s][m] - b.rate_down * b.shift[t] * b.sq[m + 1];
                if (m > 0)
                    pt.row_up[m] = b.a_off[s][m - 1] - b.rate_up * b.shift[t] * b.sq[m];
            }
        }

    return model;
}

ComplexMatrix rhs_reference(const LindbladModel& model, const ComplexMatrix& rho) {
    if (rho.rows() != model.dim || rho.cols() != model.dim)
        throw std::invalid_argument("rhs_reference: dimension mismatch");
    using numkit::ApplySide;
    const ComplexMatrix h_rho = numkit::sparse_apply(model.hamiltonian, rho, ApplySide::left);
    const ComplexMatrix rho_h =
        numkit::sparse_apply(model.hamiltonian, rho, ApplySide::right_adjoint);
    ComplexMatrix out = cplx(0.0, -1.0) * (h_rho - rho_h);
    for (const auto& [rate, l] : model.jumps) {
        if (rate == 0.0) continue;
        const numkit::SparseOperator l_adj = l.adjoint();
        const ComplexMatrix l_rho = numkit::sparse_apply(l, rho, ApplySide::left);
        const ComplexMatrix sandwich =
            numkit::sparse_apply(l, l_rho, ApplySide::right_adjoint);
        // (1/2){L†L, rho} assembled as L†(L rho) and (rho L†)L
        const ComplexMatrix ldag_l_rho = numkit::sparse_apply(l_adj, l_rho, ApplySide::left);
        const ComplexMatrix rho_ldag = numkit::sparse_apply(l, rho, ApplySide::right_adjoint);
        const ComplexMatrix rho_ldag_l =
            numkit::sparse_apply(l_adj, rho_ldag, ApplySide::right_adjoint);
        out += cplx(rate, 0.0) * (sandwich - cplx(0.5, 0.0) * (ldag_l_rho + rho_ldag_l));
    }
    return out;
}

void rhs_apply(const LindbladModel& model, const ComplexMatrix& rho, ComplexMatrix& out) {
    if (rho.rows() != model.dim || rho.cols() != model.dim)
        throw std::invalid_argument("rhs_apply: dimension mismatch");
    if (out.rows() != model.dim || out.cols() != model.dim)
        out = ComplexMatrix(model.dim, model.dim);
    detail::block_rhs(model.blocks, rho.data(), out.data(), 0.0, /*rotating=*/false);
}

InitialState initial_state(const SystemParams& p, std::size_t n_f) {
    p.validate();
    oracle::FockVector v = oracle::coherent_squeezed_fixed(p.beta, p.r, p.phi_xi, n_f);
    const double leak =
        v.tail_mass(std::max<std::size_t>(8, n_f / 8)) + std::abs(1.0 - v.norm());
    const double nrm = v.norm();
    for (auto& a : v.amp) a /= nrm;

    DensityMatrix rho;
    rho.dims = {2, 2, n_f};
    rho.mat = ComplexMatrix(4 * n_f, 4 * n_f);
    for (std::size_t bs = 0; bs < 4; ++bs)
        for (std::size_t n = 0; n < n_f; ++n)
            for (std::size_t bt = 0; bt < 4; ++bt)
                for (std::size_t m = 0; m < n_f; ++m)
                    rho.mat(bs * n_f + n, bt * n_f + m) =
                        0.25 * v.amp[n] * std::conj(v.amp[m]);
    return {std::move(rho), leak};
}

IntegrateResult integrate(const LindbladModel& model, const DensityMatrix& rho0,
                          double omega_end, const IntegrateOptions& opts) {
    if (rho0.dims != std::vector<std::size_t>{2, 2, model.n_f})
        throw std::invalid_argument("integrate: rho0 dims must be (2, 2, n_f)");
    rho0.check_shape();

    const std::size_t base_steps = opts.steps ? opts.steps : auto_steps(model, omega_end);
    auto finals = [&](const ComplexMatrix& rho_final) {
        const auto qc = measures::qc_measures(
            reduced_qc(DensityMatrix{{2, 2, model.n_f}, rho_final}, model.n_f));
        return std::pair<double, double>{qc.C, qc.tau_sq};
    };

    std::size_t steps = base_steps;
    RunOutput run = rk4_run(model, rho0.mat, omega_end, steps, opts.sample_count);
    auto [c_prev, tau_prev] = finals(run.rho_final);
    double delta = 0.0;
    bool converged = !opts.convergence_check;

    if (opts.convergence_check) {
        for (int d = 1; d <= opts.max_doublings; ++d) {
            const std::size_t fine_steps = steps * 2;
            RunOutput fine = rk4_run(model, rho0.mat, omega_end, fine_steps, opts.sample_count);
            auto [c_fine, tau_fine] = finals(fine.rho_final);
            delta = std::max(std::abs(c_fine - c_prev), std::abs(tau_fine - tau_prev));
            run = std::move(fine);
            steps = fine_steps;
            c_prev = c_fine;
            tau_prev = tau_fine;
            if (delta < opts.convergence_tol) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            std::ostringstream os;
            os << "integrate: step-halving did not converge (last delta " << delta
               << ", estimates C_qc = " << c_prev << ", tau_sq = " << tau_prev << " at "
               << steps << " steps)";
            throw std::runtime_error(os.str());
        }
    }

    IntegrateResult result;
    result.steps = steps;
    result.convergence_delta = delta;
    result.converged = converged;
    result.C_qc_final = c_prev;
    result.tau_sq_final = tau_prev;
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        const ComplexMatrix& snap = run.snapshots[i];
        TimeSeries::Sample s;
        s.t = run.snapshot_times[i];
        s.trace = snap.trace().real();
        s.min_eig = numkit::hermitian_eigenvalues(snap, 1e-6).front();
        const auto qc =
            measures::qc_measures(reduced_qc(DensityMatrix{{2, 2, model.n_f}, snap}, model.n_f));
        s.C_qc = qc.C;
        s.tau_sq = qc.tau_sq;
        result.series.samples.push_back(s);
    }
    result.rho_final = DensityMatrix{{2, 2, model.n_f}, std::move(run.rho_final)};
    return result;
}

std::vector<DissipativeSweepRow> sweep_dissipative(
    const SystemParams& p, const DissipationParams& d, const std::vector<double>& kappas,
    const std::vector<double>& gammas, Fig6Panel panel, std::size_t n_f,
    const ModelOptions& opts, const IntegrateOptions& iopts, std::size_t threads) {
    SystemParams params = p;
    params.phi_xi = (panel == Fig6Panel::qc) ? kPi : 2.0 * kPi;

    struct Point {
        double kappa;
        double gamma;
    };
    std::vector<Point> grid;
    for (double k : kappas)
        for (double g : gammas) grid.push_back({k, g});

    std::vector<DissipativeSweepRow> rows(grid.size());
    const InitialState init = initial_state(params, n_f);
    IntegrateOptions run_opts = iopts;
    run_opts.sample_count = std::max<std::size_t>(run_opts.sample_count, 2);

    grid::parallel_for(grid.size(), threads, [&](std::size_t i) {
        DissipationParams local = d;
        local.kappa = grid[i].kappa;
        local.gamma = grid[i].gamma;
        const LindbladModel model = build_model(params, local, n_f, opts);
        const IntegrateResult res = integrate(model, init.rho, params.Omega, run_opts);
        rows[i] = {panel == Fig6Panel::qc ? "qc" : "qcv",
                   grid[i].kappa,
                   grid[i].gamma,
                   res.C_qc_final,
                   res.tau_sq_final,
                   to_string(opts.ladder),
                   n_f,
                   res.steps};
    });
    return rows;
}

}  // namespace squeezent::dme
