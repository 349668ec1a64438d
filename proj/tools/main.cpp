// Batch front-end: deterministic parameter sweeps, figure-dataset emission,
// and the brute-force / dissipative drivers.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-check failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "squeezent/closedform.hpp"
#include "squeezent/csv.hpp"
#include "squeezent/dme.hpp"
#include "squeezent/grid.hpp"
#include "squeezent/measures.hpp"
#include "squeezent/oracle.hpp"

using json = nlohmann::ordered_json;
using namespace squeezent;

namespace {

constexpr double kPi = std::numbers::pi;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    SystemParams params;
    dme::DissipationParams dissipation;
    bool has_dephasing_choice = false;

    // sweep
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    bool qutrit_lock = false;

    // shared
    std::string out;
    long long seed = 20240901;
    std::size_t threads = 0;

    // oracle-check
    std::size_t points = 50;
    double r_max = 2.0;
    std::size_t force_n_f = 0;

    // dme / fig6
    std::size_t n_f = 0;  // 0: module default with auto truncation check
    std::size_t steps = 0;
    std::size_t samples = 9;
    std::string ladder = "conventional";
    std::string model = "dme";
    double omega_end = 0.0;
    std::vector<double> kappa_list;
    std::vector<double> gamma_list;
    std::string panel = "both";
};

const std::vector<std::string> kAxisOrder = {"phi_xi", "r", "g", "lambda", "omega"};

double json_number(const json& j, const std::string& key) {
    if (!j.at(key).is_number())
        throw ConfigError("config field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::vector<double> parse_axis_values(const json& spec, const std::string& name) {
    std::vector<double> values;
    if (spec.is_array()) {
        for (const auto& v : spec) {
            if (!v.is_number()) throw ConfigError("axis '" + name + "' holds a non-number");
            values.push_back(v.get<double>());
        }
    } else if (spec.is_object()) {
        const double start = json_number(spec, "start");
        const double stop = json_number(spec, "stop");
        const auto count = spec.at("count").get<long long>();
        if (count < 1) throw ConfigError("axis '" + name + "': count must be >= 1");
        for (long long i = 0; i < count; ++i)
            values.push_back(count == 1 ? start
                                        : start + (stop - start) * double(i) / double(count - 1));
    } else {
        throw ConfigError("axis '" + name + "' must be an array or {start, stop, count}");
    }
    if (values.empty()) throw ConfigError("axis '" + name + "' is empty");
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] < values[i + 1]))
            throw ConfigError("axis '" + name + "' must be strictly increasing");
    return values;
}

std::vector<double> parse_axis_string(const std::string& text, const std::string& name) {
    // "lo:hi:count" or "v1,v2,v3"
    json spec;
    if (text.find(':') != std::string::npos) {
        const auto a = text.find(':');
        const auto b = text.find(':', a + 1);
        if (b == std::string::npos)
            throw ConfigError("axis '" + name + "': expected lo:hi:count");
        try {
            spec = json::object();
            spec["start"] = std::stod(text.substr(0, a));
            spec["stop"] = std::stod(text.substr(a + 1, b - a - 1));
            spec["count"] = std::stoll(text.substr(b + 1));
        } catch (const std::exception&) {
            throw ConfigError("axis '" + name + "': cannot parse '" + text + "'");
        }
    } else {
        spec = json::array();
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto comma = text.find(',', pos);
            const std::string tok =
                text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                spec.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("axis '" + name + "': cannot parse '" + tok + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return parse_axis_values(spec, name);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error in ") + path + ": " + e.what());
    }

    try {
        if (j.contains("params")) {
            const auto& p = j["params"];
            if (p.contains("g")) cfg.params.g = json_number(p, "g");
            if (p.contains("lambda")) cfg.params.lambda = json_number(p, "lambda");
            if (p.contains("omega")) cfg.params.Omega = json_number(p, "omega");
            if (p.contains("beta")) cfg.params.beta = json_number(p, "beta");
            if (p.contains("r")) cfg.params.r = json_number(p, "r");
            if (p.contains("phi_xi")) cfg.params.phi_xi = json_number(p, "phi_xi");
        }
        if (j.contains("dissipation")) {
            const auto& d = j["dissipation"];
            if (d.contains("kappa")) cfg.dissipation.kappa = json_number(d, "kappa");
            if (d.contains("gamma")) cfg.dissipation.gamma = json_number(d, "gamma");
            if (d.contains("qubit_relax"))
                cfg.dissipation.qubit_relax = json_number(d, "qubit_relax");
            if (d.contains("qubit_dephasing")) {
                cfg.dissipation.qubit_dephasing = json_number(d, "qubit_dephasing");
                cfg.has_dephasing_choice = true;
            }
            if (d.contains("qubit_pure_dephasing")) {
                cfg.dissipation.qubit_pure_dephasing = json_number(d, "qubit_pure_dephasing");
                cfg.has_dephasing_choice = true;
            }
            if (d.contains("n_v")) cfg.dissipation.n_v = json_number(d, "n_v");
        }
        if (j.contains("axes")) {
            for (const auto& [name, spec] : j["axes"].items()) {
                if (std::find(kAxisOrder.begin(), kAxisOrder.end(), name) == kAxisOrder.end())
                    throw ConfigError("unknown sweep axis '" + name + "'");
                cfg.axes.emplace_back(name, parse_axis_values(spec, name));
            }
        }
        if (j.contains("qutrit_lock")) cfg.qutrit_lock = j["qutrit_lock"].get<bool>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<long long>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<std::size_t>();
        if (j.contains("points")) cfg.points = j["points"].get<std::size_t>();
        if (j.contains("r_max")) cfg.r_max = json_number(j, "r_max");
        if (j.contains("force_n_f")) cfg.force_n_f = j["force_n_f"].get<std::size_t>();
        if (j.contains("n_f")) cfg.n_f = j["n_f"].get<std::size_t>();
        if (j.contains("steps")) cfg.steps = j["steps"].get<std::size_t>();
        if (j.contains("samples")) cfg.samples = j["samples"].get<std::size_t>();
        if (j.contains("ladder_convention"))
            cfg.ladder = j["ladder_convention"].get<std::string>();
        if (j.contains("model")) cfg.model = j["model"].get<std::string>();
        if (j.contains("omega_end")) cfg.omega_end = json_number(j, "omega_end");
        if (j.contains("kappa_list"))
            cfg.kappa_list = parse_axis_values(j["kappa_list"], "kappa_list");
        if (j.contains("gamma_list"))
            cfg.gamma_list = parse_axis_values(j["gamma_list"], "gamma_list");
        if (j.contains("panel")) cfg.panel = j["panel"].get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
}

struct PipelinePoint {
    SystemParams params;
    measures::MeasureSet m;
    double fidelity = 0.0;
    int rank = 0;
};

PipelinePoint evaluate_point(const SystemParams& p) {
    PipelinePoint out;
    out.params = p;
    const auto coeffs = closedform::ortho_coefficients(p);
    out.rank = coeffs.rank;
    const double s = 1.0 + coeffs.a[1].real() + coeffs.b[2].real() + coeffs.c[3].real();
    out.fidelity = s * s / 16.0;
    out.m = measures::measure_all(closedform::evolved_state(p));
    return out;
}

json measure_json(const PipelinePoint& pt) {
    json j = json::object();
    j["tau_sq"] = pt.m.tau_sq;
    j["chi_sq"] = pt.m.chi_sq;
    j["C_qc"] = pt.m.C_qc;
    j["N_qc"] = pt.m.N_qc;
    j["N_qv"] = pt.m.N_qv;
    j["N_cv"] = pt.m.N_cv;
    j["Ca_qc"] = pt.m.Ca_qc;
    j["F_qcv"] = pt.fidelity;
    j["rank"] = pt.rank;
    return j;
}

int cmd_measure(const RunConfig& cfg) {
    SystemParams p = cfg.params;
    if (cfg.qutrit_lock) p.g = 2.0 * p.lambda;
    const auto pt = evaluate_point(p);
    std::cout << measure_json(pt).dump(2) << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    // canonical nesting order: phi_xi, r, g, lambda, omega (outer to inner)
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    for (const auto& name : kAxisOrder) {
        for (const auto& [axis, values] : cfg.axes) {
            if (axis != name) continue;
            if (cfg.qutrit_lock && axis == "g")
                throw ConfigError("sweep: a 'g' axis conflicts with qutrit_lock (g = 2 lambda)");
            axes.emplace_back(axis, values);
        }
    }

    std::size_t total = 1;
    for (const auto& [name, values] : axes) total *= values.size();
    if (axes.empty()) total = 1;

    std::vector<PipelinePoint> results(total);
    grid::parallel_for(total, cfg.threads, [&](std::size_t flat) {
        SystemParams p = cfg.params;
        std::size_t rem = flat;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& [name, values] = axes[a];
            const double v = values[rem % values.size()];
            rem /= values.size();
            if (name == "phi_xi") p.phi_xi = v;
            else if (name == "r") p.r = v;
            else if (name == "g") p.g = v;
            else if (name == "lambda") p.lambda = v;
            else if (name == "omega") p.Omega = v;
        }
        if (cfg.qutrit_lock) p.g = 2.0 * p.lambda;
        results[flat] = evaluate_point(p);
    });

    csv::Table table({"phi_xi", "r", "g", "lambda", "Omega", "beta", "tau_sq", "chi_sq",
                      "C_qc", "N_qc", "N_qv", "N_cv", "Ca_qc", "F_qcv", "rank"});
    for (const auto& pt : results) {
        table.add_row({csv::format_double(pt.params.phi_xi), csv::format_double(pt.params.r),
                       csv::format_double(pt.params.g), csv::format_double(pt.params.lambda),
                       csv::format_double(pt.params.Omega), csv::format_double(pt.params.beta),
                       csv::format_double(pt.m.tau_sq), csv::format_double(pt.m.chi_sq),
                       csv::format_double(pt.m.C_qc), csv::format_double(pt.m.N_qc),
                       csv::format_double(pt.m.N_qv), csv::format_double(pt.m.N_cv),
                       csv::format_double(pt.m.Ca_qc), csv::format_double(pt.fidelity),
                       csv::format_int(pt.rank)});
    }
    table.write(cfg.out);
    return 0;
}

int cmd_oracle_check(const RunConfig& cfg) {
    if (cfg.r_max > 3.0)
        throw ConfigError("oracle-check: r_max must be <= 3 (cutoff ceiling)");

    struct PointResult {
        double overlap_dev = 0.0;
        double measure_dev = 0.0;
        std::size_t n_f = 0;
        std::string error;
    };

    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<SystemParams> sample(cfg.points);
    for (auto& p : sample) {
        p.g = u01(rng);
        p.lambda = u01(rng);
        p.Omega = 6.0 * kPi * u01(rng);
        p.beta = 4.0 * u01(rng) - 2.0;
        p.r = cfg.r_max * u01(rng);
        p.phi_xi = 4.0 * kPi * u01(rng);
    }

    std::vector<PointResult> results(sample.size());
    grid::parallel_for(sample.size(), cfg.threads, [&](std::size_t i) {
        PointResult& res = results[i];
        try {
            oracle::TruncationConfig tc;
            if (cfg.force_n_f) {
                tc.n_f = cfg.force_n_f;
                tc.fixed_cutoff = true;
            }
            const auto state = oracle::oracle_state(sample[i], tc);
            res.n_f = state.n_f;
            const auto u = sample[i].branch_couplings();
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = a; b < 4; ++b)
                    res.overlap_dev = std::max(
                        res.overlap_dev,
                        std::abs(state.gram(a, b) - closedform::overlap(u[a], u[b], sample[i])));

            const auto closed = measures::measure_all(closedform::evolved_state(sample[i]));
            const auto brute = measures::measure_all(state.span_state);
            for (double d :
                 {brute.N_qv - closed.N_qv, brute.N_cv - closed.N_cv, brute.N_qc - closed.N_qc,
                  brute.C_qc - closed.C_qc, brute.Ca_qc - closed.Ca_qc,
                  brute.tau_sq - closed.tau_sq, brute.chi_sq - closed.chi_sq})
                res.measure_dev = std::max(res.measure_dev, std::abs(d));
        } catch (const std::exception& e) {
            res.error = e.what();
        }
    });

    constexpr double kOverlapTol = 1e-7;
    constexpr double kMeasureTol = 5e-6;
    double max_overlap = 0.0, max_measure = 0.0;
    std::size_t n_f_min = SIZE_MAX, n_f_max = 0;
    std::string first_error;
    for (const auto& r : results) {
        if (!r.error.empty() && first_error.empty()) first_error = r.error;
        max_overlap = std::max(max_overlap, r.overlap_dev);
        max_measure = std::max(max_measure, r.measure_dev);
        if (r.n_f) {
            n_f_min = std::min(n_f_min, r.n_f);
            n_f_max = std::max(n_f_max, r.n_f);
        }
    }
    const bool pass =
        first_error.empty() && max_overlap < kOverlapTol && max_measure < kMeasureTol;

    json report = json::object();
    report["points"] = cfg.points;
    report["max_overlap_deviation"] = max_overlap;
    report["max_measure_deviation"] = max_measure;
    report["overlap_tolerance"] = kOverlapTol;
    report["measure_tolerance"] = kMeasureTol;
    report["n_f_min"] = n_f_min == SIZE_MAX ? 0 : n_f_min;
    report["n_f_max"] = n_f_max;
    if (!first_error.empty()) report["error"] = first_error;
    report["pass"] = pass;
    std::cout << report.dump(2) << "\n";
    if (!pass) throw CheckError("oracle-check failed");
    return 0;
}

dme::LadderConvention parse_ladder(const std::string& name) {
    if (name == "paper") return dme::LadderConvention::paper;
    if (name == "conventional") return dme::LadderConvention::conventional;
    throw ConfigError("unknown ladder convention '" + name + "'");
}

dme::DissipationParams dissipation_with_default(const RunConfig& cfg) {
    dme::DissipationParams d = cfg.dissipation;
    if (!cfg.has_dephasing_choice) d.qubit_dephasing = 0.0;
    return d;
}

/// Mechanical cutoff with the truncation auto-check: default 96, initial
/// leakage bound 1e-8 with one 1.5x regrowth, then proceed with a warning
/// (a pinned n_f skips the growth).
std::size_t resolve_cutoff(const RunConfig& cfg, const SystemParams& p, bool pinned) {
    std::size_t n_f = cfg.n_f ? cfg.n_f : 96;
    if (pinned) return n_f;
    const double leak0 = dme::initial_state(p, n_f).leakage;
    if (leak0 < 1e-8) return n_f;
    const std::size_t regrown = static_cast<std::size_t>(std::ceil(1.5 * double(n_f)));
    const double leak1 = dme::initial_state(p, regrown).leakage;
    std::fprintf(stderr, "# truncation check: initial leakage %.3g at n_f=%zu%s\n", leak1,
                 regrown, leak1 < 1e-8 ? "" : " (still above 1e-8; proceeding, renormalized)");
    return regrown;
}

int cmd_dme(const RunConfig& cfg) {
    SystemParams p = cfg.params;
    dme::DissipationParams d = dissipation_with_default(cfg);
    dme::ModelOptions opts;
    opts.ladder = parse_ladder(cfg.ladder == "both" ? "conventional" : cfg.ladder);
    if (cfg.model == "sme") opts.dressed = false;
    else if (cfg.model != "dme") throw ConfigError("model must be 'dme' or 'sme'");

    const std::size_t n_f = resolve_cutoff(cfg, p, cfg.n_f != 0);
    const double omega_end = cfg.omega_end > 0.0 ? cfg.omega_end : p.Omega;
    if (omega_end <= 0.0) throw ConfigError("dme: omega_end (or params.omega) must be > 0");

    const auto model = dme::build_model(p, d, n_f, opts);
    const auto init = dme::initial_state(p, n_f);
    dme::IntegrateOptions iopts;
    iopts.steps = cfg.steps;
    iopts.sample_count = cfg.samples;
    const auto res = dme::integrate(model, init.rho, omega_end, iopts);

    csv::Table table({"t", "C_qc", "tau_sq", "trace", "min_eig"});
    for (const auto& s : res.series.samples)
        table.add_row({csv::format_double(s.t), csv::format_double(s.C_qc),
                       csv::format_double(s.tau_sq), csv::format_double(s.trace),
                       csv::format_double(s.min_eig)});
    table.write(cfg.out);

    json summary = json::object();
    summary["C_qc_final"] = res.C_qc_final;
    summary["tau_sq_final"] = res.tau_sq_final;
    summary["steps"] = res.steps;
    summary["converged"] = res.converged;
    summary["convergence_delta"] = res.convergence_delta;
    summary["n_f"] = n_f;
    summary["initial_leakage"] = init.leakage;
    summary["gamma_d"] = model.gamma_d;
    summary["ladder_convention"] = dme::to_string(opts.ladder);
    summary["model"] = cfg.model;
    // CoA (and so tau^2) is exact for pure (2x2xn) states; the dissipative
    // state is mixed, so the value is reported with this caveat attached.
    summary["coa_mixed_state_caveat"] = true;
    std::ostream& sink = cfg.out.empty() ? std::cerr : std::cout;
    sink << summary.dump(2) << "\n";
    return 0;
}

int cmd_fig6(const RunConfig& cfg) {
    SystemParams p = cfg.params;
    if (p.g == 0.0 && p.lambda == 0.0) {
        p.g = 1.0 / std::sqrt(2.0);
        p.lambda = 1.0 / std::sqrt(72.0);
    }
    if (p.r == 0.0) p.r = 2.0;
    if (p.Omega == 0.0) p.Omega = 3.0 * kPi;

    // canonical grid defaults apply only when dissipation is untouched
    // (n_v = 0 marks that); otherwise the caller's rates are taken as-is,
    // so an all-zero-rate override reproduces the closed system
    dme::DissipationParams d = dissipation_with_default(cfg);
    if (d.n_v == 0.0) {
        d.n_v = 50.0;
        d.qubit_relax = 1e-3;
        if (!cfg.has_dephasing_choice) d.qubit_dephasing = 1e-2;
    }

    std::vector<double> kappas = cfg.kappa_list;
    if (kappas.empty())
        for (int i = 0; i < 10; ++i) kappas.push_back(0.02 + 0.02 * i);
    std::vector<double> gammas = cfg.gamma_list;
    if (gammas.empty()) gammas = {1e-5, 1e-4, 1e-3, 1e-2};

    std::vector<dme::Fig6Panel> panels;
    if (cfg.panel == "qc") panels = {dme::Fig6Panel::qc};
    else if (cfg.panel == "qcv") panels = {dme::Fig6Panel::qcv};
    else if (cfg.panel == "both") panels = {dme::Fig6Panel::qc, dme::Fig6Panel::qcv};
    else throw ConfigError("panel must be qc, qcv or both");

    std::vector<dme::LadderConvention> conventions;
    if (cfg.ladder == "both")
        conventions = {dme::LadderConvention::conventional, dme::LadderConvention::paper};
    else
        conventions = {parse_ladder(cfg.ladder)};

    const std::size_t n_f = cfg.n_f ? cfg.n_f : 96;
    dme::IntegrateOptions iopts;
    iopts.steps = cfg.steps;
    iopts.sample_count = 2;

    csv::Table table({"panel", "kappa", "gamma", "C_qc_final", "tau_sq_final",
                      "ladder_convention", "N_f", "steps"});
    for (auto panel : panels) {
        for (auto ladder : conventions) {
            dme::ModelOptions opts;
            opts.ladder = ladder;
            const auto rows = dme::sweep_dissipative(p, d, kappas, gammas, panel, n_f, opts,
                                                     iopts, cfg.threads);
            for (const auto& row : rows)
                table.add_row({row.panel, csv::format_double(row.kappa),
                               csv::format_double(row.gamma),
                               csv::format_double(row.C_qc_final),
                               csv::format_double(row.tau_sq_final), row.ladder_convention,
                               csv::format_size(row.n_f), csv::format_size(row.steps)});
        }
    }
    table.write(cfg.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeezent: tripartite qubit-cavity-resonator entanglement toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::vector<std::string> axis_specs;
    bool flag_qutrit_lock = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--g", cfg.params.g, "cavity-resonator coupling");
        sub->add_option("--lambda", cfg.params.lambda, "qubit-resonator coupling");
        sub->add_option("--omega", cfg.params.Omega, "dimensionless evolution phase");
        sub->add_option("--beta", cfg.params.beta, "coherent amplitude (real)");
        sub->add_option("--r", cfg.params.r, "squeezing amplitude");
        sub->add_option("--phi-xi", cfg.params.phi_xi, "squeezing phase");
        sub->add_option("--out", cfg.out, "output path (default: stdout)");
        sub->add_option("--seed", cfg.seed, "seed for randomized suites");
        sub->add_option("--threads", cfg.threads,
                        "worker count (0 = auto, also SQUEEZENT_THREADS)");
    };
    auto add_dissipation = [&](CLI::App* sub) {
        sub->add_option("--kappa", cfg.dissipation.kappa, "cavity decay rate");
        sub->add_option("--gamma", cfg.dissipation.gamma, "resonator decay rate");
        sub->add_option("--qubit-relax", cfg.dissipation.qubit_relax, "qubit relaxation rate");
        sub->add_option_function<double>(
            "--qubit-dephasing",
            [&](double v) {
                cfg.dissipation.qubit_dephasing = v;
                cfg.has_dephasing_choice = true;
            },
            "dressed qubit dephasing rate (used as-is)");
        sub->add_option_function<double>(
            "--qubit-pure-dephasing",
            [&](double v) {
                cfg.dissipation.qubit_pure_dephasing = v;
                cfg.has_dephasing_choice = true;
            },
            "pure dephasing rate (dressed internally)");
        sub->add_option("--n-v", cfg.dissipation.n_v, "bath phonon occupancy");
        sub->add_option("--n-f", cfg.n_f, "mechanical cutoff (0 = default with auto check)");
        sub->add_option("--steps", cfg.steps, "RK4 step count (0 = stability bound)");
        sub->add_option("--samples", cfg.samples, "time-series sample count");
        sub->add_option("--ladder-convention", cfg.ladder,
                        "conventional | paper | both (both: fig6 only)");
        sub->add_option("--omega-end", cfg.omega_end, "integration endpoint");
    };

    CLI::App* measure = app.add_subcommand("measure", "single-point entanglement report");
    add_common(measure);
    measure->add_flag("--qutrit-lock", flag_qutrit_lock, "lock g = 2 lambda");

    CLI::App* sweep = app.add_subcommand("sweep", "closed-system parameter sweep to CSV");
    add_common(sweep);
    sweep->add_option("--axis", axis_specs,
                      "axis spec name=lo:hi:count or name=v1,v2,... (repeatable)");
    sweep->add_flag("--qutrit-lock", flag_qutrit_lock, "lock g = 2 lambda");

    CLI::App* oracle_check =
        app.add_subcommand("oracle-check", "brute-force verification of the closed forms");
    add_common(oracle_check);
    oracle_check->add_option("--points", cfg.points, "number of seeded random points");
    oracle_check->add_option("--r-max", cfg.r_max, "maximum sampled squeezing (<= 3)");
    oracle_check->add_option("--force-n-f", cfg.force_n_f,
                             "pin the Fock cutoff (diagnostic; disables growth)");

    CLI::App* dme_cmd = app.add_subcommand("dme", "dissipative evolution time series");
    add_common(dme_cmd);
    add_dissipation(dme_cmd);
    dme_cmd->add_option("--model", cfg.model, "dme | sme");

    CLI::App* fig6 = app.add_subcommand("fig6", "dissipative endpoint grid to CSV");
    add_common(fig6);
    add_dissipation(fig6);
    fig6->add_option_function<std::string>(
        "--kappa-list",
        [&](const std::string& s) { cfg.kappa_list = parse_axis_string(s, "kappa_list"); },
        "cavity decay grid (lo:hi:count or comma list)");
    fig6->add_option_function<std::string>(
        "--gamma-list",
        [&](const std::string& s) { cfg.gamma_list = parse_axis_string(s, "gamma_list"); },
        "resonator decay grid (lo:hi:count or comma list)");
    fig6->add_option("--panel", cfg.panel, "qc | qcv | both");

    // Parse twice so a config file loads first and flags override it.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        if (!config_path.empty()) {
            RunConfig merged;
            load_config_file(merged, config_path);
            cfg.params = merged.params;
            cfg.dissipation = merged.dissipation;
            cfg.has_dephasing_choice = merged.has_dephasing_choice;
            cfg.axes = merged.axes;
            cfg.qutrit_lock = merged.qutrit_lock;
            if (!merged.out.empty()) cfg.out = merged.out;
            cfg.seed = merged.seed;
            cfg.threads = merged.threads;
            cfg.points = merged.points;
            cfg.r_max = merged.r_max;
            cfg.force_n_f = merged.force_n_f;
            cfg.n_f = merged.n_f;
            cfg.steps = merged.steps;
            cfg.samples = merged.samples;
            cfg.ladder = merged.ladder;
            cfg.model = merged.model;
            cfg.omega_end = merged.omega_end;
            cfg.kappa_list = merged.kappa_list;
            cfg.gamma_list = merged.gamma_list;
            cfg.panel = merged.panel;
            try {
                app.clear();
                app.parse(argc, argv);
            } catch (const CLI::ParseError& e) {
                return app.exit(e) == 0 ? 0 : 2;
            }
        }
        cfg.qutrit_lock = cfg.qutrit_lock || flag_qutrit_lock;
        for (const auto& spec : axis_specs) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--axis expects name=values, got '" + spec + "'");
            const std::string name = spec.substr(0, eq);
            if (std::find(kAxisOrder.begin(), kAxisOrder.end(), name) == kAxisOrder.end())
                throw ConfigError("unknown sweep axis '" + name + "'");
            std::erase_if(cfg.axes, [&](const auto& kv) { return kv.first == name; });
            cfg.axes.emplace_back(name, parse_axis_string(spec.substr(eq + 1), name));
        }

        if (measure->parsed()) return cmd_measure(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (oracle_check->parsed()) return cmd_oracle_check(cfg);
        if (dme_cmd->parsed()) return cmd_dme(cfg);
        if (fig6->parsed()) return cmd_fig6(cfg);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CheckError& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
