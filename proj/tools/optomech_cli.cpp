// Command-line front end: trajectory / branches / sweep / check subcommands,
// deterministic CSV outputs, and a JSON run manifest per invocation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "optomech/config.hpp"
#include "optomech/csv.hpp"
#include "optomech/fluctuations.hpp"
#include "optomech/meanfield.hpp"
#include "optomech/steadystate.hpp"
#include "optomech/sweep.hpp"

namespace {

constexpr const char* kVersion = "optomech 0.1.0";

using nlohmann::json;
using namespace optomech;

struct CommonOpts {
    std::string config_path;
    std::string prefix = "run";
    int threads = 0;
};

int default_threads() {
    if (const char* env = std::getenv("OPTOMECH_THREADS")) {
        try {
            return std::stoi(env);
        } catch (...) {
            throw ConfigError("OPTOMECH_THREADS must be an integer");
        }
    }
    return 0;
}

std::vector<std::string> validity_warnings(const SystemParams& p, const DerivedParams& d,
                                           double photon_number) {
    std::vector<std::string> w;
    const auto rep = validity_check(p, d, photon_number);
    if (!rep.backaction_ok) {
        std::ostringstream os;
        os << "weak-coupling check failed: U0*I/(10*omega_R) = " << rep.backaction_ratio
           << " at I = " << photon_number;
        w.push_back(os.str());
    }
    {
        std::ostringstream os;
        os << "sideband ratio kappa/omega_m = " << rep.sideband_ratio
           << (rep.unresolved_sideband ? " (unresolved sideband regime)"
                                       : " (resolved sideband regime)");
        w.push_back(os.str());
    }
    return w;
}

void write_manifest(const CommonOpts& opts, const std::string& command,
                    const SystemParams& p, const std::vector<std::string>& outputs,
                    const std::vector<std::string>& warnings, double wall_seconds) {
    json m;
    m["command"] = command;
    m["code_version"] = kVersion;
    m["wall_time_s"] = wall_seconds;
    m["outputs"] = outputs;
    m["warnings"] = warnings;
    m["config"] = params_to_json(p);
    std::ofstream out(opts.prefix + "_manifest.json");
    if (!out) throw ConfigError("cannot write manifest file");
    out << m.dump(2) << "\n";
}

int run_trajectory(const CommonOpts& opts, const SystemParams& base,
                   const std::string& model_name, double t_end_gm, double dt_kt,
                   int sample_stride, double delta_c_over_kappa, double eta_over_kappa,
                   double xi2_ratio, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    SystemParams p = base;
    if (delta_c_over_kappa == delta_c_over_kappa) p.delta_c = delta_c_over_kappa * p.kappa;
    if (eta_over_kappa == eta_over_kappa) p.eta = eta_over_kappa * p.kappa;
    if (xi2_ratio == xi2_ratio) p.xi2 = xi2_ratio * p.xi1;
    const DerivedParams d = derive_params(p);

    TrajectoryConfig cfg;
    cfg.model = model_name == "full" ? MeanFieldModel::full : MeanFieldModel::adiabatic;
    cfg.t_end = t_end_gm / p.gamma_m;
    cfg.dt = dt_kt > 0.0 ? dt_kt / p.kappa
                         : (cfg.model == MeanFieldModel::full ? 0.02 : 2.0) / p.kappa;
    if (sample_stride > 0) {
        cfg.sample_stride = sample_stride;
    } else {
        const long n_steps = std::lround(std::ceil(cfg.t_end / cfg.dt));
        cfg.sample_stride = static_cast<int>(std::max(1L, n_steps / 5000));
    }

    const Trajectory traj = integrate(p, d, cfg);

    const std::string csv_path = opts.prefix + "_trajectory.csv";
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot write " + csv_path);
    out << "t,gamma_m_t,alpha_re,alpha_im,photon,q,p,Q,P\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        out << g17(traj.times[i]) << ',' << g17(traj.times[i] * p.gamma_m) << ','
            << g17(s.alpha_re) << ',' << g17(s.alpha_im) << ','
            << g17(traj.photon_numbers[i]) << ',' << g17(s.q_bar) << ',' << g17(s.p_bar)
            << ',' << g17(s.Q_bar) << ',' << g17(s.P_bar) << '\n';
    }
    out.close();

    double max_photon = 0.0;
    for (double v : traj.photon_numbers) max_photon = std::max(max_photon, v);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts, command, p, {csv_path}, validity_warnings(p, d, max_photon), wall);
    return 0;
}

int run_branches(const CommonOpts& opts, const SystemParams& base, double dmin_k,
                 double dmax_k, int n_points, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const DerivedParams d = derive_params(base);
    const BranchSweep sweep = sweep_detuning(base, d, dmin_k * base.kappa,
                                             dmax_k * base.kappa, n_points, opts.threads);

    const std::string csv_path = opts.prefix + "_branches.csv";
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot write " + csv_path);
    out << "delta_c_over_kappa,branch_id,photon,stable,q,Q,margin_over_kappa\n";
    double max_photon = 0.0;
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        std::vector<BranchPoint> pts = sweep.points[i];
        std::sort(pts.begin(), pts.end(),
                  [](const BranchPoint& a, const BranchPoint& b) {
                      return a.branch_id < b.branch_id;
                  });
        for (const auto& bp : pts) {
            max_photon = std::max(max_photon, bp.photon_number);
            out << g17(bp.delta_c / base.kappa) << ',' << bp.branch_id << ','
                << g17(bp.photon_number) << ',' << (bp.stable ? 1 : 0) << ','
                << g17(bp.state.q_bar) << ',' << g17(bp.state.Q_bar) << ','
                << g17(bp.margin / base.kappa) << '\n';
        }
    }
    out.close();

    json folds = json::array();
    for (const auto& f : sweep.folds) {
        folds.push_back({{"delta_lo_over_kappa", f.delta_lo / base.kappa},
                         {"delta_hi_over_kappa", f.delta_hi / base.kappa},
                         {"count_lo", f.count_lo},
                         {"count_hi", f.count_hi}});
    }
    const std::string folds_path = opts.prefix + "_folds.json";
    std::ofstream fout(folds_path);
    if (!fout) throw ConfigError("cannot write " + folds_path);
    fout << json{{"max_coexisting_count", sweep.max_count}, {"folds", folds}}.dump(2)
         << "\n";
    fout.close();

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts, command, base, {csv_path, folds_path},
                   validity_warnings(base, d, max_photon), wall);
    return 0;
}

int run_sweep(const CommonOpts& opts, const SystemParams& base,
              const std::string& ratios_csv, const std::string& injection, double dmin_k,
              double dmax_k, int n_points, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();

    ObservablesSweepConfig cfg;
    cfg.delta_min = dmin_k * base.kappa;
    cfg.delta_max = dmax_k * base.kappa;
    cfg.n_points = n_points;
    cfg.threads = opts.threads;
    std::stringstream ss(ratios_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            cfg.xi2_ratios.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("bad value in --xi2-ratios: '" + tok + "'");
        }
    }
    if (injection == "off") {
        cfg.injection = InjectionSelect::off;
    } else if (injection == "on") {
        cfg.injection = InjectionSelect::on;
    } else if (injection == "both") {
        cfg.injection = InjectionSelect::both;
    } else {
        throw ConfigError("--injection must be off, on, or both");
    }

    const auto rows = sweep_observables(base, cfg);

    const std::string csv_path = opts.prefix + "_observables.csv";
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot write " + csv_path);
    out << "delta_c_over_kappa,xi2_over_xi1,squeezing_injected,photon,sigma_q,sigma_Q,"
           "s_q_db,s_Q_db,e_n\n";
    double max_photon = 0.0;
    for (const auto& row : rows) {
        out << g17(row.delta_c_over_kappa) << ',' << g17(row.xi2_over_xi1) << ','
            << (row.injected ? 1 : 0) << ',';
        if (row.on_branch1) {
            max_photon = std::max(max_photon, row.photon);
            out << g17(row.photon);
        }
        out << ',';
        if (row.obs) {
            out << g17(row.obs->sigma_q) << ',' << g17(row.obs->sigma_Q) << ','
                << g17(row.obs->s_q_db) << ',' << g17(row.obs->s_Q_db) << ','
                << g17(row.obs->e_n);
        } else {
            out << ",,,,";
        }
        out << '\n';
    }
    out.close();

    const DerivedParams d = derive_params(base);
    auto warnings = validity_warnings(base, d, max_photon);
    warnings.push_back(std::string("d_convention: ") +
                       (base.d_convention == DConvention::standard ? "standard"
                                                                   : "paper-literal"));
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts, command, base, {csv_path}, warnings, wall);
    return 0;
}

int run_check(const CommonOpts& opts, const SystemParams& base,
              const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const DerivedParams d = derive_params(base);
    const auto branches = find_branches(base, d, base.delta_c);
    double max_photon = 0.0;
    for (const auto& bp : branches) max_photon = std::max(max_photon, bp.photon_number);

    std::cout << "derived parameters:\n"
              << "  chi       = " << g17(d.chi) << "\n"
              << "  omega_c   = " << g17(d.omega_c) << " rad/s\n"
              << "  zeta      = " << g17(d.zeta) << " rad/s (" << g17(d.zeta / base.kappa)
              << " kappa)\n"
              << "  n_m       = " << g17(d.n_m) << "\n"
              << "  n_c       = " << g17(d.n_c) << "\n"
              << "  r_sq      = " << g17(d.r_sq) << "\n"
              << "  M_s       = (" << g17(d.m_s_re) << ", " << g17(d.m_s_im) << ")\n";
    std::cout << "steady states at delta_c = " << g17(base.delta_c / base.kappa)
              << " kappa:\n";
    for (const auto& bp : branches) {
        std::cout << "  I = " << g17(bp.photon_number)
                  << (bp.stable ? "  (stable, margin " : "  (unstable, margin ")
                  << g17(bp.margin / base.kappa) << " kappa)\n";
    }
    const auto rep = validity_check(base, d, max_photon);
    std::cout << "validity:\n"
              << "  backaction ratio U0*I/(10*omega_R) = " << g17(rep.backaction_ratio)
              << (rep.backaction_ok ? "  [ok]" : "  [warn]") << "\n"
              << "  kappa/omega_m = " << g17(rep.sideband_ratio)
              << (rep.unresolved_sideband ? "  [unresolved sideband]"
                                          : "  [resolved sideband]")
              << "\n";

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts, command, base, {}, validity_warnings(base, d, max_photon), wall);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optomechanical cavity + BEC simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts opts;
    try {
        opts.threads = default_threads();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    app.add_option("-c,--config", opts.config_path, "JSON parameter file")->required();
    app.add_option("-o,--output-prefix", opts.prefix, "Prefix for output files");
    app.add_option("--threads", opts.threads,
                   "Worker threads for sweeps (0 = hardware default)");

    auto* traj = app.add_subcommand("trajectory", "Integrate the mean-field dynamics");
    std::string model = "adiabatic";
    double t_end_gm = 1.0, dt_kt = 0.0;
    int sample_stride = 0;
    const double nan = std::nan("");
    double ov_delta = nan, ov_eta = nan, ov_xi2r = nan;
    traj->add_option("--model", model, "full or adiabatic")
        ->check(CLI::IsMember({"full", "adiabatic"}));
    traj->add_option("--t-end-gamma-m-t", t_end_gm, "Horizon in units of 1/gamma_m");
    traj->add_option("--dt-kappa-t", dt_kt, "Step in units of 1/kappa (0 = default)");
    traj->add_option("--sample-stride", sample_stride, "Record every N-th step (0 = auto)");
    traj->add_option("--delta-c", ov_delta, "Override delta_c, in kappa units");
    traj->add_option("--eta", ov_eta, "Override eta, in kappa units");
    traj->add_option("--xi2-ratio", ov_xi2r, "Override xi2/xi1");

    auto* br = app.add_subcommand("branches", "Steady-state branches vs detuning");
    double b_dmin = 0.0, b_dmax = 120.0;
    int b_n = 241;
    br->add_option("--delta-min", b_dmin, "Lower detuning, kappa units");
    br->add_option("--delta-max", b_dmax, "Upper detuning, kappa units");
    br->add_option("--n-points", b_n, "Grid points");

    auto* sw = app.add_subcommand("sweep", "Branch-1 fluctuation observables sweep");
    std::string ratios = "0";
    std::string injection = "off";
    double s_dmin = 0.0, s_dmax = 400.0;
    int s_n = 400;
    sw->add_option("--xi2-ratios", ratios, "Comma-separated xi2/xi1 values");
    sw->add_option("--injection", injection, "off, on, or both");
    sw->add_option("--delta-min", s_dmin, "Lower detuning, kappa units");
    sw->add_option("--delta-max", s_dmax, "Upper detuning, kappa units");
    sw->add_option("--n-points", s_n, "Grid points");

    auto* ck = app.add_subcommand("check", "Print derived parameters and validity report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::string command;
    for (int i = 0; i < argc; ++i) {
        if (i) command += ' ';
        command += argv[i];
    }

    try {
        const SystemParams base = load_config(opts.config_path);
        if (traj->parsed()) {
            return run_trajectory(opts, base, model, t_end_gm, dt_kt, sample_stride,
                                  ov_delta, ov_eta, ov_xi2r, command);
        }
        if (br->parsed()) {
            return run_branches(opts, base, b_dmin, b_dmax, b_n, command);
        }
        if (sw->parsed()) {
            return run_sweep(opts, base, ratios, injection, s_dmin, s_dmax, s_n, command);
        }
        if (ck->parsed()) {
            return run_check(opts, base, command);
        }
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
