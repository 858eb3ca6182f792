// ntun: tunneling-time statistics from stochastic-mechanics sample paths.
// Subcommands: run (single experiment), sweep (families over d, delta_x or
// epsilon), fit (refit a persisted tau list), plotdata (figure exports).
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nelson/run.hpp"
#include "nelson/scaling.hpp"
#include "nelson/sweep.hpp"

namespace {

std::string default_out_root() {
    if (const char* env = std::getenv("NTUN_OUT_ROOT")) return env;
    return "ntun_out";
}

std::vector<double> parse_csv_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

struct Overrides {
    std::string config_path;
    std::string profile;
    std::vector<std::pair<std::string, double>> numeric; // key, value
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> paths;
    std::optional<std::uint64_t> bins;
    std::optional<int> threads;
};

nelson::SimulationConfig make_config(const Overrides& o) {
    nelson::SimulationConfig cfg;
    if (!o.config_path.empty()) cfg = nelson::SimulationConfig::load_file(o.config_path);
    if (!o.profile.empty()) cfg.apply_profile(o.profile);
    for (const auto& [key, value] : o.numeric) {
        if (key == "d") cfg.d = value;
        else if (key == "delta_x") cfg.delta_x = value;
        else if (key == "v0") cfg.v0 = value;
        else if (key == "p_mean") cfg.p_mean = value;
        else if (key == "x_mean") cfg.x_mean = value;
        else if (key == "x_min") cfg.x_min = value;
        else if (key == "x_max") cfg.x_max = value;
        else if (key == "dt") cfg.dt = value;
        else if (key == "dx") cfg.dx = value;
        else if (key == "t_f") { cfg.t_f = value; cfg.tf_mode = nelson::TfMode::Fixed; }
    }
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.paths) cfg.n_paths = *o.paths;
    if (o.bins) cfg.histogram_bins = *o.bins;
    if (o.threads) cfg.n_threads = *o.threads;
    return cfg;
}

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "config file (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--profile", o.profile, "resolution profile: desk or paper");
    cmd->add_option_function<double>("--d", [&o](double v) { o.numeric.emplace_back("d", v); },
                                     "barrier width d (1/k0)");
    cmd->add_option_function<double>(
        "--delta-x", [&o](double v) { o.numeric.emplace_back("delta_x", v); },
        "packet width delta_x (1/k0)");
    cmd->add_option_function<double>("--v0", [&o](double v) { o.numeric.emplace_back("v0", v); },
                                     "barrier height V0");
    cmd->add_option_function<double>(
        "--p-mean", [&o](double v) { o.numeric.emplace_back("p_mean", v); },
        "packet mean momentum");
    cmd->add_option_function<double>(
        "--x-mean", [&o](double v) { o.numeric.emplace_back("x_mean", v); },
        "packet center (1/k0)");
    cmd->add_option_function<double>(
        "--x-min", [&o](double v) { o.numeric.emplace_back("x_min", v); }, "box left wall");
    cmd->add_option_function<double>(
        "--x-max", [&o](double v) { o.numeric.emplace_back("x_max", v); }, "box right wall");
    cmd->add_option_function<double>("--dt", [&o](double v) { o.numeric.emplace_back("dt", v); },
                                     "time step (1/k0^2)");
    cmd->add_option_function<double>("--dx", [&o](double v) { o.numeric.emplace_back("dx", v); },
                                     "grid spacing (1/k0)");
    cmd->add_option_function<double>(
        "--t-f", [&o](double v) { o.numeric.emplace_back("t_f", v); },
        "fixed final time instead of the automatic stop policy");
    o.seed.reset();
    o.paths.reset();
    o.bins.reset();
    o.threads.reset();
    cmd->add_option("--seed", [&o](CLI::results_t r) { o.seed = std::stoull(r[0]); return true; },
                    "master seed");
    cmd->add_option("--paths", [&o](CLI::results_t r) { o.paths = std::stoull(r[0]); return true; },
                    "ensemble size N");
    cmd->add_option("--bins", [&o](CLI::results_t r) { o.bins = std::stoull(r[0]); return true; },
                    "histogram bins (0 = automatic)");
    cmd->add_option("--threads",
                    [&o](CLI::results_t r) { o.threads = std::stoi(r[0]); return true; },
                    "worker threads (0 = all)");
}

void print_summary(const nelson::RunSummary& s) {
    std::cout << "t_final = " << s.diag.t_final << " (" << s.diag.stop_reason << ")\n"
              << "transmitted/reflected/undecided = " << s.diag.n_transmitted << "/"
              << s.diag.n_reflected << "/" << s.diag.n_undecided << "\n"
              << "path fraction transmitted = " << s.frac_transmitted
              << "   PDE region-III probability = " << s.diag.pde_transmission << "\n";
    if (s.stats_ok)
        std::cout << "mean tau = " << s.mean_tau << "   dev tau = " << s.dev_tau << "\n";
    if (s.ls_ok)
        std::cout << "gamma LS: alpha = " << s.ls_fit.alpha << " +- " << s.ls_sigma.sigma_alpha
                  << ", beta = " << s.ls_fit.beta << " +- " << s.ls_sigma.sigma_beta << "\n";
    else
        std::cout << "gamma LS: unavailable (" << s.ls_error << ")\n";
    if (s.mle_ok)
        std::cout << "gamma MLE: alpha = " << s.mle_fit.alpha << ", beta = " << s.mle_fit.beta
                  << "\n";
    if (s.wkb_ok)
        std::cout << "kappa d = " << s.kappa_d << "   tau_WKB = " << s.tau_wkb << "\n";
    std::cout << "norm drift = " << s.diag.norm_drift_max
              << "   cap fraction = " << s.diag.cap_fraction()
              << "   wall hits = " << s.diag.wall_hits << "\n";
    if (s.diag.tf_too_short)
        std::cout << "warning: undecided fraction " << s.diag.undecided_frac
                  << " exceeds threshold; t_f looks too short\n";
    for (const auto& b : s.diag.born_checks)
        std::cout << "born check t = " << b.t << ": KS = " << b.ks << " (1% critical "
                  << b.ks_critical << ")\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tunneling-time distributions from Langevin sample paths driven by a "
                 "Crank-Nicolson wavefunction"};
    app.require_subcommand(1);

    // run ------------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    Overrides run_o;
    std::string run_out = default_out_root();
    std::string run_label = "run";
    std::string born_csv;
    add_override_flags(run_cmd, run_o);
    run_cmd->add_option("--out", run_out, "output root directory");
    run_cmd->add_option("--label", run_label, "artifact directory name");
    run_cmd->add_option("--born", born_csv,
                        "comma list of KS checkpoint times (-1 = final time)");

    // sweep ----------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "family of runs over one parameter");
    Overrides sweep_o;
    std::string sweep_kind = "width";
    std::string sweep_values;
    std::string sweep_out = default_out_root();
    std::string sweep_label = "sweep";
    nelson::SweepOptions sweep_opts;
    add_override_flags(sweep_cmd, sweep_o);
    sweep_cmd->add_option("--kind", sweep_kind, "width | packet | epsilon");
    sweep_cmd->add_option("--values", sweep_values, "comma list of sweep values")->required();
    sweep_cmd->add_option("--out", sweep_out, "output root directory");
    sweep_cmd->add_option("--label", sweep_label, "sweep directory name");
    sweep_cmd->add_option("--min-transmitted", sweep_opts.min_transmitted,
                          "grow N per entry until the plane-wave estimate predicts this many "
                          "transmitted paths");
    sweep_cmd->add_option("--max-paths", sweep_opts.max_paths, "cap for the growth rule");

    // fit ------------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "refit a persisted tau list");
    std::string fit_input;
    std::uint64_t fit_bins = 0;
    std::string fit_method = "both";
    fit_cmd->add_option("--input", fit_input, "tau list, one value per line")->required();
    fit_cmd->add_option("--bins", fit_bins, "histogram bins (0 = automatic)");
    fit_cmd->add_option("--method", fit_method, "ls | mle | both");

    // plotdata ---------------------------------------------------------------
    auto* plot_cmd = app.add_subcommand("plotdata", "emit plot-ready columns for a figure");
    std::string plot_artifact, plot_figure, plot_out;
    plot_cmd->add_option("--artifact", plot_artifact, "run dir (fig2) or sweep dir")->required();
    plot_cmd->add_option("--figure", plot_figure, "fig2..fig6, fig8..fig11")->required();
    plot_cmd->add_option("--out", plot_out, "output data file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (*run_cmd) {
            nelson::SimulationConfig cfg = make_config(run_o);
            cfg.out_dir = run_out + "/" + run_label;
            cfg.validate();
            std::vector<double> born;
            if (!born_csv.empty()) born = parse_csv_doubles(born_csv);
            const nelson::RunOutput out = nelson::run_single_to_dir(cfg, cfg.out_dir, born);
            print_summary(out.summary);
            std::cout << "artifacts: " << cfg.out_dir << "\n";
        } else if (*sweep_cmd) {
            const nelson::SimulationConfig base = make_config(sweep_o);
            sweep_opts.out_dir = sweep_out + "/" + sweep_label;
            const auto values = parse_csv_doubles(sweep_values);
            const auto rows = nelson::run_sweep(nelson::sweep_kind_from_string(sweep_kind), base,
                                                values, sweep_opts);
            std::size_t failed = 0;
            for (const auto& r : rows) {
                std::cout << sweep_kind << " = " << r.value << ": ";
                if (r.failed) {
                    std::cout << "FAILED (" << r.error << ")\n";
                    ++failed;
                    continue;
                }
                std::cout << "n_trans = " << r.n_transmitted << ", mean = " << r.mean_tau
                          << ", dev = " << r.dev_tau;
                if (r.ls_ok) std::cout << ", alpha = " << r.alpha << ", beta = " << r.beta;
                std::cout << "\n";
            }
            std::cout << "table: " << sweep_opts.out_dir << "/sweep_table.txt\n";
            if (failed == rows.size()) throw nelson::NumericError("every sweep entry failed");
        } else if (*fit_cmd) {
            const auto taus = nelson::load_taus(fit_input);
            nelson::FitMethod method = nelson::FitMethod::Both;
            if (fit_method == "ls") method = nelson::FitMethod::LeastSquares;
            else if (fit_method == "mle") method = nelson::FitMethod::Mle;
            else if (fit_method != "both")
                throw nelson::ConfigError("fit: bad --method '" + fit_method + "'");
            const auto res = nelson::refit_taus(taus, fit_bins, method);
            std::cout << "n = " << res.n << ", mean tau = " << res.mean_tau
                      << ", dev tau = " << res.dev_tau << "\n";
            if (res.ls)
                std::cout << "LS : alpha = " << res.ls->alpha << ", beta = " << res.ls->beta
                          << ", residual = " << res.ls->residual << "\n";
            if (res.mle)
                std::cout << "MLE: alpha = " << res.mle->alpha << ", beta = " << res.mle->beta
                          << "\n";
        } else if (*plot_cmd) {
            nelson::emit_plot_data(plot_artifact, plot_figure, plot_out);
            std::cout << "wrote " << plot_out << "\n";
        }
    } catch (const nelson::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nelson::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
