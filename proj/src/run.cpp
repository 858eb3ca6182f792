#include "nelson/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace nelson {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw NumericError("cannot write " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

} // namespace

RunOutput run_single(const SimulationConfig& config, const std::vector<double>& born_times) {
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput out;
    out.summary.config = config;

    const RunResult run = run_lockstep(config, born_times);
    out.summary.diag = run.diagnostics;

    for (const auto& rec : run.ensemble.paths) {
        if (rec.status != PathStatus::Transmitted) continue;
        if (rec.tau > 0.0)
            out.taus.push_back(rec.tau);
        else
            ++out.summary.n_tau_zero_dropped; // crossed in one hop, carries no clock
    }
    out.summary.frac_transmitted =
        static_cast<double>(run.diagnostics.n_transmitted) / static_cast<double>(config.n_paths);

    auto& s = out.summary;
    if (out.taus.size() >= 2) {
        const auto [mean, dev] = moments(out.taus);
        s.mean_tau = mean;
        s.dev_tau = dev;
        s.stats_ok = true;
    }

    const bool want_ls =
        config.fit_method == FitMethod::Both || config.fit_method == FitMethod::LeastSquares;
    const bool want_mle =
        config.fit_method == FitMethod::Both || config.fit_method == FitMethod::Mle;

    if (want_ls && !out.taus.empty()) {
        try {
            s.ls_fit = fit_gamma_least_squares(build_histogram(out.taus, config.histogram_bins));
            s.ls_ok = true;
            if (out.taus.size() >= 20)
                s.ls_sigma = bootstrap_ls_uncertainty(out.taus, config.histogram_bins, 200,
                                                      config.master_seed ^ 0x9e3779b97f4a7c15ull);
        } catch (const std::exception& e) {
            s.ls_error = e.what();
        }
    } else if (want_ls) {
        s.ls_error = "no transmitted paths";
    }

    if (want_mle && !out.taus.empty()) {
        try {
            s.mle_fit = fit_gamma_mle(out.taus);
            s.mle_ok = true;
        } catch (const std::exception& e) {
            s.mle_error = e.what();
        }
    } else if (want_mle) {
        s.mle_error = "no transmitted paths";
    }

    s.kappa_d = (config.e0() < config.v0) ? config.kappa_d() : 0.0;
    if (config.e0() < config.v0) {
        s.tau_wkb = wkb_time(config.barrier(), config.e0());
        s.wkb_ok = true;
        if (s.ls_ok) s.kappa2_beta = config.kappa() * config.kappa() * s.ls_fit.beta;
    }

    s.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void write_run_artifacts(const RunOutput& out, const std::string& dir) {
    fs::create_directories(dir);
    const RunSummary& s = out.summary;

    write_atomic(dir + "/config.txt", s.config.serialize());

    {
        std::ostringstream os;
        os << "# tunneling time tau per transmitted path, units 1/k0^2, one per line\n";
        os.precision(17);
        for (double t : out.taus) os << t << "\n";
        write_atomic(dir + "/tau_samples.txt", os.str());
    }

    if (!out.taus.empty()) {
        const TunnelingHistogram h = build_histogram(out.taus, s.config.histogram_bins);
        std::ostringstream os;
        os << "# tunneling time histogram\n";
        os << "# col 1: bin center tau (1/k0^2); col 2: count; col 3: height normalized "
              "over transmitted paths\n";
        os << "# bin_width = " << fmt(h.bin_width) << "  n_transmitted = " << h.n_transmitted
           << "\n";
        os.precision(17);
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            os << h.center(b) << " " << h.counts[b] << " " << h.height(b) << "\n";
        write_atomic(dir + "/histogram.txt", os.str());
    }

    {
        std::ostringstream os;
        os << "# gamma fits of the tunneling time distribution\n";
        os << "# method alpha beta residual n implied_mean implied_dev sigma_alpha sigma_beta\n";
        if (s.ls_ok) {
            const auto [im, id] = s.ls_fit.implied_moments();
            os << "ls " << fmt(s.ls_fit.alpha) << " " << fmt(s.ls_fit.beta) << " "
               << fmt(s.ls_fit.residual) << " " << s.ls_fit.n_samples << " " << fmt(im) << " "
               << fmt(id) << " " << fmt(s.ls_sigma.sigma_alpha) << " "
               << fmt(s.ls_sigma.sigma_beta) << "\n";
        } else {
            os << "# ls failed: " << s.ls_error << "\n";
        }
        if (s.mle_ok) {
            const auto [im, id] = s.mle_fit.implied_moments();
            os << "mle " << fmt(s.mle_fit.alpha) << " " << fmt(s.mle_fit.beta) << " "
               << fmt(s.mle_fit.residual) << " " << s.mle_fit.n_samples << " " << fmt(im) << " "
               << fmt(id) << " 0 0\n";
        } else {
            os << "# mle failed: " << s.mle_error << "\n";
        }
        write_atomic(dir + "/fit.txt", os.str());
    }

    {
        std::ostringstream os;
        os << "# run summary (deterministic; timings live in run_meta.txt)\n";
        os << "n_paths = " << s.config.n_paths << "\n";
        os << "n_transmitted = " << s.diag.n_transmitted << "\n";
        os << "n_reflected = " << s.diag.n_reflected << "\n";
        os << "n_undecided = " << s.diag.n_undecided << "\n";
        os << "undecided_frac = " << fmt(s.diag.undecided_frac) << "\n";
        os << "tf_too_short = " << (s.diag.tf_too_short ? 1 : 0) << "\n";
        os << "n_tau_zero_dropped = " << s.n_tau_zero_dropped << "\n";
        os << "frac_transmitted = " << fmt(s.frac_transmitted) << "\n";
        os << "pde_transmission = " << fmt(s.diag.pde_transmission) << "\n";
        os << "stats_ok = " << (s.stats_ok ? 1 : 0) << "\n";
        os << "mean_tau = " << fmt(s.mean_tau) << "\n";
        os << "dev_tau = " << fmt(s.dev_tau) << "\n";
        os << "ls_ok = " << (s.ls_ok ? 1 : 0) << "\n";
        os << "ls_alpha = " << fmt(s.ls_ok ? s.ls_fit.alpha : 0.0) << "\n";
        os << "ls_beta = " << fmt(s.ls_ok ? s.ls_fit.beta : 0.0) << "\n";
        os << "ls_residual = " << fmt(s.ls_ok ? s.ls_fit.residual : 0.0) << "\n";
        os << "ls_sigma_alpha = " << fmt(s.ls_sigma.sigma_alpha) << "\n";
        os << "ls_sigma_beta = " << fmt(s.ls_sigma.sigma_beta) << "\n";
        os << "mle_ok = " << (s.mle_ok ? 1 : 0) << "\n";
        os << "mle_alpha = " << fmt(s.mle_ok ? s.mle_fit.alpha : 0.0) << "\n";
        os << "mle_beta = " << fmt(s.mle_ok ? s.mle_fit.beta : 0.0) << "\n";
        os << "kappa_d = " << fmt(s.kappa_d) << "\n";
        os << "kappa2_beta = " << fmt(s.kappa2_beta) << "\n";
        os << "wkb_ok = " << (s.wkb_ok ? 1 : 0) << "\n";
        os << "tau_wkb = " << fmt(s.tau_wkb) << "\n";
        os << "norm_drift_max = " << fmt(s.diag.norm_drift_max) << "\n";
        os << "energy_drift_rel = " << fmt(s.diag.energy_drift_rel) << "\n";
        os << "cap_events = " << s.diag.cap_events << "\n";
        os << "path_steps = " << s.diag.path_steps << "\n";
        os << "cap_fraction = " << fmt(s.diag.cap_fraction()) << "\n";
        os << "wall_hits = " << s.diag.wall_hits << "\n";
        os << "pde_steps = " << s.diag.pde_steps << "\n";
        os << "t_final = " << fmt(s.diag.t_final) << "\n";
        os << "stop_reason = " << s.diag.stop_reason << "\n";
        os << "p_region2_final = " << fmt(s.diag.p_region2_final) << "\n";
        for (std::size_t i = 0; i < s.diag.born_checks.size(); ++i) {
            const auto& b = s.diag.born_checks[i];
            os << "born_check_" << i << " = t " << fmt(b.t) << " ks " << fmt(b.ks)
               << " critical " << fmt(b.ks_critical) << " n " << b.n << "\n";
        }
        write_atomic(dir + "/summary.txt", os.str());
    }

    {
        std::ostringstream os;
        os << "# non-deterministic run metadata\n";
        os << "wall_seconds = " << s.wall_seconds << "\n";
        write_atomic(dir + "/run_meta.txt", os.str());
    }

    write_atomic(dir + "/_complete", "ok\n");
}

RunOutput run_single_to_dir(const SimulationConfig& config, const std::string& dir,
                            const std::vector<double>& born_times) {
    fs::create_directories(dir);
    try {
        RunOutput out = run_single(config, born_times);
        write_run_artifacts(out, dir);
        return out;
    } catch (const std::exception& e) {
        std::ofstream marker(dir + "/ERROR");
        marker << e.what() << "\n";
        throw;
    }
}

bool run_dir_complete(const std::string& dir) {
    return fs::exists(dir + "/_complete") && !fs::exists(dir + "/ERROR");
}

std::vector<double> load_taus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tau list '" + path + "'");
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream is(line);
        double v;
        while (is >> v) out.push_back(v);
    }
    return out;
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\n");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r\n");
            return s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

RefitResult refit_taus(const std::vector<double>& taus, std::uint64_t bins, FitMethod method) {
    if (taus.empty()) throw DomainError("refit: no transmitted paths");
    RefitResult r;
    r.n = taus.size();
    if (taus.size() >= 2) {
        const auto [mean, dev] = moments(taus);
        r.mean_tau = mean;
        r.dev_tau = dev;
    }
    if (method == FitMethod::Both || method == FitMethod::LeastSquares)
        r.ls = fit_gamma_least_squares(build_histogram(taus, bins));
    if (method == FitMethod::Both || method == FitMethod::Mle) r.mle = fit_gamma_mle(taus);
    return r;
}

} // namespace nelson
