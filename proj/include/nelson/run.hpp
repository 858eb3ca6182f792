#ifndef NELSON_RUN_HPP
#define NELSON_RUN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nelson/lockstep.hpp"
#include "nelson/stats.hpp"

namespace nelson {

/// Everything reported about one finished run. Every statistic here is
/// recomputable from the persisted raw tau list plus the config echo.
struct RunSummary {
    SimulationConfig config;
    RunDiagnostics diag;

    std::uint64_t n_tau_zero_dropped = 0; // transmitted with tau == 0, excluded from stats
    bool stats_ok = false;
    double mean_tau = 0.0;
    double dev_tau = 0.0;

    bool ls_ok = false;
    GammaFit ls_fit;
    std::string ls_error;
    FitUncertainty ls_sigma;

    bool mle_ok = false;
    GammaFit mle_fit;
    std::string mle_error;

    double frac_transmitted = 0.0;
    double kappa_d = 0.0;
    double kappa2_beta = 0.0; // kappa^2 * beta_ls when the fit succeeded
    bool wkb_ok = false;
    double tau_wkb = 0.0;
    double wall_seconds = 0.0; // reported in run_meta only, never in summary.txt
};

struct RunOutput {
    RunSummary summary;
    std::vector<double> taus; // transmitted tunneling times, tau > 0
};

/// Simulate one config end to end: lockstep run, classification, moments,
/// histogram and Gamma fits (as available). Pure computation, no files.
RunOutput run_single(const SimulationConfig& config, const std::vector<double>& born_times = {});

/// Persist a finished run into dir: config.txt, tau_samples.txt,
/// histogram.txt, fit.txt, summary.txt (all byte-deterministic for a given
/// config+seed) plus run_meta.txt (timings, exempt from determinism).
/// Files are written atomically; a _complete marker closes the set.
void write_run_artifacts(const RunOutput& out, const std::string& dir);

/// run_single + write_run_artifacts, with an ERROR marker left behind on
/// failure so partial artifacts are identifiable.
RunOutput run_single_to_dir(const SimulationConfig& config, const std::string& dir,
                            const std::vector<double>& born_times = {});

bool run_dir_complete(const std::string& dir);

std::vector<double> load_taus(const std::string& path);
std::map<std::string, std::string> read_kv_file(const std::string& path);

/// Refit a persisted tau list (no simulation).
struct RefitResult {
    std::optional<GammaFit> ls;
    std::optional<GammaFit> mle;
    double mean_tau = 0.0;
    double dev_tau = 0.0;
    std::uint64_t n = 0;
};
RefitResult refit_taus(const std::vector<double>& taus, std::uint64_t bins, FitMethod method);

} // namespace nelson

#endif
