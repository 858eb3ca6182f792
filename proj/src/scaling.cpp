#include "nelson/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nelson {

SimulationConfig scaled_config(const ScalingSpec& spec) {
    const double eps = spec.epsilon;
    if (!(eps > 0.0) || eps > 1.0) throw DomainError("scaled_config: epsilon must be in (0, 1]");
    SimulationConfig c = spec.base_config;
    c.x_min /= eps;
    c.x_max /= eps;
    c.x_mean /= eps;
    c.delta_x /= eps;
    c.d /= eps;
    c.dt /= eps;
    c.t_f /= eps;
    c.t_f_cap /= eps;
    // v0, m, p_mean unchanged; grid spacing unchanged (the scaled-frame
    // wavelength equals the base one), so n_points grows as 1/eps until the
    // cap coarsens the spacing.
    return c;
}

std::vector<double> unscale_times(const std::vector<double>& times_xt, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw DomainError("unscale_times: epsilon must be in (0, 1]");
    std::vector<double> out(times_xt.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = epsilon * times_xt[i];
    return out;
}

std::vector<EpsilonRow> epsilon_sweep(const SimulationConfig& base,
                                      const std::vector<double>& epsilons,
                                      const EpsilonSweepOptions& options) {
    if (epsilons.empty()) throw ConfigError("epsilon_sweep: empty epsilon list");
    if (base.kappa_d() > 2.0)
        throw ConfigError("epsilon_sweep: base config must be translucent (kappa d <= 2)");

    const double wkb_ref = std::sqrt(base.m / (2.0 * (base.v0 - base.e0()))) * base.d;

    std::vector<EpsilonRow> rows;
    for (double eps : epsilons) {
        EpsilonRow row;
        row.epsilon = eps;
        row.wkb_tau = wkb_ref;
        try {
            ScalingSpec spec{eps, base};
            SimulationConfig cfg = scaled_config(spec);
            if (options.min_transmitted > 0) {
                // effective opacity grows as kappa d / eps; size the ensemble
                // from the analytic plane-wave transmission so rare crossings
                // still produce usable statistics (deterministic choice)
                const double t_est = std::max(cfg.plane_transmission(), 1e-300);
                const double want = static_cast<double>(options.min_transmitted) / t_est;
                auto n = static_cast<std::uint64_t>(std::ceil(want));
                n = std::max(n, base.n_paths);
                if (options.max_paths > 0) n = std::min(n, options.max_paths);
                cfg.n_paths = n;
            }
            row.n_paths = cfg.n_paths;

            const RunResult run = run_lockstep(cfg);
            std::vector<double> times_xt;
            times_xt.reserve(run.ensemble.size());
            for (const auto& rec : run.ensemble.paths)
                if (rec.status == PathStatus::Transmitted && rec.tau > 0.0)
                    times_xt.push_back(rec.tau);
            row.n_transmitted = run.diagnostics.n_transmitted;

            const std::vector<double> times = unscale_times(times_xt, eps);
            if (times.size() >= 2) {
                const auto [mean, dev] = moments(times);
                row.mean_tau = mean;
                row.dev_tau = dev;
            } else {
                row.failed = true;
                row.error = "fewer than 2 transmitted paths";
            }
            if (times.size() >= 10) {
                try {
                    row.fit = fit_gamma_least_squares(
                        build_histogram(times, base.histogram_bins));
                    row.fit_ok = true;
                } catch (const std::exception&) {
                    row.fit_ok = false;
                }
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double crossover_epsilon(const std::vector<EpsilonRow>& rows) {
    std::vector<const EpsilonRow*> ok;
    for (const auto& r : rows)
        if (!r.failed && r.mean_tau > 0.0 && r.dev_tau > 0.0) ok.push_back(&r);
    if (ok.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    std::sort(ok.begin(), ok.end(),
              [](const EpsilonRow* a, const EpsilonRow* b) { return a->epsilon < b->epsilon; });

    // wave branch dev = A * mean anchored at the largest epsilon (translucent
    // end); particle branch dev = B * sqrt(eps * mean) anchored at the
    // smallest epsilon (opaque end)
    const EpsilonRow& wave = *ok.back();
    const EpsilonRow& part = *ok.front();
    const double a_const = wave.dev_tau / wave.mean_tau;
    const double b_const = part.dev_tau / std::sqrt(part.epsilon * part.mean_tau);

    // log of (wave prediction / particle prediction); positive where the wave
    // branch predicts the larger deviation
    auto log_ratio = [&](const EpsilonRow& r) {
        return std::log(a_const * r.mean_tau) -
               std::log(b_const * std::sqrt(r.epsilon * r.mean_tau));
    };

    double prev_lr = log_ratio(*ok.front());
    for (std::size_t i = 1; i < ok.size(); ++i) {
        const double lr = log_ratio(*ok[i]);
        if ((prev_lr <= 0.0 && lr >= 0.0) || (prev_lr >= 0.0 && lr <= 0.0)) {
            const double l0 = std::log(ok[i - 1]->epsilon);
            const double l1 = std::log(ok[i]->epsilon);
            const double w = (std::fabs(lr - prev_lr) < 1e-300)
                                 ? 0.5
                                 : (0.0 - prev_lr) / (lr - prev_lr);
            return std::exp(l0 + w * (l1 - l0));
        }
        prev_lr = lr;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace nelson
