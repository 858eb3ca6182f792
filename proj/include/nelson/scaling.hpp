#ifndef NELSON_SCALING_HPP
#define NELSON_SCALING_HPP

#include <vector>

#include "nelson/config.hpp"
#include "nelson/lockstep.hpp"
#include "nelson/stats.hpp"

namespace nelson {

/// Reduced-Planck-constant experiment: a run with hbar' = eps*hbar is mapped
/// onto an ordinary-hbar run in scaled coordinates X = x/eps, T = t/eps.
/// Fixed under the scaling: m, v0, the packet kinetic energy and d.
struct ScalingSpec {
    double epsilon = 1.0; // in (0, 1]
    SimulationConfig base_config;
};

/// Ordinary-hbar config in the X-T frame: every length (domain, x_mean,
/// delta_x, d) and every time (dt, t_f, t_f_cap) divided by eps; v0, m and
/// the packet momentum unchanged, which preserves the base-frame kinetic
/// energy. eps = 1 returns the base config bit for bit.
SimulationConfig scaled_config(const ScalingSpec& spec);

/// Map tunneling times measured in the X-T frame back to the reduced-hbar
/// clock: elementwise multiplication by eps.
std::vector<double> unscale_times(const std::vector<double>& times_xt, double epsilon);

struct EpsilonRow {
    double epsilon = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t n_transmitted = 0;
    double mean_tau = 0.0; // back-scaled (physical) units
    double dev_tau = 0.0;
    double wkb_tau = 0.0;  // eps-independent reference sqrt(m/(2(v0-e0))) d
    bool fit_ok = false;
    GammaFit fit;          // fitted on back-scaled times
    bool failed = false;
    std::string error;
};

struct EpsilonSweepOptions {
    std::uint64_t min_transmitted = 0; // grow the ensemble to hit this target
    std::uint64_t max_paths = 0;       // 0 = no cap
};

/// Run the full pipeline per epsilon in the scaled frame and map the times
/// back. Per-epsilon failures are recorded and the sweep continues.
/// Requires a translucent base (kappa d <= 2).
std::vector<EpsilonRow> epsilon_sweep(const SimulationConfig& base,
                                      const std::vector<double>& epsilons,
                                      const EpsilonSweepOptions& options = {});

/// Epsilon at which the deviation scaling switches from the wave-mode branch
/// (dev proportional to mean, anchored at the largest epsilon) to the
/// particle-mode branch (dev proportional to sqrt(eps * mean), anchored at
/// the smallest epsilon), located by log-interpolating the branch ratio.
/// Returns NaN when the branches never cross inside the table.
double crossover_epsilon(const std::vector<EpsilonRow>& rows);

} // namespace nelson

#endif
