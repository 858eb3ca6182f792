#ifndef NELSON_CONFIG_HPP
#define NELSON_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nelson/barrier.hpp"
#include "nelson/grid.hpp"

namespace nelson {

enum class TfMode { Auto, Fixed };
enum class FitMethod { LeastSquares, Mle, Both };

/// Full description of one simulation run. Units: lengths in 1/k0, times in
/// 1/k0^2, natural m = hbar = 1 by default. Round-trips losslessly through
/// the flat key=value file format.
struct SimulationConfig {
    // grid
    double x_min = -1000.0;
    double x_max = 1000.0;
    double dx = 0.1;
    std::uint64_t n_points_cap = 2000001;

    // barrier and particle
    double v0 = 1.0;
    double d = 2.0;
    double m = 1.0;
    double hbar = 1.0;

    // initial packet
    double x_mean = -500.0;
    double p_mean = 1.0;
    double delta_x = 50.0;

    // ensemble
    std::uint64_t n_paths = 10000;
    std::uint64_t master_seed = 12345;
    double noise_scale = 1.0; // 0 switches the SDE to its deterministic limit
    int n_threads = 0;        // 0 = all hardware threads

    // time stepping and stop policy
    double dt = 0.01;
    TfMode tf_mode = TfMode::Auto;
    double t_f = 0.0;       // used when tf_mode == Fixed
    double t_f_cap = 1500.0;
    double stop_p2 = 1e-4;        // region-II probability threshold
    double stop_undecided = 1e-3; // in-barrier path fraction threshold
    std::uint64_t stop_check_every = 50;

    // analysis
    std::uint64_t histogram_bins = 0; // 0 = max(20, ceil(sqrt(n_transmitted)))
    FitMethod fit_method = FitMethod::Both;

    // output
    std::string out_dir;

    // --- derived quantities ---
    Grid1D grid() const;
    BarrierSpec barrier() const { return {v0, d, m, hbar}; }
    PacketSpec packet() const { return {x_mean, p_mean, delta_x}; }
    double e0() const { return p_mean * p_mean / (2.0 * m); }
    double kappa() const { return barrier().kappa(e0()); }
    double kappa_d() const { return kappa() * d; }
    double wkb_time() const;
    double plane_transmission() const { return plane_wave_transmission(barrier(), e0()); }

    void validate() const;

    /// Desk-scale (fast) vs paper-scale resolution/ensemble defaults.
    void apply_profile(const std::string& profile);

    std::string serialize() const;
    static SimulationConfig parse(std::istream& in);
    static SimulationConfig load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

std::string to_string(TfMode mode);
std::string to_string(FitMethod method);

} // namespace nelson

#endif
