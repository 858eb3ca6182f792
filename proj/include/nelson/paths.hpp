#ifndef NELSON_PATHS_HPP
#define NELSON_PATHS_HPP

#include <cstdint>
#include <vector>

#include "nelson/barrier.hpp"
#include "nelson/drift.hpp"
#include "nelson/rng.hpp"
#include "nelson/wavefunction.hpp"

namespace nelson {

enum class PathStatus : std::uint8_t { Undecided = 0, Transmitted = 1, Reflected = 2 };

/// One sample path: current position, accumulated barrier-occupancy clock,
/// its RNG stream id, and the final-time classification.
struct PathRecord {
    double x = 0.0;
    double tau = 0.0;        // total time spent in [-d/2, d/2], re-entries included
    double x_initial = 0.0;  // kept for provenance diagnostics
    std::uint64_t stream = 0;
    PathStatus status = PathStatus::Undecided;
    bool hit_wall = false;
};

/// Ensemble of sample paths sharing one clock (lockstep with the PDE).
struct PathEnsemble {
    std::vector<PathRecord> paths;
    double t = 0.0;
    std::uint64_t step_index = 0; // completed ensemble steps; keys the noise streams
    std::uint64_t master_seed = 0;

    std::size_t size() const { return paths.size(); }
};

/// Counters accumulated while advancing (order-independent integers).
struct AdvanceCounters {
    std::uint64_t cap_events = 0;
    std::uint64_t wall_hits = 0;
    std::uint64_t path_steps = 0;
};

/// Draw n initial positions i.i.d. from |psi(x,0)|^2 using the exact Gaussian
/// sampler for the initial packet (stream = path index). The state is only
/// checked for consistency (normalization, grid coverage of the packet).
PathEnsemble init_paths(std::size_t n, const WaveState& initial, const PacketSpec& packet,
                        std::uint64_t master_seed);

/// theta-clock update: tau += dt when the path is currently inside the
/// closed barrier interval. Applied before the position update, so the
/// occupancy integral is evaluated left-endpoint in time.
inline void accumulate_barrier_time(PathRecord& path, const BarrierSpec& barrier, double dt) {
    if (barrier.inside(path.x)) path.tau += dt;
}

/// One Euler-Maruyama step for every path against a frozen drift table:
///   x <- x + (u+v) dt + dw,  dw ~ Normal(0, (hbar/m) dt)
/// Barrier clocks are updated first. Paths leaving the grid are clamped to
/// the wall and flagged. Deterministic for fixed (master_seed, step_index)
/// regardless of thread count.
void advance_paths(PathEnsemble& ensemble, const DriftTable& table, const BarrierSpec& barrier,
                   double dt, double noise_scale, AdvanceCounters& counters, int n_threads);

/// Final-time classification by position: region III -> Transmitted,
/// region I -> Reflected, still inside the barrier -> stays Undecided.
void classify_paths(PathEnsemble& ensemble, const BarrierSpec& barrier);

} // namespace nelson

#endif
