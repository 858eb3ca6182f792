#include "nelson/paths.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nelson {

PathEnsemble init_paths(std::size_t n, const WaveState& initial, const PacketSpec& packet,
                        std::uint64_t master_seed) {
    if (n == 0) throw ConfigError("init_paths: ensemble size must be >= 1");
    if (std::fabs(initial.norm() - 1.0) > 1e-6)
        throw ConfigError("init_paths: initial state not normalized");

    PathEnsemble ens;
    ens.master_seed = master_seed;
    ens.t = initial.t;
    ens.paths.resize(n);

    const CounterRng rng(master_seed);
    for (std::size_t p = 0; p < n; ++p) {
        const double z = rng.normal(CounterRng::Purpose::InitPosition, p, 0);
        double x = packet.x_mean + packet.delta_x * z;
        // the box truncates < 1e-10 of the packet by construction; fold the
        // stray draw back to the nearest interior point rather than losing it
        if (x < initial.grid.x_min) x = initial.grid.x_min;
        if (x > initial.grid.x_max) x = initial.grid.x_max;
        auto& rec = ens.paths[p];
        rec.x = x;
        rec.x_initial = x;
        rec.tau = 0.0;
        rec.stream = p;
        rec.status = PathStatus::Undecided;
    }
    return ens;
}

void advance_paths(PathEnsemble& ensemble, const DriftTable& table, const BarrierSpec& barrier,
                   double dt, double noise_scale, AdvanceCounters& counters, int n_threads) {
    const double sigma = noise_scale * std::sqrt(barrier.hbar * dt / barrier.m);
    const double x_min = table.grid().x_min;
    const double x_max = table.grid().x_max;
    const CounterRng rng(ensemble.master_seed);
    const std::uint64_t step = ensemble.step_index;
    const auto n = static_cast<std::int64_t>(ensemble.paths.size());

    std::uint64_t caps = 0;
    std::uint64_t walls = 0;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : caps, walls) \
    num_threads(n_threads > 0 ? n_threads : omp_get_max_threads())
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        PathRecord& rec = ensemble.paths[i];
        accumulate_barrier_time(rec, barrier, dt);

        bool cap_touched = false;
        const double drift = table.total_at(rec.x, cap_touched);
        caps += cap_touched ? 1 : 0;

        const double dw = sigma * rng.normal(CounterRng::Purpose::StepNoise, rec.stream, step);
        double x = rec.x + drift * dt + dw;
        if (x < x_min) {
            x = x_min;
            rec.hit_wall = true;
            ++walls;
        } else if (x > x_max) {
            x = x_max;
            rec.hit_wall = true;
            ++walls;
        }
        rec.x = x;
    }

    counters.cap_events += caps;
    counters.wall_hits += walls;
    counters.path_steps += static_cast<std::uint64_t>(n);
    ensemble.step_index += 1;
    ensemble.t += dt;
}

void classify_paths(PathEnsemble& ensemble, const BarrierSpec& barrier) {
    for (auto& rec : ensemble.paths) {
        if (barrier.inside(rec.x))
            rec.status = PathStatus::Undecided;
        else
            rec.status = (rec.x > 0.0) ? PathStatus::Transmitted : PathStatus::Reflected;
    }
}

} // namespace nelson
