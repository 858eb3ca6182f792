#include "nelson/lockstep.hpp"

#include <algorithm>
#include <cmath>

#include "nelson/stats.hpp"

namespace nelson {

LockstepSim::LockstepSim(const SimulationConfig& config)
    : cfg_(config),
      potential_(rect_potential(config.barrier(), config.grid())),
      psi_(init_gaussian(config.packet(), config.grid(), config.hbar)),
      cn_(potential_, config.dt, config.m, config.hbar),
      ensemble_(init_paths(config.n_paths, psi_, config.packet(), config.master_seed)) {
    cfg_.validate();
    energy0_ = psi_.energy(potential_, cfg_.m, cfg_.hbar);
    drift_.build(psi_, cfg_.m, cfg_.hbar, psi_.grid.dx / cfg_.dt);
}

double LockstepSim::barrier_probability() const {
    return probability_in_region(psi_, -0.5 * cfg_.d, 0.5 * cfg_.d);
}

double LockstepSim::undecided_fraction() const {
    const BarrierSpec b = cfg_.barrier();
    std::size_t inside = 0;
    for (const auto& rec : ensemble_.paths) inside += b.inside(rec.x) ? 1 : 0;
    return static_cast<double>(inside) / static_cast<double>(ensemble_.size());
}

void LockstepSim::advance_one() {
    // ensemble first, against the field at the shared clock, then the field
    advance_paths(ensemble_, drift_, cfg_.barrier(), cfg_.dt, cfg_.noise_scale, counters_,
                  cfg_.n_threads);
    cn_.step(psi_);
    drift_.build(psi_, cfg_.m, cfg_.hbar, psi_.grid.dx / cfg_.dt);
    ++diag_.pde_steps;
}

void LockstepSim::check_invariants() {
    const double norm = psi_.norm();
    diag_.norm_drift_max = std::max(diag_.norm_drift_max, std::fabs(norm - 1.0));
    const double e = psi_.energy(potential_, cfg_.m, cfg_.hbar);
    if (std::fabs(energy0_) > 1e-300)
        diag_.energy_drift_rel =
            std::max(diag_.energy_drift_rel, std::fabs(e - energy0_) / std::fabs(energy0_));
    if (!std::isfinite(norm))
        throw NumericError("lockstep: non-finite norm at step " + std::to_string(diag_.pde_steps));
}

void LockstepSim::run(const std::vector<double>& born_times,
                      const std::function<void(const LockstepSim&)>& observer) {
    std::vector<double> pending(born_times.begin(), born_times.end());
    std::sort(pending.begin(), pending.end());
    bool born_at_final = false;
    auto take_due = [&]() {
        while (!pending.empty() && pending.front() >= 0.0 &&
               pending.front() <= psi_.t + 0.5 * cfg_.dt) {
            std::vector<double> xs(ensemble_.size());
            for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = ensemble_.paths[i].x;
            diag_.born_checks.push_back({psi_.t, ks_statistic(std::move(xs), psi_),
                                         ks_critical_1pct(ensemble_.size()), ensemble_.size()});
            pending.erase(pending.begin());
        }
    };
    for (double t : pending)
        if (t < 0.0) born_at_final = true;
    pending.erase(std::remove_if(pending.begin(), pending.end(), [](double t) { return t < 0.0; }),
                  pending.end());

    take_due(); // t = 0 checkpoints

    const double arm_threshold = 10.0 * cfg_.stop_p2;
    const std::uint64_t max_steps = static_cast<std::uint64_t>(std::ceil(
        ((cfg_.tf_mode == TfMode::Fixed) ? cfg_.t_f : cfg_.t_f_cap) / cfg_.dt - 1e-9));

    while (true) {
        if (diag_.pde_steps >= max_steps) {
            diag_.stop_reason = (cfg_.tf_mode == TfMode::Fixed) ? "fixed t_f reached"
                                                                : "t_f cap reached";
            break;
        }
        advance_one();
        take_due();
        if (observer) observer(*this);

        if (diag_.pde_steps % cfg_.stop_check_every == 0) {
            check_invariants();
            if (cfg_.tf_mode == TfMode::Auto) {
                const double p2 = barrier_probability();
                if (!armed_ && p2 > arm_threshold) armed_ = true;
                if (armed_ && p2 < cfg_.stop_p2 &&
                    undecided_fraction() < cfg_.stop_undecided) {
                    diag_.stop_reason = "barrier drained";
                    break;
                }
            }
        }
    }

    check_invariants();
    if (born_at_final) {
        std::vector<double> xs(ensemble_.size());
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = ensemble_.paths[i].x;
        diag_.born_checks.push_back({psi_.t, ks_statistic(std::move(xs), psi_),
                                     ks_critical_1pct(ensemble_.size()), ensemble_.size()});
    }
    finalize();
}

void LockstepSim::finalize() {
    if (finalized_) return;
    classify_paths(ensemble_, cfg_.barrier());
    diag_.cap_events = counters_.cap_events;
    diag_.path_steps = counters_.path_steps;
    diag_.wall_hits = counters_.wall_hits;
    diag_.n_transmitted = diag_.n_reflected = diag_.n_undecided = 0;
    for (const auto& rec : ensemble_.paths) {
        switch (rec.status) {
            case PathStatus::Transmitted: ++diag_.n_transmitted; break;
            case PathStatus::Reflected: ++diag_.n_reflected; break;
            default: ++diag_.n_undecided;
        }
    }
    diag_.undecided_frac =
        static_cast<double>(diag_.n_undecided) / static_cast<double>(ensemble_.size());
    diag_.tf_too_short = diag_.undecided_frac > cfg_.stop_undecided;
    diag_.t_final = psi_.t;
    diag_.p_region2_final = barrier_probability();
    const double half = 0.5 * cfg_.d;
    const double edge = half + 1e-9 * std::max(1.0, half); // match the classification slack
    diag_.pde_transmission = probability_in_region(psi_, edge, cfg_.x_max);
    if (diag_.stop_reason.empty()) diag_.stop_reason = "caller finalized";
    finalized_ = true;
}

RunResult run_lockstep(const SimulationConfig& config, const std::vector<double>& born_times) {
    LockstepSim sim(config);
    sim.run(born_times);
    return {sim.ensemble(), sim.diagnostics()};
}

} // namespace nelson
