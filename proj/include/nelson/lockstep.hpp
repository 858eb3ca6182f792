#ifndef NELSON_LOCKSTEP_HPP
#define NELSON_LOCKSTEP_HPP

#include <functional>
#include <string>
#include <vector>

#include "nelson/config.hpp"
#include "nelson/paths.hpp"
#include "nelson/propagator.hpp"

namespace nelson {

/// Empirical-vs-|psi|^2 agreement at one checkpoint.
struct BornCheck {
    double t = 0.0;
    double ks = 0.0;
    double ks_critical = 0.0;
    std::size_t n = 0;
};

struct RunDiagnostics {
    double norm_drift_max = 0.0;      // max |norm - 1| seen over the run
    double energy_drift_rel = 0.0;    // max |<H> - <H>_0| / |<H>_0|
    std::uint64_t cap_events = 0;     // path-steps influenced by a capped drift node
    std::uint64_t path_steps = 0;
    std::uint64_t wall_hits = 0;
    std::uint64_t pde_steps = 0;
    std::uint64_t n_transmitted = 0;
    std::uint64_t n_reflected = 0;
    std::uint64_t n_undecided = 0;
    double undecided_frac = 0.0;
    bool tf_too_short = false; // undecided fraction above threshold at t_f
    double t_final = 0.0;
    std::string stop_reason;
    double p_region2_final = 0.0;
    double pde_transmission = 0.0; // integral of |psi(t_f)|^2 over region III
    std::vector<BornCheck> born_checks;

    double cap_fraction() const {
        return path_steps ? static_cast<double>(cap_events) / static_cast<double>(path_steps) : 0.0;
    }
};

/// Co-evolves one wavefunction and one path ensemble in lockstep: per
/// iteration the ensemble takes an Euler-Maruyama step against the current
/// field, then the field takes one Crank-Nicolson step. Nothing of psi's
/// history is stored. Copyable, so a run can be checkpointed mid-flight and
/// resumed (tau values are unaffected by the split).
class LockstepSim {
public:
    explicit LockstepSim(const SimulationConfig& config);

    /// One ensemble step + one PDE step.
    void advance_one();

    /// Drive until the stop policy fires (Auto) or t reaches t_f (Fixed).
    /// born_times: checkpoint times for KS records; a negative entry means
    /// "at the final time". The observer, when set, runs after every step.
    void run(const std::vector<double>& born_times = {},
             const std::function<void(const LockstepSim&)>& observer = nullptr);

    const WaveState& state() const { return psi_; }
    const PathEnsemble& ensemble() const { return ensemble_; }
    const RunDiagnostics& diagnostics() const { return diag_; }
    const SimulationConfig& config() const { return cfg_; }
    double time() const { return psi_.t; }

    /// Classify + freeze final diagnostics. Called by run(); exposed for
    /// callers driving advance_one() manually.
    void finalize();

private:
    void check_invariants();
    double barrier_probability() const;
    double undecided_fraction() const;

    SimulationConfig cfg_;
    PotentialField potential_;
    WaveState psi_;
    CrankNicolson cn_;
    PathEnsemble ensemble_;
    DriftTable drift_;
    AdvanceCounters counters_;
    RunDiagnostics diag_;
    double energy0_ = 0.0;
    bool armed_ = false; // stop checks enabled once the packet has reached the barrier
    bool finalized_ = false;
};

struct RunResult {
    PathEnsemble ensemble;
    RunDiagnostics diagnostics;
};

/// Whole pipeline for one config: init, lockstep to t_f, classify.
RunResult run_lockstep(const SimulationConfig& config,
                       const std::vector<double>& born_times = {});

} // namespace nelson

#endif
