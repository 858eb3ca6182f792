#ifndef NELSON_SWEEP_HPP
#define NELSON_SWEEP_HPP

#include <string>
#include <vector>

#include "nelson/run.hpp"
#include "nelson/scaling.hpp"

namespace nelson {

enum class SweepKind { Width, Packet, Epsilon };

SweepKind sweep_kind_from_string(const std::string& s);
std::string to_string(SweepKind kind);

/// One sweep entry; mirrors the columns of sweep_table.txt.
struct SweepRow {
    double value = 0.0; // d (1/k0), delta_x (1/k0) or epsilon
    std::uint64_t n_paths = 0;
    std::uint64_t n_transmitted = 0;
    double mean_tau = 0.0;
    double dev_tau = 0.0;
    bool stats_ok = false;
    bool ls_ok = false;
    double alpha = 0.0;
    double beta = 0.0;
    double sigma_alpha = 0.0;
    double sigma_beta = 0.0;
    double kappa_d = 0.0;
    double kappa2_beta = 0.0;
    double tau_wkb = 0.0;
    double frac_transmitted = 0.0;
    double pde_transmission = 0.0;
    bool failed = false;
    std::string error;
};

struct SweepOptions {
    // grow the ensemble so the analytic plane-wave transmission predicts at
    // least this many crossings (0 keeps the base n_paths)
    std::uint64_t min_transmitted = 0;
    std::uint64_t max_paths = 0; // cap for the growth rule, 0 = unlimited
    std::string out_dir;         // per-run artifacts + sweep_table.txt when set
};

/// One run per value: Width varies d, Packet varies delta_x, Epsilon runs the
/// scaled-frame pipeline. Individual failures are recorded, the sweep
/// continues. Every entry keeps the base master_seed, so the epsilon = 1
/// entry is bit-identical to a direct base-config run.
std::vector<SweepRow> run_sweep(SweepKind kind, const SimulationConfig& base,
                                const std::vector<double>& values,
                                const SweepOptions& options = {});

void write_sweep_table(const std::vector<SweepRow>& rows, SweepKind kind,
                       const std::string& path);
std::vector<SweepRow> load_sweep_table(const std::string& path);

/// Plot-ready whitespace-separated data for one figure id:
///   fig2            run artifact: histogram (tau, normalized height)
///   fig3/fig4/fig5  width sweep: mean/dev vs d (fig5 = thin-barrier zoom)
///   fig6            width sweep: dev vs mean with regime reference lines
///   fig8/fig9       width sweep: alpha and kappa^2*beta vs kappa*d
///   fig10/fig11     epsilon sweep: mean/dev vs epsilon with references
/// artifact_dir is a run dir for fig2, a sweep dir otherwise.
void emit_plot_data(const std::string& artifact_dir, const std::string& figure_id,
                    const std::string& out_path);

} // namespace nelson

#endif
