#ifndef NELSON_STATS_HPP
#define NELSON_STATS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "nelson/barrier.hpp"
#include "nelson/errors.hpp"
#include "nelson/wavefunction.hpp"

namespace nelson {

/// Equal-width histogram of tunneling times on [0, max tau * (1+1e-9)].
struct TunnelingHistogram {
    double bin_width = 0.0;
    double t_min = 0.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t n_transmitted = 0;

    double center(std::size_t b) const { return t_min + (static_cast<double>(b) + 0.5) * bin_width; }
    /// Height normalized to unit mass over transmitted paths.
    double height(std::size_t b) const {
        return static_cast<double>(counts[b]) / (static_cast<double>(n_transmitted) * bin_width);
    }
    std::size_t nonempty_bins() const;
};

std::uint64_t default_bin_count(std::uint64_t n_samples);

/// Bins must partition the sample; empty input or non-positive times are
/// domain errors ("no transmitted paths" for the empty case).
TunnelingHistogram build_histogram(const std::vector<double>& times, std::uint64_t bins);

/// Sample mean and standard deviation (n-1 denominator). Needs >= 2 samples.
std::pair<double, double> moments(const std::vector<double>& times);

/// Two-parameter Gamma density
///   P(tau) = tau^alpha exp(-tau/beta) / (beta^(alpha+1) Gamma(alpha+1)),
/// defined for alpha, beta, tau > 0.
double gamma_pdf(double alpha, double beta, double tau);

/// Closed-form mean beta*(alpha+1) and deviation beta*sqrt(alpha+1).
std::pair<double, double> gamma_moments(double alpha, double beta);

struct GammaFit {
    double alpha = 0.0;
    double beta = 0.0;
    double residual = 0.0; // LS: sum of squared height residuals; MLE: -logL/n
    FitMethod method = FitMethod::LeastSquares;
    std::uint64_t n_samples = 0;
    int iterations = 0;

    std::pair<double, double> implied_moments() const { return gamma_moments(alpha, beta); }
};

/// Optimizer failure that still carries the best iterate found.
class FitError : public NumericError {
public:
    FitError(const std::string& what_arg, GammaFit best)
        : NumericError(what_arg), best_fit(best) {}
    GammaFit best_fit;
};

/// Unweighted least squares of normalized histogram heights against the
/// Gamma density at bin centers; search over (log alpha, log beta) by
/// Nelder-Mead, started from method-of-moments. Needs >= 5 non-empty bins.
GammaFit fit_gamma_least_squares(const TunnelingHistogram& hist);

/// Maximum likelihood: Newton iteration on the digamma equation with
/// moment initialization. Needs >= 10 positive samples.
GammaFit fit_gamma_mle(const std::vector<double>& times);

/// Bootstrap standard errors of the least-squares fit parameters.
struct FitUncertainty {
    double sigma_alpha = 0.0;
    double sigma_beta = 0.0;
    int n_resamples_ok = 0;
};
FitUncertainty bootstrap_ls_uncertainty(const std::vector<double>& times, std::uint64_t bins,
                                        int n_resamples, std::uint64_t seed);

/// Semiclassical traversal time m d / (hbar kappa) for e0 < v0.
double wkb_time(const BarrierSpec& barrier, double e0);

/// Least-squares slope of log(deviation) against log(mean).
/// points: (mean tau, deviation tau), all positive, at least 3.
double regime_slope(const std::vector<std::pair<double, double>>& points);

/// Kolmogorov-Smirnov distance between a sample and the |psi|^2 density on
/// the state's grid (CDF linearly interpolated between nodes).
double ks_statistic(std::vector<double> sample, const WaveState& state);

/// Asymptotic 1% critical value 1.62762 / sqrt(n).
double ks_critical_1pct(std::size_t n);

namespace special {
double digamma(double x);
double trigamma(double x);
} // namespace special

} // namespace nelson

#endif
