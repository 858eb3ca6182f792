#include "nelson/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace nelson {

std::size_t TunnelingHistogram::nonempty_bins() const {
    std::size_t k = 0;
    for (auto c : counts) k += (c > 0) ? 1 : 0;
    return k;
}

std::uint64_t default_bin_count(std::uint64_t n_samples) {
    const auto root = static_cast<std::uint64_t>(
        std::ceil(std::sqrt(static_cast<double>(n_samples))));
    return std::max<std::uint64_t>(20, root);
}

TunnelingHistogram build_histogram(const std::vector<double>& times, std::uint64_t bins) {
    if (times.empty()) throw DomainError("build_histogram: no transmitted paths");
    if (bins == 0) bins = default_bin_count(times.size());
    double max_tau = 0.0;
    for (double t : times) {
        if (!(t > 0.0)) throw DomainError("build_histogram: times must be > 0");
        max_tau = std::max(max_tau, t);
    }
    TunnelingHistogram h;
    h.t_min = 0.0;
    h.bin_width = max_tau * (1.0 + 1e-9) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    h.n_transmitted = times.size();
    for (double t : times) {
        auto b = static_cast<std::size_t>(t / h.bin_width);
        if (b >= bins) b = bins - 1; // cannot happen with the widened range; belt and braces
        ++h.counts[b];
    }
    return h;
}

std::pair<double, double> moments(const std::vector<double>& times) {
    if (times.size() < 2) throw DomainError("moments: need at least 2 samples");
    const double n = static_cast<double>(times.size());
    const double mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
    double ss = 0.0;
    for (double t : times) ss += (t - mean) * (t - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

double gamma_pdf(double alpha, double beta, double tau) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(tau > 0.0))
        throw DomainError("gamma_pdf: alpha, beta, tau must be > 0");
    return std::exp(alpha * std::log(tau) - tau / beta - (alpha + 1.0) * std::log(beta) -
                    std::lgamma(alpha + 1.0));
}

std::pair<double, double> gamma_moments(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw DomainError("gamma_moments: alpha, beta must be > 0");
    return {beta * (alpha + 1.0), beta * std::sqrt(alpha + 1.0)};
}

namespace {

struct Simplex2Result {
    std::array<double, 2> x{};
    double fmin = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Plain Nelder-Mead in two dimensions; small, robust, no derivatives.
Simplex2Result nelder_mead_2d(const std::function<double(const std::array<double, 2>&)>& f,
                              std::array<double, 2> start, double step, int max_iter,
                              double ftol) {
    std::array<std::array<double, 2>, 3> pts{start,
                                             {start[0] + step, start[1]},
                                             {start[0], start[1] + step}};
    std::array<double, 3> fv{f(pts[0]), f(pts[1]), f(pts[2])};

    int it = 0;
    for (; it < max_iter; ++it) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int lo = ord[0], mid = ord[1], hi = ord[2];
        if (std::fabs(fv[hi] - fv[lo]) <= ftol * (1.0 + std::fabs(fv[lo])))
            return {pts[lo], fv[lo], it, true};

        const std::array<double, 2> cen{0.5 * (pts[lo][0] + pts[mid][0]),
                                        0.5 * (pts[lo][1] + pts[mid][1])};
        auto lerp = [&](double w) {
            return std::array<double, 2>{cen[0] + w * (cen[0] - pts[hi][0]),
                                         cen[1] + w * (cen[1] - pts[hi][1])};
        };
        const auto refl = lerp(1.0);
        const double fr = f(refl);
        if (fr < fv[lo]) {
            const auto exp2 = lerp(2.0);
            const double fe = f(exp2);
            pts[hi] = (fe < fr) ? exp2 : refl;
            fv[hi] = std::min(fe, fr);
        } else if (fr < fv[mid]) {
            pts[hi] = refl;
            fv[hi] = fr;
        } else {
            const auto con = lerp(-0.5);
            const double fc = f(con);
            if (fc < fv[hi]) {
                pts[hi] = con;
                fv[hi] = fc;
            } else {
                for (int k : {mid, hi}) {
                    pts[k] = {0.5 * (pts[k][0] + pts[lo][0]), 0.5 * (pts[k][1] + pts[lo][1])};
                    fv[k] = f(pts[k]);
                }
            }
        }
    }
    const int best = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return {pts[best], fv[best], it, false};
}

// Method-of-moments (alpha, beta) from histogram counts, clamped positive.
std::pair<double, double> histogram_moment_seed(const TunnelingHistogram& h) {
    const double n = static_cast<double>(h.n_transmitted);
    double mean = 0.0;
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        mean += static_cast<double>(h.counts[b]) * h.center(b);
    mean /= n;
    double var = 0.0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double dv = h.center(b) - mean;
        var += static_cast<double>(h.counts[b]) * dv * dv;
    }
    var /= std::max(1.0, n - 1.0);
    double beta = var / mean;
    double alpha = (var > 0.0) ? mean * mean / var - 1.0 : 1.0;
    beta = std::clamp(beta, 1e-8, 1e8);
    alpha = std::clamp(alpha, 1e-3, 1e6);
    return {alpha, beta};
}

} // namespace

GammaFit fit_gamma_least_squares(const TunnelingHistogram& hist) {
    if (hist.nonempty_bins() < 5)
        throw DomainError("fit_gamma_least_squares: need at least 5 non-empty bins");

    const auto [a0, b0] = histogram_moment_seed(hist);
    auto ssr = [&](const std::array<double, 2>& logp) {
        const double alpha = std::exp(logp[0]);
        const double beta = std::exp(logp[1]);
        if (!std::isfinite(alpha) || !std::isfinite(beta)) return 1e300;
        double s = 0.0;
        for (std::size_t b = 0; b < hist.counts.size(); ++b) {
            const double r = hist.height(b) - gamma_pdf(alpha, beta, hist.center(b));
            s += r * r;
        }
        return s;
    };

    auto res = nelder_mead_2d(ssr, {std::log(a0), std::log(b0)}, 0.4, 4000, 1e-12);
    // one restart from the found point tightens flat valleys
    res = nelder_mead_2d(ssr, res.x, 0.05, 4000, 1e-13);

    GammaFit fit;
    fit.alpha = std::exp(res.x[0]);
    fit.beta = std::exp(res.x[1]);
    fit.residual = res.fmin;
    fit.method = FitMethod::LeastSquares;
    fit.n_samples = hist.n_transmitted;
    fit.iterations = res.iterations;
    if (!res.converged)
        throw FitError("fit_gamma_least_squares: optimizer did not converge", fit);
    if (!std::isfinite(fit.alpha) || !std::isfinite(fit.beta) || fit.alpha > 1e5)
        throw FitError("fit_gamma_least_squares: degenerate solution", fit);
    return fit;
}

GammaFit fit_gamma_mle(const std::vector<double>& times) {
    if (times.size() < 10) throw DomainError("fit_gamma_mle: need at least 10 samples");
    double mean = 0.0, mean_log = 0.0;
    for (double t : times) {
        if (!(t > 0.0)) throw DomainError("fit_gamma_mle: times must be > 0");
        mean += t;
        mean_log += std::log(t);
    }
    const double n = static_cast<double>(times.size());
    mean /= n;
    mean_log /= n;

    const double s = std::log(mean) - mean_log;
    GammaFit fit;
    fit.method = FitMethod::Mle;
    fit.n_samples = times.size();
    if (!(s > 1e-12)) {
        fit.alpha = 1e6;
        fit.beta = mean / (fit.alpha + 1.0);
        throw FitError("fit_gamma_mle: samples (near-)identical, shape diverges", fit);
    }

    // shape k = alpha + 1 solves ln k - digamma(k) = s
    double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    int it = 0;
    for (; it < 100; ++it) {
        const double g = std::log(k) - special::digamma(k) - s;
        const double gp = 1.0 / k - special::trigamma(k);
        const double k_next = std::max(1e-8, k - g / gp);
        if (std::fabs(k_next - k) <= 1e-12 * k) {
            k = k_next;
            break;
        }
        k = k_next;
    }
    fit.alpha = k - 1.0;
    fit.beta = mean / k;
    fit.iterations = it;
    const double loglik =
        (k - 1.0) * mean_log * n - n * mean / fit.beta - n * k * std::log(fit.beta) -
        n * std::lgamma(k);
    fit.residual = -loglik / n;
    if (it >= 100) throw FitError("fit_gamma_mle: Newton iteration did not converge", fit);
    if (!(fit.alpha > 0.0))
        throw FitError("fit_gamma_mle: fitted alpha <= 0 (outside the density family)", fit);
    return fit;
}

FitUncertainty bootstrap_ls_uncertainty(const std::vector<double>& times, std::uint64_t bins,
                                        int n_resamples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, times.size() - 1);
    std::vector<double> alphas, betas;
    std::vector<double> resample(times.size());
    for (int r = 0; r < n_resamples; ++r) {
        for (auto& v : resample) v = times[pick(rng)];
        try {
            const GammaFit f = fit_gamma_least_squares(build_histogram(resample, bins));
            alphas.push_back(f.alpha);
            betas.push_back(f.beta);
        } catch (const std::exception&) {
            // failed resample fits are simply skipped
        }
    }
    FitUncertainty u;
    u.n_resamples_ok = static_cast<int>(alphas.size());
    if (alphas.size() >= 2) {
        u.sigma_alpha = moments(alphas).second;
        u.sigma_beta = moments(betas).second;
    }
    return u;
}

double wkb_time(const BarrierSpec& barrier, double e0) {
    if (!(e0 < barrier.v0)) throw DomainError("wkb_time: requires e0 < v0 (sub-barrier)");
    return barrier.m * barrier.d / (barrier.hbar * barrier.kappa(e0));
}

double regime_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DomainError("regime_slope: need at least 3 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& [mean, dev] : points) {
        if (!(mean > 0.0) || !(dev > 0.0))
            throw DomainError("regime_slope: points must be positive");
        const double lx = std::log(mean), ly = std::log(dev);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-30) throw DomainError("regime_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

double ks_statistic(std::vector<double> sample, const WaveState& state) {
    if (sample.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());

    const Grid1D& g = state.grid;
    std::vector<double> cdf(g.n_points);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n_points; ++i) {
        acc += std::norm(state.psi[i]) * g.dx;
        cdf[i] = acc;
    }
    for (auto& c : cdf) c /= acc;

    auto f_at = [&](double x) {
        if (x <= g.x_min) return 0.0;
        if (x >= g.x_max) return 1.0;
        const std::size_t i = g.cell_left(x);
        const double w = (x - g.x(i)) / g.dx;
        return cdf[i] + w * (cdf[i + 1] - cdf[i]);
    };

    const double n = static_cast<double>(sample.size());
    double dmax = 0.0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double fx = f_at(sample[k]);
        dmax = std::max(dmax, std::fabs(fx - static_cast<double>(k) / n));
        dmax = std::max(dmax, std::fabs(fx - static_cast<double>(k + 1) / n));
    }
    return dmax;
}

double ks_critical_1pct(std::size_t n) {
    return 1.62762 / std::sqrt(static_cast<double>(n));
}

namespace special {

double digamma(double x) {
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
}

double trigamma(double x) {
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return acc + inv * (1.0 + 0.5 * inv +
                        inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0))));
}

} // namespace special

} // namespace nelson
