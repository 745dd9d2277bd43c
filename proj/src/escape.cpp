#include "sandwalk/escape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sandwalk/rng.hpp"

namespace sandwalk {

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_linear: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("fit_linear: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& means) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(means[i] > 0)) continue;
        lx.push_back(std::log(ns[i]));
        ly.push_back(std::log(means[i]));
    }
    if (lx.size() < 5) throw std::domain_error("exponent fit: fewer than 5 usable checkpoints");
    return fit_linear(lx, ly).slope;
}

}  // namespace

ExponentFit fit_displacement_exponent(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 5) throw std::domain_error("exponent fit: fewer than 5 checkpoints");
    std::vector<double> lx, ly;
    for (auto [n, mean] : series) {
        if (!(mean > 0)) throw std::domain_error("exponent fit: nonpositive mean statistic");
        lx.push_back(std::log(n));
        ly.push_back(std::log(mean));
    }
    LinearFit fit = fit_linear(lx, ly);
    return ExponentFit{fit.slope, fit.slope, fit.slope, fit.r_squared};
}

ExponentFit fit_displacement_exponent(const StatSeries& series, int n_boot, std::uint64_t seed) {
    const std::size_t trials = series.by_trial.size();
    const std::size_t ncp = series.checkpoints.size();
    if (ncp < 5) throw std::domain_error("exponent fit: fewer than 5 checkpoints");
    if (trials < 1) throw std::domain_error("exponent fit: no trials");

    std::vector<double> ns(ncp);
    for (std::size_t c = 0; c < ncp; ++c) ns[c] = static_cast<double>(series.checkpoints[c]);

    std::vector<double> means(ncp, 0);
    for (const auto& row : series.by_trial)
        for (std::size_t c = 0; c < ncp; ++c) means[c] += row[c];
    for (double& m : means) m /= static_cast<double>(trials);
    for (double m : means)
        if (!(m > 0)) throw std::domain_error("exponent fit: nonpositive mean statistic");

    ExponentFit result;
    {
        std::vector<double> lx(ncp), ly(ncp);
        for (std::size_t c = 0; c < ncp; ++c) {
            lx[c] = std::log(ns[c]);
            ly[c] = std::log(means[c]);
        }
        LinearFit fit = fit_linear(lx, ly);
        result.alpha_hat = fit.slope;
        result.r_squared = fit.r_squared;
    }

    std::vector<double> boot;
    boot.reserve(static_cast<std::size_t>(n_boot));
    SplitMix64 rng(mix_seed(seed, 0xb007));
    std::vector<double> resample_mean(ncp);
    for (int b = 0; b < n_boot; ++b) {
        std::fill(resample_mean.begin(), resample_mean.end(), 0.0);
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& row = series.by_trial[rng.next() % trials];
            for (std::size_t c = 0; c < ncp; ++c) resample_mean[c] += row[c];
        }
        for (double& m : resample_mean) m /= static_cast<double>(trials);
        try {
            boot.push_back(loglog_slope(ns, resample_mean));
        } catch (const std::domain_error&) {
            // resample collapsed at some checkpoint; skip it
        }
    }
    if (boot.size() >= 10) {
        std::sort(boot.begin(), boot.end());
        auto pct = [&](double q) {
            double idx = q * static_cast<double>(boot.size() - 1);
            std::size_t lo = static_cast<std::size_t>(idx);
            std::size_t hi = std::min(lo + 1, boot.size() - 1);
            double f = idx - static_cast<double>(lo);
            return boot[lo] * (1 - f) + boot[hi] * f;
        };
        result.ci_low = std::min(pct(0.025), result.alpha_hat);
        result.ci_high = std::max(pct(0.975), result.alpha_hat);
    } else {
        result.ci_low = result.ci_high = result.alpha_hat;
    }
    return result;
}

TailReport tail_profile(const StatSeries& series, long long checkpoint, double alpha) {
    const std::size_t trials = series.by_trial.size();
    if (trials < 100) throw std::domain_error("tail profile: needs at least 100 trials");
    std::size_t cp_index = series.checkpoints.size();
    for (std::size_t c = 0; c < series.checkpoints.size(); ++c)
        if (series.checkpoints[c] == checkpoint) cp_index = c;
    if (cp_index == series.checkpoints.size())
        throw std::invalid_argument("tail profile: checkpoint not in series");

    TailReport report;
    report.checkpoint = checkpoint;
    report.alpha = alpha;

    const double scale = std::pow(static_cast<double>(checkpoint), alpha);
    std::vector<double> v(trials);
    for (std::size_t t = 0; t < trials; ++t) v[t] = series.by_trial[t][cp_index] / scale;
    double vmax = *std::max_element(v.begin(), v.end());
    if (!(vmax > 0)) vmax = 1.0;

    const int grid_points = 48;
    for (int j = 0; j < grid_points; ++j) {
        double x = vmax * 1.02 * static_cast<double>(j) / grid_points;
        std::size_t count = 0;
        for (double vi : v)
            if (vi > x) ++count;
        report.x_grid.push_back(x);
        report.exceedance.push_back(static_cast<double>(count) / static_cast<double>(trials));
    }

    // Stretched-exponential fit over the interior of the curve.
    std::vector<double> fit_x, fit_logp;
    for (std::size_t j = 0; j < report.x_grid.size(); ++j) {
        double p = report.exceedance[j];
        if (report.x_grid[j] <= 0 || p <= 0 || p >= 1) continue;
        fit_x.push_back(report.x_grid[j]);
        fit_logp.push_back(std::log(p));
    }
    report.beta_hat = std::nan("");
    if (fit_x.size() >= 3) {
        double best_sse = std::numeric_limits<double>::infinity();
        for (double beta = 0.2; beta <= 6.0 + 1e-9; beta += 0.02) {
            std::vector<double> z(fit_x.size());
            for (std::size_t i = 0; i < fit_x.size(); ++i) z[i] = std::pow(fit_x[i], beta);
            LinearFit f = fit_linear(z, fit_logp);
            if (f.slope >= 0) continue;
            double sse = 0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                double e = fit_logp[i] - (f.intercept + f.slope * z[i]);
                sse += e * e;
            }
            if (sse < best_sse) {
                best_sse = sse;
                report.beta_hat = beta;
                report.decay_coeff = -f.slope;
            }
        }
    }

    // Largest grid point still exceeded by at least half of the trials.
    for (std::size_t j = 0; j < report.x_grid.size(); ++j) {
        if (report.exceedance[j] >= 0.5) {
            report.gamma_hat = report.x_grid[j];
            report.delta_hat = report.exceedance[j];
        }
    }
    return report;
}

LilReport lil_statistic(const StatSeries& series) {
    LilReport report;
    bool any_checkpoint = false;
    for (long long n : series.checkpoints)
        if (n >= 16) any_checkpoint = true;
    if (!any_checkpoint) throw std::domain_error("lil: needs a checkpoint with n >= 16");

    for (const auto& row : series.by_trial) {
        double sup = 0;
        for (std::size_t c = 0; c < series.checkpoints.size(); ++c) {
            long long n = series.checkpoints[c];
            if (n < 16) continue;
            double denom = std::sqrt(static_cast<double>(n) *
                                     std::log(std::log(static_cast<double>(n))));
            sup = std::max(sup, row[c] / denom);
        }
        report.per_trial_sup.push_back(sup);
    }
    std::vector<double> sorted = report.per_trial_sup;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double q) {
        double idx = q * static_cast<double>(sorted.size() - 1);
        std::size_t lo = static_cast<std::size_t>(idx);
        std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        double f = idx - static_cast<double>(lo);
        return sorted[lo] * (1 - f) + sorted[hi] * f;
    };
    report.q25 = pct(0.25);
    report.median = pct(0.5);
    report.q75 = pct(0.75);
    report.max_sup = sorted.back();
    return report;
}

}  // namespace sandwalk
