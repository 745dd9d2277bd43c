#pragma once

#include <cstdint>
#include <vector>

#include "sandwalk/io.hpp"

namespace sandwalk {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

/// Log-log slope of a mean statistic against n; the finite-n surrogate for
/// the displacement exponent.
struct ExponentFit {
    double alpha_hat = 0;
    double ci_low = 0;
    double ci_high = 0;
    double r_squared = 0;
};

/// Fit on a fixed (n, mean) series; needs >= 5 checkpoints and positive means.
ExponentFit fit_displacement_exponent(const std::vector<std::pair<double, double>>& series);

/// Fit with a percentile bootstrap over trials (1000 resamples).
ExponentFit fit_displacement_exponent(const StatSeries& series, int n_boot = 1000,
                                      std::uint64_t seed = 0x5eedu);

/// Tail of stat / n^alpha at one checkpoint: empirical exceedance on a grid,
/// a stretched-exponential fit log P ~ a - b x^beta, and the observed
/// escape witness (largest gamma with exceedance >= 1/2, and its level).
struct TailReport {
    long long checkpoint = 0;
    double alpha = 0.5;
    std::vector<double> x_grid;
    std::vector<double> exceedance;
    double beta_hat = 0;
    double decay_coeff = 0;  // b in the fit
    double gamma_hat = 0;
    double delta_hat = 0;
};
TailReport tail_profile(const StatSeries& series, long long checkpoint, double alpha = 0.5);

/// Per-trajectory sup over checkpoints n >= 16 of stat / (n ln ln n)^{1/2},
/// with ensemble quantiles of that sup.
struct LilReport {
    std::vector<double> per_trial_sup;
    double q25 = 0;
    double median = 0;
    double q75 = 0;
    double max_sup = 0;
};
LilReport lil_statistic(const StatSeries& series);

}  // namespace sandwalk
