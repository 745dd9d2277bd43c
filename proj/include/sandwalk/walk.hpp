#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sandwalk/group.hpp"
#include "sandwalk/spectral.hpp"
#include "sandwalk/toppling.hpp"

namespace sandwalk {

enum class ReductionMode { none, full_edp, split_plus };

std::string to_string(ReductionMode mode);
ReductionMode parse_mode(const std::string& text);

struct WalkConfig {
    GroupSpec spec;
    // Per-generator step probabilities in generators(spec) order; empty means
    // uniform.  Must be positive, sum to 1, and symmetric under inversion.
    std::vector<double> weights;
    long long n_steps = 1 << 14;
    std::vector<long long> checkpoints;  // empty: dyadic 16..n_steps
    int trials = 200;
    std::uint64_t master_seed = 0;
    ReductionMode mode = ReductionMode::none;
    std::optional<LaurentPoly> reducer;   // full_edp
    std::optional<SpectralSplit> split;   // split_plus, with projections
    double lattice_cost = 0;              // word cost per unit of neutral deviation; 0: rank
    int threads = 1;
};

// Fills defaults and validates; throws on bad configs.
void finalize_config(WalkConfig& config);

struct CheckpointStats {
    long long n = 0;
    long long y = 0;      // Y_n
    long long max_y = 0;  // running max of the Z-projection
    long long min_y = 0;
    Int norm_p;           // ||P_n||_P summed over kernel generators
    Int height_p;         // K(P_n)
    long long diam_p = 0; // span of the union support; 0 when P_n == 0
    Int norm_q;           // reduced length (mode-dependent)
    double euclid_w = 0;
    double dplus_w = std::nan("");
    double dzero_w = std::nan("");
    long long lower_bound = 0;  // L_n
    Int upper_stat;             // U_n
};

struct TrajectoryRecord {
    int trial = 0;
    std::vector<CheckpointStats> checkpoints;
    Word word;  // full generator-index path (theta_i(n) is recoverable from it)
};

TrajectoryRecord run_trajectory(const WalkConfig& config, int trial_index);

struct Ensemble {
    WalkConfig config;
    std::vector<TrajectoryRecord> records;
};

Ensemble run_ensemble(const WalkConfig& config);

/// Upper length statistic for one checkpoint state.
///   full_edp:   sum_i ||Q_i|| + 2(|m(Q_i)|+|M(Q_i)|)  + |Y|
///   split_plus: as full_edp with the dissipative witness of p_plus, plus
///               ceil(c_A * |(I - pi_plus)(P - Q)(phi) w|)
///   none:       ||P|| + 2(|min_y|+|max_y|) + |Y|
struct UpperBoundStat {
    Int value;
    Int norm_q;
};
UpperBoundStat upper_bound_statistic(const WalkConfig& config,
                                     const std::vector<LaurentPoly>& polys, long long y,
                                     long long min_y, long long max_y);

/// Per-checkpoint aggregation over trials; integer statistics are summed
/// exactly and floats folded in trial order.
struct EnsembleTable {
    std::vector<long long> checkpoints;
    std::vector<std::string> columns;
    std::map<std::string, std::vector<double>> mean, max, median;
};
EnsembleTable ensemble_table(const Ensemble& ensemble);

/// Named per-checkpoint statistic of one record, for CSV emission and the
/// estimators.  Known names: Y, M, m, normP, K_P, d_P, normQ, euclid_W,
/// dplus_W, L, U and the derived normP_plus_spread.
double checkpoint_value(const CheckpointStats& s, const std::string& column);
const std::vector<std::string>& checkpoint_columns();

}  // namespace sandwalk
