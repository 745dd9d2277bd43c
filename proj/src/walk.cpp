#include "sandwalk/walk.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "sandwalk/rng.hpp"

namespace sandwalk {

std::string to_string(ReductionMode mode) {
    switch (mode) {
        case ReductionMode::none: return "none";
        case ReductionMode::full_edp: return "full_edp";
        case ReductionMode::split_plus: return "split_plus";
    }
    return "?";
}

ReductionMode parse_mode(const std::string& text) {
    if (text == "none") return ReductionMode::none;
    if (text == "full_edp") return ReductionMode::full_edp;
    if (text == "split_plus") return ReductionMode::split_plus;
    throw std::invalid_argument("unknown reduction mode '" + text + "'");
}

void finalize_config(WalkConfig& config) {
    if (config.n_steps < 1) throw std::invalid_argument("walk: n_steps must be >= 1");
    if (config.trials < 1) throw std::invalid_argument("walk: trials must be >= 1");
    auto gens = generators(config.spec);

    if (config.weights.empty())
        config.weights.assign(gens.size(), 1.0 / static_cast<double>(gens.size()));
    if (config.weights.size() != gens.size())
        throw std::invalid_argument("walk: weight count does not match generator count");
    double sum = 0;
    for (double w : config.weights) {
        if (!(w > 0)) throw std::invalid_argument("walk: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("walk: weights must sum to 1");
    // Generators come in (g, g^-1) pairs; the law must be symmetric.
    for (std::size_t i = 0; i + 1 < config.weights.size(); i += 2)
        if (std::abs(config.weights[i] - config.weights[i + 1]) > 1e-12)
            throw std::invalid_argument("walk: weights must satisfy mu(g) = mu(g^-1)");

    if (config.checkpoints.empty())
        for (long long n = 16; n <= config.n_steps; n *= 2) config.checkpoints.push_back(n);
    std::sort(config.checkpoints.begin(), config.checkpoints.end());
    for (long long c : config.checkpoints)
        if (c < 0 || c > config.n_steps)
            throw std::invalid_argument("walk: checkpoint outside [0, n_steps]");

    if (config.lattice_cost <= 0) config.lattice_cost = config.spec.rank;

    switch (config.mode) {
        case ReductionMode::none:
            break;
        case ReductionMode::full_edp: {
            if (!config.reducer) throw std::invalid_argument("walk: full_edp mode needs a reducer");
            if (!edp_check(*config.reducer).holds)
                throw std::domain_error("walk: reducer fails the dissipativity check");
            if (!mat_is_zero(eval_poly(*config.reducer, config.spec.phi)))
                throw std::domain_error("walk: reducer does not annihilate phi");
            break;
        }
        case ReductionMode::split_plus: {
            if (!config.split || !config.split->has_projections)
                throw std::invalid_argument("walk: split_plus mode needs a verified split with projections");
            if (!(config.split->p_char == char_poly(config.spec.phi)))
                throw std::domain_error("walk: split does not match the group action");
            break;
        }
    }
    if (config.threads < 1) config.threads = 1;
}

namespace {

// Eigenmode data for the deviation statistics: for W = sum_i P_i(phi) w_i,
// (I - pi_plus) W = sum over neutral eigenvalues of P_i(lambda) what_i v_i.
struct SplitModes {
    bool trivial_plus = false;  // pi_plus == I
    bool trivial_zero = false;  // pi_zero == I
    std::vector<std::complex<double>> lambdas;
    std::vector<bool> expanding;
    // orbit_modes[orbit][eig] = (V^-1 w_orbit)_eig * v_eig
    std::vector<std::vector<Eigen::VectorXcd>> orbit_modes;
};

struct WalkResources {
    std::vector<Generator> gens;
    std::vector<std::uint64_t> thresholds;
    std::optional<SplitModes> modes;
};

WalkResources build_resources(const WalkConfig& config) {
    WalkResources res;
    res.gens = generators(config.spec);

    res.thresholds.resize(config.weights.size());
    long double acc = 0;
    for (std::size_t i = 0; i < config.weights.size(); ++i) {
        acc += config.weights[i];
        res.thresholds[i] = (i + 1 == config.weights.size())
                                ? ~0ull
                                : static_cast<std::uint64_t>(acc * 18446744073709551616.0L);
    }

    if (config.split && config.split->has_projections) {
        SplitModes modes;
        const auto& split = *config.split;
        long long zero_deg = split.p_zero.is_zero() ? 0 : split.p_zero.max_degree();
        long long plus_deg = split.p_plus.is_zero() ? 0 : split.p_plus.max_degree();
        if (zero_deg == 0) {
            modes.trivial_plus = true;
        } else if (plus_deg == 0) {
            modes.trivial_zero = true;
        } else {
            Eigen::EigenSolver<Eigen::MatrixXd> es(to_double_matrix(config.spec.phi));
            if (es.info() != Eigen::Success)
                throw std::runtime_error("walk: eigensolver failed on phi");
            Eigen::MatrixXcd v = es.eigenvectors();
            Eigen::MatrixXcd vinv = v.inverse();
            const Index n = v.rows();
            modes.lambdas.resize(static_cast<std::size_t>(n));
            modes.expanding.resize(static_cast<std::size_t>(n));
            for (Index i = 0; i < n; ++i) {
                std::complex<double> z = es.eigenvalues()(i);
                modes.lambdas[static_cast<std::size_t>(i)] = z;
                modes.expanding[static_cast<std::size_t>(i)] =
                    std::abs(std::abs(z) - 1.0) > split.modulus_tol;
            }
            modes.orbit_modes.resize(config.spec.kernel_gens.size());
            for (std::size_t o = 0; o < config.spec.kernel_gens.size(); ++o) {
                Eigen::VectorXcd what = vinv * to_complex_vector(config.spec.kernel_gens[o]);
                modes.orbit_modes[o].resize(static_cast<std::size_t>(n));
                for (Index i = 0; i < n; ++i)
                    modes.orbit_modes[o][static_cast<std::size_t>(i)] = what(i) * v.col(i);
            }
        }
        res.modes = std::move(modes);
    }
    return res;
}

// Working coefficient buffer with O(1) increments at the current height.
struct DenseSeries {
    long long lo = 0;
    std::vector<Int> cells;

    void add(long long pos, int delta) {
        if (cells.empty()) {
            lo = pos;
            cells.emplace_back(delta);
            return;
        }
        while (pos < lo) {
            cells.insert(cells.begin(), Int(0));
            --lo;
        }
        while (pos >= lo + static_cast<long long>(cells.size())) cells.emplace_back(0);
        cells[static_cast<std::size_t>(pos - lo)] += delta;
    }
    LaurentPoly to_poly() const { return LaurentPoly::from_span(lo, cells); }
};

struct ReducedState {
    std::vector<LaurentPoly> reduced;  // parallel to polys; empty in mode none
    Int norm_q;
    Int upper;
};

ReducedState reduce_for_mode(const WalkConfig& config, const std::vector<LaurentPoly>& polys,
                             long long y, long long min_y, long long max_y) {
    ReducedState state;
    state.norm_q = 0;
    state.upper = 0;
    if (config.mode == ReductionMode::none) {
        Int spread = 2 * (Int(std::llabs(min_y)) + Int(std::llabs(max_y)));
        Int norm_p = 0;
        for (const auto& p : polys) norm_p += p.length();
        state.norm_q = norm_p;
        state.upper = norm_p + spread + Int(std::llabs(y));
        return state;
    }
    const LaurentPoly& reducer = (config.mode == ReductionMode::full_edp)
                                     ? *config.reducer
                                     : config.split->edp_witness;
    state.reduced.resize(polys.size());
    for (std::size_t i = 0; i < polys.size(); ++i) {
        if (polys[i].is_zero()) continue;
        ToppleReport rep = reduce_poly(polys[i], reducer);
        if (!verify_membership(rep))
            throw std::runtime_error("walk: reduction certificate failed");
        state.reduced[i] = rep.output;
        state.norm_q += rep.output.length();
        if (!rep.output.is_zero()) {
            long long lo = rep.output.min_degree(), hi = rep.output.max_degree();
            state.upper += rep.output.length() +
                           2 * (Int(std::llabs(lo)) + Int(std::llabs(hi)));
        }
    }
    state.upper += Int(std::llabs(y));
    return state;
}

CheckpointStats evaluate_checkpoint(const WalkConfig& config, const WalkResources& res,
                                    const std::vector<DenseSeries>& series, long long n,
                                    long long y, long long min_y, long long max_y) {
    CheckpointStats s;
    s.n = n;
    s.y = y;
    s.max_y = max_y;
    s.min_y = min_y;

    std::vector<LaurentPoly> polys(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) polys[i] = series[i].to_poly();

    s.norm_p = 0;
    s.height_p = 0;
    bool any = false;
    long long lo = 0, hi = 0;
    for (const auto& p : polys) {
        s.norm_p += p.length();
        Int h = p.height();
        if (h > s.height_p) s.height_p = h;
        if (!p.is_zero()) {
            if (!any || p.min_degree() < lo) lo = p.min_degree();
            if (!any || p.max_degree() > hi) hi = p.max_degree();
            any = true;
        }
    }
    s.diam_p = any ? hi - lo : 0;

    ReducedState red = reduce_for_mode(config, polys, y, min_y, max_y);
    s.norm_q = red.norm_q;
    s.upper_stat = red.upper;

    // Exact kernel position W = sum_i P_i(phi) w_i.
    RatVector w = rat_zero_vector(config.spec.rank);
    for (std::size_t i = 0; i < polys.size(); ++i) {
        if (polys[i].is_zero()) continue;
        w = vec_add(w, eval_poly_vec(polys[i], config.spec.phi, config.spec.kernel_gens[i]));
    }
    s.euclid_w = euclidean_norm(w);
    s.lower_bound = length_lower_bound(config.spec, GroupElement{w, y});

    if (res.modes) {
        const SplitModes& modes = *res.modes;
        if (modes.trivial_plus) {
            s.dplus_w = 0.0;
            s.dzero_w = s.euclid_w;
        } else if (modes.trivial_zero) {
            s.dplus_w = s.euclid_w;
            s.dzero_w = 0.0;
        } else {
            const Index dim = config.spec.phi.rows();
            Eigen::VectorXcd neutral = Eigen::VectorXcd::Zero(dim);
            Eigen::VectorXcd expanding = Eigen::VectorXcd::Zero(dim);
            for (std::size_t o = 0; o < polys.size(); ++o) {
                if (polys[o].is_zero()) continue;
                for (std::size_t e = 0; e < modes.lambdas.size(); ++e) {
                    std::complex<double> value = eval_poly(polys[o], modes.lambdas[e]);
                    if (modes.expanding[e]) expanding += value * modes.orbit_modes[o][e];
                    else neutral += value * modes.orbit_modes[o][e];
                }
            }
            s.dplus_w = neutral.norm();
            s.dzero_w = expanding.norm();
        }
    }

    // Neutral deviation surcharge for the split upper bound.
    if (config.mode == ReductionMode::split_plus) {
        RatVector qw = rat_zero_vector(config.spec.rank);
        for (std::size_t i = 0; i < red.reduced.size(); ++i) {
            if (red.reduced[i].is_zero()) continue;
            qw = vec_add(qw, eval_poly_vec(red.reduced[i], config.spec.phi,
                                           config.spec.kernel_gens[i]));
        }
        // (P - Q)(phi) w is annihilated on E_+ exactly, so the difference has
        // moderate entries and converts to floating without cancellation.
        RatVector diff = vec_sub(w, qw);
        Eigen::VectorXcd dev = to_complex_vector(diff);
        const Index dim = config.spec.phi.rows();
        Eigen::VectorXcd residual =
            (Eigen::MatrixXcd::Identity(dim, dim) - config.split->pi_plus) * dev;
        double cost = config.lattice_cost * residual.norm();
        s.upper_stat += Int(static_cast<long long>(std::ceil(cost)));
    }
    return s;
}

TrajectoryRecord run_one(const WalkConfig& config, const WalkResources& res, int trial) {
    TrajectoryRecord record;
    record.trial = trial;
    record.word.reserve(static_cast<std::size_t>(config.n_steps));

    SplitMix64 rng(mix_seed(config.master_seed, static_cast<std::uint64_t>(trial)));
    std::vector<DenseSeries> series(config.spec.kernel_gens.size());
    long long y = 0, min_y = 0, max_y = 0;

    std::size_t next_cp = 0;
    while (next_cp < config.checkpoints.size() && config.checkpoints[next_cp] == 0) {
        record.checkpoints.push_back(
            evaluate_checkpoint(config, res, series, 0, y, min_y, max_y));
        ++next_cp;
    }

    for (long long step = 1; step <= config.n_steps; ++step) {
        std::uint64_t r = rng.next();
        std::size_t gi = 0;
        while (r > res.thresholds[gi]) ++gi;
        const Generator& g = res.gens[gi];
        if (g.orbit >= 0) {
            series[static_cast<std::size_t>(g.orbit)].add(y, g.sign);
        } else {
            y += g.shift;
            if (y > max_y) max_y = y;
            if (y < min_y) min_y = y;
        }
        record.word.push_back(static_cast<int>(gi));
        while (next_cp < config.checkpoints.size() && config.checkpoints[next_cp] == step) {
            record.checkpoints.push_back(
                evaluate_checkpoint(config, res, series, step, y, min_y, max_y));
            ++next_cp;
        }
    }
    return record;
}

}  // namespace

TrajectoryRecord run_trajectory(const WalkConfig& config0, int trial_index) {
    WalkConfig config = config0;
    finalize_config(config);
    WalkResources res = build_resources(config);
    return run_one(config, res, trial_index);
}

Ensemble run_ensemble(const WalkConfig& config0) {
    Ensemble ensemble;
    ensemble.config = config0;
    finalize_config(ensemble.config);
    const WalkConfig& config = ensemble.config;
    WalkResources res = build_resources(config);

    ensemble.records.resize(static_cast<std::size_t>(config.trials));
    if (config.threads == 1) {
        for (int t = 0; t < config.trials; ++t)
            ensemble.records[static_cast<std::size_t>(t)] = run_one(config, res, t);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            while (true) {
                int t = next.fetch_add(1);
                if (t >= config.trials) break;
                ensemble.records[static_cast<std::size_t>(t)] = run_one(config, res, t);
            }
        };
        std::vector<std::thread> pool;
        int nthreads = std::min(config.threads, config.trials);
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return ensemble;
}

UpperBoundStat upper_bound_statistic(const WalkConfig& config,
                                     const std::vector<LaurentPoly>& polys, long long y,
                                     long long min_y, long long max_y) {
    ReducedState red = reduce_for_mode(config, polys, y, min_y, max_y);
    UpperBoundStat stat{red.upper, red.norm_q};
    if (config.mode == ReductionMode::split_plus) {
        RatVector w = rat_zero_vector(config.spec.rank);
        RatVector qw = rat_zero_vector(config.spec.rank);
        for (std::size_t i = 0; i < polys.size(); ++i) {
            if (!polys[i].is_zero())
                w = vec_add(w, eval_poly_vec(polys[i], config.spec.phi,
                                             config.spec.kernel_gens[i]));
            if (!red.reduced[i].is_zero())
                qw = vec_add(qw, eval_poly_vec(red.reduced[i], config.spec.phi,
                                               config.spec.kernel_gens[i]));
        }
        const Index dim = config.spec.phi.rows();
        Eigen::VectorXcd dev = to_complex_vector(vec_sub(w, qw));
        Eigen::VectorXcd residual =
            (Eigen::MatrixXcd::Identity(dim, dim) - config.split->pi_plus) * dev;
        stat.value += Int(static_cast<long long>(std::ceil(config.lattice_cost * residual.norm())));
    }
    return stat;
}

const std::vector<std::string>& checkpoint_columns() {
    static const std::vector<std::string> cols = {
        "Y", "M", "m", "normP", "K_P", "d_P", "normQ", "euclid_W", "dplus_W", "L", "U"};
    return cols;
}

double checkpoint_value(const CheckpointStats& s, const std::string& column) {
    if (column == "Y") return static_cast<double>(s.y);
    if (column == "M") return static_cast<double>(s.max_y);
    if (column == "m") return static_cast<double>(s.min_y);
    if (column == "normP") return to_double(s.norm_p);
    if (column == "K_P") return to_double(s.height_p);
    if (column == "d_P") return static_cast<double>(s.diam_p);
    if (column == "normQ") return to_double(s.norm_q);
    if (column == "euclid_W") return s.euclid_w;
    if (column == "dplus_W") return s.dplus_w;
    if (column == "dzero_W") return s.dzero_w;
    if (column == "L") return static_cast<double>(s.lower_bound);
    if (column == "U") return to_double(s.upper_stat);
    if (column == "normP_plus_spread")
        return to_double(s.norm_p) +
               2.0 * (static_cast<double>(std::llabs(s.min_y)) +
                      static_cast<double>(std::llabs(s.max_y)));
    throw std::invalid_argument("unknown statistic column '" + column + "'");
}

EnsembleTable ensemble_table(const Ensemble& ensemble) {
    EnsembleTable table;
    table.checkpoints = ensemble.config.checkpoints;
    table.columns = checkpoint_columns();
    const std::size_t ncp = table.checkpoints.size();
    const std::size_t trials = ensemble.records.size();
    for (const auto& col : table.columns) {
        std::vector<double> mean(ncp, 0), mx(ncp, 0), med(ncp, 0);
        for (std::size_t c = 0; c < ncp; ++c) {
            std::vector<double> vals(trials);
            for (std::size_t t = 0; t < trials; ++t)
                vals[t] = checkpoint_value(ensemble.records[t].checkpoints[c], col);
            double sum = 0;
            double best = vals.empty() ? 0 : vals[0];
            for (double v : vals) {
                sum += v;
                best = std::max(best, v);
            }
            mean[c] = sum / static_cast<double>(trials);
            mx[c] = best;
            std::nth_element(vals.begin(), vals.begin() + static_cast<long>(trials / 2), vals.end());
            med[c] = vals[trials / 2];
        }
        table.mean[col] = std::move(mean);
        table.max[col] = std::move(mx);
        table.median[col] = std::move(med);
    }
    return table;
}

}  // namespace sandwalk
