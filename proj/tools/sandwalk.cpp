// sandwalk: exact sandpile reduction of Laurent polynomials and Monte Carlo
// escape statistics for random walks on abelian-by-cyclic groups.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "sandwalk/catalog.hpp"
#include "sandwalk/escape.hpp"
#include "sandwalk/io.hpp"
#include "sandwalk/walk.hpp"

using namespace sandwalk;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

std::vector<GroupSpec> load_groups(const std::string& catalog_path) {
    if (catalog_path.empty()) return default_catalog();
    return load_catalog_file(catalog_path);
}

void print_edp_report(const LaurentPoly& y, const EdpReport& rep) {
    std::cout << "polynomial = " << to_string(y) << "\n";
    std::cout << "holds = " << (rep.holds ? "true" : "false") << "\n";
    std::cout << "y0 = " << rep.y0 << " (degree " << rep.i0 << ")\n";
    std::cout << "delta = " << rep.delta << "\n";
    std::cout << "r = " << rep.r << "\n";
    std::cout << "contraction = " << rep.contraction << " "
              << (rep.holds ? "< 1" : ">= 1") << "\n";
}

void print_topple_report(const ToppleReport& rep) {
    std::cout << "input = " << to_string(rep.input) << "\n";
    std::cout << "reducer = " << to_string(rep.reducer) << "\n";
    std::cout << "Q = " << to_string(rep.output) << "\n";
    std::cout << "cofactor = " << to_string(rep.cofactor) << "\n";
    std::cout << "topples = " << rep.topples << "\n";
    std::cout << "passes = " << rep.passes << "\n";
    std::cout << "K_Q = " << rep.final_height << "\n";
    std::cout << "d_Q = " << rep.final_diameter << "\n";
    std::cout << "height_cap = " << rep.height_cap << "\n";
    double log2k = static_cast<double>(floor_log2(rep.input.height() + 2)) + 1.0;
    std::cout << "norm_ratio = " << to_double(rep.output.length()) / log2k
              << "  (||Q|| per log2 K)\n";
    std::cout << "diam_ratio = " << static_cast<double>(rep.final_diameter) / log2k
              << "  (d(Q) per log2 K)\n";
    std::cout << "membership = " << (verify_membership(rep) ? "verified" : "FAILED")
              << "\n";
}

struct SimulateArgs {
    std::string group, catalog_path, mode_text = "none", out_prefix;
    std::string reducer_text, p_plus_text, p_zero_text;
    long long steps = 1 << 14;
    int trials = 200;
    std::uint64_t seed = 0;
    int threads = 1;
};

int run_simulate(const SimulateArgs& args, const std::string& command_echo) {
    auto groups = load_groups(args.catalog_path);
    const GroupSpec& spec = find_group(groups, args.group);

    WalkConfig config;
    config.spec = spec;
    config.n_steps = args.steps;
    config.trials = args.trials;
    config.master_seed = args.seed;
    config.threads = args.threads;
    config.mode = parse_mode(args.mode_text);

    RunManifest manifest;
    manifest.command = command_echo;
    manifest.group = spec.name;
    manifest.mode = args.mode_text;
    manifest.steps = args.steps;
    manifest.trials = args.trials;
    manifest.seed = args.seed;
    manifest.library_version = kVersion;

    if (config.mode == ReductionMode::full_edp) {
        LaurentPoly reducer;
        if (!args.reducer_text.empty()) {
            reducer = parse_poly(args.reducer_text);
        } else {
            reducer = char_poly(spec.phi);
            if (!edp_check(reducer).holds) {
                auto u = find_edp_multiple(reducer);
                if (!u)
                    throw std::domain_error(
                        "no dissipative multiple of the characteristic polynomial found; "
                        "pass --reducer explicitly");
                reducer = *u * reducer;
            }
        }
        config.reducer = reducer;
        manifest.reducer = to_string(reducer);
    } else if (config.mode == ReductionMode::split_plus) {
        std::string plus_text = !args.p_plus_text.empty() ? args.p_plus_text : spec.p_plus_text;
        std::string zero_text = !args.p_zero_text.empty() ? args.p_zero_text : spec.p_zero_text;
        if (plus_text.empty() || zero_text.empty())
            throw std::domain_error("group '" + spec.name +
                                    "' has no verified integer split; pass --p-plus/--p-zero");
        LaurentPoly p_char = char_poly(spec.phi);
        SplitVerification v = verify_split(p_char, parse_poly(plus_text), parse_poly(zero_text));
        if (!v.accepted()) {
            std::string why;
            for (const auto& f : v.failures) why += "\n  - " + f;
            throw std::domain_error("split rejected for '" + spec.name + "':" + why);
        }
        config.split = projections(spec.phi, *v.split);
        manifest.p_plus = to_string(config.split->p_plus);
        manifest.p_zero = to_string(config.split->p_zero);
    }

    auto start = std::chrono::steady_clock::now();
    Ensemble ensemble = run_ensemble(config);
    auto stop = std::chrono::steady_clock::now();

    manifest.checkpoints = ensemble.config.checkpoints;
    manifest.weights = ensemble.config.weights;
    manifest.wall_seconds = std::chrono::duration<double>(stop - start).count();

    std::string prefix = args.out_prefix.empty() ? spec.name + "_" + args.mode_text
                                                 : args.out_prefix;
    manifest.csv_path = prefix + ".csv";
    write_ensemble_csv(ensemble, manifest.csv_path);
    write_manifest(manifest, prefix + ".manifest");

    EnsembleTable table = ensemble_table(ensemble);
    std::cout << "wrote " << manifest.csv_path << " and " << prefix << ".manifest\n";
    std::cout << "n mean_U mean_L mean_|Y|\n";
    for (std::size_t c = 0; c < table.checkpoints.size(); ++c)
        std::cout << table.checkpoints[c] << " " << table.mean["U"][c] << " "
                  << table.mean["L"][c] << " " << table.mean["euclid_W"][c] << "\n";
    return 0;
}

int run_estimate(const std::string& csv_path, const std::string& column, double alpha) {
    CsvTable table = read_csv(csv_path);
    StatSeries series = stat_series(table, column);

    ExponentFit fit = fit_displacement_exponent(series);
    std::cout << "column = " << column << "\n";
    std::cout << "alpha_hat = " << fit.alpha_hat << "\n";
    std::cout << "ci95 = [" << fit.ci_low << ", " << fit.ci_high << "]\n";
    std::cout << "r_squared = " << fit.r_squared << "\n";

    long long last = series.checkpoints.back();
    TailReport tail = tail_profile(series, last, alpha);
    std::cout << "tail_checkpoint = " << last << "\n";
    std::cout << "beta_hat = " << tail.beta_hat << "\n";
    std::cout << "gamma_hat = " << tail.gamma_hat << "\n";
    std::cout << "delta_hat = " << tail.delta_hat << "\n";
    std::cout << "exceedance_curve =";
    for (std::size_t j = 0; j < tail.x_grid.size(); j += 6)
        std::cout << " (" << tail.x_grid[j] << ", " << tail.exceedance[j] << ")";
    std::cout << "\n";

    LilReport lil = lil_statistic(series);
    std::cout << "lil_median_sup = " << lil.median << "\n";
    std::cout << "lil_quartiles = [" << lil.q25 << ", " << lil.q75 << "]\n";
    std::cout << "lil_max_sup = " << lil.max_sup << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sandwalk: dissipative sandpile reduction and escape statistics for "
                 "random walks on abelian-by-cyclic groups"};
    app.require_subcommand(1);

    std::string command_echo;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) command_echo += ' ';
        command_echo += argv[i];
    }

    // edp
    std::string edp_poly;
    auto* edp_cmd = app.add_subcommand("edp", "check the dissipativity predicate");
    edp_cmd->add_option("polynomial", edp_poly, "polynomial text, e.g. \"t^2-3*t+1\"")
        ->required();

    // topple
    std::string topple_poly, topple_reducer, topple_constant;
    auto* topple_cmd = app.add_subcommand("topple", "reduce modulo a dissipative polynomial");
    topple_cmd->add_option("polynomial", topple_poly, "polynomial to reduce");
    topple_cmd->add_option("--constant", topple_constant, "reduce a bare integer constant");
    topple_cmd->add_option("--reducer", topple_reducer, "dissipative reducer")->required();

    // ball
    std::string ball_group, ball_catalog;
    int ball_radius = 5;
    auto* ball_cmd = app.add_subcommand("ball", "breadth-first word-length ball");
    ball_cmd->add_option("--group", ball_group, "catalog entry")->required();
    ball_cmd->add_option("--radius", ball_radius, "ball radius (cap 10)");
    ball_cmd->add_option("--catalog", ball_catalog, "catalog file overriding the built-ins");

    // simulate
    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "run a random-walk ensemble");
    sim_cmd->add_option("--group", sim.group, "catalog entry")->required();
    sim_cmd->add_option("--steps", sim.steps, "steps per trajectory");
    sim_cmd->add_option("--trials", sim.trials, "number of trajectories");
    sim_cmd->add_option("--seed", sim.seed, "master seed");
    sim_cmd->add_option("--mode", sim.mode_text, "none | full_edp | split_plus");
    sim_cmd->add_option("--reducer", sim.reducer_text, "reducer for full_edp mode");
    sim_cmd->add_option("--p-plus", sim.p_plus_text, "expanding factor for split_plus mode");
    sim_cmd->add_option("--p-zero", sim.p_zero_text, "neutral factor for split_plus mode");
    sim_cmd->add_option("--out", sim.out_prefix, "output prefix (default <group>_<mode>)");
    sim_cmd->add_option("--threads", sim.threads, "worker threads for trials");
    sim_cmd->add_option("--catalog", sim.catalog_path, "catalog file overriding the built-ins");

    // estimate
    std::string est_csv, est_column = "U";
    double est_alpha = 0.5;
    auto* est_cmd = app.add_subcommand("estimate", "exponent, tail, and LIL reports from a CSV");
    est_cmd->add_option("csv", est_csv, "CSV written by simulate")->required();
    est_cmd->add_option("--column", est_column,
                        "statistic column (or normP_plus_spread)");
    est_cmd->add_option("--alpha", est_alpha, "scaling exponent for the tail profile");

    // catalog
    std::string cat_show, cat_file;
    auto* cat_cmd = app.add_subcommand("catalog", "list or show group entries");
    auto* cat_list = cat_cmd->add_subcommand("list", "list entry names");
    auto* cat_show_cmd = cat_cmd->add_subcommand("show", "print one entry");
    cat_show_cmd->add_option("name", cat_show, "entry name")->required();
    cat_cmd->add_option("--catalog", cat_file, "catalog file overriding the built-ins");

    // trace-word
    std::string tw_group, tw_catalog;
    long long tw_k = 1;
    int tw_index = 1;
    auto* tw_cmd = app.add_subcommand("trace-word", "short word for trace(phi^k) e_i");
    tw_cmd->add_option("--group", tw_group, "catalog entry")->required();
    tw_cmd->add_option("--k", tw_k, "power of the action");
    tw_cmd->add_option("--index", tw_index, "basis index (1-based)");
    tw_cmd->add_option("--catalog", tw_catalog, "catalog file overriding the built-ins");

    try {
        app.parse(argc, argv);

        if (*edp_cmd) {
            LaurentPoly y = parse_poly(edp_poly);
            print_edp_report(y, edp_check(y));
            return 0;
        }
        if (*topple_cmd) {
            LaurentPoly reducer = parse_poly(topple_reducer);
            ToppleReport rep;
            if (!topple_constant.empty()) rep = reduce_constant(Int(topple_constant), reducer);
            else if (!topple_poly.empty()) rep = reduce_poly(parse_poly(topple_poly), reducer);
            else throw std::invalid_argument("topple: give a polynomial or --constant");
            print_topple_report(rep);
            if (!verify_membership(rep)) return kExitInternal;
            return 0;
        }
        if (*ball_cmd) {
            auto groups = load_groups(ball_catalog);
            const GroupSpec& spec = find_group(groups, ball_group);
            Ball b = ball(spec, ball_radius);
            auto norms = max_kernel_norm_by_radius(b);
            std::cout << "group = " << spec.name << "\n";
            std::cout << "radius count_at max_kernel_norm\n";
            for (std::size_t r = 0; r < b.count_by_length.size(); ++r)
                std::cout << r << " " << b.count_by_length[r] << " "
                          << to_double(norms[r]) << "\n";
            std::cout << "total = " << b.size() << "\n";
            return 0;
        }
        if (*sim_cmd) return run_simulate(sim, command_echo);
        if (*est_cmd) return run_estimate(est_csv, est_column, est_alpha);
        if (*cat_cmd) {
            auto groups = load_groups(cat_file);
            if (*cat_list) {
                for (const auto& g : groups) std::cout << g.name << "\n";
                return 0;
            }
            if (*cat_show_cmd) {
                const GroupSpec& spec = find_group(groups, cat_show);
                std::cout << serialize_catalog({spec});
                return 0;
            }
            for (const auto& g : groups) std::cout << g.name << "\n";
            return 0;
        }
        if (*tw_cmd) {
            auto groups = load_groups(tw_catalog);
            const GroupSpec& spec = find_group(groups, tw_group);
            Word w = sol_trace_word(spec, tw_index - 1, tw_k);
            auto gens = generators(spec);
            std::cout << "word =";
            for (int idx : w) std::cout << ' ' << gens[static_cast<std::size_t>(idx)].label;
            std::cout << "\n";
            std::cout << "length = " << w.size() << "\n";
            GroupElement g = evaluate_word(spec, w);
            std::cout << "evaluates_to = (" << g.a(0);
            for (Index i = 1; i < g.a.size(); ++i) std::cout << ", " << g.a(i);
            std::cout << "; " << g.k << ")\n";
            Rat trace = mat_trace(mat_pow(spec.phi, tw_k));
            std::cout << "trace(phi^k) = " << trace << "\n";
            bool ok = g.k == 0 && g.a(tw_index - 1) == trace;
            std::cout << "match = " << (ok ? "true" : "false") << "\n";
            return ok ? 0 : kExitInternal;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    } catch (const PolyParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
