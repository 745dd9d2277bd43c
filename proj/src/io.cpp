#include "sandwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sandwalk {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string ensemble_csv(const Ensemble& ensemble) {
    std::ostringstream out;
    out << "trial,n,Y,M,m,normP,K_P,d_P,normQ,euclid_W,dplus_W,L,U\n";
    for (const auto& rec : ensemble.records) {
        for (const auto& s : rec.checkpoints) {
            out << rec.trial << ',' << s.n << ',' << s.y << ',' << s.max_y << ','
                << s.min_y << ',' << s.norm_p << ',' << s.height_p << ',' << s.diam_p
                << ',' << s.norm_q << ',' << fmt_double(s.euclid_w) << ','
                << fmt_double(s.dplus_w) << ',' << s.lower_bound << ',' << s.upper_stat
                << '\n';
        }
    }
    return out.str();
}

void write_ensemble_csv(const Ensemble& ensemble, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << ensemble_csv(ensemble);
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::invalid_argument("CSV column '" + name + "' not found");
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) fields.push_back(item);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size())
                throw std::invalid_argument("CSV row width does not match header");
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) throw std::invalid_argument("empty CSV");
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open CSV: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

StatSeries stat_series(const Ensemble& ensemble, const std::string& column) {
    StatSeries s;
    s.checkpoints = ensemble.config.checkpoints;
    s.by_trial.reserve(ensemble.records.size());
    for (const auto& rec : ensemble.records) {
        std::vector<double> row;
        row.reserve(rec.checkpoints.size());
        for (const auto& cp : rec.checkpoints) row.push_back(checkpoint_value(cp, column));
        s.by_trial.push_back(std::move(row));
    }
    return s;
}

StatSeries stat_series(const CsvTable& table, const std::string& column) {
    std::size_t trial_col = table.column("trial");
    std::size_t n_col = table.column("n");

    auto value_of = [&](const std::vector<std::string>& row) -> double {
        if (column == "normP_plus_spread") {
            double norm_p = std::stod(row[table.column("normP")]);
            double max_y = std::stod(row[table.column("M")]);
            double min_y = std::stod(row[table.column("m")]);
            return norm_p + 2.0 * (std::abs(min_y) + std::abs(max_y));
        }
        return std::stod(row[table.column(column)]);
    };

    StatSeries s;
    std::vector<long long> seen_trials;
    for (const auto& row : table.rows) {
        long long trial = std::stoll(row[trial_col]);
        long long n = std::stoll(row[n_col]);
        if (seen_trials.empty() || trial != seen_trials.back()) {
            seen_trials.push_back(trial);
            s.by_trial.emplace_back();
        }
        if (seen_trials.size() == 1) s.checkpoints.push_back(n);
        s.by_trial.back().push_back(value_of(row));
    }
    for (const auto& row : s.by_trial)
        if (row.size() != s.checkpoints.size())
            throw std::invalid_argument("CSV schema mismatch: ragged trial blocks");
    return s;
}

std::string manifest_text(const RunManifest& m) {
    std::ostringstream out;
    out << "command = " << m.command << "\n";
    out << "group = " << m.group << "\n";
    out << "mode = " << m.mode << "\n";
    out << "steps = " << m.steps << "\n";
    out << "trials = " << m.trials << "\n";
    out << "seed = " << m.seed << "\n";
    if (!m.reducer.empty()) out << "reducer = " << m.reducer << "\n";
    if (!m.p_plus.empty()) out << "p_plus = " << m.p_plus << "\n";
    if (!m.p_zero.empty()) out << "p_zero = " << m.p_zero << "\n";
    out << "checkpoints =";
    for (long long c : m.checkpoints) out << ' ' << c;
    out << "\n";
    out << "weights =";
    for (double w : m.weights) out << ' ' << fmt_double(w);
    out << "\n";
    out << "library_version = " << m.library_version << "\n";
    out << "wall_clock_seconds = " << fmt_double(m.wall_seconds) << "\n";
    out << "csv = " << m.csv_path << "\n";
    return out.str();
}

void write_manifest(const RunManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << manifest_text(m);
}

}  // namespace sandwalk
