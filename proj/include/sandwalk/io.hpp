#pragma once

#include <string>
#include <vector>

#include "sandwalk/walk.hpp"

namespace sandwalk {

/// One row per (trial, checkpoint):
/// trial,n,Y,M,m,normP,K_P,d_P,normQ,euclid_W,dplus_W,L,U
/// Integer columns are exact decimal strings; floats use %.17g.
void write_ensemble_csv(const Ensemble& ensemble, const std::string& path);
std::string ensemble_csv(const Ensemble& ensemble);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

/// Per-trial statistic series extracted from an ensemble or a CSV table.
struct StatSeries {
    std::vector<long long> checkpoints;
    std::vector<std::vector<double>> by_trial;  // [trial][checkpoint]
};
StatSeries stat_series(const Ensemble& ensemble, const std::string& column);
StatSeries stat_series(const CsvTable& table, const std::string& column);

/// Key-value run manifest; a run is replayable from this file alone.
struct RunManifest {
    std::string command;
    std::string group;
    std::string mode;
    long long steps = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::string reducer;  // polynomial text, when applicable
    std::string p_plus;
    std::string p_zero;
    std::vector<long long> checkpoints;
    std::vector<double> weights;
    std::string library_version;
    double wall_seconds = 0;
    std::string csv_path;
};

void write_manifest(const RunManifest& manifest, const std::string& path);
std::string manifest_text(const RunManifest& manifest);

}  // namespace sandwalk
