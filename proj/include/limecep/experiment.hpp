#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "limecep/dataset.hpp"
#include "limecep/emission.hpp"
#include "limecep/engine.hpp"
#include "limecep/replay.hpp"
#include "limecep/score.hpp"

namespace limecep {

// Loads one pattern per file (the file name stem is the pattern id) from a file
// or a directory of files, applying the selection policy to each.
std::vector<PatternSpec> load_patterns(const std::string& path, SelectionPolicy policy);

// Fills missing per-type estimates with a default gap so every pattern type is
// declared.
SourceConfig complete_sources(SourceConfig sources, const std::vector<PatternSpec>& patterns,
                              double default_gap_s = 1.0);

struct RunConfig {
    std::vector<PatternSpec> patterns;
    ManagerConfig manager;
    std::map<std::string, ManagerConfig> per_pattern;
    SourceConfig sources;
    std::vector<LoadedEvent> events;
};

struct RunResult {
    std::vector<OutputEvent> emissions;
    ReplaySummary summary;
    std::map<std::string, std::set<EventSet>> emitted; // after corrections applied
    std::map<std::string, std::set<EventSet>> truth;   // oracle over the in-order stream
    bool reference_available = false; // oracle refuses beyond desk scale
    MultiScoreReport score;
    double mean_latency_from_last_ms = 0.0; // secondary metric: last arrival to emission
    std::string stats_json;                 // shared statistics snapshot after the run
};

RunResult run_once(const RunConfig& config);

struct ExperimentReport {
    std::vector<RunResult> repetitions;
    std::string to_json() const;
    std::string to_csv(const std::string& config_name, double ooo_probability) const;
};

// Experiment file: patterns + dataset (file or generator spec) + engine config +
// repetitions; writes the JSON report, and optionally emissions and CSV files.
ExperimentReport run_experiment(const std::string& config_path);

}  // namespace limecep
