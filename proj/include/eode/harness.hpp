#ifndef EODE_HARNESS_HPP
#define EODE_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "eode/classifiers.hpp"
#include "eode/dataset.hpp"
#include "eode/ensemble.hpp"
#include "eode/feature_selection.hpp"
#include "eode/gwo.hpp"

namespace eode::harness {

struct RunConfig {
    std::string dataset_path;
    double test_fraction = 0.2;
    gwo::GwoParams gwo;
    fs::FsObjectiveParams fs;
    ens::EnsembleObjectiveParams ens;
    ClassifierConfig classifier;
    std::uint64_t seed = 0;
    std::string mode = "eode";  // eode | wel | single:<kind>
    std::string out_dir;        // empty: no files written

    void validate() const;
};

struct RunReport {
    std::string dataset;
    int rows = 0;
    int dim = 0;
    int classes = 0;
    std::string mode;
    std::string evaluation_classifier;
    int fnum = 0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    int ensemble_size = 0;
    double wall_time_seconds = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> biomarkers;
    std::vector<double> fs_history;
    std::vector<int> fs_history_bits;
    std::vector<ens::FoldTrace> fold_traces;
    std::vector<std::string> warnings;
    nlohmann::json manifest;  // ensemble manifest; null for wel/single

    /// Everything except wall time is a pure function of (config, seed).
    nlohmann::json to_json() const;
    std::string to_table() const;
};

/// Loads the dataset, splits, trains per `mode`, and writes the report
/// bundle into out_dir when one is set.
RunReport run(const RunConfig& cfg);

/// Same pipeline on an in-memory dataset (used by bench and the tests).
RunReport run_on(const Dataset& ds, const std::string& name, const RunConfig& cfg);

struct BenchEntry {
    std::string dataset;
    bool ok = false;
    std::string error;
    RunReport report;
};

struct BenchSummary {
    std::vector<BenchEntry> entries;
    int failures = 0;
    double mean_accuracy = 0.0;
    double mean_fnum = 0.0;
    double mean_ensemble_size = 0.0;

    nlohmann::json to_json() const;
    std::string to_table() const;
};

/// Runs every *.csv in dir; per-dataset failures become error entries
/// instead of aborting the sweep.
BenchSummary bench(const std::string& dir, const RunConfig& cfg);

}  // namespace eode::harness

#endif
