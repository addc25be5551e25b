#include "eode/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "eode/common.hpp"

namespace eode::harness {

namespace {

using nlohmann::json;

bool is_single_mode(const std::string& mode) {
    return mode.rfind("single:", 0) == 0;
}

ClassifierKind single_mode_kind(const std::string& mode) {
    return classifier_kind_from_string(mode.substr(7));
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ParseError("write failed: " + path);
}

std::string trace_csv(const std::vector<double>& history,
                      const std::vector<int>& bits) {
    std::string out = "iteration,best_fitness,bits_set\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", history[i]);
        out += buf;
        out += ',';
        out += std::to_string(i < bits.size() ? bits[i] : 0);
        out += '\n';
    }
    return out;
}

double plain_accuracy(const TrainedModel& model, const Dataset& ds) {
    const std::vector<int> preds = model.predict(ds.samples);
    int correct = 0;
    for (int r = 0; r < ds.rows(); ++r) {
        if (preds[static_cast<std::size_t>(r)] ==
            ds.labels[static_cast<std::size_t>(r)]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / ds.rows();
}

fs::FeatureSelectionResult run_feature_selection(const Dataset& train,
                                                 const RunConfig& cfg,
                                                 std::uint64_t train_seed) {
    // identical derivation to the full pipeline so the ablation shares the
    // same selected mask for a given master seed
    fs::FsObjectiveParams fs_p = cfg.fs;
    fs_p.seed = derive_seed(train_seed, "fs-objective");
    gwo::GwoParams g = cfg.gwo;
    g.seed = derive_seed(train_seed, "fs-gwo");
    return fs::select_features(train, g, fs_p, cfg.classifier);
}

std::vector<std::string> mask_names(const Dataset& ds, const Mask& mask) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < mask.size(); ++j) {
        if (mask[j]) names.push_back(ds.feature_names[j]);
    }
    return names;
}

void write_outputs(const RunReport& report, const std::string& out_dir) {
    namespace fsys = std::filesystem;
    fsys::create_directories(out_dir);
    const fsys::path base(out_dir);

    write_text((base / "report.json").string(), report.to_json().dump(2) + "\n");
    write_text((base / "report.txt").string(), report.to_table());
    if (!report.manifest.is_null()) {
        write_text((base / "manifest.json").string(),
                   report.manifest.dump(2) + "\n");
    }
    if (!report.fs_history.empty()) {
        write_text((base / "fs_trace.csv").string(),
                   trace_csv(report.fs_history, report.fs_history_bits));
    }
    for (const auto& trace : report.fold_traces) {
        write_text((base / ("ens_trace_fold" + std::to_string(trace.fold) + ".csv"))
                       .string(),
                   trace_csv(trace.history, trace.history_bits));
    }
}

}  // namespace

void RunConfig::validate() const {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must be in (0,1)");
    gwo.validate();
    fs.validate();
    ens.validate();
    classifier.validate();
    if (mode != "eode" && mode != "wel" && !is_single_mode(mode))
        throw ConfigError("mode must be eode, wel, or single:<kind>");
    if (is_single_mode(mode)) single_mode_kind(mode);  // throws on bad name
}

json RunReport::to_json() const {
    json fold_list = json::array();
    for (const auto& trace : fold_traces) {
        fold_list.push_back(json{{"fold", trace.fold},
                                 {"pool_size", trace.pool_size},
                                 {"filtered_size", trace.filtered_size},
                                 {"selected", trace.selected},
                                 {"history", trace.history},
                                 {"bits", trace.history_bits}});
    }
    return json{{"dataset", dataset},
                {"rows", rows},
                {"dim", dim},
                {"classes", classes},
                {"mode", mode},
                {"evaluation_classifier", evaluation_classifier},
                {"fnum", fnum},
                {"train_accuracy", train_accuracy},
                {"test_accuracy", test_accuracy},
                {"ensemble_size", ensemble_size},
                {"wall_time_seconds", wall_time_seconds},
                {"seed", seed},
                {"biomarkers", biomarkers},
                {"fs_history", fs_history},
                {"fs_history_bits", fs_history_bits},
                {"fold_traces", std::move(fold_list)},
                {"warnings", warnings}};
}

std::string RunReport::to_table() const {
    std::string out;
    auto row = [&out](const std::string& key, const std::string& value) {
        out += key;
        out.append(key.size() < 18 ? 18 - key.size() : 1, ' ');
        out += ": ";
        out += value;
        out += '\n';
    };
    row("dataset", dataset);
    row("shape", std::to_string(rows) + " x " + std::to_string(dim) + " x " +
                     std::to_string(classes));
    row("mode", mode);
    row("eval classifier", evaluation_classifier);
    row("selected features",
        std::to_string(fnum) + " / " + std::to_string(dim));
    row("train accuracy", fixed4(train_accuracy));
    row("test accuracy", fixed4(test_accuracy));
    row("ensemble size", std::to_string(ensemble_size));
    row("wall time (s)", fixed4(wall_time_seconds));
    row("seed", std::to_string(seed));
    if (!warnings.empty()) row("warnings", std::to_string(warnings.size()));
    return out;
}

RunReport run_on(const Dataset& ds, const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    ds.validate();

    const auto started = std::chrono::steady_clock::now();

    RunReport report;
    report.dataset = name;
    report.rows = ds.rows();
    report.dim = ds.cols();
    report.classes = ds.class_count;
    report.mode = cfg.mode;
    report.seed = cfg.seed;

    const SplitPair split =
        stratified_split(ds, cfg.test_fraction, derive_seed(cfg.seed, "split"));
    const std::uint64_t train_seed = derive_seed(cfg.seed, "train");

    if (cfg.mode == "eode") {
        ens::EodeModel model = ens::train_eode(split.train, cfg.gwo, cfg.classifier,
                                               cfg.fs, cfg.ens, train_seed);
        report.evaluation_classifier =
            to_string(model.feature_selection.evaluation_classifier);
        report.fnum = model.feature_selection.fnum;
        report.train_accuracy = ens::evaluate(model.ensemble, split.train);
        report.test_accuracy = ens::evaluate(model.ensemble, split.test);
        report.ensemble_size = static_cast<int>(model.ensemble.models.size());
        report.biomarkers = mask_names(ds, model.feature_selection.mask);
        report.fs_history = model.feature_selection.history;
        report.fs_history_bits = model.feature_selection.history_bits;
        report.fold_traces = model.fold_traces;
        report.warnings = model.warnings;
        report.manifest = ens::ensemble_manifest(model.ensemble);
    } else if (cfg.mode == "wel") {
        fs::FeatureSelectionResult fsel =
            run_feature_selection(split.train, cfg, train_seed);
        const Dataset masked_train = apply_mask(split.train, fsel.mask);
        const Dataset masked_test = apply_mask(split.test, fsel.mask);

        ClassifierConfig fit_cfg = cfg.classifier;
        fit_cfg.seed = derive_seed(train_seed, "classifier");
        const TrainedModel model =
            fit(fsel.evaluation_classifier, masked_train, fit_cfg);

        report.evaluation_classifier = to_string(fsel.evaluation_classifier);
        report.fnum = fsel.fnum;
        report.train_accuracy = plain_accuracy(model, masked_train);
        report.test_accuracy = plain_accuracy(model, masked_test);
        report.biomarkers = mask_names(ds, fsel.mask);
        report.fs_history = fsel.history;
        report.fs_history_bits = fsel.history_bits;
        report.warnings = fsel.warnings;
    } else {
        const ClassifierKind kind = single_mode_kind(cfg.mode);
        ClassifierConfig fit_cfg = cfg.classifier;
        fit_cfg.seed = derive_seed(train_seed, "classifier");
        const TrainedModel model = fit(kind, split.train, fit_cfg);

        report.evaluation_classifier = to_string(kind);
        report.fnum = ds.cols();
        report.train_accuracy = plain_accuracy(model, split.train);
        report.test_accuracy = plain_accuracy(model, split.test);
    }

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();

    if (!cfg.out_dir.empty()) write_outputs(report, cfg.out_dir);
    return report;
}

RunReport run(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.dataset_path.empty()) throw ConfigError("no dataset path given");
    const Dataset ds = load_dataset_csv(cfg.dataset_path);
    return run_on(ds, std::filesystem::path(cfg.dataset_path).stem().string(), cfg);
}

json BenchSummary::to_json() const {
    json entry_list = json::array();
    for (const auto& entry : entries) {
        if (entry.ok) {
            entry_list.push_back(json{{"dataset", entry.dataset},
                                      {"ok", true},
                                      {"report", entry.report.to_json()}});
        } else {
            entry_list.push_back(json{
                {"dataset", entry.dataset}, {"ok", false}, {"error", entry.error}});
        }
    }
    return json{{"entries", std::move(entry_list)},
                {"failures", failures},
                {"mean_accuracy", mean_accuracy},
                {"mean_fnum", mean_fnum},
                {"mean_ensemble_size", mean_ensemble_size}};
}

std::string BenchSummary::to_table() const {
    std::string out =
        "dataset                         acc      fnum   |psi|\n"
        "------------------------------  -------  -----  -----\n";
    for (const auto& entry : entries) {
        std::string name = entry.dataset;
        if (name.size() > 30) name.resize(30);
        name.append(32 - name.size(), ' ');
        out += name;
        if (entry.ok) {
            out += fixed4(entry.report.test_accuracy) + "   " +
                   std::to_string(entry.report.fnum) + "      " +
                   std::to_string(entry.report.ensemble_size);
        } else {
            out += "ERROR: " + entry.error;
        }
        out += '\n';
    }
    out += "\nmean accuracy: " + fixed4(mean_accuracy) +
           "  mean fnum: " + fixed4(mean_fnum) +
           "  mean |psi|: " + fixed4(mean_ensemble_size);
    if (failures > 0) out += "  failures: " + std::to_string(failures);
    out += '\n';
    return out;
}

BenchSummary bench(const std::string& dir, const RunConfig& cfg) {
    cfg.validate();
    namespace fsys = std::filesystem;
    if (!fsys::is_directory(dir)) throw ParseError("not a directory: " + dir);

    std::vector<std::string> paths;
    for (const auto& entry : fsys::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            paths.push_back(entry.path().string());
        }
    }
    std::sort(paths.begin(), paths.end());

    BenchSummary summary;
    double acc_sum = 0.0;
    double fnum_sum = 0.0;
    double ens_sum = 0.0;
    int ok_count = 0;
    for (const auto& path : paths) {
        BenchEntry entry;
        entry.dataset = fsys::path(path).stem().string();
        try {
            RunConfig one = cfg;
            one.dataset_path = path;
            if (!cfg.out_dir.empty()) {
                one.out_dir =
                    (fsys::path(cfg.out_dir) / entry.dataset).string();
            }
            entry.report = run(one);
            entry.ok = true;
            acc_sum += entry.report.test_accuracy;
            fnum_sum += entry.report.fnum;
            ens_sum += entry.report.ensemble_size;
            ++ok_count;
        } catch (const std::exception& ex) {
            entry.ok = false;
            entry.error = ex.what();
            ++summary.failures;
        }
        summary.entries.push_back(std::move(entry));
    }
    if (ok_count > 0) {
        summary.mean_accuracy = acc_sum / ok_count;
        summary.mean_fnum = fnum_sum / ok_count;
        summary.mean_ensemble_size = ens_sum / ok_count;
    }

    if (!cfg.out_dir.empty()) {
        fsys::create_directories(cfg.out_dir);
        write_text((fsys::path(cfg.out_dir) / "bench.json").string(),
                   summary.to_json().dump(2) + "\n");
        write_text((fsys::path(cfg.out_dir) / "bench.txt").string(),
                   summary.to_table());
    }
    return summary;
}

}  // namespace eode::harness
