#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "eode/common.hpp"
#include "eode/fixtures.hpp"
#include "eode/harness.hpp"

namespace {

struct CommonFlags {
    eode::harness::RunConfig cfg;
    double alpha = -1.0;  // <0 means not set

    void add_to(CLI::App& sub) {
        sub.add_option("--seed", cfg.seed, "master random seed");
        sub.add_option("--mode", cfg.mode,
                       "eode, wel, or single:<discr|tree|knn|mlp|svm|naive_bayes>");
        sub.add_option("--out", cfg.out_dir, "output directory for reports");
        sub.add_option("--test-fraction", cfg.test_fraction,
                       "held-out fraction per class");
        sub.add_option("--pop", cfg.gwo.population, "optimizer population size");
        sub.add_option("--iters", cfg.gwo.iterations, "optimizer iterations");
        sub.add_option("--theta", cfg.gwo.theta, "binarization threshold");
        sub.add_option("--alpha", alpha,
                       "error weight in both objectives (size weight = 1 - alpha)");
        sub.add_option("--knn-k", cfg.classifier.knn_k, "neighbors for knn");
        sub.add_option("--mlp-hidden", cfg.classifier.mlp_hidden,
                       "hidden units for the mlp");
        sub.add_option("--mlp-epochs", cfg.classifier.mlp_epochs,
                       "training epochs for the mlp");
        sub.add_option("--svm-iter-limit", cfg.classifier.svm_iter_limit,
                       "optimizer budget per svm pair");
        sub.add_option("--tree-min-leaf", cfg.classifier.tree_min_leaf,
                       "minimum rows per tree leaf");
    }

    void finalize() {
        if (alpha >= 0.0) {
            cfg.fs.alpha = alpha;
            cfg.fs.beta = 1.0 - alpha;
            cfg.ens.alpha = alpha;
            cfg.ens.beta = 1.0 - alpha;
        }
    }
};

int do_convert(const std::string& fixture, const std::string& out_path,
               std::uint64_t seed, int rows, int per_class, int dim, int classes,
               double separation) {
    using namespace eode;
    Dataset ds;
    if (fixture == "blobs") {
        ds = fixtures::make_blobs(per_class, dim, classes, separation, seed);
    } else if (fixture == "informative") {
        ds = fixtures::make_informative_noise(rows > 0 ? rows : 100, seed).data;
    } else if (fixture == "noisy-multiclass") {
        fixtures::NoisyMulticlassConfig cfg;
        cfg.seed = seed;
        if (rows > 0) cfg.rows = rows;
        ds = fixtures::make_noisy_multiclass(cfg);
    } else if (fixture == "expression-surrogate") {
        ds = fixtures::make_expression_surrogate(seed);
    } else {
        throw ConfigError("unknown fixture: " + fixture);
    }
    fixtures::write_csv(ds, out_path);
    std::cout << "wrote " << ds.rows() << " x " << ds.cols() << " ("
              << ds.class_count << " classes) to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature selection and ensemble classification for "
                 "high-dimensional small-sample data"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "train and evaluate on one dataset");
    run_cmd->add_option("--data", run_flags.cfg.dataset_path, "dataset CSV path")
        ->required();
    run_flags.add_to(*run_cmd);

    CommonFlags bench_flags;
    std::string bench_dir;
    auto* bench_cmd =
        app.add_subcommand("bench", "sweep every CSV dataset in a directory");
    bench_cmd->add_option("--dir", bench_dir, "directory of CSV datasets")
        ->required();
    bench_flags.add_to(*bench_cmd);

    std::string fixture;
    std::string convert_out;
    std::uint64_t convert_seed = 0;
    int convert_rows = 0;
    int convert_per_class = 20;
    int convert_dim = 10;
    int convert_classes = 3;
    double convert_separation = 6.0;
    auto* convert_cmd =
        app.add_subcommand("convert", "generate a synthetic dataset CSV");
    convert_cmd
        ->add_option("--fixture", fixture,
                     "blobs | informative | noisy-multiclass | expression-surrogate")
        ->required();
    convert_cmd->add_option("--out", convert_out, "output CSV path")->required();
    convert_cmd->add_option("--seed", convert_seed, "generator seed");
    convert_cmd->add_option("--rows", convert_rows, "row count (where supported)");
    convert_cmd->add_option("--per-class", convert_per_class, "blobs: rows per class");
    convert_cmd->add_option("--dim", convert_dim, "blobs: feature count");
    convert_cmd->add_option("--classes", convert_classes, "blobs: class count");
    convert_cmd->add_option("--separation", convert_separation,
                            "blobs: center separation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            run_flags.finalize();
            const eode::harness::RunReport report = eode::harness::run(run_flags.cfg);
            std::cout << report.to_table();
            return 0;
        }
        if (bench_cmd->parsed()) {
            bench_flags.finalize();
            const eode::harness::BenchSummary summary =
                eode::harness::bench(bench_dir, bench_flags.cfg);
            std::cout << summary.to_table();
            return 0;
        }
        if (convert_cmd->parsed()) {
            return do_convert(fixture, convert_out, convert_seed, convert_rows,
                              convert_per_class, convert_dim, convert_classes,
                              convert_separation);
        }
    } catch (const eode::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const eode::ParseError& ex) {
        std::cerr << "data error: " << ex.what() << "\n";
        return 2;
    } catch (const eode::ValidationError& ex) {
        std::cerr << "data error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
