#include "eode/fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "eode/common.hpp"

namespace eode::fixtures {

namespace {

std::vector<std::string> numbered_names(const std::string& prefix, int count) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

Dataset make_blobs(int per_class, int dim, int classes, double separation,
                   std::uint64_t seed) {
    if (per_class < 1 || dim < 1 || classes < 2)
        throw ConfigError("blobs need per_class >= 1, dim >= 1, classes >= 2");

    Rng rng(derive_seed(seed, "blobs"));
    const int n = per_class * classes;
    Eigen::MatrixXd x(n, dim);
    std::vector<double> labels(static_cast<std::size_t>(n));
    int row = 0;
    for (int c = 0; c < classes; ++c) {
        const int axis = c % dim;
        const double level = separation * (1.0 + static_cast<double>(c / dim));
        for (int i = 0; i < per_class; ++i, ++row) {
            for (int j = 0; j < dim; ++j) {
                x(row, j) = rng.normal() + (j == axis ? level : 0.0);
            }
            labels[static_cast<std::size_t>(row)] = c;
        }
    }
    return make_dataset(std::move(x), labels, numbered_names("f", dim));
}

InformativeFixture make_informative_noise(int rows, std::uint64_t seed) {
    if (rows < 10) throw ConfigError("fixture needs at least 10 rows");
    constexpr int kDim = 100;
    constexpr int kInformative = 10;

    Rng rng(derive_seed(seed, "informative"));
    std::vector<int> order(kDim);
    for (int i = 0; i < kDim; ++i) order[static_cast<std::size_t>(i)] = i;
    shuffle_in_place(order, rng);
    std::vector<int> informative(order.begin(), order.begin() + kInformative);
    std::sort(informative.begin(), informative.end());

    // every informative feature separates the classes on its own; the margin
    // varies per feature so none of them is redundant by construction
    std::vector<double> margin(static_cast<std::size_t>(kInformative));
    for (double& m : margin) m = 1.0 + 0.5 * rng.u01();

    Eigen::MatrixXd x(rows, kDim);
    std::vector<double> labels(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        const int label = r % 2;
        for (int j = 0; j < kDim; ++j) x(r, j) = rng.normal();
        for (int i = 0; i < kInformative; ++i) {
            const int j = informative[static_cast<std::size_t>(i)];
            const double m = margin[static_cast<std::size_t>(i)];
            x(r, j) += label == 1 ? m : -m;
        }
        labels[static_cast<std::size_t>(r)] = label;
    }

    InformativeFixture out;
    out.data = make_dataset(std::move(x), labels, numbered_names("f", kDim));
    out.informative = std::move(informative);
    return out;
}

Dataset make_noisy_multiclass(const NoisyMulticlassConfig& cfg) {
    if (cfg.rows < cfg.classes * cfg.modes_per_class)
        throw ConfigError("too few rows for the requested mode count");
    if (cfg.modes_per_class < 1)
        throw ConfigError("need at least one mode per class");

    Rng rng(derive_seed(cfg.seed, "noisy-multiclass"));

    // One sign pattern per (class, mode) over that class's marker block; the
    // first two modes are uniform up / down regulation, further ones mixed.
    // Opposite patterns keep the class means near zero on their own markers,
    // so the classes are separable only through local structure.
    const int stride = cfg.markers_per_class;
    if (cfg.classes * stride > cfg.dim)
        throw ConfigError("marker blocks exceed dim");
    if (cfg.batch_fraction < 0.0 || cfg.batch_fraction > 0.5)
        throw ConfigError("batch_fraction outside [0, 0.5]");

    // Corrupted-batch rows lose their class markers entirely and get a
    // uniform random label, but share a strong fingerprint on a reserved
    // block of features, the way a failed acquisition run stamps every
    // sample it touched. The corruption is therefore spatially coherent.
    constexpr int kBatchDims = 16;
    constexpr double kBatchShift = 6.0;
    const bool has_batch = cfg.batch_fraction > 0.0;
    const int batch_lo = cfg.classes * stride;
    if (has_batch && batch_lo + kBatchDims > cfg.dim)
        throw ConfigError("no room for the batch fingerprint block");
    const int total_modes = cfg.classes * cfg.modes_per_class;
    std::vector<std::vector<double>> pattern(
        static_cast<std::size_t>(total_modes),
        std::vector<double>(static_cast<std::size_t>(stride)));
    for (int m = 0; m < total_modes; ++m) {
        const int mode = m % cfg.modes_per_class;
        for (int j = 0; j < stride; ++j) {
            double sign = mode == 1 ? -1.0 : 1.0;
            if (mode >= 2) sign = rng.u01() < 0.5 ? 1.0 : -1.0;
            pattern[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = sign;
        }
    }

    Eigen::MatrixXd x(cfg.rows, cfg.dim);
    std::vector<double> labels(static_cast<std::size_t>(cfg.rows));
    for (int r = 0; r < cfg.rows; ++r) {
        const int cls = r % cfg.classes;
        const int mode_id = cls * cfg.modes_per_class +
                            (r / cfg.classes) % cfg.modes_per_class;
        const int lo = cls * stride;
        const bool corrupted = has_batch && rng.u01() < cfg.batch_fraction;
        for (int j = 0; j < cfg.dim; ++j) {
            if (!corrupted && j >= lo && j < lo + stride) {
                const auto& p = pattern[static_cast<std::size_t>(mode_id)];
                x(r, j) = cfg.marker_shift * p[static_cast<std::size_t>(j - lo)] +
                          cfg.noise_sd * rng.normal();
            } else if (corrupted && j >= batch_lo && j < batch_lo + kBatchDims) {
                x(r, j) = kBatchShift + cfg.noise_sd * rng.normal();
            } else {
                x(r, j) = rng.normal();
            }
        }
        int label = cls;
        if (corrupted || rng.u01() < cfg.label_noise) {
            label = rng.uniform_int(cfg.classes);
        }
        labels[static_cast<std::size_t>(r)] = label;
    }
    return make_dataset(std::move(x), labels, numbered_names("f", cfg.dim));
}

Dataset make_expression_surrogate(std::uint64_t seed) {
    constexpr int kRows = 179;
    constexpr int kGenes = 85;
    constexpr int kClassOne = 75;  // rows 104..178
    constexpr int kInformative = 20;

    Rng rng(derive_seed(seed, "expression"));

    // per-gene baseline level and spread, log2-expression-like
    Eigen::VectorXd base(kGenes);
    Eigen::VectorXd spread(kGenes);
    for (int j = 0; j < kGenes; ++j) {
        base(j) = 6.0 + 1.5 * rng.normal();
        spread(j) = 0.4 + 0.5 * rng.u01();
    }
    // the first kInformative genes shift between classes
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(kGenes);
    for (int j = 0; j < kInformative; ++j) {
        const double magnitude = 1.0 + 0.8 * rng.u01();
        shift(j) = rng.u01() < 0.5 ? magnitude : -magnitude;
    }

    Eigen::MatrixXd x(kRows, kGenes);
    std::vector<double> labels(static_cast<std::size_t>(kRows));
    for (int r = 0; r < kRows; ++r) {
        const int cls = r < kRows - kClassOne ? 0 : 1;
        for (int j = 0; j < kGenes; ++j) {
            x(r, j) = base(j) + (cls == 1 ? shift(j) : 0.0) + spread(j) * rng.normal();
        }
        labels[static_cast<std::size_t>(r)] = cls;
    }
    return make_dataset(std::move(x), labels, numbered_names("g", kGenes));
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);

    for (int j = 0; j < ds.cols(); ++j) {
        out << ds.feature_names[static_cast<std::size_t>(j)] << ',';
    }
    out << "label\n";
    for (int r = 0; r < ds.rows(); ++r) {
        for (int j = 0; j < ds.cols(); ++j) {
            out << format_double(ds.samples(r, j)) << ',';
        }
        out << ds.labels[static_cast<std::size_t>(r)] << '\n';
    }
    if (!out) throw ParseError("write failed: " + path);
}

}  // namespace eode::fixtures
