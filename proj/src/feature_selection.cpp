#include "eode/feature_selection.hpp"

#include <cmath>

#include "eode/common.hpp"

namespace eode::fs {

void FsObjectiveParams::validate() const {
    if (alpha < 0.0 || beta < 0.0)
        throw ConfigError("objective weights must be non-negative");
    if (std::abs(alpha + beta - 1.0) > 1e-12)
        throw ConfigError("objective weights must sum to 1");
    if (cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
}

ClassifierKind select_evaluation_classifier(const Dataset& ds,
                                            const ClassifierConfig& cfg,
                                            std::uint64_t seed) {
    ds.validate();
    ClassifierKind best = ClassifierKind::Discr;
    double best_acc = -1.0;
    for (ClassifierKind kind : kAllClassifierKinds) {
        const double acc = cv_accuracy(kind, ds, 5, cfg, seed);
        if (acc > best_acc) {
            best_acc = acc;
            best = kind;
        }
    }
    return best;
}

double fs_fitness(const Mask& mask, const Dataset& ds, ClassifierKind kind,
                  const FsObjectiveParams& p, const ClassifierConfig& cfg) {
    p.validate();
    if (static_cast<int>(mask.size()) != ds.cols())
        throw ValidationError("mask length does not match feature count");

    const int fnum = popcount(mask);
    if (fnum == 0) return 1.0 + p.beta;

    const Dataset masked = apply_mask(ds, mask);
    const double acc =
        cv_accuracy(kind, masked, p.cv_folds, cfg, derive_seed(p.seed, "fs-cv"));
    const double error = 1.0 - acc;
    return p.alpha * error +
           p.beta * static_cast<double>(fnum) / static_cast<double>(ds.cols());
}

FeatureSelectionResult select_features(const Dataset& ds,
                                       const gwo::GwoParams& gwo_params,
                                       const FsObjectiveParams& fs_params,
                                       const ClassifierConfig& cfg) {
    ds.validate();
    fs_params.validate();

    FeatureSelectionResult out;
    out.evaluation_classifier = select_evaluation_classifier(
        ds, cfg, derive_seed(fs_params.seed, "eval-classifier"));

    auto objective = [&](const Mask& mask) {
        return fs_fitness(mask, ds, out.evaluation_classifier, fs_params, cfg);
    };
    gwo::GwoResult run = gwo::optimize(ds.cols(), objective, gwo_params);

    out.mask = run.best_mask;
    out.fitness = run.best_fitness;
    out.history = std::move(run.history);
    out.history_bits = std::move(run.history_bits);
    out.warnings = std::move(run.warnings);

    if (popcount(out.mask) == 0) {
        // can only happen when every sampled mask was empty; keep the
        // strongest coordinate so downstream stages get a usable subset
        Eigen::Index best_coord = 0;
        run.best_position.maxCoeff(&best_coord);
        out.mask.assign(static_cast<std::size_t>(ds.cols()), 0);
        out.mask[static_cast<std::size_t>(best_coord)] = 1;
        out.fitness = objective(out.mask);
        out.warnings.push_back(
            "optimizer returned an empty mask; kept the strongest coordinate");
    }
    out.fnum = popcount(out.mask);
    return out;
}

}  // namespace eode::fs
