#ifndef EODE_FEATURE_SELECTION_HPP
#define EODE_FEATURE_SELECTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eode/classifiers.hpp"
#include "eode/dataset.hpp"
#include "eode/gwo.hpp"

namespace eode::fs {

struct FsObjectiveParams {
    double alpha = 0.9;  // weight on classification error
    double beta = 0.1;   // weight on subset-size ratio
    int cv_folds = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

struct FeatureSelectionResult {
    Mask mask;
    int fnum = 0;
    ClassifierKind evaluation_classifier = ClassifierKind::Discr;
    double fitness = 0.0;
    std::vector<double> history;
    std::vector<int> history_bits;
    std::vector<std::string> warnings;
};

/// Cross-validates all six classifier kinds on the full feature set and
/// returns the most accurate; ties go to the lower enum order.
ClassifierKind select_evaluation_classifier(const Dataset& ds,
                                            const ClassifierConfig& cfg,
                                            std::uint64_t seed);

/// Weighted subset objective: alpha * (1 - CV accuracy on the masked data)
/// + beta * popcount(mask) / dim. The all-zero mask gets the 1 + beta
/// sentinel so the optimizer can never prefer it. Fold assignment and fit
/// seeds depend only on p.seed, never on the mask.
double fs_fitness(const Mask& mask, const Dataset& ds, ClassifierKind kind,
                  const FsObjectiveParams& p, const ClassifierConfig& cfg = {});

FeatureSelectionResult select_features(const Dataset& ds,
                                       const gwo::GwoParams& gwo_params,
                                       const FsObjectiveParams& fs_params,
                                       const ClassifierConfig& cfg = {});

}  // namespace eode::fs

#endif
