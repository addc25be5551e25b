#ifndef EODE_ENSEMBLE_HPP
#define EODE_ENSEMBLE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "eode/classifiers.hpp"
#include "eode/dataset.hpp"
#include "eode/feature_selection.hpp"
#include "eode/gwo.hpp"

namespace eode::ens {

struct Cluster {
    std::vector<int> rows;
    int k = 1;                // the k-means run this cluster came from
    int index_within_k = 0;   // position among that run's non-empty clusters
    Eigen::VectorXd centroid;
};

struct ClusterSet {
    std::vector<Cluster> clusters;
    double wcss = 0.0;               // of the last k-means run in the set
    std::vector<double> wcss_trace;  // per Lloyd iteration of that run
};

struct PoolEntry {
    TrainedModel model;
    ClassifierKind kind = ClassifierKind::Discr;
    int cluster_ordinal = 0;  // index into the ClusterSet that built the pool
    int cluster_k = 0;
    int cluster_index = 0;
    double validation_accuracy = -1.0;  // unset until prefilter scores it
};

struct ModelPool {
    std::vector<PoolEntry> entries;
    std::vector<std::string> warnings;
};

struct EnsembleObjectiveParams {
    double alpha = 0.9;
    double beta = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SelectedModel {
    TrainedModel model;
    ClassifierKind kind = ClassifierKind::Discr;
    int source_fold = 0;
    int cluster_k = 0;
    int cluster_index = 0;
    double validation_accuracy = 0.0;
};

struct EnsembleClassifier {
    std::vector<SelectedModel> models;  // accumulated over the outer folds
    Mask feature_mask;                  // applied to raw inputs before voting
    int class_count = 0;
};

struct FoldTrace {
    int fold = 0;
    int pool_size = 0;
    int filtered_size = 0;
    int selected = 0;
    std::vector<double> history;
    std::vector<int> history_bits;
};

struct EodeModel {
    EnsembleClassifier ensemble;
    fs::FeatureSelectionResult feature_selection;
    std::vector<FoldTrace> fold_traces;
    std::vector<std::string> warnings;
};

/// Lloyd's algorithm with k-means++ seeding; runs `restarts` independent
/// seedings and keeps the lowest within-cluster sum of squares. Empty
/// clusters are dropped from the result.
ClusterSet kmeans(const Dataset& ds, int k, std::uint64_t seed, int restarts = 5);

/// Concatenates kmeans(ds, k) for k = 1..K into one overlapping cluster list.
ClusterSet generate_subspaces(const Dataset& ds, int big_k, std::uint64_t seed);

/// Upper clustering bound: max(2, round(m^(1/5))) for m training rows.
int choose_K(int m);

/// Fits every classifier kind on every cluster. Failed fits are skipped with
/// a warning instead of aborting the pool.
ModelPool build_model_pool(const Dataset& ds_masked, const ClusterSet& clusters,
                           const ClassifierConfig& cfg);

/// Scores each entry on the validation fold and keeps those strictly above
/// the mean; falls back to the top min(3, size) so the selection step always
/// has a search space.
ModelPool prefilter_pool(const ModelPool& pool, const Dataset& val);

/// Per-sample winner across model votes; ties go to the lowest class id.
std::vector<int> plurality_vote(const std::vector<std::vector<int>>& predictions);

/// Weighted selection objective: alpha * (1 - vote accuracy on val) +
/// beta * |selection| / pool size, with the 1 + beta empty-selection sentinel.
double ensemble_fitness(const Mask& selection, const ModelPool& pool,
                        const Dataset& val, const EnsembleObjectiveParams& p);

/// The full training pipeline: feature selection, then per outer fold
/// subspace clustering, pool build, prefilter, and selection optimization,
/// accumulating every fold's chosen models.
EodeModel train_eode(const Dataset& train, const gwo::GwoParams& gwo_params,
                     const ClassifierConfig& cfg, const fs::FsObjectiveParams& fs_params,
                     const EnsembleObjectiveParams& ens_params, std::uint64_t seed);

/// Vote accuracy on raw-dim test data (the stored mask is applied first).
double evaluate(const EnsembleClassifier& ens, const Dataset& test);

std::vector<int> predict(const EnsembleClassifier& ens, const Eigen::MatrixXd& x);

nlohmann::json ensemble_manifest(const EnsembleClassifier& ens);

}  // namespace eode::ens

#endif
