#ifndef EODE_CLASSIFIERS_HPP
#define EODE_CLASSIFIERS_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "eode/dataset.hpp"

namespace eode {

/// The six base classifiers of the pool. Enum order is the global
/// tie-break order (lower wins ties).
enum class ClassifierKind { Discr, Tree, Knn, Mlp, Svm, NaiveBayes };

constexpr std::array<ClassifierKind, 6> kAllClassifierKinds = {
    ClassifierKind::Discr, ClassifierKind::Tree, ClassifierKind::Knn,
    ClassifierKind::Mlp,   ClassifierKind::Svm,  ClassifierKind::NaiveBayes};

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct ClassifierConfig {
    int knn_k = 3;
    int mlp_hidden = 10;
    int mlp_epochs = 200;
    std::string svm_kernel = "rbf";
    double svm_gamma = 0.0;  // 0 means auto = 1/dim
    int svm_iter_limit = 50000;
    std::string nb_bandwidth_rule = "silverman";
    int tree_min_leaf = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Fitted state behind TrainedModel. Implementations apply their own input
/// standardization where they need it; predict takes raw feature rows.
class Model {
public:
    virtual ~Model() = default;
    virtual std::vector<int> predict(const Eigen::MatrixXd& x) const = 0;
    virtual nlohmann::json to_json() const = 0;
};

struct TrainedModel {
    ClassifierKind kind = ClassifierKind::Discr;
    std::shared_ptr<const Model> impl;
    std::vector<int> classes_seen;  // sorted ascending
    std::uint64_t train_seed = 0;
    int train_dim = 0;

    std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// Deterministic given (kind, data, cfg.seed). Single-class input yields a
/// constant predictor; zero-variance features are handled internally.
TrainedModel fit(ClassifierKind kind, const Dataset& ds, const ClassifierConfig& cfg);

std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& x);

/// Pooled stratified k-fold accuracy: total correct over total n across all
/// folds. Fold-construction warnings are appended to `warnings` when given.
double cv_accuracy(ClassifierKind kind, const Dataset& ds, int k,
                   const ClassifierConfig& cfg, std::uint64_t seed,
                   std::vector<std::string>* warnings = nullptr);

/// Versioned JSON blob (kind tag + fitted parameters). Format is documented
/// in the README; stability across versions is not guaranteed.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& blob);

}  // namespace eode

#endif
