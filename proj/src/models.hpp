#ifndef EODE_SRC_MODELS_HPP
#define EODE_SRC_MODELS_HPP

// Internal model implementations. Only classifiers.cpp and the per-model
// translation units include this; the public surface is TrainedModel.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "eode/classifiers.hpp"

namespace eode::models {

using json = nlohmann::json;

/// Column-wise z-scoring fitted on training rows. Zero-variance columns get
/// unit scale so they standardize to a constant instead of dividing by zero.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    void fit(const Eigen::MatrixXd& x);
    Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
    json to_json() const;
    static Standardizer from_json(const json& blob);
};

class ConstantModel final : public Model {
public:
    explicit ConstantModel(int label) : label_(label) {}
    std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    json to_json() const override;
    static std::shared_ptr<const Model> from_json(const json& blob);

private:
    int label_;
};

/// Linear discriminant with a diagonal pooled covariance estimate.
class DiagDiscriminant final : public Model {
public:
    std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    json to_json() const override;
    static std::shared_ptr<const Model> from_json(const json& blob);

    Standardizer std_;
    Eigen::MatrixXd means_;        // class x feature, standardized space
    Eigen::VectorXd pooled_var_;   // per feature
    std::vector<double> log_prior_;
    std::vector<int> class_ids_;
};

/// Binary CART with Gini impurity and midpoint thresholds.
class DecisionTree final : public Model {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 0;
    };

    std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    json to_json() const override;
    static std::shared_ptr<const Model> from_json(const json& blob);

    std::vector<Node> nodes_;
};

class KnnModel final : public Model {
public:
    std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    json to_json() const override;
    static std::shared_ptr<const Model> from_json(const json& blob);

    Eigen::MatrixXd train_x_;
    std::vector<int> train_y_;
    int k_ = 3;
};

/// One hidden layer, tanh units, softmax output, full-batch gradient descent.
class MlpModel final : public Model {
public:
    std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    json to_json() const override;
    static std::shared_ptr<const Model> from_json(const json& blob);

    Standardizer std_;
    Eigen::MatrixXd w1_;  // dim x hidden
    Eigen::VectorXd b1_;
    Eigen::MatrixXd w2_;  // hidden x classes
    Eigen::VectorXd b2_;
    std::vector<int> class_ids_;
};

/// RBF-kernel SVM trained pairwise (one vs one) with a simplified SMO.
class SvmModel final : public Model {
public:
    struct PairClassifier {
        int pos = 0;  // class id voted for when f(x) >= 0
        int neg = 0;
        Eigen::MatrixXd support;   // rows in standardized space
        Eigen::VectorXd coef;      // alpha_i * y_i
        double bias = 0.0;
    };

    std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    json to_json() const override;
    static std::shared_ptr<const Model> from_json(const json& blob);

    Standardizer std_;
    double gamma_ = 1.0;
    std::vector<PairClassifier> pairs_;
    std::vector<int> class_ids_;
};

/// Naive Bayes with per-feature Gaussian kernel density estimates.
class KernelNaiveBayes final : public Model {
public:
    std::vector<int> predict(const Eigen::MatrixXd& x) const override;
    json to_json() const override;
    static std::shared_ptr<const Model> from_json(const json& blob);

    Standardizer std_;
    std::vector<Eigen::MatrixXd> class_values_;  // per class: rows x features
    std::vector<Eigen::VectorXd> bandwidths_;    // per class: per feature
    std::vector<double> log_prior_;
    std::vector<int> class_ids_;
};

std::shared_ptr<const Model> fit_discr(const Dataset& ds);
std::shared_ptr<const Model> fit_tree(const Dataset& ds, const ClassifierConfig& cfg);
std::shared_ptr<const Model> fit_knn(const Dataset& ds, const ClassifierConfig& cfg);
std::shared_ptr<const Model> fit_mlp(const Dataset& ds, const ClassifierConfig& cfg);
std::shared_ptr<const Model> fit_svm(const Dataset& ds, const ClassifierConfig& cfg);
std::shared_ptr<const Model> fit_naive_bayes(const Dataset& ds, const ClassifierConfig& cfg);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& blob);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& blob);

/// Argmax over scores with the lowest-index-wins tie rule.
int argmax_lowest(const Eigen::VectorXd& scores);

}  // namespace eode::models

#endif
