#include "eode/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "eode/common.hpp"
#include "models.hpp"

namespace eode {

using models::json;

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Discr: return "discr";
        case ClassifierKind::Tree: return "tree";
        case ClassifierKind::Knn: return "knn";
        case ClassifierKind::Mlp: return "mlp";
        case ClassifierKind::Svm: return "svm";
        case ClassifierKind::NaiveBayes: return "naive_bayes";
    }
    throw ConfigError("unknown classifier kind");
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
    for (ClassifierKind kind : kAllClassifierKinds) {
        if (to_string(kind) == name) return kind;
    }
    throw ConfigError("unknown classifier name: " + name);
}

void ClassifierConfig::validate() const {
    if (knn_k < 1) throw ConfigError("knn_k must be >= 1");
    if (mlp_hidden < 1) throw ConfigError("mlp_hidden must be >= 1");
    if (mlp_epochs < 1) throw ConfigError("mlp_epochs must be >= 1");
    if (svm_kernel != "rbf") throw ConfigError("unsupported svm kernel: " + svm_kernel);
    if (svm_gamma < 0.0) throw ConfigError("svm_gamma must be >= 0");
    if (svm_iter_limit < 1) throw ConfigError("svm_iter_limit must be >= 1");
    if (nb_bandwidth_rule != "silverman")
        throw ConfigError("unsupported bandwidth rule: " + nb_bandwidth_rule);
    if (tree_min_leaf < 1) throw ConfigError("tree_min_leaf must be >= 1");
}

std::vector<int> TrainedModel::predict(const Eigen::MatrixXd& x) const {
    if (!impl) throw ValidationError("predict on an unfitted model");
    if (static_cast<int>(x.cols()) != train_dim) {
        throw ValidationError("predict dimension mismatch: model expects " +
                              std::to_string(train_dim) + " features, got " +
                              std::to_string(x.cols()));
    }
    return impl->predict(x);
}

std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& x) {
    return model.predict(x);
}

TrainedModel fit(ClassifierKind kind, const Dataset& ds, const ClassifierConfig& cfg) {
    cfg.validate();
    if (ds.rows() < 1) throw ValidationError("fit requires at least one row");
    if (ds.cols() < 1) throw ValidationError("fit requires at least one feature");

    std::set<int> seen(ds.labels.begin(), ds.labels.end());
    TrainedModel out;
    out.kind = kind;
    out.classes_seen.assign(seen.begin(), seen.end());
    out.train_seed = cfg.seed;
    out.train_dim = ds.cols();

    if (seen.size() == 1) {
        out.impl = std::make_shared<models::ConstantModel>(*seen.begin());
        return out;
    }

    switch (kind) {
        case ClassifierKind::Discr: out.impl = models::fit_discr(ds); break;
        case ClassifierKind::Tree: out.impl = models::fit_tree(ds, cfg); break;
        case ClassifierKind::Knn: out.impl = models::fit_knn(ds, cfg); break;
        case ClassifierKind::Mlp: out.impl = models::fit_mlp(ds, cfg); break;
        case ClassifierKind::Svm: out.impl = models::fit_svm(ds, cfg); break;
        case ClassifierKind::NaiveBayes:
            out.impl = models::fit_naive_bayes(ds, cfg);
            break;
    }
    return out;
}

double cv_accuracy(ClassifierKind kind, const Dataset& ds, int k,
                   const ClassifierConfig& cfg, std::uint64_t seed,
                   std::vector<std::string>* warnings) {
    cfg.validate();
    FoldSet fold_set = stratified_kfold(ds, k, derive_seed(seed, "cv-folds"));
    if (warnings) {
        warnings->insert(warnings->end(), fold_set.warnings.begin(),
                         fold_set.warnings.end());
    }

    const int n = ds.rows();
    long correct = 0;
    for (std::size_t f = 0; f < fold_set.folds.size(); ++f) {
        const auto& test_idx = fold_set.folds[f];
        if (test_idx.empty()) continue;
        std::vector<char> in_test(static_cast<std::size_t>(n), 0);
        for (int r : test_idx) in_test[static_cast<std::size_t>(r)] = 1;
        std::vector<int> train_idx;
        train_idx.reserve(static_cast<std::size_t>(n) - test_idx.size());
        for (int r = 0; r < n; ++r) {
            if (!in_test[static_cast<std::size_t>(r)]) train_idx.push_back(r);
        }

        ClassifierConfig fold_cfg = cfg;
        fold_cfg.seed = derive_seed(seed, "cv-fit", f);
        TrainedModel model = fit(kind, ds.subset_rows(train_idx), fold_cfg);

        Eigen::MatrixXd test_x(test_idx.size(), ds.cols());
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            test_x.row(static_cast<Eigen::Index>(i)) = ds.samples.row(test_idx[i]);
        }
        std::vector<int> preds = model.predict(test_x);
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            if (preds[i] == ds.labels[static_cast<std::size_t>(test_idx[i])]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

nlohmann::json model_to_json(const TrainedModel& model) {
    if (!model.impl) throw ValidationError("cannot serialize an unfitted model");
    json blob;
    blob["format"] = 1;
    blob["kind"] = to_string(model.kind);
    blob["classes_seen"] = model.classes_seen;
    blob["train_seed"] = model.train_seed;
    blob["train_dim"] = model.train_dim;
    blob["state"] = model.impl->to_json();
    return blob;
}

TrainedModel model_from_json(const nlohmann::json& blob) {
    if (!blob.is_object() || blob.value("format", 0) != 1)
        throw ParseError("unrecognized model blob format");
    TrainedModel out;
    out.kind = classifier_kind_from_string(blob.at("kind").get<std::string>());
    out.classes_seen = blob.at("classes_seen").get<std::vector<int>>();
    out.train_seed = blob.at("train_seed").get<std::uint64_t>();
    out.train_dim = blob.at("train_dim").get<int>();

    const json& state = blob.at("state");
    const std::string impl_tag = state.at("impl").get<std::string>();
    if (impl_tag == "constant") {
        out.impl = models::ConstantModel::from_json(state);
    } else if (impl_tag == "discr") {
        out.impl = models::DiagDiscriminant::from_json(state);
    } else if (impl_tag == "tree") {
        out.impl = models::DecisionTree::from_json(state);
    } else if (impl_tag == "knn") {
        out.impl = models::KnnModel::from_json(state);
    } else if (impl_tag == "mlp") {
        out.impl = models::MlpModel::from_json(state);
    } else if (impl_tag == "svm") {
        out.impl = models::SvmModel::from_json(state);
    } else if (impl_tag == "naive_bayes") {
        out.impl = models::KernelNaiveBayes::from_json(state);
    } else {
        throw ParseError("unknown model impl tag: " + impl_tag);
    }
    return out;
}

namespace models {

void Standardizer::fit(const Eigen::MatrixXd& x) {
    const auto n = x.rows();
    mean = x.colwise().mean();
    if (n > 1) {
        Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
        Eigen::VectorXd var =
            centered.array().square().colwise().sum() / static_cast<double>(n - 1);
        scale = var.array().sqrt();
    } else {
        scale = Eigen::VectorXd::Ones(x.cols());
    }
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        if (scale(j) < 1e-12) scale(j) = 1.0;
    }
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd z = x.rowwise() - mean.transpose();
    z.array().rowwise() /= scale.transpose().array();
    return z;
}

json Standardizer::to_json() const {
    return json{{"mean", vector_to_json(mean)}, {"scale", vector_to_json(scale)}};
}

Standardizer Standardizer::from_json(const json& blob) {
    Standardizer s;
    s.mean = vector_from_json(blob.at("mean"));
    s.scale = vector_from_json(blob.at("scale"));
    return s;
}

std::vector<int> ConstantModel::predict(const Eigen::MatrixXd& x) const {
    return std::vector<int>(static_cast<std::size_t>(x.rows()), label_);
}

json ConstantModel::to_json() const {
    return json{{"impl", "constant"}, {"label", label_}};
}

std::shared_ptr<const Model> ConstantModel::from_json(const json& blob) {
    return std::make_shared<ConstantModel>(blob.at("label").get<int>());
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd matrix_from_json(const json& blob) {
    const auto r = blob.at("rows").get<Eigen::Index>();
    const auto c = blob.at("cols").get<Eigen::Index>();
    Eigen::MatrixXd m(r, c);
    const json& data = blob.at("data");
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = data.at(static_cast<std::size_t>(i))
                          .at(static_cast<std::size_t>(j))
                          .get<double>();
        }
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const json& blob) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(blob.size()));
    for (std::size_t i = 0; i < blob.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = blob.at(i).get<double>();
    }
    return v;
}

int argmax_lowest(const Eigen::VectorXd& scores) {
    int best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i) {
        if (scores(i) > scores(best)) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace models

}  // namespace eode
