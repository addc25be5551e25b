#include <algorithm>
#include <set>

#include "eode/common.hpp"
#include "models.hpp"

namespace eode::models {

namespace {

Eigen::MatrixXd hidden_activations(const Eigen::MatrixXd& z,
                                   const Eigen::MatrixXd& w1,
                                   const Eigen::VectorXd& b1) {
    return (((z * w1).rowwise() + b1.transpose()).array().tanh()).matrix();
}

}  // namespace

std::shared_ptr<const Model> fit_mlp(const Dataset& ds, const ClassifierConfig& cfg) {
    auto model = std::make_shared<MlpModel>();
    model->std_.fit(ds.samples);
    Eigen::MatrixXd z = model->std_.transform(ds.samples);

    std::set<int> seen(ds.labels.begin(), ds.labels.end());
    model->class_ids_.assign(seen.begin(), seen.end());
    const auto m = static_cast<Eigen::Index>(model->class_ids_.size());
    const Eigen::Index n = z.rows();
    const Eigen::Index d = z.cols();
    const Eigen::Index h = cfg.mlp_hidden;

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, m);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto it = std::lower_bound(model->class_ids_.begin(),
                                         model->class_ids_.end(),
                                         ds.labels[static_cast<std::size_t>(r)]);
        y(r, it - model->class_ids_.begin()) = 1.0;
    }

    Rng rng(derive_seed(cfg.seed, "mlp-init"));
    auto init = [&rng](Eigen::MatrixXd& w) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.u01() - 0.5;
        }
    };
    model->w1_.resize(d, h);
    model->b1_.resize(h);
    model->w2_.resize(h, m);
    model->b2_.resize(m);
    init(model->w1_);
    for (Eigen::Index i = 0; i < h; ++i) model->b1_(i) = rng.u01() - 0.5;
    init(model->w2_);
    for (Eigen::Index i = 0; i < m; ++i) model->b2_(i) = rng.u01() - 0.5;

    const double lr = 0.1;
    for (int epoch = 0; epoch < cfg.mlp_epochs; ++epoch) {
        Eigen::MatrixXd hid = hidden_activations(z, model->w1_, model->b1_);
        Eigen::MatrixXd logits = (hid * model->w2_).rowwise() + model->b2_.transpose();
        Eigen::MatrixXd shifted =
            logits.colwise() - logits.rowwise().maxCoeff();
        Eigen::MatrixXd probs = shifted.array().exp().matrix();
        Eigen::VectorXd row_sum = probs.rowwise().sum();
        probs.array().colwise() /= row_sum.array();

        Eigen::MatrixXd dlogits = (probs - y) / static_cast<double>(n);
        Eigen::MatrixXd dw2 = hid.transpose() * dlogits;
        Eigen::VectorXd db2 = dlogits.colwise().sum();
        Eigen::MatrixXd dhid = dlogits * model->w2_.transpose();
        Eigen::MatrixXd dpre =
            (dhid.array() * (1.0 - hid.array().square())).matrix();
        Eigen::MatrixXd dw1 = z.transpose() * dpre;
        Eigen::VectorXd db1 = dpre.colwise().sum();

        model->w2_ -= lr * dw2;
        model->b2_ -= lr * db2;
        model->w1_ -= lr * dw1;
        model->b1_ -= lr * db1;
    }
    return model;
}

std::vector<int> MlpModel::predict(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd z = std_.transform(x);
    Eigen::MatrixXd hid = hidden_activations(z, w1_, b1_);
    Eigen::MatrixXd logits = (hid * w2_).rowwise() + b2_.transpose();
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        out[static_cast<std::size_t>(r)] = class_ids_[static_cast<std::size_t>(
            argmax_lowest(logits.row(r).transpose()))];
    }
    return out;
}

json MlpModel::to_json() const {
    return json{{"impl", "mlp"},
                {"standardizer", std_.to_json()},
                {"w1", matrix_to_json(w1_)},
                {"b1", vector_to_json(b1_)},
                {"w2", matrix_to_json(w2_)},
                {"b2", vector_to_json(b2_)},
                {"class_ids", class_ids_}};
}

std::shared_ptr<const Model> MlpModel::from_json(const json& blob) {
    auto model = std::make_shared<MlpModel>();
    model->std_ = Standardizer::from_json(blob.at("standardizer"));
    model->w1_ = matrix_from_json(blob.at("w1"));
    model->b1_ = vector_from_json(blob.at("b1"));
    model->w2_ = matrix_from_json(blob.at("w2"));
    model->b2_ = vector_from_json(blob.at("b2"));
    model->class_ids_ = blob.at("class_ids").get<std::vector<int>>();
    return model;
}

}  // namespace eode::models
