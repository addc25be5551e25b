#include <algorithm>
#include <cmath>
#include <map>

#include "models.hpp"

namespace eode::models {

std::shared_ptr<const Model> fit_discr(const Dataset& ds) {
    auto model = std::make_shared<DiagDiscriminant>();
    model->std_.fit(ds.samples);
    Eigen::MatrixXd z = model->std_.transform(ds.samples);

    std::map<int, std::vector<int>> by_class;
    for (int r = 0; r < ds.rows(); ++r) by_class[ds.labels[static_cast<std::size_t>(r)]].push_back(r);

    const auto c = static_cast<Eigen::Index>(by_class.size());
    const Eigen::Index d = z.cols();
    model->means_.resize(c, d);
    model->pooled_var_ = Eigen::VectorXd::Zero(d);
    model->log_prior_.reserve(static_cast<std::size_t>(c));
    model->class_ids_.reserve(static_cast<std::size_t>(c));

    Eigen::Index ci = 0;
    for (const auto& [label, rows] : by_class) {
        Eigen::MatrixXd block(rows.size(), d);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            block.row(static_cast<Eigen::Index>(i)) = z.row(rows[i]);
        }
        Eigen::VectorXd mu = block.colwise().mean();
        model->means_.row(ci) = mu;
        Eigen::MatrixXd centered = block.rowwise() - mu.transpose();
        model->pooled_var_ += centered.array().square().colwise().sum().matrix();
        model->log_prior_.push_back(
            std::log(static_cast<double>(rows.size()) / ds.rows()));
        model->class_ids_.push_back(label);
        ++ci;
    }

    const double denom = std::max(ds.rows() - static_cast<int>(c), 1);
    model->pooled_var_ /= denom;
    for (Eigen::Index j = 0; j < d; ++j) {
        if (model->pooled_var_(j) < 1e-9) model->pooled_var_(j) = 1e-9;
    }
    return model;
}

std::vector<int> DiagDiscriminant::predict(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd z = std_.transform(x);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    const auto c = means_.rows();
    Eigen::VectorXd scores(c);
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        for (Eigen::Index k = 0; k < c; ++k) {
            Eigen::ArrayXd diff = (z.row(r) - means_.row(k)).transpose().array();
            scores(k) = log_prior_[static_cast<std::size_t>(k)] -
                        0.5 * (diff.square() / pooled_var_.array()).sum();
        }
        out[static_cast<std::size_t>(r)] =
            class_ids_[static_cast<std::size_t>(argmax_lowest(scores))];
    }
    return out;
}

json DiagDiscriminant::to_json() const {
    return json{{"impl", "discr"},
                {"standardizer", std_.to_json()},
                {"means", matrix_to_json(means_)},
                {"pooled_var", vector_to_json(pooled_var_)},
                {"log_prior", log_prior_},
                {"class_ids", class_ids_}};
}

std::shared_ptr<const Model> DiagDiscriminant::from_json(const json& blob) {
    auto model = std::make_shared<DiagDiscriminant>();
    model->std_ = Standardizer::from_json(blob.at("standardizer"));
    model->means_ = matrix_from_json(blob.at("means"));
    model->pooled_var_ = vector_from_json(blob.at("pooled_var"));
    model->log_prior_ = blob.at("log_prior").get<std::vector<double>>();
    model->class_ids_ = blob.at("class_ids").get<std::vector<int>>();
    return model;
}

}  // namespace eode::models
