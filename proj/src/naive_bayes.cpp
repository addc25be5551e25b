#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "models.hpp"

namespace eode::models {

namespace {

double quantile_linear(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

// Silverman's rule of thumb on the robust spread estimate.
double silverman_bandwidth(const Eigen::VectorXd& values) {
    const auto m = values.size();
    if (m < 2) return 1e-6;
    const double mean = values.mean();
    const double sd = std::sqrt((values.array() - mean).square().sum() /
                                static_cast<double>(m - 1));
    std::vector<double> v(values.data(), values.data() + m);
    const double iqr_scaled =
        (quantile_linear(v, 0.75) - quantile_linear(v, 0.25)) / 1.34;
    double spread = std::min(sd, iqr_scaled);
    if (spread <= 0.0) spread = std::max(sd, iqr_scaled);
    const double h = 0.9 * spread * std::pow(static_cast<double>(m), -0.2);
    return std::max(h, 1e-6);
}

double log_kde(double v, const Eigen::VectorXd& values, double h) {
    const double inv_h = 1.0 / h;
    const Eigen::ArrayXd u = (values.array() - v) * inv_h;
    const Eigen::ArrayXd terms = -0.5 * u.square();
    const double peak = terms.maxCoeff();
    const double sum = (terms - peak).exp().sum();
    return peak + std::log(sum) -
           std::log(h * std::sqrt(2.0 * std::numbers::pi)) -
           std::log(static_cast<double>(values.size()));
}

}  // namespace

std::shared_ptr<const Model> fit_naive_bayes(const Dataset& ds,
                                             const ClassifierConfig&) {
    auto model = std::make_shared<KernelNaiveBayes>();
    model->std_.fit(ds.samples);
    Eigen::MatrixXd z = model->std_.transform(ds.samples);

    std::map<int, std::vector<int>> by_class;
    for (int r = 0; r < ds.rows(); ++r) by_class[ds.labels[static_cast<std::size_t>(r)]].push_back(r);

    for (const auto& [label, rows] : by_class) {
        Eigen::MatrixXd block(rows.size(), z.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            block.row(static_cast<Eigen::Index>(i)) = z.row(rows[i]);
        }
        Eigen::VectorXd bw(z.cols());
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            bw(j) = silverman_bandwidth(block.col(j));
        }
        model->class_values_.push_back(std::move(block));
        model->bandwidths_.push_back(std::move(bw));
        model->log_prior_.push_back(
            std::log(static_cast<double>(rows.size()) / ds.rows()));
        model->class_ids_.push_back(label);
    }
    return model;
}

std::vector<int> KernelNaiveBayes::predict(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd z = std_.transform(x);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    const auto c = static_cast<Eigen::Index>(class_ids_.size());
    Eigen::VectorXd scores(c);
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        for (Eigen::Index k = 0; k < c; ++k) {
            double s = log_prior_[static_cast<std::size_t>(k)];
            const auto& values = class_values_[static_cast<std::size_t>(k)];
            const auto& bw = bandwidths_[static_cast<std::size_t>(k)];
            for (Eigen::Index j = 0; j < z.cols(); ++j) {
                s += log_kde(z(r, j), values.col(j), bw(j));
            }
            scores(k) = s;
        }
        out[static_cast<std::size_t>(r)] =
            class_ids_[static_cast<std::size_t>(argmax_lowest(scores))];
    }
    return out;
}

json KernelNaiveBayes::to_json() const {
    json classes = json::array();
    for (std::size_t k = 0; k < class_ids_.size(); ++k) {
        classes.push_back(json{{"values", matrix_to_json(class_values_[k])},
                               {"bandwidths", vector_to_json(bandwidths_[k])},
                               {"log_prior", log_prior_[k]},
                               {"class_id", class_ids_[k]}});
    }
    return json{{"impl", "naive_bayes"},
                {"standardizer", std_.to_json()},
                {"classes", std::move(classes)}};
}

std::shared_ptr<const Model> KernelNaiveBayes::from_json(const json& blob) {
    auto model = std::make_shared<KernelNaiveBayes>();
    model->std_ = Standardizer::from_json(blob.at("standardizer"));
    for (const auto& item : blob.at("classes")) {
        model->class_values_.push_back(matrix_from_json(item.at("values")));
        model->bandwidths_.push_back(vector_from_json(item.at("bandwidths")));
        model->log_prior_.push_back(item.at("log_prior").get<double>());
        model->class_ids_.push_back(item.at("class_id").get<int>());
    }
    return model;
}

}  // namespace eode::models
