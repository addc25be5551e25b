#include <algorithm>
#include <map>

#include "models.hpp"

namespace eode::models {

std::shared_ptr<const Model> fit_knn(const Dataset& ds, const ClassifierConfig& cfg) {
    auto model = std::make_shared<KnnModel>();
    model->train_x_ = ds.samples;
    model->train_y_ = ds.labels;
    model->k_ = std::min(cfg.knn_k, ds.rows());
    return model;
}

std::vector<int> KnnModel::predict(const Eigen::MatrixXd& x) const {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    std::vector<std::pair<double, int>> dist(
        static_cast<std::size_t>(train_x_.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index t = 0; t < train_x_.rows(); ++t) {
            dist[static_cast<std::size_t>(t)] = {
                (train_x_.row(t) - x.row(r)).squaredNorm(), static_cast<int>(t)};
        }
        // ties on distance break toward the earlier training row
        std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());

        std::map<int, int> votes;
        for (int i = 0; i < k_; ++i) {
            ++votes[train_y_[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)].second)]];
        }
        int best_label = votes.begin()->first;
        int best_count = votes.begin()->second;
        for (const auto& [label, c] : votes) {
            if (c > best_count) {
                best_label = label;
                best_count = c;
            }
        }
        out[static_cast<std::size_t>(r)] = best_label;
    }
    return out;
}

json KnnModel::to_json() const {
    return json{{"impl", "knn"},
                {"train_x", matrix_to_json(train_x_)},
                {"train_y", train_y_},
                {"k", k_}};
}

std::shared_ptr<const Model> KnnModel::from_json(const json& blob) {
    auto model = std::make_shared<KnnModel>();
    model->train_x_ = matrix_from_json(blob.at("train_x"));
    model->train_y_ = blob.at("train_y").get<std::vector<int>>();
    model->k_ = blob.at("k").get<int>();
    return model;
}

}  // namespace eode::models
