#include <algorithm>
#include <map>
#include <utility>

#include "models.hpp"

namespace eode::models {

namespace {

double gini_from_counts(const std::map<int, int>& counts, int n) {
    if (n == 0) return 0.0;
    double sum_sq = 0.0;
    for (const auto& [label, c] : counts) {
        const double p = static_cast<double>(c) / n;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

int majority_label(const std::map<int, int>& counts) {
    int best_label = counts.begin()->first;
    int best_count = counts.begin()->second;
    for (const auto& [label, c] : counts) {
        if (c > best_count) {
            best_label = label;
            best_count = c;
        }
    }
    return best_label;
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

SplitChoice best_split(const Dataset& ds, const std::vector<int>& rows,
                       const std::map<int, int>& counts, int min_leaf) {
    const int n = static_cast<int>(rows.size());
    const double parent_gini = gini_from_counts(counts, n);
    SplitChoice best;

    std::vector<std::pair<double, int>> ordered(rows.size());
    for (int j = 0; j < ds.cols(); ++j) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            ordered[i] = {ds.samples(rows[i], j),
                          ds.labels[static_cast<std::size_t>(rows[i])]};
        }
        std::sort(ordered.begin(), ordered.end());

        std::map<int, int> left_counts;
        for (int i = 0; i + 1 < n; ++i) {
            ++left_counts[ordered[static_cast<std::size_t>(i)].second];
            const double v = ordered[static_cast<std::size_t>(i)].first;
            const double next = ordered[static_cast<std::size_t>(i + 1)].first;
            if (!(next > v)) continue;
            const int nl = i + 1;
            const int nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;

            std::map<int, int> right_counts = counts;
            for (const auto& [label, c] : left_counts) {
                right_counts[label] -= c;
                if (right_counts[label] == 0) right_counts.erase(label);
            }
            const double weighted =
                (nl * gini_from_counts(left_counts, nl) +
                 nr * gini_from_counts(right_counts, nr)) /
                n;
            const double gain = parent_gini - weighted;
            if (gain > best.gain + 1e-12 ||
                (!best.found && gain > 1e-12)) {
                best.found = true;
                best.feature = j;
                best.threshold = 0.5 * (v + next);
                best.gain = gain;
            }
        }
    }
    return best;
}

}  // namespace

std::shared_ptr<const Model> fit_tree(const Dataset& ds, const ClassifierConfig& cfg) {
    auto model = std::make_shared<DecisionTree>();
    auto& nodes = model->nodes_;

    struct Pending {
        int node;
        std::vector<int> rows;
    };
    std::vector<Pending> stack;
    nodes.emplace_back();
    {
        std::vector<int> all(static_cast<std::size_t>(ds.rows()));
        for (int r = 0; r < ds.rows(); ++r) all[static_cast<std::size_t>(r)] = r;
        stack.push_back({0, std::move(all)});
    }

    while (!stack.empty()) {
        Pending cur = std::move(stack.back());
        stack.pop_back();

        std::map<int, int> counts;
        for (int r : cur.rows) ++counts[ds.labels[static_cast<std::size_t>(r)]];

        SplitChoice split;
        if (counts.size() > 1 &&
            static_cast<int>(cur.rows.size()) >= 2 * cfg.tree_min_leaf) {
            split = best_split(ds, cur.rows, counts, cfg.tree_min_leaf);
        }
        if (!split.found) {
            nodes[static_cast<std::size_t>(cur.node)].label = majority_label(counts);
            continue;
        }

        std::vector<int> left_rows;
        std::vector<int> right_rows;
        for (int r : cur.rows) {
            if (ds.samples(r, split.feature) < split.threshold) {
                left_rows.push_back(r);
            } else {
                right_rows.push_back(r);
            }
        }

        const int left_node = static_cast<int>(nodes.size());
        nodes.emplace_back();
        const int right_node = static_cast<int>(nodes.size());
        nodes.emplace_back();

        auto& node = nodes[static_cast<std::size_t>(cur.node)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_node;
        node.right = right_node;

        stack.push_back({right_node, std::move(right_rows)});
        stack.push_back({left_node, std::move(left_rows)});
    }
    return model;
}

std::vector<int> DecisionTree::predict(const Eigen::MatrixXd& x) const {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        int node = 0;
        while (nodes_[static_cast<std::size_t>(node)].feature >= 0) {
            const auto& n = nodes_[static_cast<std::size_t>(node)];
            node = x(r, n.feature) < n.threshold ? n.left : n.right;
        }
        out[static_cast<std::size_t>(r)] = nodes_[static_cast<std::size_t>(node)].label;
    }
    return out;
}

json DecisionTree::to_json() const {
    json node_list = json::array();
    for (const auto& n : nodes_) {
        node_list.push_back(json{{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"label", n.label}});
    }
    return json{{"impl", "tree"}, {"nodes", std::move(node_list)}};
}

std::shared_ptr<const Model> DecisionTree::from_json(const json& blob) {
    auto model = std::make_shared<DecisionTree>();
    for (const auto& item : blob.at("nodes")) {
        DecisionTree::Node n;
        n.feature = item.at("feature").get<int>();
        n.threshold = item.at("threshold").get<double>();
        n.left = item.at("left").get<int>();
        n.right = item.at("right").get<int>();
        n.label = item.at("label").get<int>();
        model->nodes_.push_back(n);
    }
    return model;
}

}  // namespace eode::models
