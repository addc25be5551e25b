#include "eode/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "eode/common.hpp"

namespace eode::ens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LloydRun {
    std::vector<int> assignment;
    Eigen::MatrixXd centroids;
    double wcss = kInf;
    std::vector<double> trace;
};

double assignment_wcss(const Dataset& ds, const Eigen::MatrixXd& centroids,
                       std::vector<int>& assignment) {
    double total = 0.0;
    for (int r = 0; r < ds.rows(); ++r) {
        double best = kInf;
        int best_c = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (ds.samples.row(r) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                best_c = static_cast<int>(c);
            }
        }
        assignment[static_cast<std::size_t>(r)] = best_c;
        total += best;
    }
    return total;
}

Eigen::MatrixXd seed_centroids_plus_plus(const Dataset& ds, int k, Rng& rng) {
    const int n = ds.rows();
    Eigen::MatrixXd centroids(k, ds.cols());
    std::vector<double> dist_sq(static_cast<std::size_t>(n), kInf);

    int first = rng.uniform_int(n);
    centroids.row(0) = ds.samples.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int r = 0; r < n; ++r) {
            const double d =
                (ds.samples.row(r) - centroids.row(c - 1)).squaredNorm();
            auto& cur = dist_sq[static_cast<std::size_t>(r)];
            if (d < cur) cur = d;
            total += cur;
        }
        int chosen;
        if (total <= 0.0) {
            chosen = rng.uniform_int(n);
        } else {
            const double target = rng.u01() * total;
            double cum = 0.0;
            chosen = n - 1;
            for (int r = 0; r < n; ++r) {
                cum += dist_sq[static_cast<std::size_t>(r)];
                if (cum >= target) {
                    chosen = r;
                    break;
                }
            }
        }
        centroids.row(c) = ds.samples.row(chosen);
    }
    return centroids;
}

LloydRun lloyd(const Dataset& ds, int k, std::uint64_t seed) {
    Rng rng(seed);
    LloydRun run;
    run.centroids = seed_centroids_plus_plus(ds, k, rng);
    run.assignment.assign(static_cast<std::size_t>(ds.rows()), 0);

    for (int iter = 0; iter < 100; ++iter) {
        run.wcss = assignment_wcss(ds, run.centroids, run.assignment);
        run.trace.push_back(run.wcss);

        Eigen::MatrixXd next = run.centroids;
        for (int c = 0; c < k; ++c) {
            Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(ds.cols());
            int count = 0;
            for (int r = 0; r < ds.rows(); ++r) {
                if (run.assignment[static_cast<std::size_t>(r)] == c) {
                    sum += ds.samples.row(r);
                    ++count;
                }
            }
            if (count > 0) next.row(c) = sum / count;
        }
        const double shift = (next - run.centroids).rowwise().norm().maxCoeff();
        run.centroids = next;
        if (shift < 1e-6) break;
    }
    run.wcss = assignment_wcss(ds, run.centroids, run.assignment);
    return run;
}

}  // namespace

void EnsembleObjectiveParams::validate() const {
    if (alpha < 0.0 || beta < 0.0)
        throw ConfigError("objective weights must be non-negative");
    if (std::abs(alpha + beta - 1.0) > 1e-12)
        throw ConfigError("objective weights must sum to 1");
}

ClusterSet kmeans(const Dataset& ds, int k, std::uint64_t seed, int restarts) {
    if (k < 1 || k > ds.rows())
        throw ConfigError("k must be in [1, rows]; got k=" + std::to_string(k) +
                          " for " + std::to_string(ds.rows()) + " rows");
    if (restarts < 1) throw ConfigError("restarts must be >= 1");

    LloydRun best;
    for (int r = 0; r < restarts; ++r) {
        LloydRun run = lloyd(ds, k, derive_seed(seed, "restart", r));
        if (run.wcss < best.wcss) best = std::move(run);
    }

    ClusterSet out;
    out.wcss = best.wcss;
    out.wcss_trace = best.trace;
    int emitted = 0;
    for (int c = 0; c < k; ++c) {
        Cluster cluster;
        cluster.k = k;
        for (int r = 0; r < ds.rows(); ++r) {
            if (best.assignment[static_cast<std::size_t>(r)] == c) {
                cluster.rows.push_back(r);
            }
        }
        if (cluster.rows.empty()) continue;
        cluster.index_within_k = emitted++;
        cluster.centroid = best.centroids.row(c).transpose();
        out.clusters.push_back(std::move(cluster));
    }
    return out;
}

ClusterSet generate_subspaces(const Dataset& ds, int big_k, std::uint64_t seed) {
    if (big_k < 1) throw ConfigError("K must be >= 1");
    ClusterSet out;
    const int upper = std::min(big_k, ds.rows());
    for (int k = 1; k <= upper; ++k) {
        ClusterSet part = kmeans(ds, k, derive_seed(seed, "k", k));
        out.wcss = part.wcss;
        out.wcss_trace = part.wcss_trace;
        for (auto& cluster : part.clusters) {
            out.clusters.push_back(std::move(cluster));
        }
    }
    return out;
}

int choose_K(int m) {
    if (m < 2) throw ConfigError("choose_K requires m >= 2");
    const auto rounded = std::llround(std::pow(static_cast<double>(m), 0.2));
    return static_cast<int>(std::max<long long>(2, rounded));
}

ModelPool build_model_pool(const Dataset& ds_masked, const ClusterSet& clusters,
                           const ClassifierConfig& cfg) {
    ModelPool pool;
    std::uint64_t ordinal = 0;
    for (std::size_t ci = 0; ci < clusters.clusters.size(); ++ci) {
        const Cluster& cluster = clusters.clusters[ci];
        Dataset sub = ds_masked.subset_rows(cluster.rows);
        for (ClassifierKind kind : kAllClassifierKinds) {
            ClassifierConfig entry_cfg = cfg;
            entry_cfg.seed = derive_seed(cfg.seed, "pool", ordinal++);
            try {
                PoolEntry entry;
                entry.model = fit(kind, sub, entry_cfg);
                entry.kind = kind;
                entry.cluster_ordinal = static_cast<int>(ci);
                entry.cluster_k = cluster.k;
                entry.cluster_index = cluster.index_within_k;
                pool.entries.push_back(std::move(entry));
            } catch (const std::exception& ex) {
                pool.warnings.push_back("pool entry (cluster " + std::to_string(ci) +
                                        ", " + to_string(kind) +
                                        ") failed to train: " + ex.what());
            }
        }
    }
    return pool;
}

ModelPool prefilter_pool(const ModelPool& pool, const Dataset& val) {
    if (pool.entries.empty()) throw ValidationError("prefilter on an empty pool");
    if (val.rows() < 1) throw ValidationError("prefilter needs validation rows");

    ModelPool scored = pool;
    double mean = 0.0;
    for (auto& entry : scored.entries) {
        const std::vector<int> preds = entry.model.predict(val.samples);
        int correct = 0;
        for (int r = 0; r < val.rows(); ++r) {
            if (preds[static_cast<std::size_t>(r)] ==
                val.labels[static_cast<std::size_t>(r)]) {
                ++correct;
            }
        }
        entry.validation_accuracy = static_cast<double>(correct) / val.rows();
        mean += entry.validation_accuracy;
    }
    mean /= static_cast<double>(scored.entries.size());

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < scored.entries.size(); ++i) {
        if (scored.entries[i].validation_accuracy > mean) keep.push_back(i);
    }
    const std::size_t floor_count = std::min<std::size_t>(3, scored.entries.size());
    if (keep.size() < floor_count) {
        std::vector<std::size_t> order(scored.entries.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double aa = scored.entries[a].validation_accuracy;
            const double bb = scored.entries[b].validation_accuracy;
            if (aa != bb) return aa > bb;
            return a < b;
        });
        keep.assign(order.begin(), order.begin() + static_cast<long>(floor_count));
        std::sort(keep.begin(), keep.end());
    }

    ModelPool out;
    out.warnings = scored.warnings;
    for (std::size_t i : keep) out.entries.push_back(scored.entries[i]);
    return out;
}

std::vector<int> plurality_vote(const std::vector<std::vector<int>>& predictions) {
    if (predictions.empty()) throw ValidationError("vote needs at least one model");
    const std::size_t n = predictions.front().size();
    for (const auto& row : predictions) {
        if (row.size() != n) throw ValidationError("ragged prediction matrix");
    }

    std::vector<int> out(n);
    std::map<int, int> counts;
    for (std::size_t s = 0; s < n; ++s) {
        counts.clear();
        for (const auto& row : predictions) ++counts[row[s]];
        int best_label = counts.begin()->first;
        int best_count = counts.begin()->second;
        for (const auto& [label, c] : counts) {
            if (c > best_count) {
                best_label = label;
                best_count = c;
            }
        }
        out[s] = best_label;
    }
    return out;
}

double ensemble_fitness(const Mask& selection, const ModelPool& pool,
                        const Dataset& val, const EnsembleObjectiveParams& p) {
    p.validate();
    if (selection.size() != pool.entries.size())
        throw ValidationError("selection length does not match pool size");

    const int chosen = popcount(selection);
    if (chosen == 0) return 1.0 + p.beta;

    std::vector<std::vector<int>> predictions;
    predictions.reserve(static_cast<std::size_t>(chosen));
    for (std::size_t i = 0; i < selection.size(); ++i) {
        if (selection[i]) {
            predictions.push_back(pool.entries[i].model.predict(val.samples));
        }
    }
    const std::vector<int> voted = plurality_vote(predictions);
    int correct = 0;
    for (int r = 0; r < val.rows(); ++r) {
        if (voted[static_cast<std::size_t>(r)] ==
            val.labels[static_cast<std::size_t>(r)]) {
            ++correct;
        }
    }
    const double error = 1.0 - static_cast<double>(correct) / val.rows();
    return p.alpha * error + p.beta * static_cast<double>(chosen) /
                                 static_cast<double>(pool.entries.size());
}

EodeModel train_eode(const Dataset& train, const gwo::GwoParams& gwo_params,
                     const ClassifierConfig& cfg, const fs::FsObjectiveParams& fs_params,
                     const EnsembleObjectiveParams& ens_params, std::uint64_t seed) {
    train.validate();
    gwo_params.validate();
    cfg.validate();
    fs_params.validate();
    ens_params.validate();

    EodeModel out;

    fs::FsObjectiveParams fs_p = fs_params;
    fs_p.seed = derive_seed(seed, "fs-objective");
    gwo::GwoParams fs_gwo = gwo_params;
    fs_gwo.seed = derive_seed(seed, "fs-gwo");
    out.feature_selection = fs::select_features(train, fs_gwo, fs_p, cfg);
    out.warnings.insert(out.warnings.end(),
                        out.feature_selection.warnings.begin(),
                        out.feature_selection.warnings.end());

    const Dataset masked = apply_mask(train, out.feature_selection.mask);
    FoldSet folds = stratified_kfold(masked, 5, derive_seed(seed, "ensemble-folds"));
    out.warnings.insert(out.warnings.end(), folds.warnings.begin(),
                        folds.warnings.end());

    out.ensemble.feature_mask = out.feature_selection.mask;
    out.ensemble.class_count = train.class_count;

    for (std::size_t i = 0; i < folds.folds.size(); ++i) {
        const auto& val_rows = folds.folds[i];
        if (val_rows.empty()) {
            out.warnings.push_back("outer fold " + std::to_string(i) +
                                   " is empty; skipped");
            continue;
        }
        std::vector<char> in_val(static_cast<std::size_t>(masked.rows()), 0);
        for (int r : val_rows) in_val[static_cast<std::size_t>(r)] = 1;
        std::vector<int> train_rows;
        for (int r = 0; r < masked.rows(); ++r) {
            if (!in_val[static_cast<std::size_t>(r)]) train_rows.push_back(r);
        }
        if (train_rows.empty()) {
            out.warnings.push_back("outer fold " + std::to_string(i) +
                                   " leaves no training rows; skipped");
            continue;
        }

        const Dataset sub = masked.subset_rows(train_rows);
        const Dataset val = masked.subset_rows(val_rows);

        const int big_k =
            sub.rows() < 2 ? 1 : std::min(choose_K(sub.rows()), sub.rows());
        const ClusterSet subspaces =
            generate_subspaces(sub, big_k, derive_seed(seed, "kmeans", i));

        ClassifierConfig pool_cfg = cfg;
        pool_cfg.seed = derive_seed(seed, "pool", i);
        ModelPool pool = build_model_pool(sub, subspaces, pool_cfg);
        out.warnings.insert(out.warnings.end(), pool.warnings.begin(),
                            pool.warnings.end());
        ModelPool filtered = prefilter_pool(pool, val);

        const auto r = filtered.entries.size();
        // predictions are fixed per (model, fold); precompute once so the
        // optimizer only recombines votes
        std::vector<std::vector<int>> fold_predictions(r);
        for (std::size_t j = 0; j < r; ++j) {
            fold_predictions[j] = filtered.entries[j].model.predict(val.samples);
        }

        EnsembleObjectiveParams ens_p = ens_params;
        ens_p.seed = derive_seed(seed, "ens-objective", i);
        auto objective = [&](const Mask& selection) {
            const int chosen = popcount(selection);
            if (chosen == 0) return 1.0 + ens_p.beta;
            std::vector<std::vector<int>> picked;
            picked.reserve(static_cast<std::size_t>(chosen));
            for (std::size_t j = 0; j < selection.size(); ++j) {
                if (selection[j]) picked.push_back(fold_predictions[j]);
            }
            const std::vector<int> voted = plurality_vote(picked);
            int correct = 0;
            for (int row = 0; row < val.rows(); ++row) {
                if (voted[static_cast<std::size_t>(row)] ==
                    val.labels[static_cast<std::size_t>(row)]) {
                    ++correct;
                }
            }
            const double error = 1.0 - static_cast<double>(correct) / val.rows();
            return ens_p.alpha * error +
                   ens_p.beta * static_cast<double>(chosen) / static_cast<double>(r);
        };

        gwo::GwoParams fold_gwo = gwo_params;
        fold_gwo.seed = derive_seed(seed, "ens-gwo", i);
        gwo::GwoResult run = gwo::optimize(static_cast<int>(r), objective, fold_gwo);
        out.warnings.insert(out.warnings.end(), run.warnings.begin(),
                            run.warnings.end());

        std::vector<std::size_t> psi;
        for (std::size_t j = 0; j < run.best_mask.size(); ++j) {
            if (run.best_mask[j]) psi.push_back(j);
        }
        if (psi.empty()) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < r; ++j) {
                if (filtered.entries[j].validation_accuracy >
                    filtered.entries[best].validation_accuracy) {
                    best = j;
                }
            }
            psi.push_back(best);
            out.warnings.push_back("fold " + std::to_string(i) +
                                   " selection was empty; kept the most "
                                   "accurate pool model");
        }

        for (std::size_t j : psi) {
            const PoolEntry& entry = filtered.entries[j];
            SelectedModel sel;
            sel.model = entry.model;
            sel.kind = entry.kind;
            sel.source_fold = static_cast<int>(i);
            sel.cluster_k = entry.cluster_k;
            sel.cluster_index = entry.cluster_index;
            sel.validation_accuracy = entry.validation_accuracy;
            out.ensemble.models.push_back(std::move(sel));
        }

        FoldTrace trace;
        trace.fold = static_cast<int>(i);
        trace.pool_size = static_cast<int>(pool.entries.size());
        trace.filtered_size = static_cast<int>(r);
        trace.selected = static_cast<int>(psi.size());
        trace.history = run.history;
        trace.history_bits = run.history_bits;
        out.fold_traces.push_back(std::move(trace));
    }

    if (out.ensemble.models.empty())
        throw ValidationError("training produced an empty ensemble");
    return out;
}

std::vector<int> predict(const EnsembleClassifier& ens, const Eigen::MatrixXd& x) {
    if (ens.models.empty()) throw ValidationError("predict on an empty ensemble");
    if (static_cast<std::size_t>(x.cols()) != ens.feature_mask.size())
        throw ValidationError("input dimension does not match the stored mask");

    std::vector<int> cols;
    for (std::size_t j = 0; j < ens.feature_mask.size(); ++j) {
        if (ens.feature_mask[j]) cols.push_back(static_cast<int>(j));
    }
    Eigen::MatrixXd masked(x.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        masked.col(static_cast<Eigen::Index>(j)) = x.col(cols[j]);
    }

    std::vector<std::vector<int>> predictions;
    predictions.reserve(ens.models.size());
    for (const auto& sel : ens.models) {
        predictions.push_back(sel.model.predict(masked));
    }
    return plurality_vote(predictions);
}

double evaluate(const EnsembleClassifier& ens, const Dataset& test) {
    const std::vector<int> voted = predict(ens, test.samples);
    int correct = 0;
    for (int r = 0; r < test.rows(); ++r) {
        if (voted[static_cast<std::size_t>(r)] ==
            test.labels[static_cast<std::size_t>(r)]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / test.rows();
}

nlohmann::json ensemble_manifest(const EnsembleClassifier& ens) {
    nlohmann::json models = nlohmann::json::array();
    for (const auto& sel : ens.models) {
        models.push_back(nlohmann::json{
            {"kind", to_string(sel.kind)},
            {"source_fold", sel.source_fold},
            {"cluster_k", sel.cluster_k},
            {"cluster_index", sel.cluster_index},
            {"validation_accuracy", sel.validation_accuracy}});
    }
    nlohmann::json mask = nlohmann::json::array();
    for (std::uint8_t bit : ens.feature_mask) mask.push_back(static_cast<int>(bit));
    return nlohmann::json{{"models", std::move(models)},
                          {"feature_mask", std::move(mask)},
                          {"class_count", ens.class_count},
                          {"ensemble_size", ens.models.size()}};
}

}  // namespace eode::ens
