#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "eode/classifiers.hpp"
#include "eode/common.hpp"
#include "eode/ensemble.hpp"
#include "eode/fixtures.hpp"

using namespace eode;
using namespace eode::ens;

namespace {

Dataset unit_square() {
    Eigen::MatrixXd x(4, 2);
    x << 0, 0, 0, 1, 1, 0, 1, 1;
    Dataset ds;
    ds.samples = x;
    ds.labels = {0, 0, 1, 1};
    ds.class_count = 2;
    return ds;
}

// A nearest-neighbor model fitted on the validation rows themselves with
// planted labels predicts exactly those labels, which makes pool accuracies
// fully controllable.
PoolEntry planted_entry(const Dataset& val, const std::vector<int>& planted,
                        int ordinal) {
    Dataset train;
    train.samples = val.samples;
    train.labels = planted;
    train.class_count = val.class_count;
    ClassifierConfig cfg;
    cfg.knn_k = 1;
    PoolEntry entry;
    entry.model = fit(ClassifierKind::Knn, train, cfg);
    entry.kind = ClassifierKind::Knn;
    entry.cluster_ordinal = ordinal;
    return entry;
}

std::vector<int> flip_at(std::vector<int> labels, const std::vector<int>& idx) {
    for (int i : idx) labels[static_cast<std::size_t>(i)] = 1 - labels[static_cast<std::size_t>(i)];
    return labels;
}

Dataset line_dataset(int n) {
    Eigen::MatrixXd x(n, 1);
    Dataset ds;
    ds.class_count = 2;
    for (int r = 0; r < n; ++r) {
        x(r, 0) = static_cast<double>(r);
        ds.labels.push_back(r < n / 2 ? 0 : 1);
    }
    ds.samples = x;
    return ds;
}

}  // namespace

TEST_CASE("k-means with k=1 recovers the mean and total scatter") {
    Dataset ds = unit_square();
    ClusterSet cs = kmeans(ds, 1, 7);
    REQUIRE(cs.clusters.size() == 1);
    CHECK(cs.clusters[0].rows == std::vector<int>{0, 1, 2, 3});
    CHECK(cs.clusters[0].k == 1);
    CHECK(cs.clusters[0].index_within_k == 0);
    CHECK(cs.clusters[0].centroid(0) == doctest::Approx(0.5));
    CHECK(cs.clusters[0].centroid(1) == doctest::Approx(0.5));
    CHECK(cs.wcss == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("k-means finds the optimal two-cluster split of the square") {
    Dataset ds = unit_square();
    ClusterSet cs = kmeans(ds, 2, 3);
    REQUIRE(cs.clusters.size() == 2);
    // any edge pairing scores 1.0; the diagonal pairing scores 2.0
    CHECK(cs.wcss == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cs.clusters[0].rows.size() == 2);
    CHECK(cs.clusters[1].rows.size() == 2);
}

TEST_CASE("k-means drops empty clusters when points coincide") {
    Eigen::MatrixXd x(4, 2);
    x << 0, 0, 0, 0, 5, 5, 5, 5;
    Dataset ds;
    ds.samples = x;
    ds.labels = {0, 0, 1, 1};
    ds.class_count = 2;

    ClusterSet cs = kmeans(ds, 4, 11);
    REQUIRE(cs.clusters.size() == 2);
    CHECK(cs.wcss == doctest::Approx(0.0));
    CHECK(cs.clusters[0].k == 4);
    CHECK(cs.clusters[1].k == 4);
    CHECK(cs.clusters[0].index_within_k == 0);
    CHECK(cs.clusters[1].index_within_k == 1);
    std::vector<int> all = cs.clusters[0].rows;
    all.insert(all.end(), cs.clusters[1].rows.begin(), cs.clusters[1].rows.end());
    std::sort(all.begin(), all.end());
    CHECK(all == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("k-means per-iteration scatter never increases") {
    Dataset ds = fixtures::make_blobs(12, 3, 3, 5.0, 9);
    ClusterSet cs = kmeans(ds, 3, 4);
    REQUIRE(!cs.wcss_trace.empty());
    for (std::size_t i = 1; i < cs.wcss_trace.size(); ++i) {
        CHECK(cs.wcss_trace[i] <= cs.wcss_trace[i - 1] + 1e-9);
    }
    CHECK(cs.wcss <= cs.wcss_trace.front() + 1e-9);
}

TEST_CASE("k-means is deterministic per seed and validates parameters") {
    Dataset ds = fixtures::make_blobs(10, 2, 2, 4.0, 2);
    ClusterSet a = kmeans(ds, 3, 13);
    ClusterSet b = kmeans(ds, 3, 13);
    REQUIRE(a.clusters.size() == b.clusters.size());
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        CHECK(a.clusters[i].rows == b.clusters[i].rows);
    }
    CHECK(a.wcss == b.wcss);

    CHECK_THROWS_AS(kmeans(ds, 0, 1), ConfigError);
    CHECK_THROWS_AS(kmeans(ds, ds.rows() + 1, 1), ConfigError);
    CHECK_THROWS_AS(kmeans(ds, 2, 1, 0), ConfigError);
}

TEST_CASE("subspace generation concatenates every k and partitions per k") {
    Dataset ds = fixtures::make_blobs(8, 2, 2, 6.0, 5);
    const int big_k = 3;
    ClusterSet cs = generate_subspaces(ds, big_k, 21);

    std::set<int> ks;
    for (const auto& cluster : cs.clusters) {
        CHECK(!cluster.rows.empty());
        CHECK(cluster.k >= 1);
        CHECK(cluster.k <= big_k);
        ks.insert(cluster.k);
    }
    CHECK(ks.count(1) == 1);

    for (int k = 1; k <= big_k; ++k) {
        std::vector<int> covered;
        int expected_index = 0;
        for (const auto& cluster : cs.clusters) {
            if (cluster.k != k) continue;
            CHECK(cluster.index_within_k == expected_index++);
            covered.insert(covered.end(), cluster.rows.begin(), cluster.rows.end());
        }
        std::sort(covered.begin(), covered.end());
        std::vector<int> everything(static_cast<std::size_t>(ds.rows()));
        for (int r = 0; r < ds.rows(); ++r) everything[static_cast<std::size_t>(r)] = r;
        CHECK(covered == everything);
    }

    CHECK_THROWS_AS(generate_subspaces(ds, 0, 1), ConfigError);
}

TEST_CASE("the clustering bound follows the fifth root") {
    CHECK(choose_K(2) == 2);
    CHECK(choose_K(32) == 2);
    CHECK(choose_K(100) == 3);
    CHECK(choose_K(179) == 3);
    CHECK(choose_K(243) == 3);
    CHECK(choose_K(100000) == 10);
    CHECK_THROWS_AS(choose_K(1), ConfigError);
}

TEST_CASE("the model pool trains every kind on every cluster") {
    Dataset ds = fixtures::make_blobs(10, 3, 2, 6.0, 8);
    ClusterSet cs = generate_subspaces(ds, 2, 3);
    REQUIRE(cs.clusters.size() == 3);  // 1 cluster for k=1, 2 for k=2

    ClassifierConfig cfg;
    cfg.mlp_epochs = 40;
    cfg.svm_iter_limit = 2000;
    ModelPool pool = build_model_pool(ds, cs, cfg);
    CHECK(pool.warnings.empty());
    REQUIRE(pool.entries.size() == 18);

    for (std::size_t i = 0; i < pool.entries.size(); ++i) {
        const auto& entry = pool.entries[i];
        CHECK(entry.kind == kAllClassifierKinds[i % 6]);
        CHECK(entry.cluster_ordinal == static_cast<int>(i / 6));
        CHECK(entry.cluster_k == cs.clusters[i / 6].k);
        CHECK(entry.cluster_index == cs.clusters[i / 6].index_within_k);
        CHECK(entry.validation_accuracy == -1.0);
        CHECK(entry.model.impl != nullptr);
    }
}

TEST_CASE("prefilter keeps exactly the strictly-above-mean entries") {
    Dataset val = line_dataset(8);
    ModelPool pool;
    pool.entries.push_back(planted_entry(val, val.labels, 0));                    // 1.0
    pool.entries.push_back(planted_entry(val, flip_at(val.labels, {0, 7}), 1));   // 0.75
    pool.entries.push_back(planted_entry(val, flip_at(val.labels, {1, 6}), 2));   // 0.75
    pool.entries.push_back(planted_entry(val, flip_at(val.labels, {2, 5}), 3));   // 0.75
    pool.entries.push_back(
        planted_entry(val, flip_at(val.labels, {0, 1, 2, 3, 4, 7}), 4));          // 0.25
    pool.entries.push_back(
        planted_entry(val, flip_at(val.labels, {0, 1, 2, 3, 4, 5, 6, 7}), 5));    // 0.0

    ModelPool kept = prefilter_pool(pool, val);  // mean accuracy is 0.5833...
    REQUIRE(kept.entries.size() == 4);
    std::vector<int> ordinals;
    std::vector<double> accs;
    for (const auto& entry : kept.entries) {
        ordinals.push_back(entry.cluster_ordinal);
        accs.push_back(entry.validation_accuracy);
    }
    CHECK(ordinals == std::vector<int>{0, 1, 2, 3});
    CHECK(accs == std::vector<double>{1.0, 0.75, 0.75, 0.75});
}

TEST_CASE("prefilter falls back to the top three on a degenerate pool") {
    Dataset val = line_dataset(8);
    ModelPool pool;
    pool.entries.push_back(planted_entry(val, val.labels, 0));                    // 1.0
    pool.entries.push_back(planted_entry(val, flip_at(val.labels, {0, 1, 6, 7}), 1));  // 0.5
    pool.entries.push_back(planted_entry(val, flip_at(val.labels, {2, 3, 4, 5}), 2));  // 0.5
    pool.entries.push_back(
        planted_entry(val, flip_at(val.labels, {0, 1, 2, 3, 4, 5, 6, 7}), 3));    // 0.0

    // mean is exactly 0.5; only one entry sits strictly above it, so the
    // floor keeps the top three, ties broken by pool index
    ModelPool kept = prefilter_pool(pool, val);
    REQUIRE(kept.entries.size() == 3);
    std::vector<int> ordinals;
    for (const auto& entry : kept.entries) ordinals.push_back(entry.cluster_ordinal);
    CHECK(ordinals == std::vector<int>{0, 1, 2});
    CHECK(kept.entries[0].validation_accuracy == doctest::Approx(1.0));
    CHECK(kept.entries[1].validation_accuracy == doctest::Approx(0.5));
    CHECK(kept.entries[2].validation_accuracy == doctest::Approx(0.5));
}

TEST_CASE("prefilter keeps a whole tiny pool and rejects bad input") {
    Dataset val = line_dataset(8);
    ModelPool pool;
    pool.entries.push_back(planted_entry(val, flip_at(val.labels, {0}), 0));
    pool.entries.push_back(planted_entry(val, flip_at(val.labels, {1}), 1));
    ModelPool kept = prefilter_pool(pool, val);
    CHECK(kept.entries.size() == 2);

    ModelPool empty;
    CHECK_THROWS_AS(prefilter_pool(empty, val), ValidationError);
}

TEST_CASE("plurality voting follows the counting oracle") {
    CHECK(plurality_vote({{0}, {0}, {1}}) == std::vector<int>{0});
    CHECK(plurality_vote({{0}, {1}}) == std::vector<int>{0});
    CHECK(plurality_vote({{2}, {2}, {1}, {1}, {0}}) == std::vector<int>{1});
    CHECK(plurality_vote({{1}, {1}, {2}}) == std::vector<int>{1});
    CHECK(plurality_vote({{2, 0, 1}}) == std::vector<int>{2, 0, 1});

    std::vector<std::vector<int>> grid = {{0, 1, 2, 2}, {0, 1, 1, 2}, {1, 1, 0, 0}};
    CHECK(plurality_vote(grid) == std::vector<int>{0, 1, 0, 2});

    CHECK_THROWS_AS(plurality_vote({}), ValidationError);
    CHECK_THROWS_AS(plurality_vote({{0, 1}, {0}}), ValidationError);
}

TEST_CASE("the selection objective matches a hand-computed value exactly") {
    Dataset val = line_dataset(10);
    ModelPool pool;
    const std::vector<int> one_off = flip_at(val.labels, {9});  // accuracy 0.9
    for (int i = 0; i < 3; ++i) pool.entries.push_back(planted_entry(val, one_off, i));
    const std::vector<int> all_wrong =
        flip_at(val.labels, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    for (int i = 3; i < 10; ++i)
        pool.entries.push_back(planted_entry(val, all_wrong, i));

    Mask selection(10, 0);
    selection[0] = selection[1] = selection[2] = 1;
    EnsembleObjectiveParams p;
    // 0.9 * (1 - 9/10) + 0.1 * (3/10)
    CHECK(ensemble_fitness(selection, pool, val, p) ==
          doctest::Approx(0.12).epsilon(1e-12));

    Mask none(10, 0);
    CHECK(ensemble_fitness(none, pool, val, p) == doctest::Approx(1.1).epsilon(1e-12));

    Mask wrong_len(9, 1);
    CHECK_THROWS_AS(ensemble_fitness(wrong_len, pool, val, p), ValidationError);

    EnsembleObjectiveParams bad;
    bad.alpha = 0.5;
    bad.beta = 0.6;
    Mask all(10, 1);
    CHECK_THROWS_AS(ensemble_fitness(all, pool, val, bad), ConfigError);
}

TEST_CASE("the full training pipeline fits separable data end to end") {
    Dataset all = fixtures::make_blobs(23, 6, 2, 8.0, 33);
    SplitPair split = stratified_split(all, 0.3, 44);

    gwo::GwoParams gp;
    gp.population = 8;
    gp.iterations = 8;
    ClassifierConfig cfg;
    cfg.mlp_epochs = 40;
    cfg.svm_iter_limit = 2000;
    fs::FsObjectiveParams fsp;
    EnsembleObjectiveParams ensp;

    EodeModel model = train_eode(split.train, gp, cfg, fsp, ensp, 99);

    CHECK(model.ensemble.class_count == 2);
    CHECK(model.ensemble.feature_mask.size() == 6);
    CHECK(popcount(model.ensemble.feature_mask) == model.feature_selection.fnum);
    REQUIRE(model.fold_traces.size() == 5);
    int total_selected = 0;
    for (const auto& trace : model.fold_traces) {
        CHECK(trace.pool_size > 0);
        CHECK(trace.filtered_size >= std::min(3, trace.pool_size));
        CHECK(trace.filtered_size <= trace.pool_size);
        CHECK(trace.selected >= 1);
        CHECK(trace.selected <= trace.filtered_size);
        CHECK(trace.history.size() == 9);
        total_selected += trace.selected;
    }
    CHECK(static_cast<int>(model.ensemble.models.size()) == total_selected);
    for (std::size_t i = 1; i < model.ensemble.models.size(); ++i) {
        CHECK(model.ensemble.models[i].source_fold >=
              model.ensemble.models[i - 1].source_fold);
    }

    const double acc = evaluate(model.ensemble, split.test);
    CHECK(acc >= 0.9);

    nlohmann::json manifest = ensemble_manifest(model.ensemble);
    CHECK(manifest.at("ensemble_size").get<std::size_t>() ==
          model.ensemble.models.size());
    CHECK(manifest.at("class_count").get<int>() == 2);
    CHECK(manifest.at("models").size() == model.ensemble.models.size());
    CHECK(manifest.at("feature_mask").size() == 6);
    int mask_bits = 0;
    for (const auto& bit : manifest.at("feature_mask")) mask_bits += bit.get<int>();
    CHECK(mask_bits == model.feature_selection.fnum);
}

TEST_CASE("training twice with one seed reproduces the ensemble exactly") {
    Dataset train = fixtures::make_blobs(12, 5, 2, 7.0, 3);
    gwo::GwoParams gp;
    gp.population = 6;
    gp.iterations = 5;
    ClassifierConfig cfg;
    cfg.mlp_epochs = 30;
    cfg.svm_iter_limit = 1500;
    fs::FsObjectiveParams fsp;
    EnsembleObjectiveParams ensp;

    EodeModel a = train_eode(train, gp, cfg, fsp, ensp, 7);
    EodeModel b = train_eode(train, gp, cfg, fsp, ensp, 7);
    CHECK(ensemble_manifest(a.ensemble) == ensemble_manifest(b.ensemble));
    CHECK(a.feature_selection.mask == b.feature_selection.mask);
    CHECK(evaluate(a.ensemble, train) == evaluate(b.ensemble, train));
}

TEST_CASE("ensemble predict validates its input") {
    EnsembleClassifier empty;
    Eigen::MatrixXd x(1, 3);
    x << 1, 2, 3;
    CHECK_THROWS_AS(ens::predict(empty, x), ValidationError);

    Dataset train = fixtures::make_blobs(10, 4, 2, 7.0, 5);
    gwo::GwoParams gp;
    gp.population = 5;
    gp.iterations = 4;
    ClassifierConfig cfg;
    cfg.mlp_epochs = 30;
    cfg.svm_iter_limit = 1500;
    EodeModel model = train_eode(train, gp, cfg, {}, {}, 13);
    Eigen::MatrixXd wrong(2, 5);
    wrong.setZero();
    CHECK_THROWS_AS(ens::predict(model.ensemble, wrong), ValidationError);
}
