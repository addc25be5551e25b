#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "eode/classifiers.hpp"
#include "eode/common.hpp"
#include "eode/fixtures.hpp"

using namespace eode;

namespace {

Dataset labeled(std::vector<std::vector<double>> rows, std::vector<double> labels,
                std::vector<std::string> names) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return make_dataset(std::move(x), labels, std::move(names));
}

double accuracy(const TrainedModel& model, const Dataset& ds) {
    const auto preds = model.predict(ds.samples);
    int correct = 0;
    for (int r = 0; r < ds.rows(); ++r) {
        if (preds[static_cast<std::size_t>(r)] ==
            ds.labels[static_cast<std::size_t>(r)]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / ds.rows();
}

ClassifierConfig fast_cfg() {
    ClassifierConfig cfg;
    cfg.mlp_epochs = 120;
    cfg.svm_iter_limit = 10000;
    cfg.seed = 11;
    return cfg;
}

}  // namespace

TEST_CASE("every classifier separates well-spaced blobs") {
    const Dataset train = fixtures::make_blobs(15, 4, 3, 8.0, 1);
    const Dataset test = fixtures::make_blobs(10, 4, 3, 8.0, 2);
    for (ClassifierKind kind : kAllClassifierKinds) {
        const TrainedModel model = fit(kind, train, fast_cfg());
        CHECK_MESSAGE(accuracy(model, test) >= 0.95, to_string(kind));
    }
}

TEST_CASE("discriminant boundary sits between balanced class means") {
    Dataset train = labeled({{-3.0}, {-1.0}, {1.0}, {3.0}},
                            {0, 0, 1, 1}, {"f0"});
    TrainedModel model = fit(ClassifierKind::Discr, train, {});
    Eigen::MatrixXd queries(4, 1);
    queries << -5.0, -0.5, 0.5, 5.0;
    CHECK(model.predict(queries) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("knn with k=1 reproduces training labels on distinct rows") {
    const Dataset train = fixtures::make_blobs(10, 3, 2, 4.0, 3);
    ClassifierConfig cfg;
    cfg.knn_k = 1;
    const TrainedModel model = fit(ClassifierKind::Knn, train, cfg);
    CHECK(model.predict(train.samples) == train.labels);
}

TEST_CASE("knn vote ties resolve to the lowest class id") {
    Dataset train = labeled({{0.0}, {1.0}}, {0, 1}, {"f0"});
    ClassifierConfig cfg;
    cfg.knn_k = 2;
    TrainedModel model = fit(ClassifierKind::Knn, train, cfg);
    Eigen::MatrixXd query(1, 1);
    query << 0.5;  // equidistant, one vote each
    CHECK(model.predict(query) == std::vector<int>{0});
}

TEST_CASE("knn clamps k to the training size") {
    Dataset train = labeled({{0.0}, {10.0}}, {0, 1}, {"f0"});
    ClassifierConfig cfg;
    cfg.knn_k = 25;
    TrainedModel model = fit(ClassifierKind::Knn, train, cfg);
    Eigen::MatrixXd query(1, 1);
    query << 9.0;
    CHECK_NOTHROW(model.predict(query));
}

TEST_CASE("tree learns an axis threshold and predicts both sides") {
    Dataset train = labeled({{0.0}, {1.0}, {2.0}, {3.0}}, {0, 0, 1, 1}, {"f0"});
    TrainedModel model = fit(ClassifierKind::Tree, train, {});
    Eigen::MatrixXd queries(2, 1);
    queries << 1.4, 1.6;  // the only impurity-clearing threshold is 1.5
    CHECK(model.predict(queries) == std::vector<int>{0, 1});
    CHECK(model.predict(train.samples) == train.labels);
}

TEST_CASE("tree leaf majority ties resolve to the lowest class id") {
    Dataset train = labeled({{0.0}, {1.0}}, {0, 1}, {"f0"});
    ClassifierConfig cfg;
    cfg.tree_min_leaf = 2;  // forbids the split, forcing a tied root leaf
    TrainedModel model = fit(ClassifierKind::Tree, train, cfg);
    Eigen::MatrixXd query(2, 1);
    query << 0.0, 1.0;
    CHECK(model.predict(query) == std::vector<int>{0, 0});
}

TEST_CASE("single-class training data yields a constant predictor") {
    const Dataset blobs = fixtures::make_blobs(6, 3, 2, 5.0, 4);
    std::vector<int> class1_rows;
    for (int r = 0; r < blobs.rows(); ++r) {
        if (blobs.labels[static_cast<std::size_t>(r)] == 1) class1_rows.push_back(r);
    }
    const Dataset single = blobs.subset_rows(class1_rows);
    Eigen::MatrixXd far = Eigen::MatrixXd::Constant(3, 3, -100.0);
    for (ClassifierKind kind : kAllClassifierKinds) {
        const TrainedModel model = fit(kind, single, fast_cfg());
        const auto preds = model.predict(far);
        CHECK(preds == std::vector<int>{1, 1, 1});
    }
}

TEST_CASE("discriminant and kernel bayes are invariant to feature rescaling") {
    const Dataset train = fixtures::make_blobs(12, 3, 2, 3.0, 5);
    const Dataset probe = fixtures::make_blobs(8, 3, 2, 3.0, 6);

    Dataset scaled_train = train;
    Dataset scaled_probe = probe;
    scaled_train.samples.col(1) *= 1000.0;
    scaled_probe.samples.col(1) *= 1000.0;

    for (ClassifierKind kind :
         {ClassifierKind::Discr, ClassifierKind::NaiveBayes}) {
        const TrainedModel plain = fit(kind, train, {});
        const TrainedModel scaled = fit(kind, scaled_train, {});
        CHECK_MESSAGE(plain.predict(probe.samples) ==
                          scaled.predict(scaled_probe.samples),
                      to_string(kind));
    }
}

TEST_CASE("fits are deterministic per seed") {
    const Dataset train = fixtures::make_blobs(10, 4, 3, 3.0, 7);
    const Dataset probe = fixtures::make_blobs(6, 4, 3, 3.0, 8);
    for (ClassifierKind kind : kAllClassifierKinds) {
        const TrainedModel a = fit(kind, train, fast_cfg());
        const TrainedModel b = fit(kind, train, fast_cfg());
        CHECK_MESSAGE(a.predict(probe.samples) == b.predict(probe.samples),
                      to_string(kind));
    }
}

TEST_CASE("predict validates the feature dimension") {
    const Dataset train = fixtures::make_blobs(5, 3, 2, 5.0, 9);
    const TrainedModel model = fit(ClassifierKind::Knn, train, {});
    Eigen::MatrixXd wrong(2, 4);
    wrong.setZero();
    CHECK_THROWS_AS(model.predict(wrong), ValidationError);
}

TEST_CASE("config validation rejects out-of-range values") {
    const Dataset train = fixtures::make_blobs(5, 2, 2, 5.0, 10);
    ClassifierConfig bad;
    bad.knn_k = 0;
    CHECK_THROWS_AS(fit(ClassifierKind::Knn, train, bad), ConfigError);
    bad = {};
    bad.svm_kernel = "linear";
    CHECK_THROWS_AS(fit(ClassifierKind::Svm, train, bad), ConfigError);
    bad = {};
    bad.mlp_epochs = 0;
    CHECK_THROWS_AS(fit(ClassifierKind::Mlp, train, bad), ConfigError);
    bad = {};
    bad.nb_bandwidth_rule = "fixed";
    CHECK_THROWS_AS(fit(ClassifierKind::NaiveBayes, train, bad), ConfigError);
}

TEST_CASE("cv accuracy is perfect on separable data and near chance on noise") {
    const Dataset blobs = fixtures::make_blobs(15, 3, 2, 9.0, 12);
    CHECK(cv_accuracy(ClassifierKind::Knn, blobs, 5, {}, 1) == doctest::Approx(1.0));
    CHECK(cv_accuracy(ClassifierKind::Discr, blobs, 5, {}, 1) ==
          doctest::Approx(1.0));

    // permuted labels: mean accuracy over seeds should hover near 0.5
    double total = 0.0;
    const int trials = 20;
    for (int s = 0; s < trials; ++s) {
        Dataset shuffled = blobs;
        Rng rng(derive_seed(static_cast<std::uint64_t>(s), "permute"));
        shuffle_in_place(shuffled.labels, rng);
        bool both = false;
        for (int y : shuffled.labels) {
            if (y != shuffled.labels[0]) both = true;
        }
        if (!both) continue;
        total += cv_accuracy(ClassifierKind::Knn, shuffled, 5, {},
                             static_cast<std::uint64_t>(s));
    }
    const double mean = total / trials;
    CHECK(mean > 0.35);
    CHECK(mean < 0.65);
}

TEST_CASE("cv accuracy surfaces fold warnings") {
    Dataset ds = labeled({{0.0}, {0.1}, {5.0}, {5.1}, {5.2}, {5.3}, {5.4}, {5.5}},
                         {0, 0, 1, 1, 1, 1, 1, 1}, {"f0"});
    std::vector<std::string> warnings;
    cv_accuracy(ClassifierKind::Knn, ds, 5, {}, 1, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("fewer than k=5") != std::string::npos);
}

TEST_CASE("models serialize and round-trip through json") {
    const Dataset train = fixtures::make_blobs(8, 3, 2, 4.0, 13);
    const Dataset probe = fixtures::make_blobs(5, 3, 2, 4.0, 14);
    for (ClassifierKind kind : kAllClassifierKinds) {
        const TrainedModel model = fit(kind, train, fast_cfg());
        const nlohmann::json blob = model_to_json(model);
        const TrainedModel revived = model_from_json(blob);
        CHECK(revived.kind == model.kind);
        CHECK(revived.classes_seen == model.classes_seen);
        CHECK_MESSAGE(revived.predict(probe.samples) == model.predict(probe.samples),
                      to_string(kind));
    }
    CHECK_THROWS_AS(model_from_json(nlohmann::json{{"format", 9}}), ParseError);
}

TEST_CASE("classifier kind names round-trip") {
    for (ClassifierKind kind : kAllClassifierKinds) {
        CHECK(classifier_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(classifier_kind_from_string("forest"), ConfigError);
}
