#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "eode/common.hpp"
#include "eode/gwo.hpp"

using namespace eode;
using namespace eode::gwo;

TEST_CASE("convergence factor shrinks linearly from 2 to 0") {
    CHECK(convergence_factor(0, 50) == doctest::Approx(2.0));
    CHECK(convergence_factor(50, 50) == doctest::Approx(0.0));
    CHECK(convergence_factor(25, 50) == doctest::Approx(1.0));
}

TEST_CASE("leader step matches the hand-evaluated hunting equations") {
    // a=2, r1=0.5 makes A zero, so the step lands exactly on the leader
    CHECK(leader_step(0.8, 0.4, 2.0, 0.5, 0.5) == doctest::Approx(0.8));
    // a=2, r1=1.0, r2=0.5: A=2, C=1, D=|0.8-0.4|=0.4, result 0.8-0.8=0.0
    CHECK(leader_step(0.8, 0.4, 2.0, 1.0, 0.5) == doctest::Approx(0.0));
    // a=0 ignores the distance entirely
    CHECK(leader_step(0.3, 0.9, 0.0, 0.77, 0.13) == doctest::Approx(0.3));
}

TEST_CASE("binarize thresholds with >= at the boundary") {
    Eigen::VectorXd pos(3);
    pos << 0.5, 0.49, 1.0;
    CHECK(binarize(pos, 0.5) == Mask{1, 0, 1});
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(4);
    CHECK(binarize(zeros, 0.5) == Mask{0, 0, 0, 0});
    Eigen::VectorXd two(2);
    two << 0.3, 0.7;
    CHECK(binarize(two, 0.5) == Mask{0, 1});
}

TEST_CASE("init population is deterministic, bounded, and needs 3 wolves") {
    WolfPopulation a = init_population(3, 2, 77);
    WolfPopulation b = init_population(3, 2, 77);
    CHECK((a.positions.array() == b.positions.array()).all());
    CHECK((a.positions.array() >= 0.0).all());
    CHECK((a.positions.array() <= 1.0).all());

    WolfPopulation c = init_population(3, 2, 78);
    CHECK(!(c.positions.array() == a.positions.array()).all());

    CHECK_THROWS_AS(init_population(2, 2, 1), ConfigError);
    CHECK_THROWS_AS(init_population(3, 0, 1), ConfigError);
}

TEST_CASE("rank_leaders orders by fitness then index") {
    WolfPopulation pop;
    pop.positions = Eigen::MatrixXd::Zero(4, 1);
    pop.fitness = Eigen::VectorXd(4);
    pop.fitness << 1.0, 0.0, 0.0, 2.0;
    rank_leaders(pop);
    CHECK(pop.alpha == 1);
    CHECK(pop.beta == 2);
    CHECK(pop.delta == 0);
    CHECK(pop.fitness(pop.alpha) <= pop.fitness(pop.beta));
    CHECK(pop.fitness(pop.beta) <= pop.fitness(pop.delta));
}

TEST_CASE("the final iteration collapses wolves onto the leader mean") {
    WolfPopulation pop = init_population(5, 3, 9);
    pop.max_t = 10;
    pop.t = 9;  // next update runs with a = 0
    pop.fitness = Eigen::VectorXd(5);
    pop.fitness << 0.1, 0.2, 0.3, 0.4, 0.5;
    rank_leaders(pop);

    const Eigen::VectorXd expected =
        ((pop.positions.row(0) + pop.positions.row(1) + pop.positions.row(2)) / 3.0)
            .transpose();
    WolfPopulation next = update_positions(pop);
    CHECK(next.t == 10);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(next.positions(i, j) ==
                  doctest::Approx(std::clamp(expected(j), 0.0, 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("the origin is a fixed point when everyone sits on it") {
    WolfPopulation pop = init_population(4, 2, 1);
    pop.positions.setZero();
    pop.max_t = 5;
    pop.fitness = Eigen::VectorXd::Constant(4, 1.0);
    rank_leaders(pop);
    WolfPopulation next = update_positions(pop);
    CHECK((next.positions.array() == 0.0).all());
}

TEST_CASE("positions stay clamped through many updates") {
    WolfPopulation pop = init_population(6, 4, 3);
    pop.max_t = 8;
    for (int t = 0; t < 8; ++t) {
        pop.fitness = pop.positions.rowwise().sum();
        rank_leaders(pop);
        pop = update_positions(pop);
        CHECK((pop.positions.array() >= 0.0).all());
        CHECK((pop.positions.array() <= 1.0).all());
    }
}

TEST_CASE("optimize drives popcount down and keeps a monotone history") {
    GwoParams params;
    params.population = 30;
    params.iterations = 50;
    params.seed = 5;
    auto objective = [](const Mask& mask) {
        return static_cast<double>(popcount(mask)) / static_cast<double>(mask.size());
    };
    GwoResult result = optimize(20, objective, params);

    CHECK(result.best_fitness <= 0.1);
    CHECK(result.history.size() == 51);
    CHECK(result.history_bits.size() == 51);
    for (std::size_t i = 1; i < result.history.size(); ++i) {
        CHECK(result.history[i] <= result.history[i - 1]);
    }
    CHECK(result.best_fitness == doctest::Approx(result.history.back()));
    CHECK(result.best_mask == binarize(result.best_position, params.theta));
}

TEST_CASE("constant fitness yields a flat history") {
    GwoParams params;
    params.population = 5;
    params.iterations = 10;
    params.seed = 2;
    GwoResult result = optimize(4, [](const Mask&) { return 0.25; }, params);
    for (double h : result.history) CHECK(h == doctest::Approx(0.25));
}

TEST_CASE("the mask cache is transparent to the result") {
    GwoParams with_cache;
    with_cache.population = 12;
    with_cache.iterations = 15;
    with_cache.seed = 31;
    GwoParams without_cache = with_cache;
    without_cache.use_cache = false;

    auto objective = [](const Mask& mask) {
        double v = 0.0;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask[i]) v += static_cast<double>(i + 1);
        }
        return std::abs(v - 7.0);
    };
    GwoResult a = optimize(6, objective, with_cache);
    GwoResult b = optimize(6, objective, without_cache);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.best_mask == b.best_mask);
    CHECK(a.history == b.history);
}

TEST_CASE("the cache collapses duplicate mask evaluations") {
    GwoParams params;
    params.population = 20;
    params.iterations = 20;
    params.seed = 4;
    int calls = 0;
    auto objective = [&calls](const Mask& mask) {
        ++calls;
        return static_cast<double>(popcount(mask));
    };
    optimize(3, objective, params);
    CHECK(calls <= 8);  // only 2^3 distinct masks exist
}

TEST_CASE("NaN fitness is treated as +inf with a warning") {
    GwoParams params;
    params.population = 8;
    params.iterations = 5;
    params.seed = 6;
    auto objective = [](const Mask& mask) {
        if (!mask.empty() && mask[0]) return std::numeric_limits<double>::quiet_NaN();
        return static_cast<double>(popcount(mask));
    };
    GwoResult result = optimize(4, objective, params);
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("NaN") != std::string::npos);
    CHECK(std::isfinite(result.best_fitness));
    CHECK(result.best_mask[0] == 0);
}

TEST_CASE("parameter validation") {
    GwoParams params;
    params.population = 2;
    CHECK_THROWS_AS(params.validate(), ConfigError);
    params = {};
    params.iterations = 0;
    CHECK_THROWS_AS(params.validate(), ConfigError);
    params = {};
    params.theta = 1.0;
    CHECK_THROWS_AS(params.validate(), ConfigError);
    params = {};
    CHECK_THROWS_AS(
        optimize(0, [](const Mask&) { return 0.0; }, params), ConfigError);
}

TEST_CASE("the continuous adapter solves the sphere function") {
    GwoParams params;
    params.population = 30;
    params.iterations = 100;
    params.seed = 17;
    auto sphere = [](const Eigen::VectorXd& g) {
        return (2.0 * g.array() - 1.0).square().sum() / g.size();
    };
    GwoResult result = optimize_position(10, sphere, params);
    CHECK(result.best_fitness < 0.05);
    CHECK(result.best_fitness < result.history.front());
}
