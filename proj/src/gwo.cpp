#include "eode/gwo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "eode/common.hpp"

namespace eode::gwo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string mask_key(const Mask& mask) {
    std::string key(mask.size(), '0');
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) key[i] = '1';
    }
    return key;
}

// Shared driver for the mask and continuous variants. `evaluate` must be
// deterministic and never return NaN (callers sanitize).
struct Driver {
    int dim;
    GwoParams params;
    std::function<double(const Eigen::VectorXd&)> evaluate;

    GwoResult run() const {
        WolfPopulation pop = init_population(params.population, dim, params.seed);
        pop.max_t = params.iterations;

        GwoResult result;
        result.best_fitness = kInf;

        auto evaluate_all = [&](WolfPopulation& p) {
            for (int i = 0; i < params.population; ++i) {
                p.fitness(i) = evaluate(p.positions.row(i).transpose());
            }
            rank_leaders(p);
            if (p.fitness(p.alpha) < result.best_fitness ||
                result.best_position.size() == 0) {
                result.best_fitness = p.fitness(p.alpha);
                result.best_position = p.positions.row(p.alpha).transpose();
            }
        };

        auto record = [&] {
            result.history.push_back(result.best_fitness);
            result.history_bits.push_back(
                popcount(binarize(result.best_position, params.theta)));
        };

        evaluate_all(pop);
        record();
        for (int t = 1; t <= params.iterations; ++t) {
            pop = update_positions(pop);
            evaluate_all(pop);
            record();
        }
        return result;
    }
};

}  // namespace

void GwoParams::validate() const {
    if (population < 3) throw ConfigError("population must be >= 3");
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must be in (0,1)");
}

double convergence_factor(int t, int max_t) {
    return 2.0 - 2.0 * static_cast<double>(t) / static_cast<double>(max_t);
}

double leader_step(double leader, double wolf, double a, double r1, double r2) {
    const double big_a = 2.0 * a * r1 - a;
    const double big_c = 2.0 * r2;
    const double dist = std::abs(big_c * leader - wolf);
    return leader - big_a * dist;
}

Mask binarize(const Eigen::VectorXd& position, double theta) {
    Mask mask(static_cast<std::size_t>(position.size()), 0);
    for (Eigen::Index i = 0; i < position.size(); ++i) {
        if (position(i) >= theta) mask[static_cast<std::size_t>(i)] = 1;
    }
    return mask;
}

WolfPopulation init_population(int population, int dim, std::uint64_t seed) {
    if (population < 3) throw ConfigError("population must be >= 3");
    if (dim < 1) throw ConfigError("dimension must be >= 1");
    WolfPopulation pop;
    pop.positions.resize(population, dim);
    pop.fitness = Eigen::VectorXd::Constant(population, kInf);
    pop.seed = seed;
    for (int i = 0; i < population; ++i) {
        Rng rng(derive_seed(seed, "gwo-init", static_cast<std::uint64_t>(i)));
        for (int j = 0; j < dim; ++j) pop.positions(i, j) = rng.u01();
    }
    return pop;
}

void rank_leaders(WolfPopulation& pop) {
    const int n = static_cast<int>(pop.fitness.size());
    int a = -1;
    int b = -1;
    int d = -1;
    auto better = [&](int lhs, int rhs) {
        if (rhs < 0) return true;
        if (pop.fitness(lhs) != pop.fitness(rhs)) return pop.fitness(lhs) < pop.fitness(rhs);
        return lhs < rhs;
    };
    for (int i = 0; i < n; ++i) {
        if (better(i, a)) {
            d = b;
            b = a;
            a = i;
        } else if (better(i, b)) {
            d = b;
            b = i;
        } else if (better(i, d)) {
            d = i;
        }
    }
    pop.alpha = a;
    pop.beta = b;
    pop.delta = d;
}

WolfPopulation update_positions(const WolfPopulation& pop) {
    WolfPopulation next = pop;
    next.t = pop.t + 1;
    next.fitness.setConstant(kInf);

    const double a = convergence_factor(next.t, pop.max_t);
    const Eigen::VectorXd lead_a = pop.positions.row(pop.alpha).transpose();
    const Eigen::VectorXd lead_b = pop.positions.row(pop.beta).transpose();
    const Eigen::VectorXd lead_d = pop.positions.row(pop.delta).transpose();

    const int population = static_cast<int>(pop.positions.rows());
    const int dim = static_cast<int>(pop.positions.cols());
    for (int i = 0; i < population; ++i) {
        const std::uint64_t stream =
            (static_cast<std::uint64_t>(next.t) << 32) | static_cast<std::uint64_t>(i);
        Rng rng(derive_seed(pop.seed, "gwo-step", stream));
        for (int j = 0; j < dim; ++j) {
            const double x = pop.positions(i, j);
            double sum = 0.0;
            for (const Eigen::VectorXd* lead : {&lead_a, &lead_b, &lead_d}) {
                const double r1 = rng.u01();
                const double r2 = rng.u01();
                sum += leader_step((*lead)(j), x, a, r1, r2);
            }
            next.positions(i, j) = std::clamp(sum / 3.0, 0.0, 1.0);
        }
    }
    return next;
}

GwoResult optimize(int dim, const MaskObjective& objective, const GwoParams& params) {
    params.validate();
    if (dim < 1) throw ConfigError("dimension must be >= 1");

    std::unordered_map<std::string, double> cache;
    long nan_count = 0;
    Driver driver;
    driver.dim = dim;
    driver.params = params;
    driver.evaluate = [&](const Eigen::VectorXd& position) {
        const Mask mask = binarize(position, params.theta);
        double value;
        if (params.use_cache) {
            const std::string key = mask_key(mask);
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
            value = objective(mask);
            if (std::isnan(value)) {
                ++nan_count;
                value = kInf;
            }
            cache.emplace(std::move(key), value);
        } else {
            value = objective(mask);
            if (std::isnan(value)) {
                ++nan_count;
                value = kInf;
            }
        }
        return value;
    };

    GwoResult result = driver.run();
    result.best_mask = binarize(result.best_position, params.theta);
    if (nan_count > 0) {
        result.warnings.push_back("objective returned NaN for " +
                                  std::to_string(nan_count) +
                                  " evaluations; treated as +inf");
    }
    return result;
}

GwoResult optimize_position(int dim, const PositionObjective& objective,
                            const GwoParams& params) {
    params.validate();
    if (dim < 1) throw ConfigError("dimension must be >= 1");

    long nan_count = 0;
    Driver driver;
    driver.dim = dim;
    driver.params = params;
    driver.evaluate = [&](const Eigen::VectorXd& position) {
        double value = objective(position);
        if (std::isnan(value)) {
            ++nan_count;
            value = kInf;
        }
        return value;
    };

    GwoResult result = driver.run();
    result.best_mask = binarize(result.best_position, params.theta);
    if (nan_count > 0) {
        result.warnings.push_back("objective returned NaN for " +
                                  std::to_string(nan_count) +
                                  " evaluations; treated as +inf");
    }
    return result;
}

}  // namespace eode::gwo
