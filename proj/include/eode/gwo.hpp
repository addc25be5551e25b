#ifndef EODE_GWO_HPP
#define EODE_GWO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eode/dataset.hpp"

namespace eode::gwo {

struct GwoParams {
    int population = 100;
    int iterations = 50;
    double theta = 0.5;
    std::uint64_t seed = 0;
    bool use_cache = true;  // memoize fitness per mask within one run

    void validate() const;
};

struct WolfPopulation {
    Eigen::MatrixXd positions;  // population x dim, coordinates in [0,1]
    Eigen::VectorXd fitness;    // +inf until evaluated
    int alpha = 0;
    int beta = 1;
    int delta = 2;
    int t = 0;
    int max_t = 0;
    std::uint64_t seed = 0;
};

struct GwoResult {
    Eigen::VectorXd best_position;
    Mask best_mask;
    double best_fitness = 0.0;
    std::vector<double> history;    // best-so-far per iteration, length T+1
    std::vector<int> history_bits;  // bits set in the best mask, per entry
    std::vector<std::string> warnings;
};

using MaskObjective = std::function<double(const Mask&)>;
using PositionObjective = std::function<double(const Eigen::VectorXd&)>;

/// a = 2 - 2t/max_t, the linearly shrinking exploration factor.
double convergence_factor(int t, int max_t);

/// One leader term of the hunting update: A = 2a*r1 - a, C = 2*r2,
/// D = |C*leader - wolf|, result = leader - A*D.
double leader_step(double leader, double wolf, double a, double r1, double r2);

/// bit i = 1 iff position(i) >= theta.
Mask binarize(const Eigen::VectorXd& position, double theta);

WolfPopulation init_population(int population, int dim, std::uint64_t seed);

/// Sets alpha/beta/delta to the three best wolves; ties break to the lower
/// index so ranking is total.
void rank_leaders(WolfPopulation& pop);

/// Moves every wolf (leaders included) toward the three current leaders and
/// clamps to [0,1]. Advances t and invalidates fitness.
WolfPopulation update_positions(const WolfPopulation& pop);

GwoResult optimize(int dim, const MaskObjective& objective, const GwoParams& params);

/// Continuous variant used by tests and benchmarks: the objective sees the
/// raw position instead of a binarized mask.
GwoResult optimize_position(int dim, const PositionObjective& objective,
                            const GwoParams& params);

}  // namespace eode::gwo

#endif
