#include <algorithm>
#include <cmath>
#include <set>

#include "eode/common.hpp"
#include "models.hpp"

namespace eode::models {

namespace {

struct SmoOutcome {
    Eigen::VectorXd alpha;
    double bias = 0.0;
};

// Simplified sequential minimal optimization: pick a KKT violator, pair it
// with a random second index, solve the two-variable subproblem analytically.
// One iteration is one KKT examination; iter_limit caps those.
SmoOutcome smo_train(const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                     double c, double tol, int iter_limit, Rng& rng) {
    const Eigen::Index n = k.rows();
    SmoOutcome out;
    out.alpha = Eigen::VectorXd::Zero(n);
    double b = 0.0;

    auto decision_error = [&](Eigen::Index i) {
        return (out.alpha.array() * y.array() * k.col(i).array()).sum() + b - y(i);
    };

    int iters = 0;
    int quiet_passes = 0;
    while (quiet_passes < 5 && iters < iter_limit) {
        int changed = 0;
        for (Eigen::Index i = 0; i < n && iters < iter_limit; ++i) {
            ++iters;
            const double ei = decision_error(i);
            const bool violates = (y(i) * ei < -tol && out.alpha(i) < c) ||
                                  (y(i) * ei > tol && out.alpha(i) > 0.0);
            if (!violates) continue;

            Eigen::Index j = rng.uniform_int(static_cast<int>(n) - 1);
            if (j >= i) ++j;
            const double ej = decision_error(j);

            const double ai_old = out.alpha(i);
            const double aj_old = out.alpha(j);
            double lo;
            double hi;
            if (y(i) != y(j)) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(c, c + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - c);
                hi = std::min(c, ai_old + aj_old);
            }
            if (lo >= hi) continue;

            const double eta = 2.0 * k(i, j) - k(i, i) - k(j, j);
            if (eta >= 0.0) continue;

            double aj = aj_old - y(j) * (ei - ej) / eta;
            aj = std::clamp(aj, lo, hi);
            if (std::abs(aj - aj_old) < 1e-5) continue;
            const double ai = ai_old + y(i) * y(j) * (aj_old - aj);

            const double b1 = b - ei - y(i) * (ai - ai_old) * k(i, i) -
                              y(j) * (aj - aj_old) * k(i, j);
            const double b2 = b - ej - y(i) * (ai - ai_old) * k(i, j) -
                              y(j) * (aj - aj_old) * k(j, j);
            if (ai > 0.0 && ai < c) {
                b = b1;
            } else if (aj > 0.0 && aj < c) {
                b = b2;
            } else {
                b = 0.5 * (b1 + b2);
            }
            out.alpha(i) = ai;
            out.alpha(j) = aj;
            ++changed;
        }
        quiet_passes = changed == 0 ? quiet_passes + 1 : 0;
    }
    out.bias = b;
    return out;
}

}  // namespace

std::shared_ptr<const Model> fit_svm(const Dataset& ds, const ClassifierConfig& cfg) {
    auto model = std::make_shared<SvmModel>();
    model->std_.fit(ds.samples);
    Eigen::MatrixXd z = model->std_.transform(ds.samples);
    model->gamma_ = cfg.svm_gamma > 0.0 ? cfg.svm_gamma : 1.0 / ds.cols();

    std::set<int> seen(ds.labels.begin(), ds.labels.end());
    model->class_ids_.assign(seen.begin(), seen.end());

    const double c = 1.0;
    const double tol = 1e-3;
    std::uint64_t pair_ordinal = 0;
    for (std::size_t a = 0; a < model->class_ids_.size(); ++a) {
        for (std::size_t bb = a + 1; bb < model->class_ids_.size(); ++bb) {
            const int pos = model->class_ids_[a];
            const int neg = model->class_ids_[bb];
            std::vector<int> rows;
            for (int r = 0; r < ds.rows(); ++r) {
                const int lab = ds.labels[static_cast<std::size_t>(r)];
                if (lab == pos || lab == neg) rows.push_back(r);
            }

            const auto m = static_cast<Eigen::Index>(rows.size());
            Eigen::MatrixXd px(m, z.cols());
            Eigen::VectorXd py(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                px.row(i) = z.row(rows[static_cast<std::size_t>(i)]);
                py(i) = ds.labels[static_cast<std::size_t>(
                            rows[static_cast<std::size_t>(i)])] == pos
                            ? 1.0
                            : -1.0;
            }

            Eigen::MatrixXd k(m, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                k(i, i) = 1.0;
                for (Eigen::Index j = i + 1; j < m; ++j) {
                    const double v = std::exp(
                        -model->gamma_ * (px.row(i) - px.row(j)).squaredNorm());
                    k(i, j) = v;
                    k(j, i) = v;
                }
            }

            Rng rng(derive_seed(cfg.seed, "svm-pair", pair_ordinal++));
            SmoOutcome fitted = smo_train(k, py, c, tol, cfg.svm_iter_limit, rng);

            SvmModel::PairClassifier pc;
            pc.pos = pos;
            pc.neg = neg;
            pc.bias = fitted.bias;
            std::vector<Eigen::Index> sv;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (fitted.alpha(i) > 1e-12) sv.push_back(i);
            }
            pc.support.resize(static_cast<Eigen::Index>(sv.size()), z.cols());
            pc.coef.resize(static_cast<Eigen::Index>(sv.size()));
            for (std::size_t i = 0; i < sv.size(); ++i) {
                pc.support.row(static_cast<Eigen::Index>(i)) = px.row(sv[i]);
                pc.coef(static_cast<Eigen::Index>(i)) =
                    fitted.alpha(sv[i]) * py(sv[i]);
            }
            model->pairs_.push_back(std::move(pc));
        }
    }
    return model;
}

std::vector<int> SvmModel::predict(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd z = std_.transform(x);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    std::vector<int> votes(class_ids_.size());
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const auto& pc : pairs_) {
            double f = pc.bias;
            for (Eigen::Index i = 0; i < pc.support.rows(); ++i) {
                f += pc.coef(i) *
                     std::exp(-gamma_ * (pc.support.row(i) - z.row(r)).squaredNorm());
            }
            const int winner = f >= 0.0 ? pc.pos : pc.neg;
            const auto it =
                std::lower_bound(class_ids_.begin(), class_ids_.end(), winner);
            ++votes[static_cast<std::size_t>(it - class_ids_.begin())];
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < votes.size(); ++i) {
            if (votes[i] > votes[best]) best = i;
        }
        out[static_cast<std::size_t>(r)] = class_ids_[best];
    }
    return out;
}

json SvmModel::to_json() const {
    json pair_list = json::array();
    for (const auto& pc : pairs_) {
        pair_list.push_back(json{{"pos", pc.pos},
                                 {"neg", pc.neg},
                                 {"support", matrix_to_json(pc.support)},
                                 {"coef", vector_to_json(pc.coef)},
                                 {"bias", pc.bias}});
    }
    return json{{"impl", "svm"},
                {"standardizer", std_.to_json()},
                {"gamma", gamma_},
                {"pairs", std::move(pair_list)},
                {"class_ids", class_ids_}};
}

std::shared_ptr<const Model> SvmModel::from_json(const json& blob) {
    auto model = std::make_shared<SvmModel>();
    model->std_ = Standardizer::from_json(blob.at("standardizer"));
    model->gamma_ = blob.at("gamma").get<double>();
    model->class_ids_ = blob.at("class_ids").get<std::vector<int>>();
    for (const auto& item : blob.at("pairs")) {
        SvmModel::PairClassifier pc;
        pc.pos = item.at("pos").get<int>();
        pc.neg = item.at("neg").get<int>();
        pc.support = matrix_from_json(item.at("support"));
        pc.coef = vector_from_json(item.at("coef"));
        pc.bias = item.at("bias").get<double>();
        model->pairs_.push_back(std::move(pc));
    }
    return model;
}

}  // namespace eode::models
