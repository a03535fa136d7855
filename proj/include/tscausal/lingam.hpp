#pragma once

// LiNGAM machinery for instantaneous structure: symmetric FastICA with a tanh
// contrast, row permutation/scaling of the unmixing matrix via minimum-cost
// assignment, causal-order search, and OLS re-estimation with pruning and
// domain-knowledge constraints.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tscausal/hungarian.hpp"
#include "tscausal/knowledge.hpp"
#include "tscausal/stattests.hpp"

namespace tscausal {

struct IcaOptions {
    double tol = 1e-6;
    int max_iter = 1000;
    uint64_t seed = 0;
    int restarts = 5;
};

struct IcaResult {
    Eigen::MatrixXd unmixing;   // acts on row-centered data: S = unmixing * Xc
    Eigen::MatrixXd whitening;
    bool converged = false;
    int iterations = 0;                  // iterations of the returned attempt
    std::vector<int> restart_iterations; // per-attempt iteration counts
};

namespace detail {

// W <- (W W')^(-1/2) W, making the rows an orthonormal set.
inline Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose());
    if (es.eigenvalues().minCoeff() <= 1e-14)
        throw std::runtime_error("fastica: degenerate unmixing candidate");
    Eigen::VectorXd inv_sqrt = es.eigenvalues().array().rsqrt();
    return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose() * w;
}

}  // namespace detail

// Symmetric fixed-point FastICA on x (n x T, rows are variables).  Converged
// when no row direction changes by more than tol between iterations; up to
// `restarts` reseeded attempts, first convergent attempt wins.
inline IcaResult fastica(const Eigen::MatrixXd& x, const IcaOptions& opt = {}) {
    const Eigen::Index n = x.rows();
    const Eigen::Index T = x.cols();
    if (n < 2) throw std::invalid_argument("fastica: need at least 2 variables");
    if (T <= 10 * n) throw std::invalid_argument("fastica: need more than 10n samples");
    if (!(opt.tol > 0.0) || opt.max_iter < 1 || opt.restarts < 1)
        throw std::invalid_argument("fastica: bad options");

    Eigen::VectorXd mean = x.rowwise().mean();
    Eigen::MatrixXd xc = x.colwise() - mean;
    for (Eigen::Index i = 0; i < n; ++i)
        if (xc.row(i).cwiseAbs().maxCoeff() <= 0.0)
            throw std::invalid_argument("fastica: constant row " + std::to_string(i));

    Eigen::MatrixXd cov = xc * xc.transpose() / double(T);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff())
        throw std::invalid_argument("fastica: degenerate covariance (collinear rows)");
    Eigen::MatrixXd whitening = es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
                                es.eigenvectors().transpose();
    Eigen::MatrixXd z = whitening * xc;

    IcaResult res;
    res.whitening = whitening;
    for (int attempt = 0; attempt < opt.restarts; ++attempt) {
        std::mt19937_64 rng(opt.seed + static_cast<uint64_t>(attempt));
        std::normal_distribution<double> gauss;
        Eigen::MatrixXd w(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) w(i, j) = gauss(rng);
        w = detail::symmetric_decorrelation(w);

        bool converged = false;
        int it = 0;
        while (it < opt.max_iter) {
            ++it;
            Eigen::MatrixXd g = (w * z).array().tanh();
            Eigen::VectorXd gprime_mean = (1.0 - g.array().square()).rowwise().mean();
            Eigen::MatrixXd w1 = g * z.transpose() / double(T) - gprime_mean.asDiagonal() * w;
            w1 = detail::symmetric_decorrelation(w1);
            double lim = ((w1 * w.transpose()).diagonal().cwiseAbs().array() - 1.0)
                             .abs()
                             .maxCoeff();
            w = w1;
            if (lim < opt.tol) {
                converged = true;
                break;
            }
        }
        res.restart_iterations.push_back(it);
        res.iterations = it;
        res.unmixing = w * whitening;
        if (converged) {
            res.converged = true;
            break;
        }
    }
    return res;
}

// Permutes rows so the diagonal minimizes sum(1/|W_ii|) (Hungarian assignment),
// then rescales each row to a unit diagonal.
inline Eigen::MatrixXd permute_and_scale(const Eigen::MatrixXd& w) {
    const Eigen::Index n = w.rows();
    if (w.cols() != n) throw std::invalid_argument("permute_and_scale: matrix must be square");
    const double sentinel = 1e30;
    Eigen::MatrixXd cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double a = std::fabs(w(i, j));
            cost(i, j) = a > 0.0 ? 1.0 / a : sentinel;
        }
    std::vector<int> col_of_row = solve_assignment(cost);
    std::vector<int> row_at(n);
    for (Eigen::Index i = 0; i < n; ++i) row_at[col_of_row[i]] = static_cast<int>(i);

    Eigen::MatrixXd out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = w(row_at[j], j);
        if (d == 0.0)
            throw std::runtime_error("permute_and_scale: assignment leaves a zero diagonal");
        out.row(j) = w.row(row_at[j]) / d;
        out(j, j) = 1.0;
    }
    return out;
}

namespace detail {

inline double upper_triangle_mass(const Eigen::MatrixXd& b, const std::vector<int>& order) {
    double mass = 0.0;
    for (size_t k = 0; k < order.size(); ++k)
        for (size_t l = k + 1; l < order.size(); ++l)
            mass += b(order[k], order[l]) * b(order[k], order[l]);
    return mass;
}

// Exhaustive search over permutations minimizing the squared mass above the
// diagonal of the reordered matrix; ties resolved toward the lexicographically
// first order.
inline std::vector<int> exhaustive_causal_order(const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(b.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_mass = upper_triangle_mass(b, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        double mass = upper_triangle_mass(b, perm);
        if (mass < best_mass - 1e-15) {
            best_mass = mass;
            best = perm;
        }
    }
    return best;
}

// Greedy fallback for n > 8: repeatedly pick as next the variable with the
// least incoming squared mass from the still-unplaced set.
inline std::vector<int> greedy_causal_order(const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(b.rows());
    std::vector<int> remaining(n), order;
    std::iota(remaining.begin(), remaining.end(), 0);
    while (!remaining.empty()) {
        int best = remaining[0];
        double best_mass = std::numeric_limits<double>::infinity();
        for (int cand : remaining) {
            double mass = 0.0;
            for (int other : remaining)
                if (other != cand) mass += b(cand, other) * b(cand, other);
            if (mass < best_mass - 1e-15) {
                best_mass = mass;
                best = cand;
            }
        }
        order.push_back(best);
        remaining.erase(std::find(remaining.begin(), remaining.end(), best));
    }
    return order;
}

}  // namespace detail

struct B0Options {
    IcaOptions ica;
    double prune_threshold = 0.05;
    double gauss_alpha = 0.05;          // JB level for the Gaussianity warning
    bool allow_approximate_order = false;
    Eigen::VectorXd scale;              // optional stds for standardized pruning
};

struct InstantaneousModel {
    Eigen::MatrixXd b0;          // final: triangular in causal_order, knowledge, pruned
    Eigen::MatrixXd b0_raw;      // I - W'' straight from ICA, before any zeroing
    std::vector<int> causal_order;  // causal_order[k] = variable at position k
    // True where a coefficient the causal order permits was forced to zero
    // (knowledge exclusion or threshold pruning); structural upper-triangle
    // zeros stay false.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> pruned;
    IcaResult ica;
    std::vector<std::string> warnings;
};

// Instantaneous LiNGAM on residuals (T x n): ICA, permutation/scaling,
// causal-order search, then OLS re-estimation along the order with
// knowledge-forbidden regressors excluded and standardized coefficients below
// prune_threshold zeroed.  knowledge uses lag-0 entries only.
inline InstantaneousModel estimate_b0(const Eigen::MatrixXd& residuals,
                                      const IndexedKnowledge& knowledge,
                                      const B0Options& opt = {}) {
    const Eigen::Index T = residuals.rows();
    const Eigen::Index n = residuals.cols();
    if (n < 2) throw std::invalid_argument("estimate_b0: need at least 2 variables");
    if (T <= 10 * n) throw std::invalid_argument("estimate_b0: need more than 10n rows");
    if (knowledge.n != 0 && knowledge.n != n)
        throw std::invalid_argument("estimate_b0: knowledge resolved for wrong width");
    if (static_cast<int>(n) > 8 && !opt.allow_approximate_order)
        throw std::invalid_argument(
            "estimate_b0: n > 8 requires allow_approximate_order (exhaustive search too large)");

    InstantaneousModel model;

    auto jb = jarque_bera(residuals);
    int non_gaussian = 0;
    for (const auto& col : jb.columns)
        if (col.p_value < opt.gauss_alpha) ++non_gaussian;
    if (non_gaussian < n - 1)
        model.warnings.push_back(
            "only " + std::to_string(non_gaussian) + " of " + std::to_string(n) +
            " residual columns reject normality; instantaneous structure may be unidentifiable");

    model.ica = fastica(residuals.transpose(), opt.ica);
    if (!model.ica.converged) {
        std::string trace;
        for (size_t i = 0; i < model.ica.restart_iterations.size(); ++i)
            trace += (i ? "," : "") + std::to_string(model.ica.restart_iterations[i]);
        model.warnings.push_back("ICA failed to converge after " +
                                 std::to_string(model.ica.restart_iterations.size()) +
                                 " attempts (iterations " + trace + ")");
    }

    Eigen::MatrixXd w = permute_and_scale(model.ica.unmixing);
    model.b0_raw = Eigen::MatrixXd::Identity(n, n) - w;

    model.causal_order = (static_cast<int>(n) > 8)
                             ? detail::greedy_causal_order(model.b0_raw)
                             : detail::exhaustive_causal_order(model.b0_raw);
    std::vector<int> position(n);
    for (size_t k = 0; k < model.causal_order.size(); ++k)
        position[model.causal_order[k]] = static_cast<int>(k);

    for (const auto& [cause, effect, lag] : knowledge.required) {
        if (lag != 0) continue;
        if (position[cause] >= position[effect])
            throw std::invalid_argument(
                "estimate_b0: required edge " + std::to_string(cause) + " -> " +
                std::to_string(effect) + " contradicts the estimated causal order");
    }

    Eigen::VectorXd scale;
    if (opt.scale.size() == n) {
        scale = opt.scale;
    } else {
        Eigen::VectorXd mean = residuals.colwise().mean();
        scale = ((residuals.rowwise() - mean.transpose()).array().square().colwise().sum() /
                 double(T - 1))
                    .sqrt();
    }

    model.b0 = Eigen::MatrixXd::Zero(n, n);
    model.pruned = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);

    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<int> regressors;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (position[j] >= position[i]) continue;
            if (knowledge.is_forbidden(static_cast<int>(j), static_cast<int>(i), 0)) {
                model.pruned(i, j) = true;
                double raw_std = std::fabs(model.b0_raw(i, j)) * scale(j) / scale(i);
                if (raw_std >= opt.prune_threshold)
                    model.warnings.push_back("knowledge constraint binding: forbidden edge " +
                                             std::to_string(j) + " -> " + std::to_string(i) +
                                             " suppressed a standardized coefficient of " +
                                             std::to_string(raw_std));
                continue;
            }
            regressors.push_back(static_cast<int>(j));
        }
        if (regressors.empty()) continue;
        Eigen::MatrixXd X(T, regressors.size() + 1);
        X.col(0).setOnes();
        for (size_t c = 0; c < regressors.size(); ++c)
            X.col(c + 1) = residuals.col(regressors[c]);
        OlsFit fit = ols(residuals.col(i), X);
        for (size_t c = 0; c < regressors.size(); ++c)
            model.b0(i, regressors[c]) = fit.coefficients(c + 1);
    }

    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (position[j] >= position[i] || model.b0(i, j) == 0.0) continue;
            if (knowledge.is_required(static_cast<int>(j), static_cast<int>(i), 0)) continue;
            double standardized = std::fabs(model.b0(i, j)) * scale(j) / scale(i);
            if (standardized < opt.prune_threshold) {
                model.b0(i, j) = 0.0;
                model.pruned(i, j) = true;
            }
        }

    return model;
}

}  // namespace tscausal
