#pragma once

// Reduced-form vector autoregression: equation-by-equation OLS with an
// intercept, information-criterion order selection on a common sample, and
// companion-matrix stability.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tscausal/dataset.hpp"
#include "tscausal/stattests.hpp"

namespace tscausal {

struct VarModel {
    int order = 0;
    std::vector<std::string> variable_names;
    // coefficients[tau-1](i,j): effect of variable j at t-tau on variable i at t.
    std::vector<Eigen::MatrixXd> coefficients;
    Eigen::VectorXd intercept;
    Eigen::MatrixXd residuals;            // (T-p) x n
    Eigen::MatrixXd residual_covariance;  // res'res / (T-p)
};

namespace detail {

// Stacked design [1, x(t-1), ..., x(t-p)] over rows t = start..T-1.
inline Eigen::MatrixXd var_design(const Eigen::MatrixXd& x, int p, Eigen::Index start) {
    const Eigen::Index n = x.cols();
    const Eigen::Index rows = x.rows() - start;
    Eigen::MatrixXd Z(rows, 1 + n * p);
    Z.col(0).setOnes();
    for (Eigen::Index r = 0; r < rows; ++r) {
        Eigen::Index t = start + r;
        for (int tau = 1; tau <= p; ++tau)
            Z.block(r, 1 + (tau - 1) * n, 1, n) = x.row(t - tau);
    }
    return Z;
}

}  // namespace detail

inline VarModel var_fit(const TimeSeriesDataset& ds, int p) {
    const Eigen::Index T = ds.rows();
    const Eigen::Index n = ds.cols();
    if (p < 1) throw std::invalid_argument("var_fit: order must be >= 1");
    if (T - p <= n * p + 1)
        throw std::invalid_argument("var_fit: too few observations for order " +
                                    std::to_string(p));
    const Eigen::MatrixXd& x = ds.values();
    Eigen::MatrixXd Z = detail::var_design(x, p, p);
    Eigen::MatrixXd Y = x.bottomRows(T - p);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
    if (qr.rank() < Z.cols()) throw std::invalid_argument("var_fit: collinear regressors");
    Eigen::MatrixXd beta = qr.solve(Y);  // (1+np) x n

    VarModel m;
    m.order = p;
    m.variable_names = ds.variable_names();
    m.intercept = beta.row(0).transpose();
    for (int tau = 1; tau <= p; ++tau)
        m.coefficients.push_back(beta.middleRows(1 + (tau - 1) * n, n).transpose());
    m.residuals = Y - Z * beta;
    m.residual_covariance = m.residuals.transpose() * m.residuals / double(T - p);
    return m;
}

struct OrderSelection {
    struct Row {
        int order;
        double aic, bic, hqic;
    };
    std::vector<Row> table;
    int chosen_aic = 0, chosen_bic = 0, chosen_hqic = 0;
};

// Criteria ln det(Sigma_p) + penalty * (n^2 p + n) / T_eff evaluated on the
// common sample t = max_p..T-1 so orders are comparable; penalties 2, ln T_eff
// and 2 ln ln T_eff.  Smallest order wins ties.
inline OrderSelection select_order(const TimeSeriesDataset& ds, int max_p) {
    const Eigen::Index T = ds.rows();
    const Eigen::Index n = ds.cols();
    if (max_p < 1) throw std::invalid_argument("select_order: max_p must be >= 1");
    if (T - max_p <= n * max_p + 1)
        throw std::invalid_argument("select_order: too few observations for max_p " +
                                    std::to_string(max_p));
    const Eigen::MatrixXd& x = ds.values();
    const Eigen::Index nobs = T - max_p;
    Eigen::MatrixXd Y = x.bottomRows(nobs);
    Eigen::MatrixXd Zfull = detail::var_design(x, max_p, max_p);

    OrderSelection sel;
    double best_aic = 0, best_bic = 0, best_hqic = 0;
    for (int p = 1; p <= max_p; ++p) {
        Eigen::MatrixXd Z = Zfull.leftCols(1 + n * p);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
        if (qr.rank() < Z.cols())
            throw std::invalid_argument("select_order: collinear regressors at order " +
                                        std::to_string(p));
        Eigen::MatrixXd resid = Y - Z * qr.solve(Y);
        Eigen::MatrixXd sigma = resid.transpose() * resid / double(nobs);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double d = ldlt.vectorD()(i);
            if (!(d > 0.0))
                throw std::runtime_error("select_order: singular residual covariance at order " +
                                         std::to_string(p));
            logdet += std::log(d);
        }
        double params = double(n) * n * p + double(n);
        double aic = logdet + 2.0 * params / double(nobs);
        double bic = logdet + std::log(double(nobs)) * params / double(nobs);
        double hqic = logdet + 2.0 * std::log(std::log(double(nobs))) * params / double(nobs);
        sel.table.push_back({p, aic, bic, hqic});
        if (p == 1) {
            best_aic = aic; best_bic = bic; best_hqic = hqic;
            sel.chosen_aic = sel.chosen_bic = sel.chosen_hqic = 1;
        } else {
            if (aic < best_aic - 1e-12) { best_aic = aic; sel.chosen_aic = p; }
            if (bic < best_bic - 1e-12) { best_bic = bic; sel.chosen_bic = p; }
            if (hqic < best_hqic - 1e-12) { best_hqic = hqic; sel.chosen_hqic = p; }
        }
    }
    return sel;
}

// Spectral radius of the VAR companion matrix; < 1 means stable.
inline double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& coefficients) {
    if (coefficients.empty()) throw std::invalid_argument("companion: no coefficient matrices");
    const Eigen::Index n = coefficients[0].rows();
    const int p = static_cast<int>(coefficients.size());
    for (const auto& A : coefficients)
        if (A.rows() != n || A.cols() != n)
            throw std::invalid_argument("companion: coefficient matrices must be n x n");
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n * p, n * p);
    for (int tau = 0; tau < p; ++tau) comp.block(0, tau * n, n, n) = coefficients[tau];
    if (p > 1)
        comp.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline bool var_is_stable(const VarModel& m) {
    return companion_spectral_radius(m.coefficients) < 1.0;
}

}  // namespace tscausal
