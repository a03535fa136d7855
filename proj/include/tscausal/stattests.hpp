#pragma once

// Regression-based test statistics: OLS with t-values, the augmented
// Dickey-Fuller unit-root test with MacKinnon response-surface p-values,
// Jarque-Bera normality, and partial-correlation conditional independence.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tscausal/distributions.hpp"

namespace tscausal {

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;
    Eigen::VectorXd t_values;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    double sigma2 = 0.0;  // rss / dof
    int dof = 0;          // rows - columns
};

inline OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    if (X.rows() != y.size()) throw std::invalid_argument("ols: row mismatch");
    if (X.rows() <= X.cols()) throw std::invalid_argument("ols: need more rows than regressors");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) throw std::invalid_argument("ols: rank-deficient design matrix");

    OlsFit fit;
    fit.coefficients = qr.solve(y);
    fit.residuals = y - X * fit.coefficients;
    fit.rss = fit.residuals.squaredNorm();
    fit.dof = static_cast<int>(X.rows() - X.cols());
    fit.sigma2 = fit.rss / fit.dof;
    Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    fit.standard_errors = (fit.sigma2 * xtx_inv.diagonal().array()).sqrt();
    fit.t_values = fit.coefficients.array() / fit.standard_errors.array();
    return fit;
}

enum class AdfSpec { nc, c, ct, ctt };

inline const char* to_string(AdfSpec s) {
    switch (s) {
        case AdfSpec::nc: return "nc";
        case AdfSpec::c: return "c";
        case AdfSpec::ct: return "ct";
        case AdfSpec::ctt: return "ctt";
    }
    return "?";
}

namespace detail {

// MacKinnon (1994) response-surface approximation for the single-series
// Dickey-Fuller tau distribution.  Below tau_min the p-value saturates at 0,
// above tau_max at 1; in between a quadratic (left of tau_star) or cubic
// (right of it) in tau feeds the normal CDF.
struct MacKinnonSurface {
    double tau_star, tau_min, tau_max;
    double small[3];
    double large[4];
};

inline const MacKinnonSurface& mackinnon_surface(AdfSpec spec) {
    static const MacKinnonSurface nc{-1.04, -19.04, std::numeric_limits<double>::infinity(),
                                     {0.6344, 1.2378, 0.032496},
                                     {0.4797, 0.93557, -0.06999, 0.033066}};
    static const MacKinnonSurface c{-1.61, -18.83, 2.74,
                                    {2.1659, 1.4412, 0.038269},
                                    {1.7339, 0.93202, -0.12745, -0.010368}};
    static const MacKinnonSurface ct{-2.89, -16.18, 0.7,
                                     {3.2512, 1.6047, 0.049588},
                                     {2.5261, 0.61654, -0.37956, -0.060285}};
    static const MacKinnonSurface ctt{-3.21, -17.17, 0.54,
                                      {4.0003, 1.658, 0.048288},
                                      {3.0778, 0.49529, -0.41477, -0.059359}};
    switch (spec) {
        case AdfSpec::nc: return nc;
        case AdfSpec::c: return c;
        case AdfSpec::ct: return ct;
        case AdfSpec::ctt: return ctt;
    }
    throw std::invalid_argument("unknown ADF spec");
}

}  // namespace detail

inline double mackinnon_p_value(double tau, AdfSpec spec) {
    const auto& s = detail::mackinnon_surface(spec);
    if (tau <= s.tau_min) return 0.0;
    if (tau >= s.tau_max) return 1.0;
    double z;
    if (tau <= s.tau_star) {
        z = s.small[0] + tau * (s.small[1] + tau * s.small[2]);
    } else {
        z = s.large[0] + tau * (s.large[1] + tau * (s.large[2] + tau * s.large[3]));
    }
    return normal_cdf(z);
}

struct AdfResult {
    AdfSpec spec;
    double statistic = 0.0;
    double p_value = 1.0;
    int lags = 0;  // lagged-difference terms included
    int nobs = 0;  // rows in the final regression
};

namespace detail {

inline int adf_deterministic_terms(AdfSpec spec) {
    switch (spec) {
        case AdfSpec::nc: return 0;
        case AdfSpec::c: return 1;
        case AdfSpec::ct: return 2;
        case AdfSpec::ctt: return 3;
    }
    return 0;
}

// Regression of dy(t) on y(t-1), k lagged differences and deterministic
// terms, over rows start..end of the difference array.
inline OlsFit adf_regression(const Eigen::VectorXd& y, AdfSpec spec, int k, int start,
                             double* tau) {
    const Eigen::Index tdiff = y.size() - 1;
    const Eigen::Index nobs = tdiff - start;
    const int ndet = adf_deterministic_terms(spec);
    Eigen::MatrixXd X(nobs, 1 + k + ndet);
    Eigen::VectorXd dy(nobs);
    for (Eigen::Index r = 0; r < nobs; ++r) {
        Eigen::Index t = start + r;  // index into the difference array
        dy(r) = y(t + 1) - y(t);
        X(r, 0) = y(t);
        for (int j = 1; j <= k; ++j) X(r, j) = y(t - j + 1) - y(t - j);
        int c = 1 + k;
        if (ndet >= 1) X(r, c++) = 1.0;
        if (ndet >= 2) X(r, c++) = double(r + 1);
        if (ndet >= 3) X(r, c++) = double(r + 1) * double(r + 1);
    }
    OlsFit fit = ols(dy, X);
    if (tau) *tau = fit.t_values(0);
    return fit;
}

}  // namespace detail

// ADF test with AIC lag selection over 0..max_lag on the common sample fixed
// by max_lag, then a refit on the longest sample for the chosen lag.  Default
// max_lag follows the floor(12*(T/100)^(1/4)) rule.
inline AdfResult adf_test(const Eigen::VectorXd& y, AdfSpec spec,
                          std::optional<int> max_lag = std::nullopt) {
    const Eigen::Index T = y.size();
    if (T < 10) throw std::invalid_argument("adf_test: series too short");
    double span = y.maxCoeff() - y.minCoeff();
    if (!(span > 0.0)) throw std::invalid_argument("adf_test: constant series");

    int ml = max_lag ? *max_lag
                     : static_cast<int>(std::floor(12.0 * std::pow(double(T) / 100.0, 0.25)));
    if (ml < 0) throw std::invalid_argument("adf_test: max_lag must be >= 0");
    const int ndet = detail::adf_deterministic_terms(spec);
    if (T < ml + 10 + ndet)
        throw std::invalid_argument("adf_test: series too short for max_lag " +
                                    std::to_string(ml));

    // Lag order by AIC on the sample t = max_lag.. so candidates are
    // comparable, smallest lag wins ties.
    int best_k = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= ml; ++k) {
        OlsFit fit = detail::adf_regression(y, spec, k, ml, nullptr);
        double nobs = double(fit.residuals.size());
        double aic = nobs * std::log(fit.rss / nobs) + 2.0 * double(1 + k + ndet);
        if (aic < best_aic - 1e-12) {
            best_aic = aic;
            best_k = k;
        }
    }

    double tau = 0.0;
    OlsFit fit = detail::adf_regression(y, spec, best_k, best_k, &tau);
    AdfResult res;
    res.spec = spec;
    res.statistic = tau;
    res.p_value = mackinnon_p_value(tau, spec);
    res.lags = best_k;
    res.nobs = static_cast<int>(fit.residuals.size());
    return res;
}

struct NormalityResult {
    double skewness = 0.0;
    double kurtosis = 0.0;  // raw (normal value 3)
    double statistic = 0.0;
    double p_value = 1.0;
};

struct JarqueBeraReport {
    std::vector<NormalityResult> columns;
    double aggregate_statistic = 0.0;
    double aggregate_p_value = 1.0;
};

// JB = n/6 (S^2 + (K-3)^2/4) per column against chi2(2); the aggregate sums
// the column statistics against chi2(2n).
inline JarqueBeraReport jarque_bera(const Eigen::MatrixXd& residuals) {
    const Eigen::Index n = residuals.rows();
    if (n < 8) throw std::invalid_argument("jarque_bera: need at least 8 rows");
    JarqueBeraReport report;
    for (Eigen::Index j = 0; j < residuals.cols(); ++j) {
        Eigen::ArrayXd col = residuals.col(j).array();
        double mean = col.mean();
        Eigen::ArrayXd d = col - mean;
        double m2 = d.square().mean();
        if (!(m2 > 0.0))
            throw std::invalid_argument("jarque_bera: column " + std::to_string(j) +
                                        " is constant");
        double m3 = d.cube().mean();
        double m4 = d.square().square().mean();
        NormalityResult r;
        r.skewness = m3 / std::pow(m2, 1.5);
        r.kurtosis = m4 / (m2 * m2);
        r.statistic = double(n) / 6.0 *
                      (r.skewness * r.skewness +
                       0.25 * (r.kurtosis - 3.0) * (r.kurtosis - 3.0));
        r.p_value = chi_square_sf(r.statistic, 2.0);
        report.columns.push_back(r);
        report.aggregate_statistic += r.statistic;
    }
    report.aggregate_p_value =
        chi_square_sf(report.aggregate_statistic, 2.0 * double(residuals.cols()));
    return report;
}

struct CiResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool independent = false;
    bool undetermined = false;
};

// Partial correlation of x and y given Z: residualize both on [1 Z], then a
// t-test of the residual Pearson correlation with T-2-|Z| degrees of freedom.
// Degenerate residual variance is flagged, not thrown.
inline CiResult partial_correlation_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                         const Eigen::MatrixXd& z, double alpha) {
    const Eigen::Index T = x.size();
    if (y.size() != T) throw std::invalid_argument("partial_correlation_test: length mismatch");
    if (z.size() > 0 && z.rows() != T)
        throw std::invalid_argument("partial_correlation_test: conditioning rows mismatch");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("partial_correlation_test: alpha must lie in (0,1)");
    const Eigen::Index k = z.size() > 0 ? z.cols() : 0;
    if (T < k + 3)
        throw std::invalid_argument("partial_correlation_test: need at least |Z|+3 rows");

    Eigen::MatrixXd design(T, k + 1);
    design.col(0).setOnes();
    if (k > 0) design.rightCols(k) = z;
    Eigen::VectorXd rx, ry;
    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        rx = x - design * qr.solve(x);
        ry = y - design * qr.solve(y);
    }

    CiResult res;
    double sx = rx.norm(), sy = ry.norm();
    double scale = std::max(x.norm(), y.norm()) + 1.0;
    if (sx <= 1e-12 * scale || sy <= 1e-12 * scale) {
        res.undetermined = true;
        res.p_value = 0.0;
        return res;
    }
    double r = rx.dot(ry) / (sx * sy);
    int dof = static_cast<int>(T - 2 - k);
    if (std::fabs(r) >= 1.0) {
        res.statistic = r > 0 ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
        res.p_value = 0.0;
        return res;
    }
    res.statistic = r * std::sqrt(double(dof) / (1.0 - r * r));
    res.p_value = student_t_sf_two_sided(res.statistic, double(dof));
    res.independent = res.p_value > alpha;
    return res;
}

}  // namespace tscausal
