#pragma once

// VAR-LiNGAM: reduced-form VAR for the lagged dynamics, LiNGAM on the VAR
// residuals for the instantaneous structure, then the lagged matrices
// B_tau = (I - B0) M_tau with domain knowledge and pruning applied.

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tscausal/dataset.hpp"
#include "tscausal/graphs.hpp"
#include "tscausal/knowledge.hpp"
#include "tscausal/lingam.hpp"
#include "tscausal/var.hpp"

namespace tscausal {

enum class OrderCriterion { aic, bic, hqic };

struct VarLingamOptions {
    OrderCriterion criterion = OrderCriterion::hqic;
    int max_order = 10;
    double prune_threshold = 0.05;  // standardized threshold for lagged matrices
    double adf_alpha = 0.05;
    // The per-variable ADF sweep dominates runtime on long series; callers
    // feeding data that is stationary by construction may turn it off.
    bool stationarity_check = true;
    B0Options b0;
};

struct VarLingamModel {
    std::vector<std::string> variable_names;
    int order = 0;
    bool standardized = false;
    // b[0] is the instantaneous matrix, b[tau] the lagged effects, both after
    // knowledge and pruning.  b_raw[tau] = (I - b[0]) * M_tau before lagged
    // knowledge or pruning touches it (b_raw[0] == b[0]).
    std::vector<Eigen::MatrixXd> b;
    std::vector<Eigen::MatrixXd> b_raw;
    std::vector<int> causal_order;
    VarModel var;
    InstantaneousModel instantaneous;
    std::vector<std::string> warnings;
};

// Fits the full pipeline.  `order` empty means information-criterion
// selection up to opt.max_order.  When standardize_flag is set the whole
// pipeline reruns on z-scored data so strengths are comparable across
// variables.
inline VarLingamModel fit_var_lingam(const TimeSeriesDataset& ds, std::optional<int> order,
                                     const Knowledge& knowledge, bool standardize_flag,
                                     const VarLingamOptions& opt = {}) {
    if (standardize_flag) {
        TimeSeriesDataset z = standardize(ds, nullptr);
        VarLingamModel m = fit_var_lingam(z, order, knowledge, false, opt);
        m.standardized = true;
        return m;
    }

    const Eigen::Index T = ds.rows();
    const Eigen::Index n = ds.cols();
    IndexedKnowledge ik = resolve_knowledge(knowledge, ds.variable_names());

    VarLingamModel model;
    model.variable_names = ds.variable_names();

    // Stationarity policy: a variable counts as nonstationary only when every
    // deterministic-term spec fails to reject the unit root.
    if (opt.stationarity_check) {
        for (Eigen::Index j = 0; j < n; ++j) {
            bool any_reject = false;
            for (AdfSpec spec : {AdfSpec::nc, AdfSpec::c, AdfSpec::ct, AdfSpec::ctt})
                if (adf_test(ds.values().col(j), spec).p_value <= opt.adf_alpha)
                    any_reject = true;
            if (!any_reject)
                model.warnings.push_back("variable '" + ds.variable_names()[j] +
                                         "' appears nonstationary; consider differencing");
        }
    }

    int p;
    if (order) {
        p = *order;
    } else {
        int max_p = opt.max_order;
        while (max_p > 1 && T - max_p <= n * max_p + 1) --max_p;
        OrderSelection sel = select_order(ds, max_p);
        switch (opt.criterion) {
            case OrderCriterion::aic: p = sel.chosen_aic; break;
            case OrderCriterion::bic: p = sel.chosen_bic; break;
            case OrderCriterion::hqic: p = sel.chosen_hqic; break;
            default: throw std::invalid_argument("fit_var_lingam: unknown criterion");
        }
    }

    model.order = p;
    model.var = var_fit(ds, p);
    if (!var_is_stable(model.var))
        model.warnings.push_back("fitted VAR is unstable (companion spectral radius >= 1)");

    Eigen::VectorXd mean = ds.values().colwise().mean();
    Eigen::VectorXd data_scale =
        ((ds.values().rowwise() - mean.transpose()).array().square().colwise().sum() /
         double(T - 1))
            .sqrt();

    B0Options b0opt = opt.b0;
    if (b0opt.scale.size() == 0) b0opt.scale = data_scale;
    model.instantaneous = estimate_b0(model.var.residuals, ik, b0opt);
    model.causal_order = model.instantaneous.causal_order;
    for (const auto& w : model.instantaneous.warnings) model.warnings.push_back(w);

    const Eigen::MatrixXd& b0 = model.instantaneous.b0;
    Eigen::MatrixXd correction = Eigen::MatrixXd::Identity(n, n) - b0;
    model.b.push_back(b0);
    model.b_raw.push_back(b0);
    for (int tau = 1; tau <= p; ++tau) {
        Eigen::MatrixXd btau = correction * model.var.coefficients[tau - 1];
        model.b_raw.push_back(btau);
        model.b.push_back(btau);
    }

    // Lagged knowledge: affected rows are re-estimated with the forbidden
    // regressors structurally excluded, holding the instantaneous part fixed:
    // x_i(t) - B0[i,:] x(t) is regressed on the allowed lagged terms.
    std::vector<bool> row_needs_refit(n, false);
    bool any_lagged_knowledge = false;
    for (const auto& [c, e, lag] : ik.forbidden)
        if (lag >= 1 && lag <= p) {
            row_needs_refit[e] = true;
            any_lagged_knowledge = true;
        }
    if (any_lagged_knowledge) {
        const Eigen::MatrixXd& x = ds.values();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!row_needs_refit[i]) continue;
            std::vector<std::pair<int, int>> regs;  // (variable, lag)
            for (int tau = 1; tau <= p; ++tau)
                for (Eigen::Index j = 0; j < n; ++j)
                    if (!ik.is_forbidden(static_cast<int>(j), static_cast<int>(i), tau))
                        regs.push_back({static_cast<int>(j), tau});
            Eigen::VectorXd target(T - p);
            for (Eigen::Index t = p; t < T; ++t)
                target(t - p) = x(t, i) - b0.row(i).dot(x.row(t));
            Eigen::MatrixXd design(T - p, regs.size() + 1);
            design.col(0).setOnes();
            for (size_t r = 0; r < regs.size(); ++r)
                for (Eigen::Index t = p; t < T; ++t)
                    design(t - p, r + 1) = x(t - regs[r].second, regs[r].first);
            OlsFit fit = ols(target, design);
            for (int tau = 1; tau <= p; ++tau) model.b[tau].row(i).setZero();
            for (size_t r = 0; r < regs.size(); ++r)
                model.b[regs[r].second](i, regs[r].first) = fit.coefficients(r + 1);
        }
    }

    // Standardized pruning of the lagged matrices; required edges survive.
    for (int tau = 1; tau <= p; ++tau)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (model.b[tau](i, j) == 0.0) continue;
                if (ik.is_required(static_cast<int>(j), static_cast<int>(i), tau)) continue;
                double standardized =
                    std::fabs(model.b[tau](i, j)) * data_scale(j) / data_scale(i);
                if (standardized < opt.prune_threshold) model.b[tau](i, j) = 0.0;
            }

    return model;
}

inline LaggedDag to_lagged_dag(const VarLingamModel& model) {
    LaggedDag dag;
    dag.variable_names = model.variable_names;
    dag.adjacency = model.b;
    dag.validate();
    return dag;
}

// Summary form comparable with a collapsed PAG: strongest edge per ordered
// pair, lag labels in strength order.  Needs standardized coefficients so
// magnitudes are comparable across pairs.
inline SummaryGraph varlingam_to_lpcmci_form(const VarLingamModel& model) {
    if (!model.standardized)
        throw std::invalid_argument(
            "varlingam_to_lpcmci_form: model must be fit on standardized data");
    return collapse(to_lagged_dag(model));
}

}  // namespace tscausal
