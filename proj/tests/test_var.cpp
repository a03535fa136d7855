#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tscausal/var.hpp"

using namespace tscausal;

namespace {

std::vector<Date> make_dates(int T) {
    std::vector<Date> d;
    for (int t = 0; t < T; ++t) d.push_back(Date{2000, 1, 1}.plus_days(t));
    return d;
}

// Direct simulation of x(t) = c + sum_tau A_tau x(t-tau) + e(t).
TimeSeriesDataset simulate_var(const std::vector<Eigen::MatrixXd>& A,
                               const Eigen::VectorXd& c, int T, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const int n = static_cast<int>(c.size());
    const int p = static_cast<int>(A.size());
    const int burn = 200;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(T + burn, n);
    for (int t = p; t < T + burn; ++t) {
        Eigen::VectorXd v = c;
        for (int tau = 1; tau <= p; ++tau) v += A[tau - 1] * x.row(t - tau).transpose();
        for (int j = 0; j < n; ++j) v(j) += gauss(rng);
        x.row(t) = v.transpose();
    }
    std::vector<std::string> names;
    for (int j = 0; j < n; ++j) names.push_back("v" + std::to_string(j));
    return TimeSeriesDataset(names, make_dates(T), x.bottomRows(T));
}

}  // namespace

TEST_CASE("var fit recovers a known VAR(1)", "[var]") {
    Eigen::MatrixXd A1(2, 2);
    A1 << 0.5, 0.2, -0.3, 0.4;
    Eigen::VectorXd c(2);
    c << 1.0, -0.5;
    auto ds = simulate_var({A1}, c, 4000, 77);
    auto m = var_fit(ds, 1);

    CHECK(m.order == 1);
    REQUIRE(m.coefficients.size() == 1);
    CHECK((m.coefficients[0] - A1).cwiseAbs().maxCoeff() < 0.05);
    CHECK((m.intercept - c).cwiseAbs().maxCoeff() < 0.15);
    CHECK(m.residuals.rows() == 3999);
    CHECK(m.residual_covariance.rows() == 2);
    CHECK((m.residual_covariance - m.residual_covariance.transpose()).cwiseAbs().maxCoeff() <
          1e-12);
    // Unit innovations: diagonal near 1.
    CHECK(m.residual_covariance(0, 0) == Catch::Approx(1.0).margin(0.1));
    // Definition check: res'res/(T-p).
    Eigen::MatrixXd expect = m.residuals.transpose() * m.residuals / 3999.0;
    CHECK((m.residual_covariance - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("var fit recovers a known VAR(2)", "[var]") {
    Eigen::MatrixXd A1(2, 2), A2(2, 2);
    A1 << 0.3, 0.1, 0.0, 0.25;
    A2 << 0.25, 0.0, 0.15, 0.3;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
    auto ds = simulate_var({A1, A2}, c, 6000, 101);
    auto m = var_fit(ds, 2);
    REQUIRE(m.coefficients.size() == 2);
    CHECK((m.coefficients[0] - A1).cwiseAbs().maxCoeff() < 0.05);
    CHECK((m.coefficients[1] - A2).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("var fit error conditions", "[var]") {
    auto ds = simulate_var({Eigen::MatrixXd::Constant(2, 2, 0.2)}, Eigen::VectorXd::Zero(2),
                           30, 5);
    CHECK_THROWS_AS(var_fit(ds, 0), std::invalid_argument);
    CHECK_THROWS_AS(var_fit(ds, 14), std::invalid_argument);

    // Duplicated column makes the design collinear.
    Eigen::MatrixXd v(30, 2);
    v.col(0) = ds.values().col(0);
    v.col(1) = 2.0 * ds.values().col(0);
    TimeSeriesDataset bad({"a", "b"}, ds.dates(), v);
    CHECK_THROWS_AS(var_fit(bad, 1), std::invalid_argument);
}

TEST_CASE("order selection prefers the generating order", "[var][slow]") {
    Eigen::MatrixXd A1(3, 3), A2(3, 3);
    A1 << 0.4, 0.1, 0.0,
          0.0, 0.3, 0.2,
          0.1, 0.0, 0.35;
    A2 << 0.3, 0.0, 0.1,
          0.15, 0.25, 0.0,
          0.0, 0.1, 0.3;
    REQUIRE(companion_spectral_radius({A1, A2}) < 0.95);

    auto ds2 = simulate_var({A1, A2}, Eigen::VectorXd::Zero(3), 2000, 31);
    auto sel2 = select_order(ds2, 6);
    CHECK(sel2.table.size() == 6);
    CHECK(sel2.chosen_hqic == 2);
    CHECK(sel2.chosen_bic == 2);

    auto ds1 = simulate_var({A1 * 0.9}, Eigen::VectorXd::Zero(3), 2000, 32);
    auto sel1 = select_order(ds1, 6);
    CHECK(sel1.chosen_hqic == 1);
    CHECK(sel1.chosen_bic == 1);

    // Penalty ordering at this sample size: aic <= hqic <= bic rowwise (same
    // log-determinant, increasing penalty).
    for (const auto& row : sel2.table) {
        CHECK(row.aic <= row.hqic + 1e-12);
        CHECK(row.hqic <= row.bic + 1e-12);
    }
    CHECK_THROWS_AS(select_order(ds1, 0), std::invalid_argument);

    // Determinism: identical inputs, identical table.
    auto again = select_order(ds2, 6);
    for (size_t i = 0; i < again.table.size(); ++i) {
        CHECK(again.table[i].aic == sel2.table[i].aic);
        CHECK(again.table[i].hqic == sel2.table[i].hqic);
    }
}

TEST_CASE("companion spectral radius and stability", "[var]") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
    A(0, 0) = 0.5;
    A(1, 1) = 0.9;
    CHECK(companion_spectral_radius({A}) == Catch::Approx(0.9).margin(1e-10));

    // VAR(2) scalar case x(t) = 0.5 x(t-1) + 0.5 x(t-2): roots of
    // z^2 - 0.5 z - 0.5 = (z-1)(z+0.5), radius exactly 1 (unit root).
    Eigen::MatrixXd B1 = Eigen::MatrixXd::Constant(1, 1, 0.5);
    Eigen::MatrixXd B2 = Eigen::MatrixXd::Constant(1, 1, 0.5);
    CHECK(companion_spectral_radius({B1, B2}) == Catch::Approx(1.0).margin(1e-10));

    auto ds = simulate_var({A}, Eigen::VectorXd::Zero(2), 500, 9);
    CHECK(var_is_stable(var_fit(ds, 1)));
    CHECK_THROWS_AS(companion_spectral_radius({}), std::invalid_argument);
}
