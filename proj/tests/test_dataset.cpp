#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "tscausal/dataset.hpp"

using namespace tscausal;
namespace fs = std::filesystem;

namespace {

std::string write_temp_csv(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

}  // namespace

TEST_CASE("date parsing is strict", "[dataset]") {
    REQUIRE(parse_date("2022-12-19").has_value());
    CHECK(parse_date("2022-12-19")->to_string() == "2022-12-19");
    CHECK(parse_date("2024-02-29").has_value());   // leap day
    CHECK_FALSE(parse_date("2023-02-29").has_value());
    CHECK_FALSE(parse_date("2021-02-30").has_value());
    CHECK_FALSE(parse_date("2021-13-01").has_value());
    CHECK_FALSE(parse_date("21-01-01").has_value());
    CHECK_FALSE(parse_date("2021/01/01").has_value());
    CHECK_FALSE(parse_date("2021-1-01").has_value());
    CHECK_FALSE(parse_date("2021-01-01 ").has_value());
    CHECK(Date{2021, 12, 31}.plus_days(1) == Date{2022, 1, 1});
}

TEST_CASE("dataset invariants enforced at construction", "[dataset]") {
    std::vector<Date> dates{{2021, 1, 1}, {2021, 1, 2}};
    Eigen::MatrixXd v(2, 2);
    v << 1, 2, 3, 4;
    CHECK_NOTHROW(TimeSeriesDataset({"a", "b"}, dates, v));
    CHECK_THROWS_AS(TimeSeriesDataset({"a", "a"}, dates, v), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeriesDataset({"a", "b"}, {{2021, 1, 2}, {2021, 1, 2}}, v),
                    std::invalid_argument);
    CHECK_THROWS_AS(TimeSeriesDataset({"a", "b"}, {{2021, 1, 2}, {2021, 1, 1}}, v),
                    std::invalid_argument);
    Eigen::MatrixXd bad = v;
    bad(1, 1) = std::nan("");
    CHECK_THROWS_AS(TimeSeriesDataset({"a", "b"}, dates, bad), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeriesDataset({"a"}, dates, v), std::invalid_argument);
}

TEST_CASE("csv ingest parses levels and reports skipped cells", "[dataset]") {
    auto p = write_temp_csv("tsc_jgb.csv",
                            "Date,Close\n"
                            "2022-12-19,0.256\n"
                            "2022-12-20,0.421\n"
                            "2022-12-21,n/a\n"
                            "2022-12-22,0.480\n");
    auto series = ingest_csv({p}, {{"Close_JGB", {0, "Close"}}});
    REQUIRE(series.size() == 1);
    CHECK(series[0].name == "Close_JGB");
    REQUIRE(series[0].values.size() == 3);
    CHECK(series[0].values[0] == Catch::Approx(0.256));
    CHECK(series[0].values[1] == Catch::Approx(0.421));
    REQUIRE(series[0].skipped_rows.size() == 1);
    CHECK(series[0].skipped_rows[0] == 3);

    // Differencing the ingested levels yields 0.165 dated at the minuend.
    auto ds = align(series);
    TransformLog log;
    auto diffed = difference(ds.slice_dates(Date{2022, 12, 19}, Date{2022, 12, 20}), 1, &log);
    REQUIRE(diffed.rows() == 1);
    CHECK(diffed.dates()[0] == Date{2022, 12, 20});
    CHECK(diffed.values()(0, 0) == Catch::Approx(0.165).margin(1e-12));
}

TEST_CASE("csv ingest hard errors", "[dataset]") {
    auto bad_date = write_temp_csv("tsc_bad_date.csv",
                                   "Date,Close\n2022-12-19,1.0\n2022-12-32,2.0\n");
    CHECK_THROWS_WITH(ingest_csv({bad_date}, {{"x", {0, "Close"}}}),
                      Catch::Matchers::ContainsSubstring("row 2") &&
                          Catch::Matchers::ContainsSubstring("malformed date"));

    auto dup = write_temp_csv("tsc_dup.csv",
                              "Date,Close\n2022-12-19,1.0\n2022-12-19,2.0\n");
    CHECK_THROWS_WITH(ingest_csv({dup}, {{"x", {0, "Close"}}}),
                      Catch::Matchers::ContainsSubstring("duplicates date"));

    auto ok = write_temp_csv("tsc_ok.csv", "Date,Close\n2022-12-19,1.0\n");
    CHECK_THROWS_WITH(ingest_csv({ok}, {{"x", {0, "Volume"}}}),
                      Catch::Matchers::ContainsSubstring("Volume"));

    auto none = write_temp_csv("tsc_none.csv", "Date,Close\n2022-12-19,abc\n");
    CHECK_THROWS_WITH(ingest_csv({none}, {{"x", {0, "Close"}}}),
                      Catch::Matchers::ContainsSubstring("zero parseable"));

    CHECK_THROWS_AS(ingest_csv({"/nonexistent/file.csv"}, {{"x", {0, "Close"}}}),
                    std::runtime_error);
}

TEST_CASE("align keeps exactly the common dates", "[dataset]") {
    RawSeries a{"a", {{2021, 1, 1}, {2021, 1, 2}, {2021, 1, 4}}, {1, 2, 4}, {}};
    RawSeries b{"b", {{2021, 1, 2}, {2021, 1, 3}, {2021, 1, 4}}, {20, 30, 40}, {}};
    auto ds = align({a, b});
    REQUIRE(ds.rows() == 2);
    CHECK(ds.dates()[0] == Date{2021, 1, 2});
    CHECK(ds.dates()[1] == Date{2021, 1, 4});
    CHECK(ds.values()(0, 0) == 2);
    CHECK(ds.values()(0, 1) == 20);
    CHECK(ds.values()(1, 1) == 40);

    RawSeries c{"c", {{2020, 1, 1}}, {5}, {}};
    CHECK_THROWS_AS(align({a, c}), std::runtime_error);
}

TEST_CASE("difference and standardize with replayable log", "[dataset]") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    int T = 60;
    Eigen::MatrixXd v(T, 3);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < 3; ++j) v(t, j) = gauss(rng) + t * 0.1 * (j + 1);
    std::vector<Date> dates;
    for (int t = 0; t < T; ++t) dates.push_back(Date{2021, 1, 1}.plus_days(t));
    TimeSeriesDataset ds({"x", "y", "z"}, dates, v);

    TransformLog log;
    auto d1 = difference(ds, 1, &log);
    CHECK(d1.rows() == T - 1);
    CHECK(d1.dates().front() == dates[1]);
    auto z = standardize(d1, &log);
    CHECK(z.values().colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
    Eigen::VectorXd sd = (z.values().array().square().colwise().sum() / double(z.rows() - 1))
                             .sqrt();
    CHECK((sd.array() - 1.0).abs().maxCoeff() < 1e-12);

    Eigen::MatrixXd replayed = log.replay(ds.values());
    CHECK((replayed - z.values()).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(difference(ds, 0, nullptr), std::invalid_argument);
    Eigen::MatrixXd tiny(2, 1);
    tiny << 1, 2;
    TimeSeriesDataset small({"x"}, {dates[0], dates[1]}, tiny);
    CHECK_THROWS_AS(difference(small, 2, nullptr), std::invalid_argument);

    Eigen::MatrixXd flat(5, 2);
    flat.col(0).setLinSpaced(5, 0, 4);
    flat.col(1).setConstant(3.0);
    std::vector<Date> d5(dates.begin(), dates.begin() + 5);
    TimeSeriesDataset fds({"x", "flat"}, d5, flat);
    CHECK_THROWS_WITH(standardize(fds, nullptr),
                      Catch::Matchers::ContainsSubstring("flat"));
}

TEST_CASE("second difference equals difference of difference", "[dataset]") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd v(20, 1);
    for (int t = 0; t < 20; ++t) v(t, 0) = gauss(rng);
    std::vector<Date> dates;
    for (int t = 0; t < 20; ++t) dates.push_back(Date{2021, 3, 1}.plus_days(t));
    TimeSeriesDataset ds({"x"}, dates, v);
    auto twice = difference(difference(ds, 1, nullptr), 1, nullptr);
    auto once = difference(ds, 2, nullptr);
    CHECK((twice.values() - once.values()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(twice.dates() == once.dates());
}

TEST_CASE("linearity diagnostics cover all ordered pairs and lags", "[dataset]") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    int T = 200;
    Eigen::MatrixXd v(T, 2);
    for (int t = 0; t < T; ++t) v(t, 0) = gauss(rng);
    for (int t = 0; t < T; ++t) v(t, 1) = (t > 0 ? 0.9 * v(t - 1, 0) : 0.0) + 0.1 * gauss(rng);
    std::vector<Date> dates;
    for (int t = 0; t < T; ++t) dates.push_back(Date{2020, 1, 1}.plus_days(t));
    TimeSeriesDataset ds({"x", "y"}, dates, v);

    auto diag = linearity_diagnostics(ds, 3);
    CHECK(diag.size() == 2u * 2u * 4u);
    for (const auto& s : diag) {
        if (s.x_var == s.y_var && s.lag == 0)
            CHECK(s.correlation == Catch::Approx(1.0).margin(1e-12));
    }
    // x(t-1) drives y(t), so that pair at lag 1 dominates lag 0.
    double r_lag1 = 0, r_lag0 = 0;
    for (const auto& s : diag)
        if (s.x_var == 0 && s.y_var == 1) {
            if (s.lag == 1) r_lag1 = s.correlation;
            if (s.lag == 0) r_lag0 = s.correlation;
        }
    CHECK(std::fabs(r_lag1) > 0.9);
    CHECK(std::fabs(r_lag1) > std::fabs(r_lag0) + 0.5);

    Eigen::MatrixXd tiny = v.topRows(4);
    std::vector<Date> d4(dates.begin(), dates.begin() + 4);
    CHECK_THROWS_AS(linearity_diagnostics(TimeSeriesDataset({"x", "y"}, d4, tiny), 3),
                    std::invalid_argument);
}
