#pragma once

// Synthetic ground truths with known lagged structure, optional hidden
// confounders and configurable noise families, plus the benchmark harness
// that scores discovery algorithms against them.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tscausal/dataset.hpp"
#include "tscausal/graphs.hpp"
#include "tscausal/lpcmci.hpp"
#include "tscausal/var.hpp"
#include "tscausal/varlingam.hpp"

namespace tscausal {

enum class NoiseFamily { uniform, laplace, gaussian };

// One hidden source: iid unit-variance noise feeding observed children at
// fixed lags.  A latent with two lag-0 children is a hidden confounder.
struct LatentEdge {
    int effect = 0;  // observed variable index
    int lag = 0;
    double weight = 0.0;
};

struct LatentSpec {
    NoiseFamily noise = NoiseFamily::gaussian;
    std::vector<LatentEdge> edges;
};

struct GroundTruth {
    std::vector<std::string> variable_names;
    std::vector<Eigen::MatrixXd> b;  // B0..Bp over observed variables, b[tau](i,j): j -> i
    std::vector<NoiseFamily> noise;  // per observed variable
    std::vector<LatentSpec> latents;
    uint64_t seed = 0;  // base seed; benchmark runs offset from it
};

namespace detail {

inline double draw_noise(NoiseFamily f, std::mt19937_64& rng) {
    switch (f) {
        case NoiseFamily::uniform: {
            std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
            return u(rng);
        }
        case NoiseFamily::laplace: {
            std::exponential_distribution<double> e(1.0);
            return (e(rng) - e(rng)) / std::sqrt(2.0);
        }
        case NoiseFamily::gaussian: {
            std::normal_distribution<double> g(0.0, 1.0);
            return g(rng);
        }
    }
    throw std::invalid_argument("unknown noise family");
}

}  // namespace detail

// Throws unless the truth is well-formed: consistent shapes, acyclic lag-0
// structure, and implied VAR companion spectral radius below 0.95.
inline void validate_truth(const GroundTruth& truth) {
    if (truth.b.empty()) throw std::invalid_argument("truth: no coefficient matrices");
    const Eigen::Index n = truth.b[0].rows();
    if (n < 1) throw std::invalid_argument("truth: empty system");
    for (const auto& m : truth.b)
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("truth: coefficient matrices must share one shape");
    if (truth.variable_names.size() != size_t(n))
        throw std::invalid_argument("truth: name count mismatch");
    if (truth.noise.size() != size_t(n))
        throw std::invalid_argument("truth: noise family count mismatch");
    if (!detail::lag0_acyclic(truth.b[0]))
        throw std::invalid_argument("truth: contemporaneous structure is cyclic");
    for (const auto& latent : truth.latents)
        for (const auto& e : latent.edges) {
            if (e.effect < 0 || e.effect >= n)
                throw std::invalid_argument("truth: latent edge effect out of range");
            if (e.lag < 0) throw std::invalid_argument("truth: latent edge lag negative");
            if (!std::isfinite(e.weight))
                throw std::invalid_argument("truth: latent edge weight not finite");
        }
    if (truth.b.size() > 1 || truth.b[0].cwiseAbs().maxCoeff() > 0.0) {
        Eigen::MatrixXd inv =
            (Eigen::MatrixXd::Identity(n, n) - truth.b[0]).partialPivLu().inverse();
        std::vector<Eigen::MatrixXd> reduced;
        for (size_t tau = 1; tau < truth.b.size(); ++tau) reduced.push_back(inv * truth.b[tau]);
        if (!reduced.empty() && companion_spectral_radius(reduced) >= 0.95)
            throw std::invalid_argument("truth: implied VAR spectral radius >= 0.95");
    }
}

// Simulates x(t) = (I - B0)^{-1} (sum_tau B_tau x(t-tau) + e(t) + latent terms)
// with 200 burn-in steps.  Per step the draw order is fixed (latent sources
// first, then observed noises, both ascending), so output is reproducible
// bit-for-bit per seed.
inline TimeSeriesDataset generate(const GroundTruth& truth, int T, uint64_t seed) {
    validate_truth(truth);
    if (T < 1) throw std::invalid_argument("generate: T must be positive");
    const int n = static_cast<int>(truth.b[0].rows());
    const int p = static_cast<int>(truth.b.size()) - 1;
    int latent_hist = 0;
    for (const auto& l : truth.latents)
        for (const auto& e : l.edges) latent_hist = std::max(latent_hist, e.lag);
    const int burn = 200;
    const int total = T + burn;

    Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - truth.b[0]).partialPivLu().inverse();
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total, n);
    Eigen::MatrixXd latent_draws(total, std::max<size_t>(truth.latents.size(), 1));

    for (int t = 0; t < total; ++t) {
        for (size_t l = 0; l < truth.latents.size(); ++l)
            latent_draws(t, l) = detail::draw_noise(truth.latents[l].noise, rng);
        Eigen::VectorXd u(n);
        for (int j = 0; j < n; ++j) u(j) = detail::draw_noise(truth.noise[j], rng);
        for (size_t l = 0; l < truth.latents.size(); ++l)
            for (const auto& e : truth.latents[l].edges)
                if (t - e.lag >= 0) u(e.effect) += e.weight * latent_draws(t - e.lag, l);
        for (int tau = 1; tau <= p; ++tau)
            if (t - tau >= 0) u += truth.b[tau] * x.row(t - tau).transpose();
        x.row(t) = (inv * u).transpose();
    }

    std::vector<Date> dates;
    dates.reserve(T);
    for (int t = 0; t < T; ++t) dates.push_back(Date{2000, 1, 1}.plus_days(t));
    return TimeSeriesDataset(truth.variable_names, std::move(dates), x.bottomRows(T));
}

inline TimeSeriesDataset generate(const GroundTruth& truth, int T) {
    return generate(truth, T, truth.seed);
}

// Projects a ground truth onto the oracle's graph form: observed variables
// keep their indices, latent sources append after them.
inline TruthGraph to_truth_graph(const GroundTruth& truth) {
    validate_truth(truth);
    TruthGraph g;
    g.n_observed = static_cast<int>(truth.b[0].rows());
    g.n_total = g.n_observed + static_cast<int>(truth.latents.size());
    g.names = truth.variable_names;
    for (size_t tau = 0; tau < truth.b.size(); ++tau)
        for (Eigen::Index i = 0; i < truth.b[tau].rows(); ++i)
            for (Eigen::Index j = 0; j < truth.b[tau].cols(); ++j)
                if (truth.b[tau](i, j) != 0.0)
                    g.edges.push_back({static_cast<int>(j), static_cast<int>(i),
                                       static_cast<int>(tau)});
    for (size_t l = 0; l < truth.latents.size(); ++l)
        for (const auto& e : truth.latents[l].edges)
            g.edges.push_back({g.n_observed + static_cast<int>(l), e.effect, e.lag});
    g.validate();
    return g;
}

enum class Algorithm { varlingam, lpcmci };

inline const char* to_string(Algorithm a) {
    return a == Algorithm::varlingam ? "varlingam" : "lpcmci";
}

struct BenchmarkCase {
    std::string name;
    GroundTruth truth;
    int tau_max = 1;  // discovery window; reporting horizon for scoring
};

struct BenchmarkOptions {
    double alpha = 0.01;           // CI level for discovery and FP accounting
    double edge_threshold = 0.05;  // binarization when scoring weighted estimates
    // Generated truths are stationary by construction, so the ADF sweep is
    // skipped by default; it dominates wall-clock on long replications.
    VarLingamOptions varlingam = [] {
        VarLingamOptions o;
        o.stationarity_check = false;
        return o;
    }();
    DiscoverOptions lpcmci;
};

// One row per algorithm x case, means over the seeded runs.
struct BenchmarkMetrics {
    std::string case_name;
    std::string algorithm;
    int runs = 0;
    double precision = 1.0;
    double recall = 1.0;
    // Fraction of runs selecting the true VAR order; 1.0 for lpcmci, which
    // has no order-selection step.
    double order_accuracy = 1.0;
    double false_positive_rate = 0.0;
    double seconds = 0.0;
};

namespace detail {

struct SupportScore {
    double precision = 1.0, recall = 1.0, fp_rate = 0.0;
};

inline SupportScore score_support(int tp, int fp, int fn, long possible) {
    SupportScore s;
    s.precision = (tp + fp) == 0 ? 1.0 : double(tp) / double(tp + fp);
    s.recall = (tp + fn) == 0 ? 1.0 : double(tp) / double(tp + fn);
    long negatives = possible - (tp + fn);
    s.fp_rate = negatives <= 0 ? 0.0 : double(fp) / double(negatives);
    return s;
}

inline SupportScore score_varlingam(const VarLingamModel& model, const GroundTruth& truth,
                                    double threshold) {
    const size_t layers = std::max(model.b.size(), truth.b.size());
    const Eigen::Index n = truth.b[0].rows();
    int tp = 0, fp = 0, fn = 0;
    for (size_t tau = 0; tau < layers; ++tau)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                bool est = tau < model.b.size() && std::fabs(model.b[tau](i, j)) > threshold;
                bool tru = tau < truth.b.size() && std::fabs(truth.b[tau](i, j)) > threshold;
                if (est && tru) ++tp;
                else if (est) ++fp;
                else if (tru) ++fn;
            }
    long possible = long(layers) * n * n - n;  // lag-0 diagonal can never hold an edge
    return score_support(tp, fp, fn, possible);
}

inline SupportScore score_lpcmci(const TimeSeriesPAG& got, const TimeSeriesPAG& want) {
    std::set<std::tuple<int, int, int>> est, tru;
    for (const auto& e : got.edges) est.insert({e.a.var, e.b.var, e.a.lag});
    for (const auto& e : want.edges) tru.insert({e.a.var, e.b.var, e.a.lag});
    int tp = 0, fp = 0, fn = 0;
    for (const auto& k : est) (tru.count(k) ? tp : fp)++;
    for (const auto& k : tru)
        if (!est.count(k)) ++fn;
    const int n = static_cast<int>(got.variable_names.size());
    long possible = long(n) * (n - 1) / 2 + long(got.tau_max) * n * n;
    return score_support(tp, fp, fn, possible);
}

}  // namespace detail

// Runs every algorithm on every case for `seeds` independent replications of
// length T and reduces to mean scores.  VAR-LiNGAM is scored on binarized
// coefficient support against the true matrices; LPCMCI against the PAG the
// d-separation oracle produces for the same truth.
inline std::vector<BenchmarkMetrics> run_benchmark(const std::vector<BenchmarkCase>& suite,
                                                   const std::vector<Algorithm>& algorithms,
                                                   int T, int seeds,
                                                   const BenchmarkOptions& opt = {}) {
    if (suite.empty()) throw std::invalid_argument("run_benchmark: empty suite");
    if (seeds < 1) throw std::invalid_argument("run_benchmark: need at least one seed");
    if (algorithms.empty()) throw std::invalid_argument("run_benchmark: no algorithms");

    std::vector<BenchmarkMetrics> table;
    for (Algorithm algo : algorithms) {
        for (const auto& bc : suite) {
            validate_truth(bc.truth);
            BenchmarkMetrics row;
            row.case_name = bc.name;
            row.algorithm = to_string(algo);
            row.runs = seeds;
            double precision = 0, recall = 0, order_hits = 0, fp_rate = 0, secs = 0;

            TimeSeriesPAG oracle_pag;
            if (algo == Algorithm::lpcmci) {
                DsepOracle oracle(to_truth_graph(bc.truth));
                oracle_pag = discover(oracle, bc.tau_max, opt.alpha, {}, opt.lpcmci);
            }

            for (int k = 0; k < seeds; ++k) {
                const uint64_t run_seed = bc.truth.seed + uint64_t(k);
                TimeSeriesDataset data = generate(bc.truth, T, run_seed);
                auto started = std::chrono::steady_clock::now();
                detail::SupportScore score;
                if (algo == Algorithm::varlingam) {
                    VarLingamOptions vopt = opt.varlingam;
                    vopt.b0.ica.seed = run_seed;
                    VarLingamModel model = fit_var_lingam(data, std::nullopt, {}, false, vopt);
                    score = detail::score_varlingam(model, bc.truth, opt.edge_threshold);
                    if (model.order == static_cast<int>(bc.truth.b.size()) - 1)
                        order_hits += 1.0;
                } else {
                    TimeSeriesPAG got = discover(data, bc.tau_max, opt.alpha, {}, opt.lpcmci);
                    score = detail::score_lpcmci(got, oracle_pag);
                    order_hits += 1.0;
                }
                secs += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                      started)
                            .count();
                precision += score.precision;
                recall += score.recall;
                fp_rate += score.fp_rate;
            }
            row.precision = precision / seeds;
            row.recall = recall / seeds;
            row.order_accuracy = order_hits / seeds;
            row.false_positive_rate = fp_rate / seeds;
            row.seconds = secs / seeds;
            table.push_back(row);
        }
    }
    return table;
}

inline nlohmann::json to_json(const std::vector<BenchmarkMetrics>& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table) {
        rows.push_back({{"case", r.case_name},
                        {"algorithm", r.algorithm},
                        {"runs", r.runs},
                        {"precision", r.precision},
                        {"recall", r.recall},
                        {"order_accuracy", r.order_accuracy},
                        {"false_positive_rate", r.false_positive_rate},
                        {"seconds", r.seconds}});
    }
    return rows;
}

// Dense permuted-triangular B0 (unique causal order) plus a sparse stable B1,
// all non-Gaussian noise: the LiNGAM-friendly recovery suite.
inline std::vector<BenchmarkCase> nongaussian_suite(int count, uint64_t seed0) {
    const int n = 6;
    std::vector<BenchmarkCase> suite;
    for (int k = 0; k < count; ++k) {
        std::mt19937_64 rng(seed0 + uint64_t(k));
        std::uniform_real_distribution<double> mag(0.1, 0.5);
        std::uniform_int_distribution<int> coin(0, 1);
        auto weight = [&] { return (coin(rng) ? 1.0 : -1.0) * mag(rng); };

        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);

        Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) b0(order[b], order[a]) = weight();

        Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(n, n);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (u01(rng) < 0.3) b1(i, j) = weight();

        Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - b0).partialPivLu().inverse();
        while (companion_spectral_radius({inv * b1}) >= 0.9) b1 *= 0.8;

        GroundTruth truth;
        truth.variable_names.reserve(n);
        for (int i = 0; i < n; ++i) truth.variable_names.push_back("V" + std::to_string(i));
        truth.b = {b0, b1};
        for (int i = 0; i < n; ++i)
            truth.noise.push_back((k + i) % 2 ? NoiseFamily::laplace : NoiseFamily::uniform);
        truth.seed = (seed0 + uint64_t(k)) * 1000 + 7;

        BenchmarkCase bc;
        bc.name = "nongaussian-" + std::to_string(k);
        bc.truth = std::move(truth);
        suite.push_back(std::move(bc));
    }
    return suite;
}

// True causal order of a dense permuted-triangular B0, for recovery checks.
inline std::vector<int> true_causal_order(const Eigen::MatrixXd& b0) {
    const int n = static_cast<int>(b0.rows());
    std::vector<int> order;
    std::vector<char> placed(n, 0);
    for (int step = 0; step < n; ++step) {
        for (int j = 0; j < n; ++j) {
            if (placed[j]) continue;
            bool root = true;
            for (int i = 0; i < n; ++i)
                if (!placed[i] && b0(j, i) != 0.0) root = false;
            if (root) {
                order.push_back(j);
                placed[j] = 1;
                break;
            }
        }
    }
    if (order.size() != size_t(n))
        throw std::invalid_argument("true_causal_order: lag-0 structure is cyclic");
    return order;
}

// Empty graphs for null calibration.
inline std::vector<BenchmarkCase> null_suite(int count, int n, uint64_t seed0) {
    std::vector<BenchmarkCase> suite;
    for (int k = 0; k < count; ++k) {
        GroundTruth truth;
        for (int i = 0; i < n; ++i) truth.variable_names.push_back("N" + std::to_string(i));
        truth.b = {Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
        truth.noise.assign(n, NoiseFamily::laplace);
        truth.seed = seed0 + uint64_t(k) * 131;
        BenchmarkCase bc;
        bc.name = "null-" + std::to_string(k);
        bc.truth = std::move(truth);
        suite.push_back(std::move(bc));
    }
    return suite;
}

// Hidden-confounder structures (alternating with and without a direct edge)
// for latent-aware discovery.
inline std::vector<BenchmarkCase> latent_suite(int count, uint64_t seed0) {
    std::vector<BenchmarkCase> suite;
    for (int k = 0; k < count; ++k) {
        std::mt19937_64 rng(seed0 + uint64_t(k) * 17);
        std::uniform_real_distribution<double> auto_mag(0.3, 0.5);
        std::uniform_real_distribution<double> latent_mag(0.5, 0.9);
        std::uniform_int_distribution<int> coin(0, 1);

        GroundTruth truth;
        truth.variable_names = {"X", "Y"};
        Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(2, 2);
        Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(2, 2);
        b1(0, 0) = auto_mag(rng);
        b1(1, 1) = auto_mag(rng);
        if (k % 2) b0(1, 0) = (coin(rng) ? 1.0 : -1.0) * auto_mag(rng);
        truth.b = {b0, b1};
        truth.noise = {NoiseFamily::gaussian, NoiseFamily::gaussian};
        LatentSpec latent;
        latent.noise = NoiseFamily::gaussian;
        latent.edges = {{0, 0, latent_mag(rng)}, {1, 0, latent_mag(rng)}};
        truth.latents = {latent};
        truth.seed = seed0 + uint64_t(k) * 977 + 3;

        BenchmarkCase bc;
        bc.name = std::string(k % 2 ? "latent-direct-" : "latent-") + std::to_string(k);
        bc.truth = std::move(truth);
        suite.push_back(std::move(bc));
    }
    return suite;
}

// Six-variable system shaped like the market application: autocorrelated
// series, a within-session contemporaneous link, and a cross-market effect
// at lags 1 and 2.  Consistent with the standard market knowledge (no lag-0
// edge from the later session into the earlier one).
inline BenchmarkCase market_mirror_case(uint64_t seed) {
    GroundTruth truth;
    truth.variable_names = {"USD",         "Close_Nikkei", "Close_SP",
                            "Close_US10Y", "Close_JGBF",   "Close_JGB"};
    const int n = 6;
    Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b2 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) b1(i, i) = 0.3;
    b0(3, 2) = 0.4;   // Close_SP -> Close_US10Y, same day
    b0(5, 4) = 0.35;  // Close_JGBF -> Close_JGB, same day
    b1(4, 3) = 0.4;   // Close_US10Y -> Close_JGBF, lag 1
    b2(4, 3) = 0.3;   // Close_US10Y -> Close_JGBF, lag 2
    b1(1, 2) = 0.3;   // Close_SP -> Close_Nikkei, lag 1
    b1(0, 1) = 0.25;  // Close_Nikkei -> USD, lag 1
    truth.b = {b0, b1, b2};
    truth.noise.assign(n, NoiseFamily::laplace);
    truth.seed = seed;

    BenchmarkCase bc;
    bc.name = "market-mirror";
    bc.truth = std::move(truth);
    bc.tau_max = 2;
    return bc;
}

}  // namespace tscausal
