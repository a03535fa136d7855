// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Tolerances and seeds are pinned here so reruns are comparable.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "canonical_structures.hpp"
#include "tscausal/hungarian.hpp"
#include "tscausal/lingam.hpp"
#include "tscausal/pipeline.hpp"
#include "tscausal/synthbench.hpp"

using namespace tscausal;
using Clock = std::chrono::steady_clock;

namespace {

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// 1. ADF calibration: size on random walks, power on AR(0.5).
Outcome c1_adf() {
    auto t0 = Clock::now();
    const int N = 1000, T = 500;
    int reject_rw = 0, reject_ar = 0;
    Eigen::VectorXd rw(T), ar(T);
    for (int i = 0; i < N; ++i) {
        std::mt19937_64 rng(1000 + i);
        std::normal_distribution<double> nd;
        double x = 0.0, y = 0.0;
        for (int t = 0; t < 100; ++t) y = 0.5 * y + nd(rng);
        for (int t = 0; t < T; ++t) {
            x += nd(rng);
            y = 0.5 * y + nd(rng);
            rw(t) = x;
            ar(t) = y;
        }
        if (adf_test(rw, AdfSpec::c).p_value <= 0.05) ++reject_rw;
        if (adf_test(ar, AdfSpec::c).p_value <= 0.05) ++reject_ar;
    }
    double size = reject_rw / double(N), power = reject_ar / double(N);
    double secs = elapsed(t0);
    Outcome o;
    o.pass = size >= 0.03 && size <= 0.07 && power > 0.99 && secs < 120.0;
    o.detail = fmt("size %.3f (want 0.05 +/- 0.02), power %.3f (want > 0.99), %.1fs (limit 120s)",
                   size, power, secs);
    return o;
}

// 2. Jarque-Bera calibration: size on Gaussian samples, power on uniform.
Outcome c2_jb() {
    auto t0 = Clock::now();
    const int N = 1000, T = 1000;
    int reject_g = 0, reject_u = 0;
    Eigen::MatrixXd col(T, 1);
    for (int i = 0; i < N; ++i) {
        std::mt19937_64 rng(2000 + i);
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        for (int t = 0; t < T; ++t) col(t, 0) = nd(rng);
        if (jarque_bera(col).columns[0].p_value <= 0.05) ++reject_g;
        for (int t = 0; t < T; ++t) col(t, 0) = ud(rng);
        if (jarque_bera(col).columns[0].p_value <= 0.05) ++reject_u;
    }
    double size = reject_g / double(N), power = reject_u / double(N);
    double secs = elapsed(t0);
    Outcome o;
    o.pass = size >= 0.03 && size <= 0.07 && power > 0.99 && secs < 60.0;
    o.detail = fmt("size %.3f (want 0.05 +/- 0.02), power %.3f (want > 0.99), %.1fs (limit 60s)",
                   size, power, secs);
    return o;
}

GroundTruth random_var_truth(int n, int p, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.1, 0.25);
    std::bernoulli_distribution keep(0.3), sign(0.5);
    GroundTruth t;
    for (int i = 0; i < n; ++i) t.variable_names.push_back("V" + std::to_string(i));
    t.b.assign(p + 1, Eigen::MatrixXd::Zero(n, n));
    const double diag[] = {0.0, 0.5, 0.25};
    for (int tau = 1; tau <= p; ++tau)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j)
                    t.b[tau](i, j) = diag[tau] / tau;
                else if (keep(rng))
                    t.b[tau](i, j) = (sign(rng) ? 1 : -1) * mag(rng);
            }
    std::vector<Eigen::MatrixXd> lagged(t.b.begin() + 1, t.b.end());
    while (companion_spectral_radius(lagged) >= 0.9)
        for (auto& a : lagged) a *= 0.85;
    for (int tau = 1; tau <= p; ++tau) t.b[tau] = lagged[tau - 1];
    t.noise.assign(n, NoiseFamily::laplace);
    t.seed = seed;
    return t;
}

// 3. Information criteria recover the true order on VAR(1) and VAR(2) suites.
Outcome c3_order() {
    auto t0 = Clock::now();
    int hq[3] = {0, 0, 0}, bc[3] = {0, 0, 0};
    for (int p : {1, 2}) {
        for (int k = 0; k < 20; ++k) {
            GroundTruth t = random_var_truth(4, p, 3000 + 100 * p + k);
            TimeSeriesDataset ds = generate(t, 2000);
            OrderSelection sel = select_order(ds, 4);
            if (sel.chosen_hqic == p) ++hq[p];
            if (sel.chosen_bic == p) ++bc[p];
        }
    }
    Outcome o;
    o.pass = hq[1] >= 18 && bc[1] >= 18 && hq[2] >= 18 && bc[2] >= 18;
    o.detail = fmt("VAR(1): HQIC %d/20, BIC %d/20; VAR(2): HQIC %d/20, BIC %d/20 "
                   "(want >= 18 each), %.1fs",
                   hq[1], bc[1], hq[2], bc[2], elapsed(t0));
    return o;
}

double amari_error(const Eigen::MatrixXd& p) {
    const Eigen::Index n = p.rows();
    Eigen::MatrixXd a = p.cwiseAbs();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        total += a.row(i).sum() / a.row(i).maxCoeff() - 1.0;
    for (Eigen::Index j = 0; j < n; ++j)
        total += a.col(j).sum() / a.col(j).maxCoeff() - 1.0;
    return total / (2.0 * double(n) * double(n - 1));
}

// 4. FastICA unmixing quality and Hungarian optimality.
Outcome c4_ica() {
    auto t0 = Clock::now();
    int amari_ok = 0;
    const int T = 10000;
    for (int k = 0; k < 20; ++k) {
        const int n = 2 + k % 5;
        std::mt19937_64 rng(777 + k);
        std::uniform_real_distribution<double> src(-std::sqrt(3.0), std::sqrt(3.0));
        std::uniform_real_distribution<double> mix(-1.0, 1.0);
        Eigen::MatrixXd s(n, T);
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < T; ++t) s(i, t) = src(rng);
        Eigen::MatrixXd a(n, n);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(i, j) = mix(rng);
        } while (Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues().minCoeff() < 0.3);
        IcaOptions io;
        io.seed = 777 + k;
        IcaResult ica = fastica(a * s, io);
        if (amari_error(ica.unmixing * a) < 0.05) ++amari_ok;
    }

    int hungarian_ok = 0;
    for (int m = 0; m < 200; ++m) {
        const int n = 2 + m % 6;
        std::mt19937_64 rng(31337 + m);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        Eigen::MatrixXd cost(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cost(i, j) = ud(rng);
        double got = assignment_cost(cost, solve_assignment(cost));
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            best = std::min(best, assignment_cost(cost, perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (got == best) ++hungarian_ok;
    }
    Outcome o;
    o.pass = amari_ok >= 19 && hungarian_ok == 200;
    o.detail = fmt("Amari < 0.05 in %d/20 (want >= 19), Hungarian optimal %d/200 "
                   "(want 200), %.1fs",
                   amari_ok, hungarian_ok, elapsed(t0));
    return o;
}

// 5. Full VAR-LiNGAM recovery on the non-Gaussian suite.
Outcome c5_varlingam() {
    auto t0 = Clock::now();
    auto suite = nongaussian_suite(20, 91);
    int order_ok = 0;
    double sum_rel0 = 0.0, sum_rel1 = 0.0;
    for (const auto& c : suite) {
        TimeSeriesDataset ds = generate(c.truth, 10000);
        VarLingamOptions vopt;
        vopt.stationarity_check = false;
        vopt.max_order = 3;
        vopt.prune_threshold = 0.01;  // keep true 0.1-weight edges
        vopt.b0.prune_threshold = 0.01;
        vopt.b0.ica.seed = c.truth.seed;
        VarLingamModel m = fit_var_lingam(ds, std::nullopt, {}, false, vopt);
        if (m.causal_order == true_causal_order(c.truth.b[0])) ++order_ok;
        sum_rel0 += (m.b[0] - c.truth.b[0]).norm() / c.truth.b[0].norm();
        double denom = std::max(c.truth.b[1].norm(), 1e-12);
        sum_rel1 += (m.b[1] - c.truth.b[1]).norm() / denom;
    }
    double rel0 = sum_rel0 / 20.0, rel1 = sum_rel1 / 20.0;

    // Truths with no instantaneous effects: lagged estimates must fall back
    // to the plain VAR coefficients.
    bool b0zero_ok = true;
    for (int k = 0; k < 5; ++k) {
        GroundTruth t = random_var_truth(6, 1, 5200 + k);
        if (k % 2) t.noise.assign(6, NoiseFamily::uniform);
        TimeSeriesDataset ds = generate(t, 10000);
        VarLingamOptions vopt;
        vopt.stationarity_check = false;
        vopt.b0.ica.seed = t.seed;
        VarLingamModel m = fit_var_lingam(ds, 1, {}, false, vopt);
        VarModel plain = var_fit(ds, 1);
        double diff = (m.b_raw[1] - plain.coefficients[0]).cwiseAbs().maxCoeff();
        if (!(diff <= 1e-6)) b0zero_ok = false;
    }

    double secs = elapsed(t0);
    Outcome o;
    o.pass = order_ok >= 18 && rel0 <= 0.10 && rel1 <= 0.10 && b0zero_ok && secs < 180.0;
    o.detail = fmt("order exact %d/20 (want >= 18), mean rel F-error B0 %.3f B1 %.3f "
                   "(want <= 0.10), B0=0 fallback %s, %.1fs (limit 180s)",
                   order_ok, rel0, rel1, b0zero_ok ? "ok" : "BROKEN", secs);
    return o;
}

Knowledge market_knowledge() {
    return make_market_knowledge({"Close_SP", "Close_US10Y"},
                                 {"Close_Nikkei", "Close_JGBF", "Close_JGB"});
}

double support_recall(const std::vector<Eigen::MatrixXd>& truth,
                      const std::vector<Eigen::MatrixXd>& est, double threshold) {
    int tp = 0, fn = 0;
    for (size_t tau = 0; tau < truth.size(); ++tau)
        for (Eigen::Index i = 0; i < truth[tau].rows(); ++i)
            for (Eigen::Index j = 0; j < truth[tau].cols(); ++j) {
                if (std::abs(truth[tau](i, j)) <= threshold) continue;
                bool found = tau < est.size() && std::abs(est[tau](i, j)) > threshold;
                (found ? tp : fn)++;
            }
    return tp + fn == 0 ? 1.0 : double(tp) / double(tp + fn);
}

// 6. Forbidden same-day entries are hard zeros and cost no recall.
Outcome c6_knowledge() {
    auto t0 = Clock::now();
    Knowledge know = market_knowledge();
    bool zeros_ok = true;
    double recall_with = 0.0, recall_without = 0.0;
    const int runs = 10;
    for (int k = 0; k < runs; ++k) {
        BenchmarkCase c = market_mirror_case(500 + k);
        TimeSeriesDataset ds = generate(c.truth, 5000);
        VarLingamOptions vopt;
        vopt.stationarity_check = false;
        vopt.b0.ica.seed = c.truth.seed;
        VarLingamModel with = fit_var_lingam(ds, 2, know, false, vopt);
        VarLingamModel without = fit_var_lingam(ds, 2, {}, false, vopt);
        IndexedKnowledge ik = resolve_knowledge(know, c.truth.variable_names);
        for (Eigen::Index i = 0; i < 6; ++i)
            for (Eigen::Index j = 0; j < 6; ++j)
                if (ik.is_forbidden(int(j), int(i), 0) && with.b[0](i, j) != 0.0)
                    zeros_ok = false;
        recall_with += support_recall(c.truth.b, with.b, 0.05);
        recall_without += support_recall(c.truth.b, without.b, 0.05);
    }
    recall_with /= runs;
    recall_without /= runs;
    double delta = recall_without - recall_with;
    Outcome o;
    o.pass = zeros_ok && delta <= 0.02 + 1e-12;
    o.detail = fmt("forbidden entries %s, recall with %.3f vs without %.3f, "
                   "delta %.3f (want <= 0.02), %.1fs",
                   zeros_ok ? "all zero" : "NONZERO", recall_with, recall_without, delta,
                   elapsed(t0));
    return o;
}

// 7. Oracle-equivalence on the canonical structure suite, exact marks.
Outcome c7_oracle() {
    auto t0 = Clock::now();
    int ok = 0, total = 0;
    std::string first_fail;
    for (const auto& s : canonical::structures()) {
        ++total;
        DsepOracle oracle(s.truth);
        TimeSeriesPAG got = discover(oracle, s.tau_max, 0.05);
        if (got.same_structure(s.expected))
            ++ok;
        else if (first_fail.empty())
            first_fail = s.name;
    }
    Outcome o;
    o.pass = ok == total && total >= 8;
    o.detail = fmt("%d/%d structures exact%s%s, %.1fs", ok, total,
                   first_fail.empty() ? "" : ", first mismatch: ", first_fail.c_str(),
                   elapsed(t0));
    return o;
}

// 8. Sample-level discovery keeps the lagged driver uniquely directed.
Outcome c8_lpcmci_sample() {
    auto t0 = Clock::now();
    Knowledge know = market_knowledge();
    const int us10y = 3, jgbf = 4;
    int hit_lag1 = 0, hit_lag2 = 0;
    for (int k = 0; k < 20; ++k) {
        BenchmarkCase c = market_mirror_case(9000 + 37 * k);
        TimeSeriesDataset ds = generate(c.truth, 5000);
        TimeSeriesPAG pag = discover(ds, 2, 0.01, know, {});
        for (const auto& e : pag.edges) {
            if (e.a.var == us10y && e.b.var == jgbf && e.b.lag == 0 &&
                e.mark_b == Mark::arrow) {
                if (e.a.lag == 1) ++hit_lag1;
                if (e.a.lag == 2) ++hit_lag2;
            }
        }
    }
    Outcome o;
    o.pass = hit_lag1 >= 18 && hit_lag2 >= 18;
    o.detail = fmt("US10Y->JGBF arrowhead at lag1 %d/20, lag2 %d/20 (want >= 18 each), %.1fs",
                   hit_lag1, hit_lag2, elapsed(t0));
    return o;
}

// 9. Null calibration for both algorithms.
Outcome c9_null() {
    auto t0 = Clock::now();
    BenchmarkOptions opt;
    opt.alpha = 0.01;
    auto table = run_benchmark(null_suite(2, 6, 4242),
                               {Algorithm::varlingam, Algorithm::lpcmci}, 5000, 20, opt);
    double fp_vl = 0.0, fp_lp = 0.0;
    int n_vl = 0, n_lp = 0;
    for (const auto& row : table) {
        if (row.algorithm == "varlingam") {
            fp_vl += row.false_positive_rate;
            ++n_vl;
        } else {
            fp_lp += row.false_positive_rate;
            ++n_lp;
        }
    }
    fp_vl /= n_vl;
    fp_lp /= n_lp;
    Outcome o;
    o.pass = fp_vl <= 2 * opt.alpha && fp_lp <= 2 * opt.alpha;
    o.detail = fmt("FP rate varlingam %.4f, lpcmci %.4f (want <= %.3f), %.1fs", fp_vl, fp_lp,
                   2 * opt.alpha, elapsed(t0));
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 10. Bundled config: full run, all sections, bit-identical reruns.
Outcome c10_pipeline(const std::string& data_dir) {
    auto t0 = Clock::now();
    namespace fs = std::filesystem;
    RunConfig cfg = load_run_config(data_dir + "/sample_config.json");
    fs::path dir_a = fs::temp_directory_path() / "tscausal_acceptance_a";
    fs::path dir_b = fs::temp_directory_path() / "tscausal_acceptance_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    cfg.output_dir = dir_a.string();
    RunArtifacts a = run(cfg);
    cfg.output_dir = dir_b.string();
    RunArtifacts b = run(cfg);

    bool identical = a.files == b.files;
    for (const auto& f : a.files)
        if (slurp(dir_a / f) != slurp(dir_b / f)) identical = false;

    const nlohmann::json& r = a.report;
    bool shape = true;
    shape &= r.contains("stationarity") && r["stationarity"]["original"].size() == 6 &&
             r["stationarity"].contains("processed");
    for (const auto& row : r["stationarity"]["original"])
        shape &= row.contains("nc") && row.contains("c") && row.contains("ct") &&
                 row.contains("ctt");
    shape &= r.contains("var") && r["var"]["equations"].size() == 6;
    shape &= r.contains("linearity") && !r["linearity"].empty();
    shape &= r.contains("varlingam") && r["varlingam"].contains("b") &&
             r["varlingam"].contains("standardized_b");
    shape &= r.contains("lpcmci") && !r["lpcmci"]["edges"].empty();
    bool all_files = a.files.size() == 10;

    double secs = elapsed(t0);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    Outcome o;
    o.pass = identical && shape && all_files && secs < 300.0;
    o.detail = fmt("reruns %s, sections %s, %zu artifacts, %.1fs (limit 300s)",
                   identical ? "bit-identical" : "DIFFER", shape ? "complete" : "MISSING",
                   a.files.size(), secs);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::string data_dir = "data";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--data-dir") data_dir = argv[i + 1];

    struct Criterion {
        const char* name;
        Outcome (*fn)();
    };
    const Criterion fixed[] = {
        {"ADF calibration", c1_adf},
        {"Jarque-Bera calibration", c2_jb},
        {"VAR order selection", c3_order},
        {"ICA and assignment", c4_ica},
        {"VAR-LiNGAM recovery", c5_varlingam},
        {"Knowledge enforcement", c6_knowledge},
        {"Oracle conformance", c7_oracle},
        {"Lagged driver direction", c8_lpcmci_sample},
        {"Null calibration", c9_null},
    };

    int failures = 0;
    int idx = 0;
    auto report = [&](const char* name, const Outcome& o) {
        ++idx;
        std::printf("%s %2d. %s: %s\n", o.pass ? "PASS" : "FAIL", idx, name,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    };
    for (const auto& c : fixed) report(c.name, c.fn());
    report("Pipeline determinism and shape", c10_pipeline(data_dir));

    std::printf("RESULT: %d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
