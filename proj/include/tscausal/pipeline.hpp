#pragma once

// End-to-end run driver: a JSON config selects data, preprocessing, and
// algorithms; run() executes ingest -> align -> stationarity -> difference ->
// VAR -> discovery and writes report.md, report.json, and DOT/JSON graphs.
// Everything written is deterministic for a fixed config and seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tscausal/dataset.hpp"
#include "tscausal/graphs.hpp"
#include "tscausal/knowledge.hpp"
#include "tscausal/lpcmci.hpp"
#include "tscausal/stattests.hpp"
#include "tscausal/var.hpp"
#include "tscausal/varlingam.hpp"

namespace tscausal {

struct RunConfig {
    std::vector<std::string> data_files;  // resolved paths
    std::vector<std::pair<std::string, CsvColumnRef>> variables;
    std::optional<Date> start_date;
    std::optional<Date> end_date;
    bool difference_if_nonstationary = true;
    bool standardize = true;
    OrderCriterion criterion = OrderCriterion::hqic;
    bool run_varlingam = true;
    bool run_lpcmci = true;
    std::string knowledge_file;  // resolved path, empty when absent
    int tau_max = 0;             // 0: use the selected VAR order
    double alpha = 0.01;
    double adf_alpha = 0.05;
    uint64_t seed = 0;
    int max_var_order = 5;
    int prelim_iters = 1;
    std::string output_dir = "out";  // resolved path
};

namespace detail {

inline std::string join_path(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return fp.string();
    return (base / fp).lexically_normal().string();
}

inline bool get_bool(const nlohmann::json& j, const char* key, bool fallback,
                     std::vector<std::string>& diags) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) {
        diags.push_back(std::string(key) + ": expected true or false");
        return fallback;
    }
    return j[key].get<bool>();
}

}  // namespace detail

// Parses and checks a config document. Diagnostics are human-readable, one
// per problem; the returned config is meaningful only when they are empty.
// Relative paths resolve against base_dir (normally the config's directory).
inline std::vector<std::string> parse_run_config(const nlohmann::json& j,
                                                 const std::filesystem::path& base_dir,
                                                 RunConfig& out) {
    std::vector<std::string> diags;
    if (!j.is_object()) {
        diags.push_back("config root must be a JSON object");
        return diags;
    }

    static const std::set<std::string> known = {
        "data_files",  "variables",   "date_range", "difference_if_nonstationary",
        "standardize", "criterion",   "algorithms", "knowledge_file",
        "tau_max",     "alpha",       "adf_alpha",  "seed",
        "max_var_order", "prelim_iters", "output_dir"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) diags.push_back("unknown key '" + key + "'");

    if (!j.contains("data_files") || !j["data_files"].is_array() || j["data_files"].empty()) {
        diags.push_back("data_files: required non-empty array of file paths");
    } else {
        for (const auto& f : j["data_files"]) {
            if (!f.is_string()) {
                diags.push_back("data_files: entries must be strings");
                break;
            }
            out.data_files.push_back(detail::join_path(base_dir, f.get<std::string>()));
        }
    }

    if (!j.contains("variables") || !j["variables"].is_array() || j["variables"].empty()) {
        diags.push_back("variables: required non-empty array of {name, file, column}");
    } else {
        std::set<std::string> seen;
        for (const auto& v : j["variables"]) {
            if (!v.is_object() || !v.contains("name") || !v.contains("column")) {
                diags.push_back("variables: each entry needs name and column");
                continue;
            }
            std::string name = v["name"].get<std::string>();
            if (name.empty()) diags.push_back("variables: empty name");
            if (!seen.insert(name).second)
                diags.push_back("variables: duplicate name '" + name + "'");
            CsvColumnRef ref;
            ref.file_index = v.value("file", 0);
            ref.column = v["column"].get<std::string>();
            if (ref.file_index < 0 ||
                ref.file_index >= static_cast<int>(out.data_files.size()))
                diags.push_back("variables: '" + name + "' references file index " +
                                std::to_string(ref.file_index) + " out of range");
            out.variables.emplace_back(std::move(name), std::move(ref));
        }
    }

    if (j.contains("date_range")) {
        const auto& dr = j["date_range"];
        if (!dr.is_object()) {
            diags.push_back("date_range: expected object with start and/or end");
        } else {
            for (const char* key : {"start", "end"}) {
                if (!dr.contains(key)) continue;
                auto d = parse_date(dr[key].get<std::string>());
                if (!d) {
                    diags.push_back(std::string("date_range.") + key +
                                    ": expected YYYY-MM-DD");
                    continue;
                }
                (key[0] == 's' ? out.start_date : out.end_date) = d;
            }
            if (out.start_date && out.end_date && !(*out.start_date < *out.end_date))
                diags.push_back("date_range: start must precede end");
        }
    }

    out.difference_if_nonstationary =
        detail::get_bool(j, "difference_if_nonstationary", true, diags);
    out.standardize = detail::get_bool(j, "standardize", true, diags);

    if (j.contains("criterion")) {
        std::string c = j["criterion"].get<std::string>();
        if (c == "hqic")
            out.criterion = OrderCriterion::hqic;
        else if (c == "bic")
            out.criterion = OrderCriterion::bic;
        else
            diags.push_back("criterion: '" + c + "' (valid: hqic, bic)");
    }

    out.run_varlingam = out.run_lpcmci = false;
    if (!j.contains("algorithms") || !j["algorithms"].is_array() || j["algorithms"].empty()) {
        diags.push_back("algorithms: required non-empty array");
    } else {
        for (const auto& a : j["algorithms"]) {
            std::string s = a.is_string() ? a.get<std::string>() : "";
            if (s == "varlingam")
                out.run_varlingam = true;
            else if (s == "lpcmci")
                out.run_lpcmci = true;
            else
                diags.push_back("algorithms: unknown algorithm '" + s +
                                "' (valid: varlingam, lpcmci)");
        }
    }

    if (j.contains("knowledge_file"))
        out.knowledge_file = detail::join_path(base_dir, j["knowledge_file"].get<std::string>());

    out.tau_max = j.value("tau_max", 0);
    if (out.tau_max < 0) diags.push_back("tau_max: must be >= 0 (0 uses the VAR order)");
    out.alpha = j.value("alpha", 0.01);
    if (!(out.alpha > 0.0 && out.alpha < 1.0)) diags.push_back("alpha: must be in (0,1)");
    out.adf_alpha = j.value("adf_alpha", 0.05);
    if (!(out.adf_alpha > 0.0 && out.adf_alpha < 1.0))
        diags.push_back("adf_alpha: must be in (0,1)");
    out.seed = j.value("seed", uint64_t{0});
    out.max_var_order = j.value("max_var_order", 5);
    if (out.max_var_order < 1) diags.push_back("max_var_order: must be >= 1");
    out.prelim_iters = j.value("prelim_iters", 1);
    if (out.prelim_iters < 0) diags.push_back("prelim_iters: must be >= 0");
    if (j.contains("output_dir"))
        out.output_dir = detail::join_path(base_dir, j["output_dir"].get<std::string>());
    else
        out.output_dir = detail::join_path(base_dir, "out");

    for (const auto& f : out.data_files)
        if (!std::filesystem::exists(f)) diags.push_back("data file not found: " + f);
    if (!out.knowledge_file.empty() && !std::filesystem::exists(out.knowledge_file))
        diags.push_back("knowledge file not found: " + out.knowledge_file);
    return diags;
}

// Schema/invariant check without running anything; IO and parse failures
// come back as diagnostics rather than exceptions.
inline std::vector<std::string> validate_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {"cannot open config '" + path + "'"};
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        return {std::string("config is not valid JSON: ") + e.what()};
    }
    RunConfig cfg;
    return parse_run_config(j, std::filesystem::path(path).parent_path(), cfg);
}

// Loads a config for execution; throws on any diagnostic. TSCAUSAL_OUTPUT_DIR
// overrides the output directory and nothing else.
inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("config '" + path + "' is not valid JSON: " + e.what());
    }
    RunConfig cfg;
    auto diags = parse_run_config(j, std::filesystem::path(path).parent_path(), cfg);
    if (!diags.empty()) {
        std::string msg = "invalid config '" + path + "':";
        for (const auto& d : diags) msg += "\n  - " + d;
        throw std::runtime_error(msg);
    }
    if (const char* env = std::getenv("TSCAUSAL_OUTPUT_DIR"); env && *env)
        cfg.output_dir = env;
    return cfg;
}

inline Knowledge load_knowledge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open knowledge file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("knowledge file '" + path + "' is not valid JSON: " +
                                 e.what());
    }
    Knowledge k;
    auto read_edges = [&](const char* key, std::set<LaggedEdge>& dst) {
        if (!j.contains(key)) return;
        for (const auto& e : j[key])
            dst.insert({e["cause"].get<std::string>(), e["effect"].get<std::string>(),
                        e.value("lag", 0)});
    };
    read_edges("forbidden", k.forbidden);
    read_edges("required", k.required);
    k.validate();
    return k;
}

struct RunArtifacts {
    std::filesystem::path output_dir;
    std::vector<std::string> files;  // basenames, in write order
    nlohmann::json report;
};

namespace detail {

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out << text;
}

struct AdfTableRow {
    std::string variable;
    double p[4];  // nc, c, ct, ctt
    bool nonstationary;
};

// A variable counts as nonstationary only when every spec fails to reject.
inline std::vector<AdfTableRow> adf_table(const TimeSeriesDataset& ds, double alpha) {
    std::vector<AdfTableRow> rows;
    for (Eigen::Index jv = 0; jv < ds.cols(); ++jv) {
        AdfTableRow r;
        r.variable = ds.variable_names()[jv];
        int i = 0;
        bool any_reject = false;
        for (AdfSpec spec : {AdfSpec::nc, AdfSpec::c, AdfSpec::ct, AdfSpec::ctt}) {
            r.p[i] = adf_test(ds.values().col(jv), spec).p_value;
            any_reject |= r.p[i] <= alpha;
            ++i;
        }
        r.nonstationary = !any_reject;
        rows.push_back(std::move(r));
    }
    return rows;
}

inline nlohmann::json adf_table_json(const std::vector<AdfTableRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"variable", r.variable},
                       {"nc", r.p[0]},
                       {"c", r.p[1]},
                       {"ct", r.p[2]},
                       {"ctt", r.p[3]},
                       {"nonstationary", r.nonstationary}});
    return out;
}

inline void adf_table_md(std::ostringstream& md, const std::vector<AdfTableRow>& rows) {
    md << "| Variable | nc | c | ct | ctt | Verdict |\n";
    md << "|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        md << "| " << r.variable;
        for (double p : r.p) md << " | " << fmt_num(p);
        md << " | " << (r.nonstationary ? "nonstationary" : "stationary") << " |\n";
    }
}

// Equation-level OLS detail (std errors, t, two-sided p) recomputed from the
// same design var_fit used.
struct VarTerm {
    std::string regressor;
    double coefficient, std_error, t, p;
};

inline std::vector<std::vector<VarTerm>> var_equation_terms(const TimeSeriesDataset& ds,
                                                            const VarModel& m) {
    const Eigen::Index T = ds.rows();
    const Eigen::Index n = ds.cols();
    const int p = m.order;
    Eigen::MatrixXd Z = var_design(ds.values(), p, p);
    Eigen::MatrixXd Y = ds.values().bottomRows(T - p);
    Eigen::MatrixXd beta(Z.cols(), n);
    beta.row(0) = m.intercept.transpose();
    for (int tau = 1; tau <= p; ++tau)
        beta.middleRows(1 + (tau - 1) * n, n) = m.coefficients[tau - 1].transpose();
    Eigen::MatrixXd xtx_inv = (Z.transpose() * Z).ldlt().solve(
        Eigen::MatrixXd::Identity(Z.cols(), Z.cols()));
    Eigen::MatrixXd resid = Y - Z * beta;
    const double dof = double(T - p) - double(Z.cols());

    std::vector<std::vector<VarTerm>> eqs(n);
    for (Eigen::Index eq = 0; eq < n; ++eq) {
        double sigma2 = resid.col(eq).squaredNorm() / dof;
        for (Eigen::Index k = 0; k < Z.cols(); ++k) {
            VarTerm term;
            if (k == 0) {
                term.regressor = "const";
            } else {
                int tau = int((k - 1) / n) + 1;
                int var = int((k - 1) % n);
                term.regressor = ds.variable_names()[var] + ".l" + std::to_string(tau);
            }
            term.coefficient = beta(k, eq);
            term.std_error = std::sqrt(sigma2 * xtx_inv(k, k));
            term.t = term.std_error > 0 ? term.coefficient / term.std_error : 0.0;
            term.p = student_t_sf_two_sided(term.t, dof);
            eqs[eq].push_back(std::move(term));
        }
    }
    return eqs;
}

inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void matrix_md(std::ostringstream& md, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& names, const std::string& title) {
    md << "**" << title << "** (row = effect, column = cause)\n\n";
    md << "| |";
    for (const auto& n : names) md << " " << n << " |";
    md << "\n|---|";
    for (size_t i = 0; i < names.size(); ++i) md << "---|";
    md << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        md << "| " << names[i] << " |";
        for (Eigen::Index j = 0; j < m.cols(); ++j) md << " " << fmt_num(m(i, j)) << " |";
        md << "\n";
    }
    md << "\n";
}

inline std::string pag_node_label(const TimeSeriesPAG& pag, const PagNode& n) {
    std::string base = pag.variable_names[n.var];
    return n.lag == 0 ? base + "(t)" : base + "(t-" + std::to_string(n.lag) + ")";
}

}  // namespace detail

// Executes the configured pipeline. Throws std::runtime_error tagged with the
// failing stage; artifacts produced before the failure (plus a report carrying
// the error) are already flushed to the output directory when that happens.
inline RunArtifacts run(const RunConfig& cfg) {
    RunArtifacts art;
    art.output_dir = cfg.output_dir;
    std::filesystem::create_directories(art.output_dir);

    nlohmann::json& report = art.report;
    report["schema"] = "tscausal-report/1";

    std::ostringstream md;
    md << "# Causal discovery run report\n\n";

    auto flush_reports = [&]() {
        detail::write_text_file(art.output_dir / "report.json", report.dump(2) + "\n");
        detail::write_text_file(art.output_dir / "report.md", md.str());
        art.files.push_back("report.json");
        art.files.push_back("report.md");
    };
    auto write_artifact = [&](const std::string& name, const std::string& text) {
        detail::write_text_file(art.output_dir / name, text);
        art.files.push_back(name);
    };

    std::string stage = "configure";
    try {
        // Config echo: only content that determines results, so reports stay
        // byte-identical when the same run lands in a different directory.
        nlohmann::json cfg_echo;
        for (const auto& f : cfg.data_files)
            cfg_echo["data_files"].push_back(std::filesystem::path(f).filename().string());
        for (const auto& [name, ref] : cfg.variables)
            cfg_echo["variables"].push_back(
                {{"name", name}, {"file", ref.file_index}, {"column", ref.column}});
        if (cfg.start_date) cfg_echo["start"] = cfg.start_date->to_string();
        if (cfg.end_date) cfg_echo["end"] = cfg.end_date->to_string();
        cfg_echo["difference_if_nonstationary"] = cfg.difference_if_nonstationary;
        cfg_echo["standardize"] = cfg.standardize;
        cfg_echo["criterion"] = cfg.criterion == OrderCriterion::bic ? "bic" : "hqic";
        cfg_echo["algorithms"] = nlohmann::json::array();
        if (cfg.run_varlingam) cfg_echo["algorithms"].push_back("varlingam");
        if (cfg.run_lpcmci) cfg_echo["algorithms"].push_back("lpcmci");
        if (!cfg.knowledge_file.empty())
            cfg_echo["knowledge_file"] =
                std::filesystem::path(cfg.knowledge_file).filename().string();
        cfg_echo["tau_max"] = cfg.tau_max;
        cfg_echo["alpha"] = cfg.alpha;
        cfg_echo["adf_alpha"] = cfg.adf_alpha;
        cfg_echo["seed"] = cfg.seed;
        cfg_echo["max_var_order"] = cfg.max_var_order;
        cfg_echo["prelim_iters"] = cfg.prelim_iters;
        report["config"] = cfg_echo;
        if (!cfg.run_varlingam && !cfg.run_lpcmci)
            throw std::invalid_argument("no algorithm selected");

        stage = "knowledge";
        Knowledge knowledge;
        if (!cfg.knowledge_file.empty()) knowledge = load_knowledge_file(cfg.knowledge_file);
        report["knowledge"] = {{"forbidden", knowledge.forbidden.size()},
                               {"required", knowledge.required.size()}};

        stage = "ingest";
        auto raw = ingest_csv(cfg.data_files, cfg.variables);

        stage = "align";
        TimeSeriesDataset levels = align(raw);
        if (cfg.start_date || cfg.end_date)
            levels = levels.slice_dates(cfg.start_date, cfg.end_date);
        {
            nlohmann::json data;
            data["rows"] = levels.rows();
            data["start"] = levels.dates().front().to_string();
            data["end"] = levels.dates().back().to_string();
            data["variables"] = levels.variable_names();
            nlohmann::json skipped = nlohmann::json::object();
            for (const auto& s : raw)
                if (!s.skipped_rows.empty()) skipped[s.name] = s.skipped_rows.size();
            data["skipped_cells"] = skipped;
            report["data"] = data;
            md << "## Data\n\n"
               << levels.cols() << " variables, " << levels.rows() << " aligned rows from "
               << levels.dates().front().to_string() << " to "
               << levels.dates().back().to_string() << ".\n\n";
        }

        stage = "stationarity";
        auto adf_before = detail::adf_table(levels, cfg.adf_alpha);
        bool any_nonstationary = false;
        for (const auto& r : adf_before) any_nonstationary |= r.nonstationary;
        report["stationarity"]["alpha"] = cfg.adf_alpha;
        report["stationarity"]["original"] = detail::adf_table_json(adf_before);
        md << "## Stationarity (ADF p-values)\n\n### Original data\n\n";
        detail::adf_table_md(md, adf_before);

        stage = "difference";
        TransformLog tlog;
        TimeSeriesDataset processed = levels;
        bool differenced = cfg.difference_if_nonstationary && any_nonstationary;
        report["stationarity"]["differenced"] = differenced;
        if (differenced) {
            processed = difference(levels, 1, &tlog);
            auto adf_after = detail::adf_table(processed, cfg.adf_alpha);
            report["stationarity"]["processed"] = detail::adf_table_json(adf_after);
            md << "\n### First-differenced data\n\n";
            detail::adf_table_md(md, adf_after);
        }
        md << "\n";

        stage = "order selection";
        OrderSelection sel = select_order(processed, cfg.max_var_order);
        int order = cfg.criterion == OrderCriterion::bic ? sel.chosen_bic : sel.chosen_hqic;
        {
            nlohmann::json js;
            js["table"] = nlohmann::json::array();
            for (const auto& row : sel.table)
                js["table"].push_back({{"order", row.order},
                                       {"aic", row.aic},
                                       {"bic", row.bic},
                                       {"hqic", row.hqic}});
            js["chosen"] = {{"aic", sel.chosen_aic},
                            {"bic", sel.chosen_bic},
                            {"hqic", sel.chosen_hqic}};
            js["selected_order"] = order;
            report["var"]["order_selection"] = js;
            md << "## VAR order selection\n\n| Order | AIC | BIC | HQIC |\n|---|---|---|---|\n";
            for (const auto& row : sel.table)
                md << "| " << row.order << " | " << detail::fmt_num(row.aic) << " | "
                   << detail::fmt_num(row.bic) << " | " << detail::fmt_num(row.hqic)
                   << " |\n";
            md << "\nSelected order "
               << order << " by " << (cfg.criterion == OrderCriterion::bic ? "BIC" : "HQIC")
               << " (AIC would pick " << sel.chosen_aic << ", BIC " << sel.chosen_bic
               << ", HQIC " << sel.chosen_hqic << ").\n\n";
        }

        stage = "var";
        VarModel var = var_fit(processed, order);
        {
            auto eqs = detail::var_equation_terms(processed, var);
            nlohmann::json jeqs = nlohmann::json::array();
            md << "## VAR estimates (order " << order << ")\n\n";
            for (Eigen::Index eq = 0; eq < processed.cols(); ++eq) {
                nlohmann::json je;
                je["variable"] = processed.variable_names()[eq];
                je["terms"] = nlohmann::json::array();
                md << "### Equation for " << processed.variable_names()[eq] << "\n\n";
                md << "| Regressor | Coefficient | Std. error | t | p |\n";
                md << "|---|---|---|---|---|\n";
                for (const auto& t : eqs[eq]) {
                    je["terms"].push_back({{"regressor", t.regressor},
                                           {"coefficient", t.coefficient},
                                           {"std_error", t.std_error},
                                           {"t", t.t},
                                           {"p", t.p}});
                    md << "| " << t.regressor << " | " << detail::fmt_num(t.coefficient)
                       << " | " << detail::fmt_num(t.std_error) << " | "
                       << detail::fmt_num(t.t) << " | " << detail::fmt_num(t.p) << " |\n";
                }
                md << "\n";
                jeqs.push_back(std::move(je));
            }
            report["var"]["equations"] = jeqs;
            double radius = companion_spectral_radius(var.coefficients);
            report["var"]["spectral_radius"] = radius;
            report["var"]["stable"] = radius < 1.0;
            md << "Companion spectral radius " << detail::fmt_num(radius)
               << (radius < 1.0 ? " (stable).\n\n" : " (unstable).\n\n");
        }

        stage = "residual normality";
        {
            JarqueBeraReport jb = jarque_bera(var.residuals);
            nlohmann::json jn;
            jn["columns"] = nlohmann::json::array();
            md << "## Residual normality (Jarque-Bera)\n\n";
            md << "| Variable | Statistic | p |\n|---|---|---|\n";
            for (size_t i = 0; i < jb.columns.size(); ++i) {
                jn["columns"].push_back({{"variable", processed.variable_names()[i]},
                                         {"statistic", jb.columns[i].statistic},
                                         {"p", jb.columns[i].p_value}});
                md << "| " << processed.variable_names()[i] << " | "
                   << detail::fmt_num(jb.columns[i].statistic) << " | "
                   << detail::fmt_num(jb.columns[i].p_value) << " |\n";
            }
            jn["aggregate"] = {{"statistic", jb.aggregate_statistic},
                               {"p", jb.aggregate_p_value}};
            report["var"]["residual_normality"] = jn;
            md << "\nAggregate statistic " << detail::fmt_num(jb.aggregate_statistic)
               << ", p " << detail::fmt_num(jb.aggregate_p_value) << ".\n\n";
        }

        stage = "linearity";
        {
            auto scatters = linearity_diagnostics(processed, order);
            nlohmann::json jl = nlohmann::json::array();
            md << "## Linearity diagnostics\n\nPearson correlation of (x(t-lag), y(t)) "
                  "per ordered pair.\n\n| x | y | Lag | Correlation |\n|---|---|---|---|\n";
            for (const auto& s : scatters) {
                if (s.x_var == s.y_var && s.lag == 0) continue;
                jl.push_back({{"x", processed.variable_names()[s.x_var]},
                              {"y", processed.variable_names()[s.y_var]},
                              {"lag", s.lag},
                              {"correlation", s.correlation}});
                md << "| " << processed.variable_names()[s.x_var] << " | "
                   << processed.variable_names()[s.y_var] << " | " << s.lag << " | "
                   << detail::fmt_num(s.correlation) << " |\n";
            }
            report["linearity"] = jl;
            md << "\n";
        }

        // Applied transforms, so every coefficient is traceable to its scale.
        {
            nlohmann::json jt = nlohmann::json::array();
            for (const auto& s : tlog.steps)
                jt.push_back(s.kind == TransformStep::Kind::difference
                                 ? nlohmann::json{{"kind", "difference"}, {"order", s.order}}
                                 : nlohmann::json{{"kind", "standardize"}});
            report["transforms"] = jt;
        }

        if (cfg.run_varlingam) {
            stage = "varlingam";
            VarLingamOptions vopt;
            vopt.criterion = cfg.criterion;
            vopt.max_order = cfg.max_var_order;
            vopt.b0.ica.seed = cfg.seed;
            vopt.stationarity_check = false;  // the ADF gate already ran above
            VarLingamModel raw_model =
                fit_var_lingam(processed, order, knowledge, false, vopt);
            nlohmann::json jv;
            jv["order"] = raw_model.order;
            nlohmann::json jorder = nlohmann::json::array();
            for (int v : raw_model.causal_order)
                jorder.push_back(processed.variable_names()[v]);
            jv["causal_order"] = jorder;
            jv["warnings"] = raw_model.warnings;
            md << "## Instantaneous and lagged effects (VAR-LiNGAM)\n\nCausal order:";
            for (int v : raw_model.causal_order) md << " " << processed.variable_names()[v];
            md << "\n\n";
            for (size_t tau = 0; tau < raw_model.b.size(); ++tau) {
                jv["b"].push_back(detail::matrix_json(raw_model.b[tau]));
                detail::matrix_md(md, raw_model.b[tau], processed.variable_names(),
                                  "B" + std::to_string(tau) + " (processed scale)");
            }
            for (const auto& w : raw_model.warnings) md << "> note: " << w << "\n";

            LaggedDag dag = to_lagged_dag(raw_model);
            write_artifact("varlingam.graph.json", export_json(dag).dump(2) + "\n");
            write_artifact("varlingam.dot", export_dot(dag));

            SummaryGraph summary;
            if (cfg.standardize) {
                VarLingamModel std_model =
                    fit_var_lingam(processed, order, knowledge, true, vopt);
                for (size_t tau = 0; tau < std_model.b.size(); ++tau) {
                    jv["standardized_b"].push_back(detail::matrix_json(std_model.b[tau]));
                    detail::matrix_md(md, std_model.b[tau], processed.variable_names(),
                                      "B" + std::to_string(tau) + " (standardized)");
                }
                summary = varlingam_to_lpcmci_form(std_model);
            } else {
                summary = collapse(dag);
            }
            write_artifact("varlingam_summary.graph.json",
                           export_json(summary).dump(2) + "\n");
            write_artifact("varlingam_summary.dot", export_dot(summary));
            report["varlingam"] = jv;
        }

        if (cfg.run_lpcmci) {
            stage = "lpcmci";
            int tau = cfg.tau_max > 0 ? cfg.tau_max : order;
            DiscoverOptions dopt;
            dopt.prelim_iters = cfg.prelim_iters;
            TimeSeriesPAG pag = discover(processed, tau, cfg.alpha, knowledge, dopt);
            nlohmann::json jp;
            jp["tau_max"] = tau;
            jp["alpha"] = cfg.alpha;
            jp["edges"] = nlohmann::json::array();
            md << "## Latent-aware discovery (LPCMCI)\n\nWindow tau_max = " << tau
               << ", alpha = " << detail::fmt_num(cfg.alpha) << ".\n\n";
            md << "| Edge | Min p | Statistic |\n|---|---|---|\n";
            for (const auto& e : pag.edges) {
                jp["edges"].push_back({{"from", detail::pag_node_label(pag, e.a)},
                                       {"to", detail::pag_node_label(pag, e.b)},
                                       {"glyph", edge_glyph(e.mark_a, e.mark_b)},
                                       {"min_p", e.min_p},
                                       {"statistic", e.statistic}});
                md << "| " << detail::pag_node_label(pag, e.a) << " "
                   << edge_glyph(e.mark_a, e.mark_b) << " "
                   << detail::pag_node_label(pag, e.b) << " | "
                   << detail::fmt_num(e.min_p) << " | " << detail::fmt_num(e.statistic)
                   << " |\n";
            }
            md << "\n";
            report["lpcmci"] = jp;
            write_artifact("lpcmci.graph.json", export_json(pag).dump(2) + "\n");
            write_artifact("lpcmci.dot", export_dot(pag));
            SummaryGraph summary = collapse(pag);
            write_artifact("lpcmci_summary.graph.json", export_json(summary).dump(2) + "\n");
            write_artifact("lpcmci_summary.dot", export_dot(summary));
        }

        stage = "report";
        md << "## Artifacts\n\n";
        for (const auto& f : art.files) md << "- " << f << "\n";
        md << "- report.json\n- report.md\n";
        flush_reports();
    } catch (const std::exception& e) {
        report["error"] = {{"stage", stage}, {"cause", e.what()}};
        md << "\n**Run failed at stage '" << stage << "':** " << e.what() << "\n";
        try {
            flush_reports();
        } catch (...) {
            // Output dir may itself be the problem; the thrown error wins.
        }
        throw std::runtime_error("stage '" + stage + "': " + e.what());
    }
    return art;
}

}  // namespace tscausal
