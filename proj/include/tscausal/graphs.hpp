#pragma once

// Graph containers shared by the discovery algorithms: weighted lagged DAGs,
// time-series PAGs with end marks, collapsed summary graphs, DOT and JSON
// serialization with lossless round-trips, and binarized structural metrics.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace tscausal {

enum class Mark { tail, arrow, circle };

inline const char* to_string(Mark m) {
    switch (m) {
        case Mark::tail: return "tail";
        case Mark::arrow: return "arrow";
        case Mark::circle: return "circle";
    }
    return "?";
}

inline Mark mark_from_string(const std::string& s) {
    if (s == "tail") return Mark::tail;
    if (s == "arrow") return Mark::arrow;
    if (s == "circle") return Mark::circle;
    throw std::invalid_argument("unknown mark '" + s + "'");
}

// Text glyph for an edge with the given end marks, e.g. o-> or <->.
inline std::string edge_glyph(Mark at_from, Mark at_to) {
    char left = at_from == Mark::arrow ? '<' : (at_from == Mark::circle ? 'o' : '-');
    char right = at_to == Mark::arrow ? '>' : (at_to == Mark::circle ? 'o' : '-');
    return std::string{left, '-', right};
}

namespace detail {

inline bool lag0_acyclic(const Eigen::MatrixXd& b0) {
    const int n = static_cast<int>(b0.rows());
    std::vector<int> indeg(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (b0(i, j) != 0.0) indeg[i]++;
    std::vector<int> stack;
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) stack.push_back(i);
    int seen = 0;
    while (!stack.empty()) {
        int j = stack.back();
        stack.pop_back();
        ++seen;
        for (int i = 0; i < n; ++i)
            if (b0(i, j) != 0.0 && --indeg[i] == 0) stack.push_back(i);
    }
    return seen == n;
}

inline std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace detail

// Weighted lagged DAG: adjacency[tau](i, j) is the weight of j -> i at lag
// tau; the lag-0 layer must be acyclic.
struct LaggedDag {
    std::vector<std::string> variable_names;
    std::vector<Eigen::MatrixXd> adjacency;  // index = lag, 0..max_lag

    int max_lag() const { return static_cast<int>(adjacency.size()) - 1; }

    void validate() const {
        if (adjacency.empty()) throw std::invalid_argument("lagged dag: no layers");
        const Eigen::Index n = adjacency[0].rows();
        if (variable_names.size() != size_t(n))
            throw std::invalid_argument("lagged dag: name count mismatch");
        for (const auto& m : adjacency)
            if (m.rows() != n || m.cols() != n)
                throw std::invalid_argument("lagged dag: layer shape mismatch");
        for (Eigen::Index i = 0; i < n; ++i)
            if (adjacency[0](i, i) != 0.0)
                throw std::invalid_argument("lagged dag: lag-0 self loop");
        if (!detail::lag0_acyclic(adjacency[0]))
            throw std::invalid_argument("lagged dag: lag-0 layer is cyclic");
    }
};

struct PagNode {
    int var = 0;
    int lag = 0;  // lag >= 0, meaning time t-lag

    auto operator<=>(const PagNode&) const = default;
};

// Canonical edge pattern of a stationary time-series PAG: `a` sits at lag
// delta >= 0, `b` at lag 0 (for delta == 0, a.var < b.var).  Every time
// translation of the pattern inside the window carries the same marks.
struct PagEdge {
    PagNode a, b;
    Mark mark_a = Mark::circle;
    Mark mark_b = Mark::circle;
    double min_p = 1.0;     // smallest p-value seen across CI tests of this pair
    double statistic = 0.0; // signed statistic with the largest magnitude seen
};

struct TimeSeriesPAG {
    std::vector<std::string> variable_names;
    int tau_max = 0;
    std::vector<PagEdge> edges;  // sorted by (a.var, b.var, a.lag)

    bool same_structure(const TimeSeriesPAG& other) const {
        if (variable_names != other.variable_names || tau_max != other.tau_max ||
            edges.size() != other.edges.size())
            return false;
        for (size_t i = 0; i < edges.size(); ++i) {
            const auto& x = edges[i];
            const auto& y = other.edges[i];
            if (x.a != y.a || x.b != y.b || x.mark_a != y.mark_a || x.mark_b != y.mark_b)
                return false;
        }
        return true;
    }
};

// One edge of a collapsed summary graph.  `lags` lists contributing lags in
// decreasing order of |strength| (ties toward the smaller lag) and stays
// empty when lag 0 is the only contribution.
struct SummaryEdge {
    std::string from, to;
    double strength = 0.0;   // signed value of the strongest contribution
    std::vector<int> lags;
    bool contemporaneous = false;
    Mark mark_from = Mark::tail;
    Mark mark_to = Mark::arrow;
};

struct SummaryGraph {
    std::vector<std::string> variable_names;
    std::vector<SummaryEdge> edges;
};

namespace detail {

struct Contribution {
    int lag;
    double value;  // signed strength
    Mark mark_from, mark_to;
};

inline SummaryEdge collapse_pair(const std::string& from, const std::string& to,
                                 std::vector<Contribution> contributions) {
    std::sort(contributions.begin(), contributions.end(), [](const auto& x, const auto& y) {
        double ax = std::fabs(x.value), ay = std::fabs(y.value);
        if (ax != ay) return ax > ay;
        return x.lag < y.lag;
    });
    SummaryEdge e;
    e.from = from;
    e.to = to;
    e.strength = contributions.front().value;
    e.mark_from = contributions.front().mark_from;
    e.mark_to = contributions.front().mark_to;
    bool lag0_only = true;
    for (const auto& c : contributions) {
        if (c.lag == 0) e.contemporaneous = true;
        if (c.lag != 0) lag0_only = false;
    }
    if (!lag0_only)
        for (const auto& c : contributions) e.lags.push_back(c.lag);
    return e;
}

}  // namespace detail

// Collapses a lagged DAG onto variable pairs: per ordered pair the strongest
// entry across lags wins the displayed strength and the lag list follows
// strength order.
inline SummaryGraph collapse(const LaggedDag& dag) {
    dag.validate();
    const int n = static_cast<int>(dag.variable_names.size());
    SummaryGraph g;
    g.variable_names = dag.variable_names;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            std::vector<detail::Contribution> contributions;
            for (int lag = 0; lag <= dag.max_lag(); ++lag) {
                double w = dag.adjacency[lag](i, j);
                if (w != 0.0)
                    contributions.push_back({lag, w, Mark::tail, Mark::arrow});
            }
            if (contributions.empty()) continue;
            g.edges.push_back(detail::collapse_pair(dag.variable_names[j],
                                                    dag.variable_names[i],
                                                    std::move(contributions)));
        }
    return g;
}

// Collapses a PAG: lagged patterns map to the ordered pair (past variable ->
// lag-0 variable); contemporaneous patterns keep their canonical order.  End
// marks come from the strongest contribution.
inline SummaryGraph collapse(const TimeSeriesPAG& pag) {
    SummaryGraph g;
    g.variable_names = pag.variable_names;
    std::vector<std::vector<std::vector<detail::Contribution>>> acc(
        pag.variable_names.size(),
        std::vector<std::vector<detail::Contribution>>(pag.variable_names.size()));
    for (const auto& e : pag.edges)
        acc[e.a.var][e.b.var].push_back(
            {e.a.lag, e.statistic, e.mark_a, e.mark_b});
    for (size_t from = 0; from < acc.size(); ++from)
        for (size_t to = 0; to < acc.size(); ++to) {
            if (acc[from][to].empty()) continue;
            g.edges.push_back(detail::collapse_pair(pag.variable_names[from],
                                                    pag.variable_names[to],
                                                    std::move(acc[from][to])));
        }
    return g;
}

namespace detail {

inline std::string dot_mark(Mark m) {
    switch (m) {
        case Mark::arrow: return "normal";
        case Mark::circle: return "odot";
        case Mark::tail: return "none";
    }
    return "none";
}

inline std::string node_label(const std::string& name, int lag) {
    if (lag == 0) return name + "(t)";
    return name + "(t-" + std::to_string(lag) + ")";
}

}  // namespace detail

inline std::string export_dot(const LaggedDag& dag) {
    dag.validate();
    std::ostringstream out;
    out << "digraph lagged_dag {\n  rankdir=LR;\n";
    for (int lag = dag.max_lag(); lag >= 0; --lag)
        for (const auto& name : dag.variable_names)
            out << "  \"" << detail::node_label(name, lag) << "\";\n";
    const int n = static_cast<int>(dag.variable_names.size());
    for (int lag = 0; lag <= dag.max_lag(); ++lag)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double w = dag.adjacency[lag](i, j);
                if (w == 0.0) continue;
                out << "  \"" << detail::node_label(dag.variable_names[j], lag) << "\" -> \""
                    << detail::node_label(dag.variable_names[i], 0) << "\" [label=\""
                    << detail::fmt_num(w) << "\", color=" << (w < 0 ? "blue" : "red")
                    << "];\n";
            }
    out << "}\n";
    return out.str();
}

// PAG edges render with dir=both so both end marks are explicit; e.g. o->
// becomes arrowtail=odot, arrowhead=normal.  Every in-window translation of
// each pattern is drawn.
inline std::string export_dot(const TimeSeriesPAG& pag) {
    std::ostringstream out;
    out << "digraph time_series_pag {\n  rankdir=LR;\n";
    for (int lag = pag.tau_max; lag >= 0; --lag)
        for (const auto& name : pag.variable_names)
            out << "  \"" << detail::node_label(name, lag) << "\";\n";
    for (const auto& e : pag.edges)
        for (int shift = 0; e.a.lag + shift <= pag.tau_max; ++shift) {
            out << "  \"" << detail::node_label(pag.variable_names[e.a.var], e.a.lag + shift)
                << "\" -> \"" << detail::node_label(pag.variable_names[e.b.var], shift)
                << "\" [dir=both, arrowtail=" << detail::dot_mark(e.mark_a)
                << ", arrowhead=" << detail::dot_mark(e.mark_b) << ", label=\""
                << detail::fmt_num(e.statistic) << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

inline std::string export_dot(const SummaryGraph& g) {
    std::ostringstream out;
    out << "digraph summary {\n";
    for (const auto& name : g.variable_names) out << "  \"" << name << "\";\n";
    for (const auto& e : g.edges) {
        out << "  \"" << e.from << "\" -> \"" << e.to
            << "\" [dir=both, arrowtail=" << detail::dot_mark(e.mark_from)
            << ", arrowhead=" << detail::dot_mark(e.mark_to)
            << ", color=" << (e.strength < 0 ? "blue" : "red");
        if (!e.lags.empty()) {
            out << ", label=\"";
            for (size_t i = 0; i < e.lags.size(); ++i)
                out << (i ? ", " : "") << e.lags[i];
            out << "\"";
        }
        out << ", style=" << (e.contemporaneous && e.lags.empty() ? "solid" : "dashed")
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

inline constexpr const char* kGraphSchema = "tscausal-graph/1";

inline nlohmann::json export_json(const LaggedDag& dag) {
    dag.validate();
    nlohmann::json j;
    j["schema"] = kGraphSchema;
    j["kind"] = "lagged_dag";
    j["variables"] = dag.variable_names;
    j["max_lag"] = dag.max_lag();
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& m : dag.adjacency) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
            rows.push_back(row);
        }
        layers.push_back(rows);
    }
    j["matrices"] = layers;
    return j;
}

inline nlohmann::json export_json(const TimeSeriesPAG& pag) {
    nlohmann::json j;
    j["schema"] = kGraphSchema;
    j["kind"] = "pag";
    j["variables"] = pag.variable_names;
    j["tau_max"] = pag.tau_max;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : pag.edges) {
        nlohmann::json je;
        je["from"] = {{"var", pag.variable_names[e.a.var]}, {"lag", e.a.lag}};
        je["to"] = {{"var", pag.variable_names[e.b.var]}, {"lag", e.b.lag}};
        je["mark_from"] = to_string(e.mark_a);
        je["mark_to"] = to_string(e.mark_b);
        je["min_p"] = e.min_p;
        je["statistic"] = e.statistic;
        edges.push_back(je);
    }
    j["edges"] = edges;
    return j;
}

inline nlohmann::json export_json(const SummaryGraph& g) {
    nlohmann::json j;
    j["schema"] = kGraphSchema;
    j["kind"] = "summary";
    j["variables"] = g.variable_names;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges) {
        nlohmann::json je;
        je["from"] = e.from;
        je["to"] = e.to;
        je["strength"] = e.strength;
        je["lags"] = e.lags;
        je["contemporaneous"] = e.contemporaneous;
        je["mark_from"] = to_string(e.mark_from);
        je["mark_to"] = to_string(e.mark_to);
        edges.push_back(je);
    }
    j["edges"] = edges;
    return j;
}

using AnyGraph = std::variant<LaggedDag, TimeSeriesPAG, SummaryGraph>;

inline AnyGraph import_json(const nlohmann::json& j) {
    if (!j.contains("schema") || j["schema"] != kGraphSchema)
        throw std::invalid_argument("graph import: missing or unsupported schema");
    const std::string kind = j.at("kind");
    std::vector<std::string> names = j.at("variables").get<std::vector<std::string>>();
    auto var_index = [&](const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw std::invalid_argument("graph import: unknown variable '" + name + "'");
        return static_cast<int>(it - names.begin());
    };
    if (kind == "lagged_dag") {
        LaggedDag dag;
        dag.variable_names = names;
        for (const auto& layer : j.at("matrices")) {
            Eigen::MatrixXd m(names.size(), names.size());
            for (size_t r = 0; r < layer.size(); ++r)
                for (size_t c = 0; c < layer[r].size(); ++c) m(r, c) = layer[r][c];
            dag.adjacency.push_back(m);
        }
        dag.validate();
        if (dag.max_lag() != j.at("max_lag").get<int>())
            throw std::invalid_argument("graph import: max_lag mismatch");
        return dag;
    }
    if (kind == "pag") {
        TimeSeriesPAG pag;
        pag.variable_names = names;
        pag.tau_max = j.at("tau_max");
        for (const auto& je : j.at("edges")) {
            PagEdge e;
            e.a = {var_index(je.at("from").at("var")), je.at("from").at("lag")};
            e.b = {var_index(je.at("to").at("var")), je.at("to").at("lag")};
            e.mark_a = mark_from_string(je.at("mark_from"));
            e.mark_b = mark_from_string(je.at("mark_to"));
            e.min_p = je.at("min_p");
            e.statistic = je.at("statistic");
            pag.edges.push_back(e);
        }
        return pag;
    }
    if (kind == "summary") {
        SummaryGraph g;
        g.variable_names = names;
        for (const auto& je : j.at("edges")) {
            SummaryEdge e;
            e.from = je.at("from");
            e.to = je.at("to");
            var_index(e.from);
            var_index(e.to);
            e.strength = je.at("strength");
            e.lags = je.at("lags").get<std::vector<int>>();
            e.contemporaneous = je.at("contemporaneous");
            e.mark_from = mark_from_string(je.at("mark_from"));
            e.mark_to = mark_from_string(je.at("mark_to"));
            g.edges.push_back(e);
        }
        return g;
    }
    throw std::invalid_argument("graph import: unknown kind '" + kind + "'");
}

struct StructuralDistance {
    int hamming = 0;
    double precision = 1.0;
    double recall = 1.0;
};

// Binarizes both DAGs at |w| > threshold and compares supports; `a` is the
// estimate, `b` the reference.  Empty-vs-empty scores 1.0 by convention.
inline StructuralDistance structural_distance(const LaggedDag& a, const LaggedDag& b,
                                              double threshold) {
    if (a.variable_names != b.variable_names)
        throw std::invalid_argument("structural_distance: variable names differ");
    if (a.adjacency.size() != b.adjacency.size())
        throw std::invalid_argument("structural_distance: max lag differs");
    int tp = 0, fp = 0, fn = 0;
    for (size_t lag = 0; lag < a.adjacency.size(); ++lag)
        for (Eigen::Index i = 0; i < a.adjacency[lag].rows(); ++i)
            for (Eigen::Index j = 0; j < a.adjacency[lag].cols(); ++j) {
                bool ea = std::fabs(a.adjacency[lag](i, j)) > threshold;
                bool eb = std::fabs(b.adjacency[lag](i, j)) > threshold;
                if (ea && eb) ++tp;
                else if (ea) ++fp;
                else if (eb) ++fn;
            }
    StructuralDistance d;
    d.hamming = fp + fn;
    d.precision = (tp + fp) == 0 ? 1.0 : double(tp) / double(tp + fp);
    d.recall = (tp + fn) == 0 ? 1.0 : double(tp) / double(tp + fn);
    return d;
}

}  // namespace tscausal
