#pragma once

// Latent-confounder-aware discovery on stationary time series.  A level-wise
// skeleton search with momentary-information refinement passes feeds the
// collider rule and Zhang's R1-R3, producing a time-series PAG of canonical
// edge patterns.  CI decisions go through the CiTester interface, so the same
// search runs against sample partial correlations or an exact d-separation
// oracle.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "tscausal/dataset.hpp"
#include "tscausal/graphs.hpp"
#include "tscausal/knowledge.hpp"
#include "tscausal/stattests.hpp"

namespace tscausal {

struct CiOutcome {
    double statistic = 0.0;  // signed, magnitude-comparable across tests
    double p_value = 1.0;
    bool undetermined = false;
};

class CiTester {
  public:
    virtual ~CiTester() = default;
    virtual int variable_count() const = 0;
    virtual const std::vector<std::string>& variable_names() const = 0;
    // Nodes are (variable, lag) with lag >= 0 meaning time t-lag.
    virtual CiOutcome test(PagNode x, PagNode y, const std::vector<PagNode>& cond) const = 0;
};

// Sample tester: partial correlation on lag-aligned columns.  The reported
// statistic is the partial correlation itself, recovered from the t-value.
class ParCorrTester final : public CiTester {
  public:
    explicit ParCorrTester(TimeSeriesDataset data) : data_(std::move(data)) {}

    int variable_count() const override {
        return static_cast<int>(data_.variable_names().size());
    }
    const std::vector<std::string>& variable_names() const override {
        return data_.variable_names();
    }

    CiOutcome test(PagNode x, PagNode y, const std::vector<PagNode>& cond) const override {
        int max_lag = std::max(x.lag, y.lag);
        for (const auto& c : cond) max_lag = std::max(max_lag, c.lag);
        const Eigen::Index T = data_.values().rows();
        const Eigen::Index nobs = T - max_lag;
        const Eigen::Index k = static_cast<Eigen::Index>(cond.size());
        CiOutcome out;
        if (nobs < k + 3) {  // not enough rows to run the test at all
            out.undetermined = true;
            out.p_value = 0.0;
            return out;
        }
        auto column = [&](PagNode u) {
            return data_.values().col(u.var).segment(max_lag - u.lag, nobs).eval();
        };
        Eigen::MatrixXd z(nobs, k);
        for (Eigen::Index c = 0; c < k; ++c) z.col(c) = column(cond[c]);
        CiResult res = partial_correlation_test(column(x), column(y), z, 0.5);
        out.p_value = res.p_value;
        out.undetermined = res.undetermined;
        double dof = double(nobs - 2 - k);
        if (std::isinf(res.statistic))
            out.statistic = res.statistic > 0 ? 1.0 : -1.0;
        else if (dof > 0)
            out.statistic =
                res.statistic / std::sqrt(res.statistic * res.statistic + dof);
        return out;
    }

  private:
    TimeSeriesDataset data_;
};

// Ground-truth structural graph over observed plus latent processes.  Edge
// (cause, effect, lag) means cause(t-lag) -> effect(t); observed variables
// are indices 0..n_observed-1.
struct TruthEdge {
    int cause = 0;
    int effect = 0;
    int lag = 0;

    auto operator<=>(const TruthEdge&) const = default;
};

struct TruthGraph {
    int n_observed = 0;
    int n_total = 0;
    std::vector<std::string> names;  // observed variables only
    std::vector<TruthEdge> edges;

    int max_edge_lag() const {
        int m = 0;
        for (const auto& e : edges) m = std::max(m, e.lag);
        return m;
    }

    void validate() const {
        if (n_observed < 1 || n_total < n_observed)
            throw std::invalid_argument("truth graph: bad variable counts");
        if (names.size() != size_t(n_observed))
            throw std::invalid_argument("truth graph: name count mismatch");
        Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(n_total, n_total);
        for (const auto& e : edges) {
            if (e.cause < 0 || e.cause >= n_total || e.effect < 0 || e.effect >= n_total)
                throw std::invalid_argument("truth graph: edge index out of range");
            if (e.lag < 0) throw std::invalid_argument("truth graph: negative lag");
            if (e.lag == 0) {
                if (e.cause == e.effect)
                    throw std::invalid_argument("truth graph: lag-0 self loop");
                b0(e.effect, e.cause) = 1.0;
            }
        }
        if (!detail::lag0_acyclic(b0))
            throw std::invalid_argument("truth graph: lag-0 layer is cyclic");
    }
};

// Exact CI oracle: answers queries by d-separation on a finite unroll of the
// truth graph.  Queries address observed variables only; latents take part
// as path nodes.  Returns p = 1 for d-separated pairs and p = 0 otherwise.
class DsepOracle final : public CiTester {
  public:
    explicit DsepOracle(TruthGraph g) : graph_(std::move(g)) { graph_.validate(); }

    int variable_count() const override { return graph_.n_observed; }
    const std::vector<std::string>& variable_names() const override { return graph_.names; }

    CiOutcome test(PagNode x, PagNode y, const std::vector<PagNode>& cond) const override {
        int max_query_lag = std::max(x.lag, y.lag);
        for (const auto& c : cond) max_query_lag = std::max(max_query_lag, c.lag);
        bool dep = d_connected(x, y, cond, unroll_depth(max_query_lag));
        CiOutcome out;
        out.statistic = dep ? 1.0 : 0.0;
        out.p_value = dep ? 0.0 : 1.0;
        return out;
    }

    const TruthGraph& truth() const { return graph_; }

  private:
    TruthGraph graph_;

    // Depth such that every minimal d-connecting path between in-window nodes
    // fits inside the unroll.  Minimal paths visit each (variable, phase)
    // state a bounded number of times, so a margin of a few graph heights
    // beyond the deepest query lag is sufficient for the graph sizes used
    // here; the generous factor keeps the bound safely conservative.
    int unroll_depth(int max_query_lag) const {
        int span = std::max(1, graph_.max_edge_lag());
        return max_query_lag + 2 * span * (graph_.n_total + 2) + 4;
    }

    bool d_connected(PagNode x, PagNode y, const std::vector<PagNode>& cond, int depth) const {
        const int width = graph_.n_total;
        const int layers = depth + 1;
        auto id = [&](int var, int lag) { return lag * width + var; };

        std::vector<char> in_z(width * layers, 0);
        for (const auto& c : cond) in_z[id(c.var, c.lag)] = 1;

        auto parents = [&](int node, auto&& fn) {
            int var = node % width, lag = node / width;
            for (const auto& e : graph_.edges)
                if (e.effect == var && lag + e.lag < layers) fn(id(e.cause, lag + e.lag));
        };
        auto children = [&](int node, auto&& fn) {
            int var = node % width, lag = node / width;
            for (const auto& e : graph_.edges)
                if (e.cause == var && lag - e.lag >= 0) fn(id(e.effect, lag - e.lag));
        };

        // Ancestors of the conditioning set, inclusive.
        std::vector<char> anc(width * layers, 0);
        std::vector<int> stack;
        for (const auto& c : cond) {
            int node = id(c.var, c.lag);
            if (!anc[node]) {
                anc[node] = 1;
                stack.push_back(node);
            }
        }
        while (!stack.empty()) {
            int node = stack.back();
            stack.pop_back();
            parents(node, [&](int p) {
                if (!anc[p]) {
                    anc[p] = 1;
                    stack.push_back(p);
                }
            });
        }

        // Bayes-ball reachability: states are (node, direction), direction
        // "up" when entered from a child, "down" when entered from a parent.
        const int target = id(y.var, y.lag);
        std::vector<char> visited(size_t(width) * layers * 2, 0);
        std::vector<std::pair<int, int>> queue;  // (node, dir): 0 = up, 1 = down
        queue.emplace_back(id(x.var, x.lag), 0);
        while (!queue.empty()) {
            auto [node, dir] = queue.back();
            queue.pop_back();
            size_t state = size_t(node) * 2 + dir;
            if (visited[state]) continue;
            visited[state] = 1;
            if (!in_z[node] && node == target) return true;
            if (dir == 0 && !in_z[node]) {
                parents(node, [&](int p) { queue.emplace_back(p, 0); });
                children(node, [&](int c) { queue.emplace_back(c, 1); });
            } else if (dir == 1) {
                if (!in_z[node])
                    children(node, [&](int c) { queue.emplace_back(c, 1); });
                if (anc[node])
                    parents(node, [&](int p) { queue.emplace_back(p, 0); });
            }
        }
        return false;
    }
};

struct DiscoverOptions {
    // Refinement passes after the base PC-style pass; each re-tests retained
    // edges with the previous pass's lagged adjacencies added to the
    // conditioning sets.
    int prelim_iters = 1;
    int max_cond_card = -1;  // cap on conditioning-set size, -1 = unbounded
};

namespace detail {

using PatternKey = std::tuple<int, int, int>;  // (i, j, delta): (i, delta) -- (j, 0)

struct Pattern {
    bool present = true;
    bool protected_edge = false;  // required by knowledge: never tested or removed
    Mark mark_a = Mark::circle;   // at (i, delta)
    Mark mark_b = Mark::circle;   // at (j, 0)
    double min_p = 1.0;
    double statistic = 0.0;
    bool has_sepset = false;
    std::vector<PagNode> sepset;  // in the frame of the canonical pair
};

class PagWorkspace {
  public:
    PagWorkspace(int n, int tau_max) : n_(n), tau_max_(tau_max) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) patterns_[{i, j, 0}] = Pattern{};
        for (int delta = 1; delta <= tau_max; ++delta)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Pattern p;
                    p.mark_b = Mark::arrow;  // the later end of a lagged pair
                    patterns_[{i, j, delta}] = p;
                }
    }

    int n() const { return n_; }
    int tau_max() const { return tau_max_; }
    std::map<PatternKey, Pattern>& patterns() { return patterns_; }
    const std::map<PatternKey, Pattern>& patterns() const { return patterns_; }

    // Canonical key for an instance pair; nodes must be distinct window nodes.
    PatternKey key_for(PagNode u, PagNode w) const {
        if (u.lag > w.lag) return {u.var, w.var, u.lag - w.lag};
        if (u.lag < w.lag) return {w.var, u.var, w.lag - u.lag};
        return {std::min(u.var, w.var), std::max(u.var, w.var), 0};
    }

    bool adjacent(PagNode u, PagNode w) const {
        if (u == w) return false;
        auto it = patterns_.find(key_for(u, w));
        return it != patterns_.end() && it->second.present;
    }

    std::vector<PagNode> neighbors(PagNode u) const {
        std::vector<PagNode> out;
        for (int v = 0; v < n_; ++v)
            for (int lag = 0; lag <= tau_max_; ++lag) {
                PagNode w{v, lag};
                if (adjacent(u, w)) out.push_back(w);
            }
        return out;
    }

    // Mark at the `at` end of the edge between `at` and `other`.
    Mark end_mark(PagNode at, PagNode other) const {
        const Pattern& p = patterns_.at(key_for(at, other));
        return a_end(at, other) ? p.mark_a : p.mark_b;
    }

    // Sets the mark at the `at` end if currently a circle and, for
    // arrowheads, not blocked by time order (no arrow may point into the
    // strictly earlier node of a lagged pair).  Returns true on change.
    bool set_end_mark(PagNode at, PagNode other, Mark m) {
        Pattern& p = patterns_.at(key_for(at, other));
        bool at_a = a_end(at, other);
        if (m == Mark::arrow && at_a && at.lag != other.lag) return false;
        Mark& slot = at_a ? p.mark_a : p.mark_b;
        if (slot != Mark::circle || slot == m) return false;
        slot = m;
        return true;
    }

    // Sepset membership for a nonadjacent instance pair, translated to the
    // canonical frame.  Unknown when the pair was never separated by a test.
    // A node that falls outside the canonical frame is a definite non-member.
    std::optional<bool> sepset_contains(PagNode u, PagNode w, PagNode z) const {
        auto it = patterns_.find(key_for(u, w));
        if (it == patterns_.end() || !it->second.has_sepset) return std::nullopt;
        int shift = std::min(u.lag, w.lag);
        PagNode translated{z.var, z.lag - shift};
        if (translated.lag < 0) return false;
        const auto& sep = it->second.sepset;
        return std::find(sep.begin(), sep.end(), translated) != sep.end();
    }

  private:
    int n_, tau_max_;
    std::map<PatternKey, Pattern> patterns_;

    // True when `at` is the (i, delta) end of the canonical pattern.
    bool a_end(PagNode at, PagNode other) const {
        if (at.lag != other.lag) return at.lag > other.lag;
        return at.var < other.var;
    }
};

inline void apply_knowledge_to_pag(PagWorkspace& ws, const IndexedKnowledge& ik) {
    for (const auto& [cause, effect, lag] : ik.forbidden) {
        if (lag == 0) {
            // Direction knowledge: the cause end gets an arrowhead, ruling
            // out cause -> effect while leaving the adjacency to the tests.
            auto& p = ws.patterns().at({std::min(cause, effect), std::max(cause, effect), 0});
            (cause < effect ? p.mark_a : p.mark_b) = Mark::arrow;
        } else if (lag <= ws.tau_max()) {
            // A forbidden lagged edge cannot appear at all: under time order
            // the lagged pattern has no other causal reading.
            auto& p = ws.patterns().at({cause, effect, lag});
            p.present = false;
        }
    }
    for (const auto& [cause, effect, lag] : ik.required) {
        if (lag > ws.tau_max()) continue;
        if (lag == 0) {
            auto& p = ws.patterns().at({std::min(cause, effect), std::max(cause, effect), 0});
            p.protected_edge = true;
            (cause < effect ? p.mark_a : p.mark_b) = Mark::tail;
            (cause < effect ? p.mark_b : p.mark_a) = Mark::arrow;
        } else {
            auto& p = ws.patterns().at({cause, effect, lag});
            p.protected_edge = true;
            p.mark_a = Mark::tail;
            p.mark_b = Mark::arrow;
        }
    }
}

inline std::vector<PagNode> window_nodes(int n, int tau_max) {
    std::vector<PagNode> out;
    for (int v = 0; v < n; ++v)
        for (int lag = 0; lag <= tau_max; ++lag) out.push_back({v, lag});
    return out;
}

// Enumerates k-subsets of `pool` in lexicographic index order.
inline void for_each_subset(const std::vector<PagNode>& pool, int k,
                            const std::function<bool(const std::vector<PagNode>&)>& fn) {
    const int m = static_cast<int>(pool.size());
    if (k > m) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<PagNode> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (!fn(subset)) return;
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// Runs the discovery: level-wise skeleton with refinement passes, collider
// orientation from recorded separating sets, then Zhang R1-R3 to a fixpoint.
inline TimeSeriesPAG discover(const CiTester& tester, int tau_max, double alpha,
                              const Knowledge& knowledge = {},
                              const DiscoverOptions& opt = {}) {
    if (tau_max < 1) throw std::invalid_argument("discover: tau_max must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("discover: alpha must lie in (0,1)");
    if (opt.prelim_iters < 0)
        throw std::invalid_argument("discover: prelim_iters must be >= 0");
    const int n = tester.variable_count();
    if (n < 2) throw std::invalid_argument("discover: need at least two variables");

    detail::PagWorkspace ws(n, tau_max);
    detail::apply_knowledge_to_pag(ws, resolve_knowledge(knowledge, tester.variable_names()));

    // Adjacency snapshot of the previous pass, keyed like the pattern map;
    // empty on the base pass (no momentary-information augmentation).
    std::set<detail::PatternKey> prev_pass_adj;

    auto adjacent_in = [&](const std::set<detail::PatternKey>& adj, PagNode u, PagNode w) {
        if (u == w) return false;
        return adj.count(ws.key_for(u, w)) > 0;
    };

    for (int pass = 0; pass <= opt.prelim_iters; ++pass) {
        for (int card = 0;; ++card) {
            if (opt.max_cond_card >= 0 && card > opt.max_cond_card) break;

            // Neighborhoods are frozen at level entry; removals found at this
            // cardinality commit together at the level boundary.
            std::set<detail::PatternKey> level_adj;
            for (const auto& [key, p] : ws.patterns())
                if (p.present) level_adj.insert(key);

            std::vector<std::pair<detail::PatternKey, std::vector<PagNode>>> removals;
            bool any_candidates = false;

            for (auto& [key, pattern] : ws.patterns()) {
                if (!pattern.present || pattern.protected_edge) continue;
                const auto& [i, j, delta] = key;
                const PagNode a{i, delta}, b{j, 0};

                auto side_pool = [&](PagNode u, PagNode excl) {
                    std::vector<PagNode> pool;
                    for (int v = 0; v < n; ++v)
                        for (int lag = 0; lag <= tau_max; ++lag) {
                            PagNode w{v, lag};
                            if (w == u || w == excl) continue;
                            if (adjacent_in(level_adj, u, w)) pool.push_back(w);
                        }
                    return pool;
                };
                std::vector<PagNode> pool_a = side_pool(a, b);
                std::vector<PagNode> pool_b = side_pool(b, a);

                // Momentary augmentation: strictly lagged adjacencies of the
                // later node in the previous pass's skeleton (both ends for
                // contemporaneous pairs), excluding the tested pair.
                std::vector<PagNode> mci;
                if (pass > 0) {
                    std::set<PagNode> m;
                    auto add_lagged_adj = [&](PagNode u) {
                        for (int v = 0; v < n; ++v)
                            for (int lag = 1; lag <= tau_max; ++lag) {
                                PagNode w{v, lag};
                                if (w == a || w == b) continue;
                                if (adjacent_in(prev_pass_adj, u, w)) m.insert(w);
                            }
                    };
                    add_lagged_adj(b);
                    if (delta == 0) add_lagged_adj(a);
                    mci.assign(m.begin(), m.end());
                }

                bool removed = false;
                std::set<std::vector<PagNode>> tried;
                for (const auto* pool : {&pool_a, &pool_b}) {
                    if (static_cast<int>(pool->size()) >= card) any_candidates = true;
                    if (removed) break;
                    detail::for_each_subset(*pool, card, [&](const std::vector<PagNode>& s) {
                        if (!tried.insert(s).second) return true;
                        std::set<PagNode> cond_set(s.begin(), s.end());
                        cond_set.insert(mci.begin(), mci.end());
                        cond_set.erase(a);
                        cond_set.erase(b);
                        std::vector<PagNode> cond(cond_set.begin(), cond_set.end());
                        CiOutcome out = tester.test(a, b, cond);
                        if (out.undetermined) return true;
                        pattern.min_p = std::min(pattern.min_p, out.p_value);
                        if (std::fabs(out.statistic) > std::fabs(pattern.statistic))
                            pattern.statistic = out.statistic;
                        if (out.p_value > alpha) {
                            removals.emplace_back(key, cond);
                            removed = true;
                            return false;
                        }
                        return true;
                    });
                }
            }

            for (auto& [key, sep] : removals) {
                auto& p = ws.patterns().at(key);
                p.present = false;
                p.has_sepset = true;
                p.sepset = std::move(sep);
            }
            if (!any_candidates) break;
        }

        prev_pass_adj.clear();
        for (const auto& [key, p] : ws.patterns())
            if (p.present) prev_pass_adj.insert(key);
    }

    // Collider orientation: unshielded instance triples whose middle node is
    // outside the recorded separating set get arrowheads, written through to
    // the canonical patterns.
    const std::vector<PagNode> nodes = detail::window_nodes(n, tau_max);
    for (const auto& z : nodes) {
        std::vector<PagNode> neigh = ws.neighbors(z);
        for (size_t xi = 0; xi < neigh.size(); ++xi)
            for (size_t yi = xi + 1; yi < neigh.size(); ++yi) {
                const PagNode x = neigh[xi], y = neigh[yi];
                if (ws.adjacent(x, y)) continue;
                std::optional<bool> in_sep = ws.sepset_contains(x, y, z);
                if (!in_sep.has_value() || *in_sep) continue;
                ws.set_end_mark(z, x, Mark::arrow);
                ws.set_end_mark(z, y, Mark::arrow);
            }
    }

    // Zhang R1-R3 to a fixpoint; rules only upgrade circle marks and respect
    // time order, so iteration terminates.
    bool changed = true;
    while (changed) {
        changed = false;
        // R1: a *-> b o-* c with a, c nonadjacent orients b -> c.
        for (const auto& b : nodes)
            for (const auto& a : ws.neighbors(b)) {
                if (ws.end_mark(b, a) != Mark::arrow) continue;
                for (const auto& c : ws.neighbors(b)) {
                    if (c == a || ws.adjacent(a, c)) continue;
                    if (ws.end_mark(b, c) != Mark::circle) continue;
                    Mark at_c = ws.end_mark(c, b);
                    if (at_c == Mark::tail) continue;
                    if (at_c == Mark::circle && !ws.set_end_mark(c, b, Mark::arrow))
                        continue;  // arrowhead blocked by time order, leave the circle
                    changed |= ws.set_end_mark(b, c, Mark::tail);
                    if (at_c == Mark::circle) changed = true;
                }
            }
        // R2: a -> b *-> c or a *-> b -> c, with a *-o c, orients the c end
        // of a--c to an arrowhead.
        for (const auto& a : nodes)
            for (const auto& c : ws.neighbors(a)) {
                if (ws.end_mark(c, a) != Mark::circle) continue;
                bool fire = false;
                for (const auto& b : ws.neighbors(a)) {
                    if (b == c || !ws.adjacent(b, c)) continue;
                    bool chain1 = ws.end_mark(a, b) == Mark::tail &&
                                  ws.end_mark(b, a) == Mark::arrow &&
                                  ws.end_mark(c, b) == Mark::arrow;
                    bool chain2 = ws.end_mark(b, a) == Mark::arrow &&
                                  ws.end_mark(b, c) == Mark::tail &&
                                  ws.end_mark(c, b) == Mark::arrow;
                    if (chain1 || chain2) {
                        fire = true;
                        break;
                    }
                }
                if (fire) changed |= ws.set_end_mark(c, a, Mark::arrow);
            }
        // R3: a *-> b <-* c, a *-o d o-* c, a, c nonadjacent, d *-o b orients
        // the b end of d--b to an arrowhead.
        for (const auto& d : nodes)
            for (const auto& b : ws.neighbors(d)) {
                if (ws.end_mark(b, d) != Mark::circle) continue;
                std::vector<PagNode> dn = ws.neighbors(d);
                bool fire = false;
                for (size_t ai = 0; ai < dn.size() && !fire; ++ai)
                    for (size_t ci = ai + 1; ci < dn.size() && !fire; ++ci) {
                        const PagNode a = dn[ai], c = dn[ci];
                        if (a == b || c == b || ws.adjacent(a, c)) continue;
                        if (ws.end_mark(d, a) != Mark::circle ||
                            ws.end_mark(d, c) != Mark::circle)
                            continue;
                        if (!ws.adjacent(a, b) || !ws.adjacent(c, b)) continue;
                        if (ws.end_mark(b, a) == Mark::arrow &&
                            ws.end_mark(b, c) == Mark::arrow)
                            fire = true;
                    }
                if (fire) changed |= ws.set_end_mark(b, d, Mark::arrow);
            }
    }

    TimeSeriesPAG pag;
    pag.variable_names = tester.variable_names();
    pag.tau_max = tau_max;
    for (const auto& [key, p] : ws.patterns()) {
        if (!p.present) continue;
        const auto& [i, j, delta] = key;
        PagEdge e;
        e.a = {i, delta};
        e.b = {j, 0};
        e.mark_a = p.mark_a;
        e.mark_b = p.mark_b;
        e.min_p = p.min_p;
        e.statistic = p.statistic;
        pag.edges.push_back(e);
    }
    return pag;
}

inline TimeSeriesPAG discover(const TimeSeriesDataset& data, int tau_max, double alpha,
                              const Knowledge& knowledge = {},
                              const DiscoverOptions& opt = {}) {
    ParCorrTester tester(data);
    return discover(tester, tau_max, alpha, knowledge, opt);
}

}  // namespace tscausal
