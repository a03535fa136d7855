#pragma once

// Domain knowledge as forbidden/required directed lagged edges, stored by
// variable name and resolved to indices against a dataset's name list.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace tscausal {

struct LaggedEdge {
    std::string cause;
    std::string effect;
    int lag = 0;

    auto operator<=>(const LaggedEdge&) const = default;
};

struct Knowledge {
    std::set<LaggedEdge> forbidden;
    std::set<LaggedEdge> required;

    bool empty() const { return forbidden.empty() && required.empty(); }

    // Throws on self-edges at lag 0, negative lags, and forbidden/required
    // overlap.
    void validate() const {
        for (const auto* group : {&forbidden, &required}) {
            for (const auto& e : *group) {
                if (e.lag < 0)
                    throw std::invalid_argument("knowledge: negative lag on edge " + e.cause +
                                                " -> " + e.effect);
                if (e.lag == 0 && e.cause == e.effect)
                    throw std::invalid_argument("knowledge: self edge at lag 0 on " + e.cause);
            }
        }
        for (const auto& e : required)
            if (forbidden.count(e))
                throw std::invalid_argument("knowledge: edge " + e.cause + " -> " + e.effect +
                                            " at lag " + std::to_string(e.lag) +
                                            " is both forbidden and required");
    }

    bool is_forbidden(const std::string& cause, const std::string& effect, int lag) const {
        return forbidden.count({cause, effect, lag}) > 0;
    }
    bool is_required(const std::string& cause, const std::string& effect, int lag) const {
        return required.count({cause, effect, lag}) > 0;
    }
};

// Index-resolved view for a fixed variable ordering.  Unknown names throw.
struct IndexedKnowledge {
    int n = 0;
    std::set<std::tuple<int, int, int>> forbidden;  // (cause, effect, lag)
    std::set<std::tuple<int, int, int>> required;

    bool is_forbidden(int cause, int effect, int lag) const {
        return forbidden.count({cause, effect, lag}) > 0;
    }
    bool is_required(int cause, int effect, int lag) const {
        return required.count({cause, effect, lag}) > 0;
    }
    bool any_forbidden_at_lag(int lag) const {
        for (const auto& [c, e, l] : forbidden)
            if (l == lag) return true;
        return false;
    }
};

inline IndexedKnowledge resolve_knowledge(const Knowledge& k,
                                          const std::vector<std::string>& names) {
    k.validate();
    auto index_of = [&](const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw std::invalid_argument("knowledge: unknown variable '" + name + "'");
        return static_cast<int>(it - names.begin());
    };
    IndexedKnowledge out;
    out.n = static_cast<int>(names.size());
    for (const auto& e : k.forbidden)
        out.forbidden.insert({index_of(e.cause), index_of(e.effect), e.lag});
    for (const auto& e : k.required)
        out.required.insert({index_of(e.cause), index_of(e.effect), e.lag});
    return out;
}

// Forbids every instantaneous edge from each "foreign session" variable into
// each "home session" variable: with daily bars the home market closes before
// the foreign one, so same-day influence in that direction is impossible.
inline Knowledge make_market_knowledge(const std::vector<std::string>& later_session,
                                       const std::vector<std::string>& earlier_session) {
    Knowledge k;
    for (const auto& u : later_session) {
        for (const auto& v : earlier_session) {
            if (u == v)
                throw std::invalid_argument("make_market_knowledge: variable '" + u +
                                            "' appears in both sessions");
            k.forbidden.insert({u, v, 0});
        }
    }
    k.validate();
    return k;
}

}  // namespace tscausal
