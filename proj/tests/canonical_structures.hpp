#pragma once

// Hand-derived ground-truth structures with their exact expected PAGs, used
// to exercise discovery against the d-separation oracle.  Expected marks
// follow from the collider rule, R1-R3 and the time-order restriction; the
// derivations are frozen here as data.

#include <string>
#include <vector>

#include "tscausal/graphs.hpp"
#include "tscausal/lpcmci.hpp"

namespace canonical {

struct ExpectedEdge {
    int i, j, delta;
    tscausal::Mark mark_a, mark_b;
};

struct Structure {
    std::string name;
    tscausal::TruthGraph truth;
    int tau_max = 1;
    tscausal::TimeSeriesPAG expected;
};

inline tscausal::TimeSeriesPAG make_expected(const std::vector<std::string>& names,
                                             int tau_max,
                                             std::vector<ExpectedEdge> edges) {
    std::sort(edges.begin(), edges.end(), [](const ExpectedEdge& x, const ExpectedEdge& y) {
        return std::tie(x.i, x.j, x.delta) < std::tie(y.i, y.j, y.delta);
    });
    tscausal::TimeSeriesPAG pag;
    pag.variable_names = names;
    pag.tau_max = tau_max;
    for (const auto& e : edges) {
        tscausal::PagEdge pe;
        pe.a = {e.i, e.delta};
        pe.b = {e.j, 0};
        pe.mark_a = e.mark_a;
        pe.mark_b = e.mark_b;
        pag.edges.push_back(pe);
    }
    return pag;
}

inline std::vector<Structure> structures() {
    using tscausal::Mark;
    using tscausal::TruthGraph;
    std::vector<Structure> out;

    {
        // X -> Y -> Z at lag 0: Markov equivalence leaves all circles.
        Structure s;
        s.name = "contemporaneous chain";
        s.truth = TruthGraph{3, 3, {"X", "Y", "Z"}, {{0, 1, 0}, {1, 2, 0}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 1, 0, Mark::circle, Mark::circle},
                                    {1, 2, 0, Mark::circle, Mark::circle}});
        out.push_back(s);
    }
    {
        // X <- Y -> Z: same skeleton and marks as the chain.
        Structure s;
        s.name = "contemporaneous fork";
        s.truth = TruthGraph{3, 3, {"X", "Y", "Z"}, {{1, 0, 0}, {1, 2, 0}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 1, 0, Mark::circle, Mark::circle},
                                    {1, 2, 0, Mark::circle, Mark::circle}});
        out.push_back(s);
    }
    {
        // X -> Z <- Y: the empty sepset of (X, Y) orients both arrowheads.
        Structure s;
        s.name = "contemporaneous collider";
        s.truth = TruthGraph{3, 3, {"X", "Y", "Z"}, {{0, 2, 0}, {1, 2, 0}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 2, 0, Mark::circle, Mark::arrow},
                                    {1, 2, 0, Mark::circle, Mark::arrow}});
        out.push_back(s);
    }
    {
        // Latent L drives X and Y contemporaneously; both observed series
        // are autocorrelated.  X(t-1) and Y(t) separate given Y(t-1) (and
        // vice versa), and the surviving contemporaneous pair picks up
        // arrowheads at both ends: the latent-confounding signature.  The
        // bidirected mark repeats at lag 1 by stationarity, so R1 fires on
        // Y(t-1) <-> X(t-1) o-> X(t) and hardens both autoedges to tails.
        Structure s;
        s.name = "hidden confounder with autocorrelation";
        s.truth = TruthGraph{2, 3, {"X", "Y"}, {{2, 0, 0}, {2, 1, 0}, {0, 0, 1}, {1, 1, 1}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 0, 1, Mark::tail, Mark::arrow},
                                    {1, 1, 1, Mark::tail, Mark::arrow},
                                    {0, 1, 0, Mark::arrow, Mark::arrow}});
        out.push_back(s);
    }
    {
        // Same confounder plus a direct X -> Y edge.  The inducing path
        // X(t-1) -> X(t) <- L(t) -> Y(t) keeps X(t-1) -- Y(t) adjacent, and
        // the collider orientation lands on Y(t) only.
        Structure s;
        s.name = "hidden confounder with direct effect";
        s.truth = TruthGraph{
            2, 3, {"X", "Y"}, {{0, 1, 0}, {2, 0, 0}, {2, 1, 0}, {0, 0, 1}, {1, 1, 1}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 0, 1, Mark::circle, Mark::arrow},
                                    {1, 1, 1, Mark::circle, Mark::arrow},
                                    {0, 1, 1, Mark::circle, Mark::arrow},
                                    {0, 1, 0, Mark::circle, Mark::arrow}});
        out.push_back(s);
    }
    {
        // X(t-1) -> Y(t), Y(t-1) -> Z(t) with tau_max 2: R1 on the triple
        // X(t-2) *-> Y(t-1) o-* Z(t) turns the second edge into Y -> Z.
        Structure s;
        s.name = "lagged chain";
        s.truth = TruthGraph{3, 3, {"X", "Y", "Z"}, {{0, 1, 1}, {1, 2, 1}}};
        s.tau_max = 2;
        s.expected = make_expected(s.truth.names, 2,
                                   {{0, 1, 1, Mark::circle, Mark::arrow},
                                    {1, 2, 1, Mark::tail, Mark::arrow}});
        out.push_back(s);
    }
    {
        // X(t-1) -> Y(t) <- Z(t): arrowheads collect at Y(t).
        Structure s;
        s.name = "mixed collider";
        s.truth = TruthGraph{3, 3, {"X", "Y", "Z"}, {{0, 1, 1}, {2, 1, 0}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 1, 1, Mark::circle, Mark::arrow},
                                    {1, 2, 0, Mark::arrow, Mark::circle}});
        out.push_back(s);
    }
    {
        // X(t-1) -> Y(t) -> Z(t): R1 directs the contemporaneous edge.
        Structure s;
        s.name = "mixed chain";
        s.truth = TruthGraph{3, 3, {"X", "Y", "Z"}, {{0, 1, 1}, {1, 2, 0}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 1, 1, Mark::circle, Mark::arrow},
                                    {1, 2, 0, Mark::tail, Mark::arrow}});
        out.push_back(s);
    }
    {
        // Two unrelated contemporaneous pairs stay disconnected.
        Structure s;
        s.name = "independent pairs";
        s.truth = TruthGraph{4, 4, {"X", "Y", "W", "V"}, {{0, 1, 0}, {2, 3, 0}}};
        s.expected = make_expected(s.truth.names, 1,
                                   {{0, 1, 0, Mark::circle, Mark::circle},
                                    {2, 3, 0, Mark::circle, Mark::circle}});
        out.push_back(s);
    }
    return out;
}

// Human-readable rendering used in failure messages.
inline std::string describe(const tscausal::TimeSeriesPAG& pag) {
    std::string out;
    for (const auto& e : pag.edges) {
        out += pag.variable_names[e.a.var] + "(t" +
               (e.a.lag ? "-" + std::to_string(e.a.lag) : "") + ") " +
               tscausal::edge_glyph(e.mark_a, e.mark_b) + " " +
               pag.variable_names[e.b.var] + "(t)\n";
    }
    return out;
}

}  // namespace canonical
