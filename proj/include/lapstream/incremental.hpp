#pragma once

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "lapstream/centrality.hpp"
#include "lapstream/graph.hpp"

namespace lapstream {

/// Edge changes turning one snapshot into the next. Adds are applied before removes,
/// so a pair named on both sides ends up removed.
struct EdgeDelta {
    std::vector<Edge> adds;
    std::vector<EdgeKey> removes;

    bool empty() const noexcept { return adds.empty() && removes.empty(); }
};

/// touched: endpoints of every added or removed edge.
/// recompute: touched plus their neighbors in the union graph (after adds, before removes).
/// Both sorted ascending.
struct AffectedSets {
    std::vector<NodeId> touched;
    std::vector<NodeId> recompute;
};

namespace detail {

inline void sort_unique(std::vector<NodeId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Rejects the delta before anything is mutated, so a failing delta leaves g intact.
inline void validate_delta(const Graph& g, const EdgeDelta& d) {
    std::unordered_set<EdgeKey, EdgeKeyHash> added;
    added.reserve(d.adds.size());
    for (const auto& e : d.adds) {
        if (e.u == e.v) throw SelfLoopError(e.u);
        const bool fresh = added.insert(EdgeKey(e.u, e.v)).second;
        if (g.duplicate_policy() == DuplicatePolicy::strict && (!fresh || g.has_edge(e.u, e.v)))
            throw DuplicateEdgeError(e.u, e.v);
    }
    std::unordered_set<EdgeKey, EdgeKeyHash> removed;
    removed.reserve(d.removes.size());
    for (const auto& r : d.removes) {
        const bool present = r.u != r.v && (g.has_edge(r.u, r.v) || added.contains(r));
        if (!present || !removed.insert(r).second) throw MissingEdgeError(r.u, r.v);
    }
}

}  // namespace detail

/// Applies `d` to `g` and reports which nodes it affected, following the order
/// adds -> gather neighborhoods -> removes.
inline AffectedSets affected_nodes(Graph& g, const EdgeDelta& d) {
    detail::validate_delta(g, d);
    AffectedSets out;
    out.touched.reserve(2 * (d.adds.size() + d.removes.size()));
    for (const auto& e : d.adds) {
        out.touched.push_back(e.u);
        out.touched.push_back(e.v);
        g.add_edge(e);
    }
    for (const auto& r : d.removes) {
        out.touched.push_back(r.u);
        out.touched.push_back(r.v);
    }
    detail::sort_unique(out.touched);

    out.recompute = out.touched;
    for (NodeId x : out.touched)
        for (const auto& [j, _] : g.neighbors(x)) out.recompute.push_back(j);
    detail::sort_unique(out.recompute);

    for (const auto& r : d.removes) g.remove_edge(r.u, r.v);
    return out;
}

/// In-place dynamic step: mutates g and overwrites only the affected entries of
/// `centralities`. Returns the number of node values evaluated.
inline std::size_t update_centralities(Graph& g, const EdgeDelta& d, CentralityMap& centralities, Variant variant) {
    const AffectedSets sets = affected_nodes(g, d);
    for (NodeId v : sets.recompute) centralities.values[v] = node_centrality(g, g.vertex(v), variant);
    centralities.computed_count = sets.recompute.size();
    return sets.recompute.size();
}

/// Copy-on-write dynamic step; `prev` must be the exact centrality map of g before d.
/// g is mutated to the post-delta snapshot.
inline CentralityMap lap_cent_add_remove(Graph& g, const EdgeDelta& d, const CentralityMap& prev,
                                         Variant variant = Variant::unweighted) {
    CentralityMap next = prev;
    update_centralities(g, d, next, variant);
    return next;
}

inline CentralityMap lap_cent_weighted_add_remove(Graph& g, const EdgeDelta& d, const CentralityMap& prev) {
    return lap_cent_add_remove(g, d, prev, Variant::weighted);
}

/// Applies a delta without computing anything; used to materialize snapshots.
inline void apply_delta(Graph& g, const EdgeDelta& d) {
    detail::validate_delta(g, d);
    for (const auto& e : d.adds) g.add_edge(e);
    for (const auto& r : d.removes) g.remove_edge(r.u, r.v);
}

enum class Mode { batch, dynamic };

/// Runs the whole stream. Entry 0 is the full computation on `initial`; entry k
/// corresponds to deltas[k-1]. In dynamic mode each entry's computed_count is |recompute|;
/// in batch mode it is the snapshot's node count.
inline std::vector<CentralityMap> run_evolving(const Graph& initial, const std::vector<EdgeDelta>& deltas, Mode mode,
                                               Variant variant, unsigned threads = 1) {
    std::vector<CentralityMap> history;
    history.reserve(deltas.size() + 1);
    Graph g = initial;
    history.push_back(lap_cent(g, variant, threads));
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        try {
            if (mode == Mode::dynamic) {
                history.push_back(lap_cent_add_remove(g, deltas[i], history.back(), variant));
            } else {
                apply_delta(g, deltas[i]);
                history.push_back(lap_cent(g, variant, threads));
            }
        } catch (const Error& e) {
            throw StepError(i + 1, e.what());
        }
    }
    return history;
}

}  // namespace lapstream
