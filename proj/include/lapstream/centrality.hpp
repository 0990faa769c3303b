#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lapstream/graph.hpp"

namespace lapstream {

enum class Variant { unweighted, weighted };

/// Non-normalized Laplacian centrality (energy drop) per node, plus how many
/// node values the producing call actually evaluated.
struct CentralityMap {
    std::unordered_map<NodeId, double> values;
    std::size_t computed_count = 0;

    double at(NodeId u) const {
        auto it = values.find(u);
        if (it == values.end()) throw UnknownNodeError(u);
        return it->second;
    }
    std::size_t size() const noexcept { return values.size(); }
};

struct Energy {
    double value = 0.0;
};

/// Pair returned by cw(): sum of squared incident weights, and the neighbor
/// strength correction sum((s_j - w)^2 - s_j^2).
struct CentralityWeight {
    double cw = 0.0;
    double sub = 0.0;
};

/// d^2 + d + 2 * (sum of neighbor degrees). Exact for any realistic degree.
inline double unweighted_centrality(const Graph& g, const Graph::Vertex& vert) {
    const std::uint64_t loc = vert.degree();
    std::uint64_t nei = 0;
    for (const auto& [j, _] : vert.adjacency) nei += g.vertex(j).degree();
    return static_cast<double>(loc * loc + loc + 2 * nei);
}

inline double unweighted_centrality(const Graph& g, NodeId v) { return unweighted_centrality(g, g.vertex(v)); }

inline CentralityWeight cw(const Graph& g, const Graph::Vertex& vert) {
    CentralityWeight r;
    for (const auto& [j, w] : vert.adjacency) {
        const double sj = g.vertex(j).strength;
        r.cw += w * w;
        r.sub += (sj - w) * (sj - w) - sj * sj;
    }
    return r;
}

inline CentralityWeight cw(const Graph& g, NodeId v) { return cw(g, g.vertex(v)); }

/// cw() against caller-supplied strengths; every neighbor of `v` must be present.
inline CentralityWeight cw(const Graph& g, NodeId v, const std::unordered_map<NodeId, double>& strengths) {
    CentralityWeight r;
    for (const auto& [j, w] : g.neighbors(v)) {
        auto it = strengths.find(j);
        if (it == strengths.end()) throw UnknownNodeError(j);
        const double sj = it->second;
        r.cw += w * w;
        r.sub += (sj - w) * (sj - w) - sj * sj;
    }
    return r;
}

/// s^2 - sub + 2 * cw with s the weighted degree.
inline double weighted_centrality(const Graph& g, const Graph::Vertex& vert) {
    const auto [c, sub] = cw(g, vert);
    const double loc = vert.strength;
    return loc * loc - sub + 2.0 * c;
}

inline double weighted_centrality(const Graph& g, NodeId v) { return weighted_centrality(g, g.vertex(v)); }

inline double node_centrality(const Graph& g, const Graph::Vertex& vert, Variant variant) {
    return variant == Variant::weighted ? weighted_centrality(g, vert) : unweighted_centrality(g, vert);
}

/// Worker cap for the full-graph per-node loop, read from LAPSTREAM_THREADS (default 1).
inline unsigned worker_threads_from_env() {
    const char* env = std::getenv("LAPSTREAM_THREADS");
    if (env == nullptr) return 1;
    const long n = std::strtol(env, nullptr, 10);
    return n >= 1 ? static_cast<unsigned>(n) : 1U;
}

/// Full recomputation over every node of `g`. With threads > 1 the node set is
/// partitioned into contiguous chunks; per-node values do not depend on the split.
inline CentralityMap lap_cent(const Graph& g, Variant variant, unsigned threads = 1) {
    CentralityMap out;
    out.values.reserve(g.node_count());
    out.computed_count = g.node_count();
    if (threads <= 1 || g.node_count() < 2 * static_cast<std::size_t>(threads)) {
        for (const auto& [id, vert] : g.vertices()) out.values.emplace(id, node_centrality(g, vert, variant));
        return out;
    }
    std::vector<const std::pair<const NodeId, Graph::Vertex>*> items;
    items.reserve(g.node_count());
    for (const auto& entry : g.vertices()) items.push_back(&entry);
    std::vector<double> results(items.size());
    const std::size_t chunk = (items.size() + threads - 1) / threads;
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(items.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) results[i] = node_centrality(g, items[i]->second, variant);
            });
        }
    }
    for (std::size_t i = 0; i < items.size(); ++i) out.values.emplace(items[i]->first, results[i]);
    return out;
}

inline CentralityMap lap_cent_unweighted(const Graph& g, unsigned threads = 1) {
    return lap_cent(g, Variant::unweighted, threads);
}

inline CentralityMap lap_cent_weighted(const Graph& g, unsigned threads = 1) {
    return lap_cent(g, Variant::weighted, threads);
}

/// Closed-form Laplacian energy. Strengths are summed from adjacency, not read from
/// the vertex cache, so this stays an independent check of the incremental state.
///   unweighted: sum(d^2 + d)      weighted: sum(s^2) + 2 * sum_edges(w^2)
// Summed in ascending id order so equal graphs give bit-identical energies.
inline Energy laplacian_energy(const Graph& g, Variant variant) {
    Energy e;
    std::vector<std::pair<NodeId, double>> row;
    for (NodeId id : g.nodes_sorted()) {
        const auto& adj = g.vertex(id).adjacency;
        if (variant == Variant::unweighted) {
            const double d = static_cast<double>(adj.size());
            e.value += d * d + d;
            continue;
        }
        row.assign(adj.begin(), adj.end());
        std::sort(row.begin(), row.end());
        double s = 0.0;
        for (const auto& [_, w] : row) s += w;
        e.value += s * s;
    }
    if (variant == Variant::weighted)
        for (const auto& edge : g.edges_sorted()) e.value += 2.0 * edge.weight * edge.weight;
    return e;
}

inline CentralityMap normalize(const CentralityMap& c, Energy e) {
    if (e.value == 0.0) throw ZeroEnergyError();
    CentralityMap out = c;
    for (auto& [_, val] : out.values) val /= e.value;
    return out;
}

/// E_L(G) - E_L(G without v), computed by rebuilding the graph minus v.
inline double delta_energy_oracle(const Graph& g, NodeId v, Variant variant) {
    if (!g.contains(v)) throw UnknownNodeError(v);
    Graph reduced;
    for (const auto& [id, _] : g.vertices())
        if (id != v) reduced.add_node(id);
    g.for_each_edge([&](NodeId a, NodeId b, double w) {
        if (a != v && b != v) reduced.add_edge({a, b, w});
    });
    return laplacian_energy(g, variant).value - laplacian_energy(reduced, variant).value;
}

/// `node,centrality` lines in ascending node order, 12 significant digits.
inline void write_centrality_dump(std::ostream& os, const CentralityMap& c) {
    std::vector<std::pair<NodeId, double>> rows(c.values.begin(), c.values.end());
    std::sort(rows.begin(), rows.end());
    char buf[64];
    for (const auto& [id, val] : rows) {
        std::snprintf(buf, sizeof buf, "%.12g", val);
        os << id << ',' << buf << '\n';
    }
}

}  // namespace lapstream
