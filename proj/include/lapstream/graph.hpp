#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lapstream/error.hpp"

namespace lapstream {

/// Node identifiers come straight from the input files and stay stable across snapshots.
using NodeId = std::uint64_t;

/// Undirected weighted edge. Constructed edges are not canonicalized; use canonical().
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 1.0;

    Edge canonical() const noexcept { return u <= v ? *this : Edge{v, u, weight}; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Unordered node pair stored with the smaller id first.
struct EdgeKey {
    NodeId u = 0;
    NodeId v = 0;

    EdgeKey() = default;
    EdgeKey(NodeId a, NodeId b) noexcept : u(std::min(a, b)), v(std::max(a, b)) {}

    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const noexcept {
        std::uint64_t h = k.u * 0x9E3779B97F4A7C15ULL;
        h ^= k.v + 0x7F4A7C15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t max_degree = 0;
    double avg_degree = 0.0;  // mean neighbor count, 2m/n
};

/// How add_edge treats an edge that already exists.
enum class DuplicatePolicy { upsert, strict };

/// Mutable undirected weighted graph backed by hash adjacency.
///
/// Nodes are created on first mention and never deleted. Every vertex caches its
/// strength (sum of incident weights); the cache is reset to exactly zero when the
/// vertex loses its last edge so isolated nodes always report 0.
class Graph {
public:
    using Adjacency = std::unordered_map<NodeId, double>;

    struct Vertex {
        Adjacency adjacency;
        double strength = 0.0;

        std::size_t degree() const noexcept { return adjacency.size(); }
        friend bool operator==(const Vertex& a, const Vertex& b) { return a.adjacency == b.adjacency; }
    };

    Graph() = default;
    explicit Graph(DuplicatePolicy policy) : policy_(policy) {}

    DuplicatePolicy duplicate_policy() const noexcept { return policy_; }
    void set_duplicate_policy(DuplicatePolicy p) noexcept { policy_ = p; }

    /// Inserts or, under upsert, reweights an edge. Returns true when the edge is new.
    bool add_edge(const Edge& e) {
        if (e.u == e.v) throw SelfLoopError(e.u);
        auto& a = vertices_[e.u];
        auto& b = vertices_[e.v];
        auto it = a.adjacency.find(e.v);
        if (it != a.adjacency.end()) {
            if (policy_ == DuplicatePolicy::strict) throw DuplicateEdgeError(e.u, e.v);
            const double old = it->second;
            if (old < 0.0) --negative_edges_;
            if (e.weight < 0.0) ++negative_edges_;
            it->second = e.weight;
            b.adjacency[e.u] = e.weight;
            a.strength += e.weight - old;
            b.strength += e.weight - old;
            return false;
        }
        a.adjacency.emplace(e.v, e.weight);
        b.adjacency.emplace(e.u, e.weight);
        a.strength += e.weight;
        b.strength += e.weight;
        if (e.weight < 0.0) ++negative_edges_;
        ++edge_count_;
        return true;
    }

    void remove_edge(NodeId u, NodeId v) {
        auto iu = vertices_.find(u);
        auto iv = vertices_.find(v);
        if (u == v || iu == vertices_.end() || iv == vertices_.end()) throw MissingEdgeError(u, v);
        auto it = iu->second.adjacency.find(v);
        if (it == iu->second.adjacency.end()) throw MissingEdgeError(u, v);
        const double w = it->second;
        iu->second.adjacency.erase(it);
        iv->second.adjacency.erase(u);
        detach(iu->second, w);
        detach(iv->second, w);
        if (w < 0.0) --negative_edges_;
        --edge_count_;
    }

    /// Ensures `u` exists, possibly as an isolated node.
    void add_node(NodeId u) { vertices_.try_emplace(u); }

    bool contains(NodeId u) const noexcept { return vertices_.contains(u); }

    bool has_edge(NodeId u, NodeId v) const noexcept {
        auto it = vertices_.find(u);
        return it != vertices_.end() && it->second.adjacency.contains(v);
    }

    std::optional<double> weight(NodeId u, NodeId v) const noexcept {
        auto it = vertices_.find(u);
        if (it == vertices_.end()) return std::nullopt;
        auto jt = it->second.adjacency.find(v);
        if (jt == it->second.adjacency.end()) return std::nullopt;
        return jt->second;
    }

    const Vertex& vertex(NodeId u) const {
        auto it = vertices_.find(u);
        if (it == vertices_.end()) throw UnknownNodeError(u);
        return it->second;
    }

    const Adjacency& neighbors(NodeId u) const { return vertex(u).adjacency; }
    std::size_t degree(NodeId u) const { return vertex(u).degree(); }
    double strength(NodeId u) const { return vertex(u).strength; }

    std::size_t node_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t negative_weight_edges() const noexcept { return negative_edges_; }

    const std::unordered_map<NodeId, Vertex>& vertices() const noexcept { return vertices_; }

    std::vector<NodeId> nodes_sorted() const {
        std::vector<NodeId> out;
        out.reserve(vertices_.size());
        for (const auto& [id, _] : vertices_) out.push_back(id);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Calls f(u, v, w) once per edge with u < v.
    template <class F>
    void for_each_edge(F&& f) const {
        for (const auto& [u, vert] : vertices_)
            for (const auto& [v, w] : vert.adjacency)
                if (u < v) f(u, v, w);
    }

    /// Canonical edges sorted by (u, v).
    std::vector<Edge> edges_sorted() const {
        std::vector<Edge> out;
        out.reserve(edge_count_);
        for_each_edge([&](NodeId u, NodeId v, double w) { out.push_back({u, v, w}); });
        std::sort(out.begin(), out.end(),
                  [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
        return out;
    }

    /// Structural equality: same node set and same weighted adjacency.
    friend bool operator==(const Graph& a, const Graph& b) {
        return a.edge_count_ == b.edge_count_ && a.vertices_ == b.vertices_;
    }

private:
    static void detach(Vertex& x, double w) noexcept {
        if (x.adjacency.empty())
            x.strength = 0.0;
        else
            x.strength -= w;
    }

    std::unordered_map<NodeId, Vertex> vertices_;
    std::size_t edge_count_ = 0;
    std::size_t negative_edges_ = 0;
    DuplicatePolicy policy_ = DuplicatePolicy::upsert;
};

inline GraphStats stats(const Graph& g) {
    GraphStats s;
    s.nodes = g.node_count();
    s.edges = g.edge_count();
    for (const auto& [_, vert] : g.vertices()) s.max_degree = std::max(s.max_degree, vert.degree());
    if (s.nodes > 0) s.avg_degree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.nodes);
    return s;
}

/// Builds a graph from an edge list; later duplicates overwrite earlier weights.
inline Graph graph_from_edges(const std::vector<Edge>& edges) {
    Graph g;
    for (const auto& e : edges) g.add_edge(e);
    return g;
}

}  // namespace lapstream
