#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lapstream/graph.hpp"
#include "lapstream/incremental.hpp"
#include "lapstream/ingest.hpp"

namespace lapstream {

/// Parameters of a growing preferential-attachment stream with edge churn.
struct SyntheticConfig {
    std::size_t initial_nodes = 1000;
    std::size_t edges_per_node = 3;
    std::size_t steps = 10;            // number of deltas after the initial snapshot
    std::size_t churn_per_step = 10;   // adds + removes per delta
    bool integer_weights = true;       // weights in {1..5}; otherwise reals in (0, 5]
    bool unit_weights = false;
    std::uint64_t seed = 1;
};

namespace detail {

// Plain modulo / shift mappings keep streams identical across standard libraries,
// which std::uniform_*_distribution does not guarantee.
struct StreamRng {
    std::mt19937_64 engine;
    explicit StreamRng(std::uint64_t seed) : engine(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
    double unit_open() { return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53; }  // (0, 1]
};

}  // namespace detail

/// Barabasi-Albert style initial graph, then `steps` deltas. Each delta removes about
/// half its churn as uniformly random existing edges and adds the rest: half of the
/// adds attach a brand-new node, the others join a uniform node to a degree-biased one.
inline SnapshotStream generate_pa_stream(const SyntheticConfig& cfg) {
    detail::StreamRng rng(cfg.seed);
    auto draw_weight = [&]() -> double {
        if (cfg.unit_weights) return 1.0;
        if (cfg.integer_weights) return static_cast<double>(1 + rng.below(5));
        return 5.0 * rng.unit_open();
    };

    std::vector<EdgeKey> edges;                                   // live edges, for uniform picks
    std::unordered_map<EdgeKey, std::size_t, EdgeKeyHash> slot;  // edge -> index in `edges`
    NodeId next_id = 0;
    Graph g;

    auto insert = [&](NodeId a, NodeId b, double w) {
        const EdgeKey k(a, b);
        slot.emplace(k, edges.size());
        edges.push_back(k);
        g.add_edge({a, b, w});
    };
    auto erase = [&](const EdgeKey& k) {
        const std::size_t i = slot.at(k);
        slot[edges.back()] = i;
        edges[i] = edges.back();
        edges.pop_back();
        slot.erase(k);
        g.remove_edge(k.u, k.v);
    };
    // Endpoint of a uniform random edge: a degree-proportional node.
    auto preferential = [&]() -> NodeId {
        const EdgeKey& k = edges[rng.below(edges.size())];
        return (rng.engine() & 1U) ? k.u : k.v;
    };

    const std::size_t k = std::max<std::size_t>(1, cfg.edges_per_node);
    for (NodeId a = 0; a <= k; ++a)
        for (NodeId b = a + 1; b <= k; ++b) insert(a, b, draw_weight());
    next_id = k + 1;
    while (next_id < cfg.initial_nodes) {
        const NodeId fresh = next_id++;
        std::unordered_set<NodeId> targets;
        while (targets.size() < k) targets.insert(preferential());
        std::vector<NodeId> ordered(targets.begin(), targets.end());
        std::sort(ordered.begin(), ordered.end());
        for (NodeId t : ordered) insert(fresh, t, draw_weight());
    }

    SnapshotStream s;
    s.initial = g;
    s.labels.push_back("#0");
    s.shapes.push_back({g.node_count(), g.edge_count()});

    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        EdgeDelta d;
        std::unordered_set<EdgeKey, EdgeKeyHash> touched;
        const std::size_t removes = cfg.churn_per_step / 2;
        const std::size_t adds = cfg.churn_per_step - removes;
        while (d.removes.size() < removes && edges.size() > touched.size()) {
            const EdgeKey victim = edges[rng.below(edges.size())];
            if (!touched.insert(victim).second) continue;
            d.removes.push_back(victim);
        }
        std::size_t attempts = 0;
        while (d.adds.size() < adds && attempts++ < 100 * (adds + 1)) {
            NodeId a;
            if (d.adds.size() % 2 == 0) {
                a = next_id;
            } else {
                a = static_cast<NodeId>(rng.below(next_id));
            }
            const NodeId b = preferential();
            if (a == b || g.has_edge(a, b) || touched.contains(EdgeKey(a, b))) continue;
            touched.insert(EdgeKey(a, b));
            if (a == next_id) ++next_id;
            d.adds.push_back({a, b, draw_weight()});
        }
        // Mirror the delta in the generator state: adds first, then removes.
        for (const auto& e : d.adds) insert(e.u, e.v, e.weight);
        for (const auto& r : d.removes) erase(r);
        s.deltas.push_back(std::move(d));
        s.labels.push_back("#" + std::to_string(step));
        s.shapes.push_back({g.node_count(), g.edge_count()});
    }
    return s;
}

}  // namespace lapstream
