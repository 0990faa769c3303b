#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace lapstream;
namespace lt = lapstream::testing;

TEST(AffectedNodes, ToyAddition) {
    Graph g = lt::toy_g0();
    EdgeDelta d;
    d.adds.push_back({4, 6});
    const auto sets = affected_nodes(g, d);
    EXPECT_EQ(sets.touched, (std::vector<NodeId>{4, 6}));
    EXPECT_EQ(sets.recompute, (std::vector<NodeId>{4, 5, 6, 7}));
    EXPECT_EQ(g, lt::toy_g1());
}

TEST(AffectedNodes, EmptyDelta) {
    Graph g = lt::toy_g0();
    const auto sets = affected_nodes(g, {});
    EXPECT_TRUE(sets.touched.empty());
    EXPECT_TRUE(sets.recompute.empty());
    EXPECT_EQ(g, lt::toy_g0());
}

TEST(AffectedNodes, RemovalGathersBeforeRemoving) {
    Graph g;
    g.add_edge({1, 2});
    EdgeDelta d;
    d.removes.emplace_back(1, 2);
    const auto sets = affected_nodes(g, d);
    EXPECT_EQ(sets.touched, (std::vector<NodeId>{1, 2}));
    EXPECT_EQ(sets.recompute, (std::vector<NodeId>{1, 2}));
    EXPECT_EQ(g.edge_count(), 0u);
}

// Neighbors reachable only through the removed edge still land in recompute.
TEST(AffectedNodes, NeighborsThroughRemovedEdges) {
    Graph g = graph_from_edges({{1, 2}, {2, 3}, {3, 4}});
    EdgeDelta d;
    d.removes.emplace_back(2, 3);
    const auto sets = affected_nodes(g, d);
    EXPECT_EQ(sets.recompute, (std::vector<NodeId>{1, 2, 3, 4}));
}

TEST(AffectedNodes, ErrorsLeaveGraphUntouched) {
    Graph g = lt::toy_g0();
    EdgeDelta missing;
    missing.adds.push_back({4, 6});
    missing.removes.emplace_back(1, 7);
    EXPECT_THROW(affected_nodes(g, missing), MissingEdgeError);
    EXPECT_EQ(g, lt::toy_g0());

    EdgeDelta loop;
    loop.adds.push_back({3, 3});
    EXPECT_THROW(affected_nodes(g, loop), SelfLoopError);
    EXPECT_EQ(g, lt::toy_g0());

    EdgeDelta twice;
    twice.removes.emplace_back(1, 2);
    twice.removes.emplace_back(2, 1);
    EXPECT_THROW(affected_nodes(g, twice), MissingEdgeError);
    EXPECT_EQ(g, lt::toy_g0());
}

TEST(AffectedNodes, StrictDuplicate) {
    Graph g = lt::toy_g0();
    g.set_duplicate_policy(DuplicatePolicy::strict);
    EdgeDelta d;
    d.adds.push_back({1, 2});
    EXPECT_THROW(affected_nodes(g, d), DuplicateEdgeError);
}

TEST(AffectedNodes, AddAndRemoveSamePairNetsToRemoval) {
    Graph g = lt::toy_g0();
    EdgeDelta d;
    d.adds.push_back({1, 9});
    d.removes.emplace_back(9, 1);
    const auto sets = affected_nodes(g, d);
    EXPECT_FALSE(g.has_edge(1, 9));
    EXPECT_TRUE(g.contains(9));
    EXPECT_EQ(sets.recompute, (std::vector<NodeId>{1, 2, 9}));
}

TEST(LapCentAddRemove, ToyStep) {
    Graph g = lt::toy_g0();
    const auto prev = lap_cent_unweighted(g);
    EdgeDelta d;
    d.adds.push_back({4, 6});
    const auto next = lap_cent_add_remove(g, d, prev);
    EXPECT_EQ(lt::as_ordered(next), lt::toy_step2());
    EXPECT_EQ(next.computed_count, 4u);
    EXPECT_EQ(lt::as_ordered(prev), lt::toy_step1());  // copy-on-write
}

TEST(LapCentAddRemove, EmptyDelta) {
    Graph g = lt::toy_g0();
    const auto prev = lap_cent_unweighted(g);
    const auto next = lap_cent_add_remove(g, {}, prev);
    EXPECT_EQ(lt::as_ordered(next), lt::as_ordered(prev));
    EXPECT_EQ(next.computed_count, 0u);
}

TEST(LapCentAddRemove, RandomDeltaMatchesBatch) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = lt::random_graph(rng, 50, 120, lt::WeightKind::unit);
        const auto prev = lap_cent_unweighted(g);
        EdgeDelta d;
        std::set<EdgeKey> used;
        const auto edges = g.edges_sorted();
        while (d.adds.size() + d.removes.size() < 5) {
            if (rng() % 2) {
                const auto& e = edges[rng() % edges.size()];
                if (used.insert(EdgeKey(e.u, e.v)).second) d.removes.emplace_back(e.u, e.v);
            } else {
                const NodeId a = rng() % 50, b = rng() % 50;
                if (a != b && !g.has_edge(a, b) && used.insert(EdgeKey(a, b)).second) d.adds.push_back({a, b});
            }
        }
        lt::EdgeSetModel model(g);
        model.apply(d);
        const auto next = lap_cent_add_remove(g, d, prev);
        EXPECT_EQ(lt::as_ordered(next), lt::as_ordered(lap_cent_unweighted(model.build())));
    }
}

TEST(LapCentWeightedAddRemove, UnitToyMatchesUnweighted) {
    Graph g = lt::toy_g0();
    const auto prev = lap_cent_weighted(g);
    EdgeDelta d;
    d.adds.push_back({4, 6, 1.0});
    const auto next = lap_cent_weighted_add_remove(g, d, prev);
    EXPECT_EQ(lt::as_ordered(next), lt::toy_step2());
}

TEST(LapCentWeightedAddRemove, StarToTriangle) {
    Graph g;
    g.add_edge({0, 1, 2.0});
    g.add_edge({0, 2, 3.0});
    const auto prev = lap_cent_weighted(g);
    EdgeDelta d;
    d.adds.push_back({1, 2, 1.0});
    const auto next = lap_cent_weighted_add_remove(g, d, prev);
    const Graph triangle = graph_from_edges({{0, 1, 2.0}, {0, 2, 3.0}, {1, 2, 1.0}});
    EXPECT_EQ(lt::as_ordered(next), lt::as_ordered(lap_cent_weighted(triangle)));
    EXPECT_EQ(next.computed_count, 3u);

    const auto same = lap_cent_weighted_add_remove(g, {}, next);
    EXPECT_EQ(lt::as_ordered(same), lt::as_ordered(next));
    EXPECT_EQ(same.computed_count, 0u);
}

TEST(RunEvolving, ToyCounts) {
    EdgeDelta d;
    d.adds.push_back({4, 6});
    const auto dyn = run_evolving(lt::toy_g0(), {d}, Mode::dynamic, Variant::unweighted);
    const auto bat = run_evolving(lt::toy_g0(), {d}, Mode::batch, Variant::unweighted);
    ASSERT_EQ(dyn.size(), 2u);
    EXPECT_EQ(dyn[0].computed_count + dyn[1].computed_count, 11u);
    EXPECT_EQ(bat[0].computed_count + bat[1].computed_count, 14u);
    EXPECT_EQ(lt::as_ordered(dyn[1]), lt::toy_step2());
    EXPECT_EQ(lt::as_ordered(bat[1]), lt::toy_step2());
}

TEST(RunEvolving, NoDeltas) {
    const auto dyn = run_evolving(lt::toy_g0(), {}, Mode::dynamic, Variant::unweighted);
    ASSERT_EQ(dyn.size(), 1u);
    EXPECT_EQ(lt::as_ordered(dyn[0]), lt::toy_step1());
}

TEST(RunEvolving, ErrorCarriesStep) {
    EdgeDelta ok;
    ok.adds.push_back({4, 6});
    EdgeDelta bad;
    bad.removes.emplace_back(1, 6);
    try {
        run_evolving(lt::toy_g0(), {ok, bad}, Mode::dynamic, Variant::unweighted);
        FAIL() << "expected StepError";
    } catch (const StepError& e) {
        EXPECT_EQ(e.step(), 2u);
    }
}

// Isolated nodes keep a zero entry and are never dropped from the map.
TEST(RunEvolving, IsolationKeepsZeroEntries) {
    Graph g = graph_from_edges({{1, 2}, {2, 3}});
    EdgeDelta d;
    d.removes.emplace_back(1, 2);
    const auto out = run_evolving(g, {d}, Mode::dynamic, Variant::weighted);
    EXPECT_EQ(out[1].at(1), 0.0);
    EXPECT_EQ(out[1].size(), 3u);
}

TEST(IncrementalProperty, DynamicEqualsBatchAndIsDeterministic) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 24; ++trial) {
        const auto kind = static_cast<lt::WeightKind>(trial % 3);
        const Variant var = trial % 2 ? Variant::weighted : Variant::unweighted;
        const std::size_t n = 20 + rng() % 40;
        Graph g0 = lt::random_graph(rng, n, 2 * n, kind);
        std::vector<EdgeDelta> deltas;
        Graph walk = g0;
        NodeId next_id = n;
        for (int s = 0; s < 30; ++s) {
            deltas.push_back(lt::random_delta(rng, walk, kind, next_id));
            apply_delta(walk, deltas.back());
        }
        const auto dyn = run_evolving(g0, deltas, Mode::dynamic, var);
        const auto again = run_evolving(g0, deltas, Mode::dynamic, var);
        const auto bat = run_evolving(g0, deltas, Mode::batch, var);
        for (std::size_t k = 0; k < dyn.size(); ++k) {
            EXPECT_EQ(lt::as_ordered(dyn[k]), lt::as_ordered(again[k]));
            EXPECT_EQ(dyn[k].computed_count, again[k].computed_count);
            ASSERT_EQ(dyn[k].size(), bat[k].size());
            for (const auto& [id, val] : bat[k].values) EXPECT_TRUE(lt::close_rel(dyn[k].at(id), val));
        }
    }
}
