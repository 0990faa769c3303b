#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace lapstream;
namespace lt = lapstream::testing;

namespace {

// c=0, a=1 (w=2), b=2 (w=3)
Graph weighted_star() {
    Graph g;
    g.add_edge({0, 1, 2.0});
    g.add_edge({0, 2, 3.0});
    return g;
}

Graph unit_triangle() { return graph_from_edges({{1, 2}, {2, 3}, {1, 3}}); }

}  // namespace

TEST(LapCentUnweighted, ToySnapshots) {
    const auto c0 = lap_cent_unweighted(lt::toy_g0());
    EXPECT_EQ(lt::as_ordered(c0), lt::toy_step1());
    EXPECT_EQ(c0.computed_count, 7u);
    EXPECT_EQ(lt::as_ordered(lap_cent_unweighted(lt::toy_g1())), lt::toy_step2());
}

TEST(LapCentUnweighted, SmallCases) {
    Graph g;
    g.add_edge({1, 2});
    const auto c = lap_cent_unweighted(g);
    EXPECT_EQ(c.at(1), 4.0);
    EXPECT_EQ(c.at(2), 4.0);

    g.add_node(9);
    EXPECT_EQ(lap_cent_unweighted(g).at(9), 0.0);

    const auto empty = lap_cent_unweighted(Graph{});
    EXPECT_EQ(empty.size(), 0u);
    EXPECT_EQ(empty.computed_count, 0u);
}

TEST(LapCentUnweighted, IgnoresWeights) {
    Graph g = weighted_star();
    const auto c = lap_cent_unweighted(g);
    EXPECT_EQ(c.at(0), 4.0 + 2.0 + 2.0 * 2.0);
}

// Expected cw/sub pairs were expanded by hand; the energy oracle below confirms the
// resulting per-node values.
TEST(CentralityWeight, StarExpansion) {
    const Graph g = weighted_star();
    const auto center = cw(g, 0);
    EXPECT_EQ(center.cw, 13.0);
    EXPECT_EQ(center.sub, -13.0);
    const auto leaf = cw(g, 1);
    EXPECT_EQ(leaf.cw, 4.0);
    EXPECT_EQ(leaf.sub, -16.0);

    Graph iso = g;
    iso.add_node(5);
    const auto zero = cw(iso, 5);
    EXPECT_EQ(zero.cw, 0.0);
    EXPECT_EQ(zero.sub, 0.0);
    EXPECT_THROW(cw(g, 77), UnknownNodeError);
}

TEST(CentralityWeight, ExplicitStrengthsMatchCache) {
    const Graph g = weighted_star();
    const std::unordered_map<NodeId, double> s{{0, 5.0}, {1, 2.0}, {2, 3.0}};
    const auto a = cw(g, 0, s);
    EXPECT_EQ(a.cw, 13.0);
    EXPECT_EQ(a.sub, -13.0);
    EXPECT_THROW(cw(g, 0, {{1, 2.0}}), UnknownNodeError);
}

TEST(LapCentWeighted, UnitTriangle) {
    const Graph g = unit_triangle();
    const auto w = lap_cent_weighted(g);
    for (NodeId v : {1, 2, 3}) {
        EXPECT_EQ(w.at(v), 14.0);
        EXPECT_EQ(delta_energy_oracle(g, v, Variant::weighted), 14.0);
    }
    EXPECT_EQ(lt::as_ordered(w), lt::as_ordered(lap_cent_unweighted(g)));
}

TEST(LapCentWeighted, Star) {
    const Graph g = weighted_star();
    const auto c = lap_cent_weighted(g);
    for (NodeId v : {0, 1, 2}) EXPECT_EQ(c.at(v), delta_energy_oracle(g, v, Variant::weighted)) << v;
    EXPECT_EQ(c.at(0), 64.0);
    EXPECT_EQ(c.at(1), 28.0);
    // Removing b leaves the single edge c-a (w=2), energy 4+4+2*4 = 16; 64-16 = 48.
    EXPECT_EQ(c.at(2), 48.0);
}

TEST(LapCentWeighted, IsolatedNode) {
    Graph g = weighted_star();
    g.add_node(8);
    EXPECT_EQ(lap_cent_weighted(g).at(8), 0.0);
}

TEST(LaplacianEnergy, ClosedForms) {
    EXPECT_EQ(laplacian_energy(lt::toy_g0(), Variant::unweighted).value, 48.0);
    EXPECT_EQ(lt::dense_laplacian_energy(lt::toy_g0()), 48.0);
    Graph one;
    one.add_edge({1, 2});
    EXPECT_EQ(laplacian_energy(one, Variant::unweighted).value, 4.0);
    EXPECT_EQ(laplacian_energy(one, Variant::weighted).value, 4.0);
    EXPECT_EQ(laplacian_energy(Graph{}, Variant::weighted).value, 0.0);
    EXPECT_EQ(laplacian_energy(weighted_star(), Variant::weighted).value, 64.0);
}

TEST(Normalize, ToyNode5) {
    const Graph g = lt::toy_g0();
    const Energy e = laplacian_energy(g, Variant::unweighted);
    const auto n = normalize(lap_cent_unweighted(g), e);
    EXPECT_NEAR(n.at(5), 34.0 / 48.0, 1e-15);
    EXPECT_NEAR(n.at(5), 0.70833, 1e-5);
}

TEST(Normalize, InverseWithinTolerance) {
    std::mt19937_64 rng(3);
    const Graph g = lt::random_graph(rng, 40, 90, lt::WeightKind::real);
    const auto c = lap_cent_weighted(g);
    const Energy e = laplacian_energy(g, Variant::weighted);
    const auto n = normalize(c, e);
    for (const auto& [id, val] : c.values) EXPECT_NEAR(n.at(id) * e.value, val, 1e-12 * std::max(1.0, val));
}

TEST(Normalize, ZeroEnergy) {
    Graph g;
    g.add_node(1);
    g.add_node(2);
    EXPECT_THROW(normalize(lap_cent_unweighted(g), laplacian_energy(g, Variant::unweighted)), ZeroEnergyError);
}

TEST(DeltaEnergyOracle, Cases) {
    EXPECT_EQ(delta_energy_oracle(lt::toy_g0(), 5, Variant::unweighted), 34.0);
    EXPECT_EQ(delta_energy_oracle(weighted_star(), 0, Variant::weighted), 64.0);
    Graph g = weighted_star();
    g.add_node(4);
    EXPECT_EQ(delta_energy_oracle(g, 4, Variant::weighted), 0.0);
    EXPECT_THROW(delta_energy_oracle(g, 99, Variant::weighted), UnknownNodeError);
}

TEST(CentralityProperty, FormulaMatchesEnergyDrop) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng() % 40;
        const auto kind = static_cast<lt::WeightKind>(trial % 3);
        const Graph g = lt::random_graph(rng, n, rng() % (3 * n), kind);
        const auto unw = lap_cent_unweighted(g);
        const auto wtd = lap_cent_weighted(g);
        for (const auto& [v, _] : g.vertices()) {
            EXPECT_EQ(unw.at(v), delta_energy_oracle(g, v, Variant::unweighted));
            const double want = lt::dense_energy_drop(g, v);
            if (kind == lt::WeightKind::real) {
                EXPECT_TRUE(lt::close_rel(wtd.at(v), want)) << wtd.at(v) << " vs " << want;
            } else {
                EXPECT_EQ(wtd.at(v), want);
            }
        }
        if (kind == lt::WeightKind::unit) {
            EXPECT_EQ(lt::as_ordered(unw), lt::as_ordered(wtd));
        }
    }
}

// Changing an edge that avoids v and all of v's neighbors leaves v untouched.
TEST(CentralityProperty, Locality) {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = lt::random_graph(rng, 40, 50, lt::WeightKind::integer);
        const NodeId v = rng() % 40;
        const auto before = lap_cent_weighted(g).at(v);
        const auto before_u = lap_cent_unweighted(g).at(v);
        const NodeId a = rng() % 40, b = rng() % 40;
        auto near = [&](NodeId x) { return x == v || g.has_edge(x, v); };
        if (a == b || near(a) || near(b)) continue;
        if (g.has_edge(a, b))
            g.remove_edge(a, b);
        else
            g.add_edge({a, b, 3.0});
        EXPECT_EQ(lap_cent_weighted(g).at(v), before);
        EXPECT_EQ(lap_cent_unweighted(g).at(v), before_u);
        ++checked;
    }
    EXPECT_GT(checked, 50);
}

TEST(CentralityProperty, NormalizedInUnitInterval) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        // connected: a path backbone plus random chords
        Graph g;
        const std::size_t n = 3 + rng() % 30;
        for (NodeId i = 1; i < n; ++i) g.add_edge({i - 1, i, lt::draw_weight(rng, lt::WeightKind::real)});
        for (int k = 0; k < 20; ++k) {
            const NodeId a = rng() % n, b = rng() % n;
            if (a != b) g.add_edge({a, b, lt::draw_weight(rng, lt::WeightKind::real)});
        }
        for (Variant var : {Variant::unweighted, Variant::weighted}) {
            const auto c = normalize(lap_cent(g, var), laplacian_energy(g, var));
            for (const auto& [_, x] : c.values) {
                EXPECT_GT(x, 0.0);
                EXPECT_LE(x, 1.0);
            }
        }
    }
}

TEST(LapCent, ThreadedMatchesSequential) {
    std::mt19937_64 rng(31);
    const Graph g = lt::random_graph(rng, 500, 2000, lt::WeightKind::real);
    for (Variant var : {Variant::unweighted, Variant::weighted}) {
        const auto seq = lap_cent(g, var, 1);
        const auto par = lap_cent(g, var, 4);
        EXPECT_EQ(lt::as_ordered(seq), lt::as_ordered(par));
        EXPECT_EQ(par.computed_count, g.node_count());
    }
}

TEST(LapCent, ThreadsFromEnvironment) {
    ::setenv("LAPSTREAM_THREADS", "3", 1);
    EXPECT_EQ(worker_threads_from_env(), 3u);
    ::setenv("LAPSTREAM_THREADS", "0", 1);
    EXPECT_EQ(worker_threads_from_env(), 1u);
    ::unsetenv("LAPSTREAM_THREADS");
    EXPECT_EQ(worker_threads_from_env(), 1u);
}

TEST(CentralityDump, AscendingTwelveDigits) {
    CentralityMap c;
    c.values = {{10, 1.0 / 3.0}, {2, 34.0}, {7, 0.0}};
    std::ostringstream os;
    write_centrality_dump(os, c);
    EXPECT_EQ(os.str(), "2,34\n7,0\n10,0.333333333333\n");
}
