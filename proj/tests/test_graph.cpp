#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lamplab/generators.hpp"
#include "lamplab/graph.hpp"
#include "lamplab/rng.hpp"

using namespace lamplab;

TEST_CASE("path graph construction and measures") {
    const WeightedGraph g = WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(g.num_vertices() == 3);
    CHECK(g.measure(0) == 1.0);
    CHECK(g.measure(1) == 2.0);
    CHECK(g.measure(2) == 1.0);
    CHECK(g.max_degree() == 2);
    CHECK(g.p0() == 0.5);
}

TEST_CASE("triangle measures") {
    const WeightedGraph g = WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
    for (Vertex v = 0; v < 3; ++v) CHECK(g.measure(v) == 2.0);
    CHECK(g.max_degree() == 2);
}

TEST_CASE("construction rejections") {
    CHECK_THROWS_AS(WeightedGraph::build(2, {{0, 1, 1.0}, {0, 1, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::build(2, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::build(2, {{0, 1, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::build(2, {{0, 1, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::build(2, {{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::build(3, {{0, 1, 1.0}}), std::invalid_argument); // isolated 2
    CHECK_THROWS_AS(WeightedGraph::build(4, {{0, 1, 1.0}, {2, 3, 1.0}}),
                    std::invalid_argument); // disconnected
    CHECK_THROWS_AS(WeightedGraph::build(2, {{0, 5, 1.0}}), std::invalid_argument);
}

TEST_CASE("graph distance") {
    const WeightedGraph path = WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(graph_distance(path, 0, 2) == 2);
    CHECK(graph_distance(path, 1, 1) == 0);

    // corner-to-corner of the level-2 pre-gasket
    const WeightedGraph g2 = make_gasket(2);
    CHECK(g2.num_vertices() == 15);
    std::vector<Vertex> corners;
    for (Vertex v = 0; v < g2.num_vertices(); ++v)
        if (g2.is_boundary(v)) corners.push_back(v);
    REQUIRE(corners.size() == 3);
    CHECK(graph_distance(g2, corners[0], corners[1]) == 4);
    CHECK(graph_distance(g2, corners[1], corners[2]) == 4);
}

TEST_CASE("distance is a metric on random triples") {
    SplitRng rng(7);
    const WeightedGraph g = random_connected_graph(24, 0.15, rng);
    for (int trial = 0; trial < 40; ++trial) {
        const auto x = static_cast<Vertex>(rng.next_below(24));
        const auto y = static_cast<Vertex>(rng.next_below(24));
        const auto z = static_cast<Vertex>(rng.next_below(24));
        const int dxy = graph_distance(g, x, y);
        const int dyz = graph_distance(g, y, z);
        const int dxz = graph_distance(g, x, z);
        CHECK(dxz <= dxy + dyz);
        CHECK(dxy == graph_distance(g, y, x));
        CHECK((dxy == 0) == (x == y));
    }
}

TEST_CASE("ball volume on an interior line vertex") {
    const WeightedGraph g = make_lattice(1, 40);
    const Vertex center = 40;
    for (int r = 0; r <= 10; ++r) {
        const Ball b = ball_volume(g, center, r);
        if (r == 0) {
            CHECK(b.members.size() == 1);
            CHECK(b.measure == g.measure(center));
        } else {
            CHECK(b.measure == doctest::Approx(4.0 * r + 2.0));
        }
    }
}

TEST_CASE("graph_stats on the path and the boxed plane") {
    const WeightedGraph path = make_lattice(1, 10);
    const GraphStats ps = graph_stats(path, {10}, 8);
    CHECK(ps.max_degree == 2);
    CHECK(ps.p0 == 0.5);

    const WeightedGraph box = make_lattice(2, 200);
    const Vertex center = (401 * 401 - 1) / 2;
    REQUIRE(box.measure(center) == 4.0);

    // interior ball volumes have the closed form V = 4 (2r^2 + 2r + 1)
    const GraphStats bs = graph_stats(box, {center}, 128, 16);
    CHECK(bs.p0 == doctest::Approx(0.25));
    for (const auto& [r, v] : bs.volume_samples)
        CHECK(v == doctest::Approx(4.0 * (2.0 * r * r + 2.0 * r + 1.0)));
    CHECK(bs.df_fit.slope == doctest::Approx(2.0).epsilon(0.025));
    CHECK(bs.c1 <= bs.c2);
    CHECK_FALSE(bs.r_clipped);

    // the default grid from r = 2 carries the +2r+1 surface term; its slope
    // is the closed-form OLS value, not yet the dimension
    const GraphStats full = graph_stats(box, {center}, 128);
    std::vector<double> lx, ly;
    for (double r = 2; r <= 128; r *= 2) {
        lx.push_back(std::log(r));
        ly.push_back(std::log(4.0 * (2.0 * r * r + 2.0 * r + 1.0)));
    }
    const FitResult oracle = fit_line(lx, ly);
    CHECK(full.df_fit.slope == doctest::Approx(oracle.slope).epsilon(1e-9));
    CHECK(oracle.slope < 1.95); // why the d_f window starts at r = 16

    const GraphStats clipped = graph_stats(box, {center}, 1024, 16);
    CHECK(clipped.r_clipped);
}

TEST_CASE("reversibility and stochasticity") {
    SplitRng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        WeightedGraph g = [&] {
            SplitRng weights(trial + 100);
            std::vector<Edge> edges;
            const WeightedGraph base = random_connected_graph(12, 0.3, rng);
            for (Edge e : base.edge_list()) {
                e.weight = 0.25 + 2.0 * weights.next_unit();
                edges.push_back(e);
            }
            return WeightedGraph::build(12, edges);
        }();
        for (Vertex x = 0; x < g.num_vertices(); ++x) {
            double total = 0.0;
            const Vertex* nb = g.neighbors(x);
            for (std::size_t k = 0; k < g.degree(x); ++k) {
                const Vertex y = nb[k];
                // m(x) p(x,y) = m(y) p(y,x): both equal the stored mu
                CHECK(g.measure(x) * g.transition(x, y) ==
                      doctest::Approx(g.measure(y) * g.transition(y, x)).epsilon(1e-15));
                total += g.transition(x, y);
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("counting bound over random vertex subsets") {
    SplitRng rng(13);
    const WeightedGraph g = make_gasket(4);
    double min_m = 1e300, max_m = 0.0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        min_m = std::min(min_m, g.measure(v));
        max_m = std::max(max_m, g.measure(v));
    }
    for (int trial = 0; trial < 30; ++trial) {
        double ma = 0.0;
        std::int64_t count = 0;
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            if (rng.next_unit() < 0.3) {
                ma += g.measure(v);
                ++count;
            }
        CHECK(min_m * static_cast<double>(count) <= ma + 1e-12);
        CHECK(ma <= max_m * static_cast<double>(count) + 1e-12);
    }
}

TEST_CASE("edge list round-trips bit-exactly") {
    SplitRng rng(17);
    std::vector<Edge> edges;
    const WeightedGraph base = random_connected_graph(30, 0.2, rng);
    for (Edge e : base.edge_list()) {
        e.weight = std::exp(4.0 * rng.next_unit() - 2.0); // awkward decimals
        edges.push_back(e);
    }
    const WeightedGraph g = WeightedGraph::build(30, edges);
    const auto tmp = std::filesystem::temp_directory_path() / "lamplab_roundtrip.edges";
    save_graph(g, tmp.string());
    const WeightedGraph h = load_graph(tmp.string());
    REQUIRE(h.num_vertices() == g.num_vertices());
    const auto ge = g.edge_list(), he = h.edge_list();
    REQUIRE(ge.size() == he.size());
    for (std::size_t i = 0; i < ge.size(); ++i) {
        CHECK(ge[i].u == he[i].u);
        CHECK(ge[i].v == he[i].v);
        CHECK(ge[i].weight == he[i].weight); // exact doubles
    }
    std::filesystem::remove(tmp);
}

TEST_CASE("edge list parse errors carry line numbers") {
    const auto tmp = std::filesystem::temp_directory_path() / "lamplab_bad.edges";
    {
        std::ofstream out(tmp);
        out << "0 1 1.0\n"; // missing header
    }
    CHECK_THROWS_WITH_AS(load_graph(tmp.string()),
                         doctest::Contains("line 1"), std::invalid_argument);
    {
        std::ofstream out(tmp);
        out << "n 3\n0 1 1.0\n1 2 oops\n";
    }
    CHECK_THROWS_WITH_AS(load_graph(tmp.string()),
                         doctest::Contains("line 3"), std::invalid_argument);
    std::filesystem::remove(tmp);
}
