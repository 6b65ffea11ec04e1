#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "lamplab/collapsed.hpp"
#include "lamplab/generators.hpp"
#include "lamplab/lamplighter.hpp"
#include "support/oracles.hpp"

using namespace lamplab;

namespace {

WeightedGraph p2() { return WeightedGraph::build(2, {{0, 1, 1.0}}); }

WeightedGraph path_graph(int k) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < k; ++v) edges.push_back({v, v + 1, 1.0});
    return WeightedGraph::build(k, edges);
}

} // namespace

TEST_CASE("wreath state flips keep the lamp set sorted") {
    WreathState s;
    s.position = 2;
    s.flip(5);
    s.flip(1);
    s.flip(3);
    CHECK(s.lamps == std::vector<Vertex>{1, 3, 5});
    s.flip(3);
    CHECK(s.lamps == std::vector<Vertex>{1, 5});
    CHECK(lamp_sum(s) == 2);
    CHECK(s.lamp_on(5));
    CHECK_FALSE(s.lamp_on(3));

    WreathState t;
    t.flip(1);
    t.flip(2);
    CHECK(lamp_difference(s, t) == 2); // {5} vs {2}, shared {1}
}

TEST_CASE("one lamplighter step has the quarter-kernel law") {
    const WeightedGraph line = path_graph(5);
    WreathState start;
    start.position = 2;

    std::map<std::pair<std::uint32_t, Vertex>, std::int64_t> counts;
    const std::int64_t M = 400000;
    for (std::int64_t i = 0; i < M; ++i) {
        SplitRng rng = SplitRng::derive(7, static_cast<std::uint64_t>(i));
        const WreathState next = lamplighter_step(line, start, rng);
        std::uint32_t mask = 0;
        for (Vertex v : next.lamps) mask |= 1u << v;
        ++counts[{mask, next.position}];
        // lamps can only change at the departure and arrival sites
        for (Vertex v : next.lamps) CHECK((v == 2 || v == next.position));
    }
    // eight outcomes, each 1/4 * p = 1/8
    CHECK(counts.size() == 8);
    for (const auto& [key, c] : counts) {
        const double freq = static_cast<double>(c) / static_cast<double>(M);
        const double se = std::sqrt(0.125 * 0.875 / static_cast<double>(M));
        CHECK(std::abs(freq - 0.125) <= 4.0 * se);
    }
}

TEST_CASE("lamp support stays inside the visited set") {
    SplitRng rng(15);
    const WeightedGraph g = random_connected_graph(9, 0.3, rng);
    WreathState s;
    s.position = 0;
    std::vector<std::uint8_t> visited(g.num_vertices(), 0);
    visited[0] = 1;
    SplitRng walk_rng(99);
    for (int t = 0; t < 400; ++t) {
        s = lamplighter_step(g, s, walk_rng);
        visited[s.position] = 1;
        for (Vertex v : s.lamps) CHECK(visited[v] == 1);
    }
}

TEST_CASE("tree exploration cover paths") {
    const WeightedGraph path3 = path_graph(3);
    const CoverPath p = cover_path_tree(path3, {0, 1, 2}, 0);
    CHECK(p.vertices == std::vector<Vertex>{0, 1, 2, 1, 0});
    CHECK(p.length() == 4);
    validate_cover_path(path3, {0, 1, 2}, p, 0, 0);

    // star with three leaves: each spoke twice
    const WeightedGraph star = WeightedGraph::build(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    const CoverPath sp = cover_path_tree(star, {0, 1, 2, 3}, 0);
    CHECK(sp.length() == 6);
    validate_cover_path(star, {0, 1, 2, 3}, sp, 0, 0);

    // single vertex: empty walk
    const CoverPath single = cover_path_tree(path3, {1}, 1);
    CHECK(single.length() == 0);

    SplitRng rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(7));
        const WeightedGraph g = random_connected_graph(n, 0.35, rng);
        std::vector<Vertex> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        const auto x = static_cast<Vertex>(rng.next_below(n));
        const CoverPath cp = cover_path_tree(g, all, x);
        CHECK(cp.length() == 2 * (n - 1));
        validate_cover_path(g, all, cp, x, x);
    }
}

TEST_CASE("surgery cover paths meet every Lemma condition") {
    const WeightedGraph tri = WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
    const CoverPath t = cover_path_surgery(tri, {0, 1, 2}, 0, 0);
    validate_cover_path(tri, {0, 1, 2}, t, 0, 0);
    CHECK(t.length() >= 3); // minimum closed covering walk of the triangle
    CHECK(t.length() <= 12); // 2 M #V
    CHECK(oracle::min_cover_walk_bfs(tri, {0, 1, 2}, 0, 0) == 3);

    const WeightedGraph path3 = path_graph(3);
    const CoverPath p = cover_path_surgery(path3, {0, 1, 2}, 0, 0);
    CHECK(p.length() == 4);
    CHECK(oracle::min_cover_walk_bfs(path3, {0, 1, 2}, 0, 0) == 4);

    const CoverPath single = cover_path_surgery(path3, {1}, 1, 1);
    CHECK(single.length() == 0);

    CHECK_THROWS_AS(cover_path_surgery(path3, {0, 2}, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(cover_path_surgery(path3, {0, 1}, 0, 2), std::invalid_argument);
}

TEST_CASE("surgery on random subgraphs: postconditions, bound, oracle comparison") {
    SplitRng rng(33);
    int surgeries_exercised = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_below(5)); // 4..8 vertices
        const WeightedGraph g = random_connected_graph(n, 0.4, rng);
        // enumerate connected induced subsets
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<Vertex> subset;
            for (int v = 0; v < n; ++v)
                if (mask & (1u << v)) subset.push_back(v);
            if (subset.size() < 2) continue;
            if (!induced_connected(g, subset)) continue;
            const Vertex x = subset[rng.next_below(subset.size())];
            const Vertex y = subset[rng.next_below(subset.size())];
            const CoverPath cp = cover_path_surgery(g, subset, x, y);
            validate_cover_path(g, subset, cp, x, y);
            CHECK(cp.length() <=
                  2 * static_cast<std::int64_t>(g.max_degree()) *
                      static_cast<std::int64_t>(subset.size()));
            const int oracle_len = oracle::min_cover_walk_bfs(g, subset, x, y);
            CHECK(cp.length() >= oracle_len);
            if (cp.length() > 2 * static_cast<std::int64_t>(subset.size()))
                ++surgeries_exercised;
        }
    }
    (void)surgeries_exercised;
}

TEST_CASE("surgery strictly reduces the traversal excess") {
    // A graph where the DFS + tail construction forces triple traversals:
    // cycle with a pendant chain off the far side.
    const WeightedGraph g = WeightedGraph::build(
        6, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}, {2, 4, 1.0}, {4, 5, 1.0}});
    bool saw_surgery = false;
    for (Vertex y = 0; y < 6; ++y) {
        std::vector<std::int64_t> trace;
        const CoverPath cp = cover_path_surgery(g, {0, 1, 2, 3, 4, 5}, 0, y, &trace);
        validate_cover_path(g, {0, 1, 2, 3, 4, 5}, cp, 0, y);
        REQUIRE(!trace.empty());
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
        CHECK(trace.back() == 0);
        if (trace.size() > 1) saw_surgery = true;
    }
    CHECK(saw_surgery);

    SplitRng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_below(5));
        const WeightedGraph h = random_connected_graph(n, 0.5, rng);
        std::vector<Vertex> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        std::vector<std::int64_t> trace;
        const auto x = static_cast<Vertex>(rng.next_below(n));
        const auto y = static_cast<Vertex>(rng.next_below(n));
        cover_path_surgery(h, all, x, y, &trace);
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
    }
}

TEST_CASE("distance bounds bracket the exact wreath distance") {
    const WeightedGraph g2 = p2();
    WreathState empty_u, lamp_at_u, lamp_at_v;
    empty_u.position = 0;
    lamp_at_u.position = 0;
    lamp_at_u.flip(0);
    lamp_at_v.position = 0;
    lamp_at_v.flip(1);

    CHECK(wreath_distance_exact(g2, empty_u, empty_u) == 0);
    CHECK(wreath_distance_exact(g2, empty_u, lamp_at_u) == 1);
    CHECK(wreath_distance_exact(g2, empty_u, lamp_at_v) == 3);

    const DistanceBounds same = lamp_distance_bounds(g2, empty_u, empty_u);
    CHECK(same.lower == 0);
    CHECK(same.upper == 0);
    const DistanceBounds b = lamp_distance_bounds(g2, empty_u, lamp_at_v);
    CHECK(b.lower == 1);
    CHECK(b.upper >= 3);

    // full distance table on Z2 wr P2: diameter 4
    const auto table = wreath_distance_table(g2, empty_u);
    std::int32_t diameter = 0;
    for (std::int32_t d : table) {
        CHECK(d >= 0);
        diameter = std::max(diameter, d);
    }
    CHECK(diameter == 4);
}

TEST_CASE("bounds sandwich holds on random graphs and random state pairs") {
    SplitRng rng(55);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_below(5));
        const WeightedGraph g = random_connected_graph(n, 0.35, rng);
        WreathState s0;
        s0.position = static_cast<Vertex>(rng.next_below(n));
        const auto table = wreath_distance_table(g, s0);
        for (int pair = 0; pair < 40; ++pair) {
            WreathState s1;
            s1.position = static_cast<Vertex>(rng.next_below(n));
            for (Vertex v = 0; v < n; ++v)
                if (rng.next_unit() < 0.4) s1.flip(v);
            const std::int64_t exact = table[wreath_state_index(g, s1)];
            const DistanceBounds b = lamp_distance_bounds(g, s0, s1);
            CHECK(b.lower <= exact);
            CHECK(exact <= b.upper);
        }
    }
}

TEST_CASE("collapsed DP: small exact values") {
    const CollapsedSeries s = collapsed_dp_series(8, 32);
    CHECK(s.diag[0] == 0.5); // E[2^{-R_0}], not the trivial p_0
    CHECK(s.p_return(0) == 1.0);
    CHECK(s.diag[2] == doctest::Approx(0.125).epsilon(1e-15)); // 1/8
    CHECK(s.diag[1] == 0.0);
    CHECK(s.total[1] == doctest::Approx(0.25).epsilon(1e-15)); // R_1 = 2 always
    CHECK(s.discarded_mass == 0.0);
}

TEST_CASE("collapsed DP, interval series, and path enumeration all agree") {
    const WeightedGraph line = path_graph(41); // wide enough for n <= 12
    const Vertex mid = 20;
    const CollapsedSeries dp = collapsed_dp_series(12, 80);
    std::vector<std::int64_t> ns;
    for (std::int64_t n = 0; n <= 12; ++n) ns.push_back(n);
    const CollapsedSeries iv = collapsed_interval_series(ns, 80);
    for (std::int64_t n = 0; n <= 12; ++n) {
        const auto en = oracle::enumerate_collapsed(line, mid, static_cast<int>(n));
        CHECK(dp.diag[n] == doctest::Approx(en.diag).epsilon(1e-12));
        CHECK(dp.total[n] == doctest::Approx(en.total).epsilon(1e-12));
        CHECK(iv.diag[n] == doctest::Approx(en.diag).epsilon(1e-12));
        CHECK(iv.total[n] == doctest::Approx(en.total).epsilon(1e-12));
    }
}

TEST_CASE("collapsed routes agree at depth with full widths") {
    const std::vector<std::int64_t> ns = {64, 128, 256, 512};
    const CollapsedSeries dp = collapsed_dp_series(512, 96);
    const CollapsedSeries iv = collapsed_interval_series(ns, 96);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        CHECK(dp.diag[ns[i]] == doctest::Approx(iv.diag[i]).epsilon(1e-11));
        CHECK(dp.total[ns[i]] == doctest::Approx(iv.total[i]).epsilon(1e-11));
    }
}

TEST_CASE("wreath chain enumeration equals collapsed trajectory enumeration") {
    for (int k = 2; k <= 5; ++k) {
        const WeightedGraph g = path_graph(k);
        for (Vertex x0 = 0; x0 < k; ++x0) {
            WreathState start;
            start.position = x0;
            for (int n = 1; n <= 8; ++n) {
                const auto dist = wreath_chain_distribution(g, start, n);
                const double chain_p = dist[wreath_state_index(g, start)];
                const auto en = oracle::enumerate_collapsed(g, x0, n);
                CHECK(chain_p == doctest::Approx(en.diag).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("collapsed MC tracks the exact series on the line") {
    const WeightedGraph line = path_graph(81);
    const Vertex mid = 40;
    const CollapsedMc mc = collapsed_mc(line, mid, 16, 200000, 11);
    const CollapsedSeries iv = collapsed_interval_series({16});
    CHECK(std::abs(mc.diag - iv.diag[0]) <= 4.0 * mc.diag_se);
    CHECK(std::abs(mc.total - iv.total[0]) <= 4.0 * mc.total_se);
    CHECK_FALSE(mc.rare_event_warning);
    CHECK(collapsed_mc(line, mid, 20000, 100, 11).rare_event_warning);
}

TEST_CASE("lamp count concentrates near half the range") {
    const WeightedGraph line = path_graph(641);
    const Vertex mid = 320;
    SplitRng ensemble_rng(61);
    int inside = 0;
    const int trials = 400;
    for (int i = 0; i < trials; ++i) {
        WreathState s;
        s.position = mid;
        SplitRng rng = SplitRng::derive(61, static_cast<std::uint64_t>(i));
        std::vector<std::uint8_t> visited(line.num_vertices(), 0);
        visited[mid] = 1;
        std::int64_t range = 1;
        for (int t = 0; t < 10000; ++t) {
            s = lamplighter_step(line, s, rng);
            if (!visited[s.position]) {
                visited[s.position] = 1;
                ++range;
            }
        }
        const double ratio = static_cast<double>(lamp_sum(s)) / static_cast<double>(range);
        if (ratio > 0.25 && ratio < 0.75) ++inside;
    }
    CHECK(static_cast<double>(inside) / trials >= 0.99);
}
