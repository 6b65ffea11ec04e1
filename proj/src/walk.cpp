#include "lamplab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lamplab {

Vertex walk_step(const WeightedGraph& g, Vertex x, double u) {
    const double target = u * g.measure(x);
    const double* cum = g.cum_weights(x);
    const std::size_t d = g.degree(x);
    // first slot whose cumulative weight exceeds the target
    std::size_t lo = 0, hi = d - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (target < cum[mid]) hi = mid; else lo = mid + 1;
    }
    return g.neighbors(x)[lo];
}

GuardCheck boundary_guard(const WeightedGraph& g, Vertex start, double walk_dim) {
    GuardCheck gc;
    if (!g.has_boundary_info()) {
        gc.max_steps = std::numeric_limits<std::int64_t>::max();
        gc.boundary_distance = std::numeric_limits<std::int32_t>::max();
        gc.guarded = false;
        return gc;
    }
    gc.guarded = true;
    // BFS from the start until the first boundary vertex
    std::vector<std::int32_t> dist(g.num_vertices(), -1);
    std::vector<Vertex> cur = {start}, nxt;
    dist[start] = 0;
    std::int32_t level = 0;
    std::int32_t bd = -1;
    if (g.is_boundary(start)) bd = 0;
    while (bd < 0 && !cur.empty()) {
        ++level;
        nxt.clear();
        for (Vertex v : cur) {
            const Vertex* nb = g.neighbors(v);
            for (std::size_t k = 0; k < g.degree(v); ++k) {
                const Vertex y = nb[k];
                if (dist[y] < 0) {
                    dist[y] = level;
                    if (g.is_boundary(y)) { bd = level; break; }
                    nxt.push_back(y);
                }
            }
            if (bd >= 0) break;
        }
        cur.swap(nxt);
    }
    gc.boundary_distance = (bd < 0) ? std::numeric_limits<std::int32_t>::max() : bd;
    const double cap = std::pow(static_cast<double>(gc.boundary_distance) / 3.0, walk_dim);
    gc.max_steps = (cap >= 9.0e18) ? std::numeric_limits<std::int64_t>::max()
                                   : static_cast<std::int64_t>(cap);
    return gc;
}

void require_guard(const WeightedGraph& g, Vertex start, std::int64_t n, double walk_dim,
                   bool override_guard) {
    if (override_guard) return;
    const GuardCheck gc = boundary_guard(g, start, walk_dim);
    if (!gc.guarded || n <= gc.max_steps) return;
    const double needed = 3.0 * std::pow(static_cast<double>(n), 1.0 / walk_dim);
    throw std::invalid_argument(
        "boundary guard: " + std::to_string(n) + " steps need start-to-boundary distance >= " +
        std::to_string(static_cast<std::int64_t>(std::ceil(needed))) + ", graph provides " +
        std::to_string(gc.boundary_distance) + " (use a larger graph or override)");
}

Trajectory simulate(const WeightedGraph& g, Vertex x0, std::int64_t n, std::uint64_t seed,
                    const SimulateOptions& opts) {
    if (x0 < 0 || x0 >= g.num_vertices()) throw std::invalid_argument("simulate: bad start");
    if (n < 0) throw std::invalid_argument("simulate: negative step count");
    require_guard(g, x0, n, opts.guard_walk_dim, opts.override_guard);
    for (std::size_t i = 1; i < opts.checkpoints.size(); ++i)
        if (opts.checkpoints[i] <= opts.checkpoints[i - 1])
            throw std::invalid_argument("simulate: checkpoints must be strictly increasing");
    if (!opts.checkpoints.empty() && opts.checkpoints.back() > n)
        throw std::invalid_argument("simulate: checkpoint beyond step count");

    const std::vector<std::int32_t> dist = distances_from(g, x0);

    Trajectory tr;
    tr.start = x0;
    tr.steps = n;
    tr.seed = seed;

    const Vertex N = g.num_vertices();
    std::vector<std::int64_t> counts(N, 0);
    std::vector<std::uint8_t> visited(N, 0), lamps;
    if (opts.with_lamps) lamps.assign(N, 0);

    SplitRng rng(seed);
    Vertex pos = x0;
    visited[x0] = 1;
    tr.visited.push_back(x0);
    std::int64_t range = 1, lamp_sum = 0;
    double lstar = 0.0;
    std::int32_t maxdisp = 0;

    std::size_t next_cp = 0;
    auto record = [&](std::int64_t t) {
        CheckpointRow row;
        row.n = t;
        row.range = range;
        row.local_time_max = lstar;
        row.max_displacement = maxdisp;
        row.final_vertex = pos;
        row.lamp_sum = lamp_sum;
        tr.checkpoints.push_back(row);
    };
    if (next_cp < opts.checkpoints.size() && opts.checkpoints[next_cp] == 0) {
        record(0);
        ++next_cp;
    }

    for (std::int64_t t = 1; t <= n; ++t) {
        // local time counts X_0 .. X_{t-1}
        const double cand = static_cast<double>(++counts[pos]) / g.measure(pos);
        if (cand > lstar) lstar = cand;

        if (opts.with_lamps && rng.next_coin()) {
            lamp_sum += lamps[pos] ? -1 : 1;
            lamps[pos] ^= 1;
        }
        pos = walk_step(g, pos, rng.next_unit());
        if (opts.with_lamps && rng.next_coin()) {
            lamp_sum += lamps[pos] ? -1 : 1;
            lamps[pos] ^= 1;
        }

        if (!visited[pos]) {
            visited[pos] = 1;
            ++range;
            tr.visited.push_back(pos);
        }
        if (dist[pos] > maxdisp) maxdisp = dist[pos];

        if (next_cp < opts.checkpoints.size() && opts.checkpoints[next_cp] == t) {
            record(t);
            ++next_cp;
        }
    }

    tr.range = range;
    tr.local_time_max = lstar;
    tr.max_displacement = maxdisp;
    tr.final_vertex = pos;
    if (opts.keep_visit_counts) {
        tr.visit_counts.reserve(tr.visited.size());
        for (Vertex v : tr.visited)
            if (counts[v] > 0) tr.visit_counts.emplace(v, counts[v]);
        // the final position may have count 0 (visited but not yet counted)
    }
    return tr;
}

std::vector<std::int64_t> dyadic_checkpoints(std::int64_t n, std::int64_t first) {
    std::vector<std::int64_t> cps;
    for (std::int64_t t = first; t < n; t *= 2) cps.push_back(t);
    if (n >= first) cps.push_back(n);
    if (cps.empty()) cps.push_back(n);
    return cps;
}

} // namespace lamplab
