#include "lamplab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lamplab/rng.hpp"
#include "lamplab/walk.hpp"

namespace lamplab {

namespace {

// Graph reindexed in BFS order from the base vertex, with per-slot
// transition probabilities. The frontier prefix caps the work at step t
// to the ball B(x, t).
struct BfsKernel {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> nb;   // BFS-indexed neighbor
    std::vector<double> prob;        // p(z -> y)
    std::vector<double> measure;     // m in BFS order
    std::vector<std::size_t> ball_prefix; // #vertices within radius r
    std::vector<Vertex> original;    // BFS index -> original id
    std::vector<std::uint8_t> killed;

    std::size_t active(std::int64_t t) const {
        const std::size_t r = std::min<std::size_t>(ball_prefix.size() - 1,
                                                    static_cast<std::size_t>(t));
        return ball_prefix[r];
    }
};

BfsKernel bfs_kernel(const WeightedGraph& g, Vertex x, bool absorb_at_boundary) {
    const Vertex n = g.num_vertices();
    BfsKernel k;
    k.original.reserve(n);
    std::vector<std::int32_t> order(n, -1);

    std::vector<Vertex> cur = {x}, nxt;
    order[x] = 0;
    k.original.push_back(x);
    k.ball_prefix.push_back(1);
    while (!cur.empty()) {
        nxt.clear();
        for (Vertex v : cur) {
            const Vertex* nbv = g.neighbors(v);
            for (std::size_t s = 0; s < g.degree(v); ++s) {
                const Vertex y = nbv[s];
                if (order[y] < 0) {
                    order[y] = static_cast<std::int32_t>(k.original.size());
                    k.original.push_back(y);
                    nxt.push_back(y);
                }
            }
        }
        if (!nxt.empty()) k.ball_prefix.push_back(k.original.size());
        cur.swap(nxt);
    }

    k.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex i = 0; i < n; ++i)
        k.offsets[i + 1] = k.offsets[i] + g.degree(k.original[i]);
    k.nb.resize(k.offsets.back());
    k.prob.resize(k.offsets.back());
    k.measure.resize(n);
    k.killed.assign(n, 0);
    for (Vertex i = 0; i < n; ++i) {
        const Vertex v = k.original[i];
        k.measure[i] = g.measure(v);
        if (absorb_at_boundary && g.is_boundary(v)) k.killed[i] = 1;
        const Vertex* nbv = g.neighbors(v);
        const double* w = g.weights(v);
        for (std::size_t s = 0; s < g.degree(v); ++s) {
            k.nb[k.offsets[i] + s] = static_cast<std::uint32_t>(order[nbv[s]]);
            k.prob[k.offsets[i] + s] = w[s] / g.measure(v);
        }
    }
    return k;
}

} // namespace

HeatKernelResult heat_kernel_exact(const WeightedGraph& g, Vertex x, std::int64_t n_max,
                                   const HeatKernelOptions& opts) {
    if (x < 0 || x >= g.num_vertices()) throw std::invalid_argument("heat_kernel: bad vertex");
    if (n_max < 0) throw std::invalid_argument("heat_kernel: negative n_max");
    const std::size_t need =
        static_cast<std::size_t>(g.num_vertices()) * (2 * sizeof(double) + sizeof(Vertex)) +
        static_cast<std::size_t>(g.num_edges()) * 2 * (sizeof(double) + sizeof(std::uint32_t));
    if (need > opts.memory_budget_bytes)
        throw std::invalid_argument("heat_kernel: memory estimate " + std::to_string(need) +
                                    " bytes exceeds budget of " +
                                    std::to_string(opts.memory_budget_bytes));
    for (std::int64_t s : opts.snapshot_times)
        if (s < 0 || s > n_max)
            throw std::invalid_argument("heat_kernel: snapshot time out of range");

    const BfsKernel k = bfs_kernel(g, x, opts.absorb_at_boundary);
    const std::size_t n_vertices = k.original.size();

    HeatKernelResult res;
    res.base = x;
    res.n_max = n_max;
    res.diag.assign(static_cast<std::size_t>(2 * n_max) + 1, 0.0);

    std::vector<double> v(n_vertices, 0.0), w(n_vertices, 0.0);
    v[0] = 1.0;
    const double m_base = k.measure[0];

    auto fold = [&](const std::vector<double>& a, const std::vector<double>& b,
                    std::size_t limit) {
        double acc = 0.0;
        for (std::size_t i = 0; i < limit; ++i)
            if (a[i] != 0.0) acc += a[i] * b[i] / k.measure[i];
        return acc * m_base;
    };
    auto snapshot = [&](const std::vector<double>& a, std::int64_t t, std::size_t limit) {
        HeatVector hv;
        hv.base = x;
        hv.n = t;
        for (std::size_t i = 0; i < limit; ++i)
            if (a[i] != 0.0) {
                hv.entries.emplace_back(k.original[i], a[i]);
                hv.mass += a[i];
            }
        res.snapshots.push_back(std::move(hv));
    };

    res.diag[0] = 1.0;
    if (std::count(opts.snapshot_times.begin(), opts.snapshot_times.end(), 0))
        snapshot(v, 0, 1);

    for (std::int64_t t = 1; t <= n_max; ++t) {
        const std::size_t src = k.active(t - 1);
        const std::size_t dst = k.active(t);
        std::fill(w.begin(), w.begin() + dst, 0.0);
        for (std::size_t z = 0; z < src; ++z) {
            const double vz = v[z];
            if (vz == 0.0 || k.killed[z]) continue;
            for (std::size_t s = k.offsets[z]; s < k.offsets[z + 1]; ++s)
                w[k.nb[s]] += vz * k.prob[s];
        }
        if (opts.absorb_at_boundary)
            for (std::size_t z = 0; z < dst; ++z)
                if (k.killed[z] && w[z] != 0.0) {
                    res.absorbed_mass += w[z];
                    w[z] = 0.0;
                }
        v.swap(w);

        // p_{2t-1}(x,x) folds the vectors at times t-1 and t
        res.diag[2 * t - 1] = fold(w, v, std::min(src, dst));
        res.diag[2 * t] = fold(v, v, dst);
        if (std::count(opts.snapshot_times.begin(), opts.snapshot_times.end(), t))
            snapshot(v, t, dst);
    }
    return res;
}

std::vector<double> confinement_survival_series(const WeightedGraph& g, Vertex x, int r,
                                                std::int64_t n_max, std::size_t max_states) {
    if (r < 0) throw std::invalid_argument("confinement: negative radius");
    const Ball ball = ball_volume(g, x, r);
    if (ball.members.size() > max_states)
        throw std::invalid_argument("confinement: ball has " +
                                    std::to_string(ball.members.size()) +
                                    " states, exceeding the exact limit of " +
                                    std::to_string(max_states));

    // local indexing of the ball; transitions leaving it are killed
    const std::size_t m = ball.members.size();
    std::vector<std::int32_t> local(g.num_vertices(), -1);
    for (std::size_t i = 0; i < m; ++i) local[ball.members[i]] = static_cast<std::int32_t>(i);

    std::vector<std::size_t> offsets(m + 1, 0);
    std::vector<std::pair<std::uint32_t, double>> trans;
    for (std::size_t i = 0; i < m; ++i) {
        const Vertex z = ball.members[i];
        const Vertex* nb = g.neighbors(z);
        const double* w = g.weights(z);
        for (std::size_t s = 0; s < g.degree(z); ++s) {
            const std::int32_t j = local[nb[s]];
            if (j >= 0) trans.emplace_back(j, w[s] / g.measure(z));
        }
        offsets[i + 1] = trans.size();
    }

    std::vector<double> v(m, 0.0), w2(m, 0.0);
    v[0] = 1.0;
    std::vector<double> survival(static_cast<std::size_t>(n_max) + 1, 0.0);
    survival[0] = 1.0;
    for (std::int64_t t = 1; t <= n_max; ++t) {
        std::fill(w2.begin(), w2.end(), 0.0);
        for (std::size_t z = 0; z < m; ++z) {
            const double vz = v[z];
            if (vz == 0.0) continue;
            for (std::size_t s = offsets[z]; s < offsets[z + 1]; ++s)
                w2[trans[s].first] += vz * trans[s].second;
        }
        v.swap(w2);
        double mass = 0.0;
        for (double e : v) mass += e;
        survival[t] = mass;
    }
    return survival;
}

ConfinementResult confinement_prob(const WeightedGraph& g, Vertex x, std::int64_t n, int r,
                                   std::int64_t ensemble_size, std::uint64_t seed,
                                   std::size_t exact_state_limit) {
    if (ensemble_size < 100)
        throw std::invalid_argument("confinement: ensemble size must be >= 100");
    const std::vector<std::int32_t> dist = distances_from(g, x);

    std::int64_t successes = 0;
    for (std::int64_t i = 0; i < ensemble_size; ++i) {
        SplitRng rng = SplitRng::derive(seed, static_cast<std::uint64_t>(i));
        Vertex pos = x;
        bool confined = true;
        for (std::int64_t t = 0; t < n; ++t) {
            pos = walk_step(g, pos, rng.next_unit());
            if (dist[pos] > r) { confined = false; break; }
        }
        if (confined) ++successes;
    }

    ConfinementResult res;
    res.successes = successes;
    res.trials = ensemble_size;
    res.zero_successes = (successes == 0);
    const double phat = static_cast<double>(successes) / static_cast<double>(ensemble_size);
    res.estimate = phat;
    const double z = 1.959963984540054; // 95%
    const double nn = static_cast<double>(ensemble_size);
    const double denom = 1.0 + z * z / nn;
    const double center = (phat + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z * z / (4.0 * nn * nn)) / denom;
    res.wilson_lo = (successes == 0) ? 0.0 : std::max(0.0, center - half);
    res.wilson_hi = (successes == ensemble_size) ? 1.0 : std::min(1.0, center + half);

    const Ball ball = ball_volume(g, x, r);
    if (ball.members.size() <= exact_state_limit) {
        res.exact_available = true;
        res.exact_value = confinement_survival_series(g, x, r, n, exact_state_limit)[n];
    }
    return res;
}

} // namespace lamplab
