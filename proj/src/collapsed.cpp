#include "lamplab/collapsed.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lamplab/rng.hpp"
#include "lamplab/walk.hpp"

namespace lamplab {

namespace {

// Tail of sum_{w > W} 2^{-(w+3)} (w+1): every width-w layer contributes at
// most (w+1) unit cosine powers.
double width_tail_bound(int w_cut) {
    return std::ldexp(static_cast<double>(w_cut + 3), -(w_cut + 3));
}

int auto_width(std::int64_t n_max) {
    const double ln2 = std::numbers::ln2;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double w_star = std::cbrt(pi2 * static_cast<double>(std::max<std::int64_t>(n_max, 1)) / ln2);
    const double sigma = std::sqrt(w_star / (3.0 * ln2));
    const int w = static_cast<int>(std::ceil(w_star + 12.0 * sigma)) + 16;
    return std::max(w, 96);
}

} // namespace

CollapsedSeries collapsed_dp_series(std::int64_t n_max, int width_cut) {
    if (n_max < 0) throw std::invalid_argument("collapsed dp: negative n_max");
    if (width_cut < 1 || width_cut > 512)
        throw std::invalid_argument("collapsed dp: width cutoff must be in 1..512");

    const int W = width_cut;
    // flat layout: blocks indexed by (a, b), entries by o + a in [0, a+b]
    std::vector<std::vector<std::size_t>> base(W + 1);
    std::size_t total_states = 0;
    for (int a = 0; a <= W; ++a) {
        base[a].assign(W - a + 1, 0);
        for (int b = 0; W >= a + b; ++b) {
            base[a][b] = total_states;
            total_states += static_cast<std::size_t>(a + b + 1);
        }
    }
    auto idx = [&](int a, int b, int o) { return base[a][b] + static_cast<std::size_t>(o + a); };

    std::vector<double> cur(total_states, 0.0), nxt(total_states, 0.0);
    cur[idx(0, 0, 0)] = 1.0;

    CollapsedSeries out;
    out.width_cut = W;
    out.truncation_bound = width_tail_bound(W);
    out.ns.reserve(n_max + 1);
    out.diag.reserve(n_max + 1);
    out.total.reserve(n_max + 1);

    auto collect = [&](const std::vector<double>& state, std::int64_t n) {
        double diag = 0.0, total = 0.0;
        for (int a = 0; a <= W; ++a)
            for (int b = 0; a + b <= W; ++b) {
                const double weight = std::ldexp(1.0, -(a + b + 1));
                const std::size_t lo = base[a][b];
                double block = 0.0;
                for (int o = -a; o <= b; ++o) block += state[lo + static_cast<std::size_t>(o + a)];
                total += weight * block;
                diag += weight * state[idx(a, b, 0)];
            }
        out.ns.push_back(n);
        out.diag.push_back(diag);
        out.total.push_back(total);
    };
    collect(cur, 0);

    for (std::int64_t t = 1; t <= n_max; ++t) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (int a = 0; a <= W; ++a)
            for (int b = 0; a + b <= W; ++b) {
                const std::size_t lo = base[a][b];
                for (int o = -a; o <= b; ++o) {
                    const double p = cur[lo + static_cast<std::size_t>(o + a)];
                    if (p == 0.0) continue;
                    const double half = 0.5 * p;
                    // step left
                    if (o - 1 >= -a) nxt[idx(a, b, o - 1)] += half;
                    else if (a + 1 + b <= W) nxt[idx(a + 1, b, o - 1)] += half;
                    else out.discarded_mass += half;
                    // step right
                    if (o + 1 <= b) nxt[idx(a, b, o + 1)] += half;
                    else if (a + b + 1 <= W) nxt[idx(a, b + 1, o + 1)] += half;
                    else out.discarded_mass += half;
                }
            }
        cur.swap(nxt);
        collect(cur, t);
    }
    return out;
}

CollapsedSeries collapsed_interval_series(const std::vector<std::int64_t>& ns, int width_cut) {
    std::int64_t n_max = 0;
    for (std::int64_t n : ns) {
        if (n < 0) throw std::invalid_argument("collapsed interval: negative n");
        n_max = std::max(n_max, n);
    }
    const int W = (width_cut > 0) ? width_cut : auto_width(n_max);
    if (W > 512)
        throw std::invalid_argument("collapsed interval: width cutoff " + std::to_string(W) +
                                    " exceeds 512; n is too large for the truncation bound");

    CollapsedSeries out;
    out.width_cut = W;
    out.truncation_bound = width_tail_bound(W);
    out.ns = ns;
    out.diag.assign(ns.size(), 0.0);
    out.total.assign(ns.size(), 0.0);

    const double pi = std::numbers::pi;
    for (int w = 0; w <= W; ++w) {
        const double m = static_cast<double>(w + 2);
        const double layer = std::ldexp(1.0, -(w + 3));
        for (int j = 1; j <= w + 1; ++j) {
            const double lambda = std::cos(pi * j / m);
            double c2 = 0.0; // squared overlap with the flat function
            if (j % 2 == 1) {
                const double cot = 1.0 / std::tan(pi * j / (2.0 * m));
                c2 = (2.0 / m) * cot * cot;
            }
            for (std::size_t i = 0; i < ns.size(); ++i) {
                const double ln = std::pow(lambda, static_cast<double>(ns[i]));
                if (ln == 0.0) continue;
                out.diag[i] += layer * ln;
                if (c2 != 0.0) out.total[i] += layer * ln * c2;
            }
        }
    }
    return out;
}

CollapsedMc collapsed_mc(const WeightedGraph& g, Vertex x, std::int64_t n,
                         std::int64_t ensemble_size, std::uint64_t seed) {
    if (x < 0 || x >= g.num_vertices()) throw std::invalid_argument("collapsed mc: bad vertex");
    if (n < 1) throw std::invalid_argument("collapsed mc: need n >= 1");
    if (ensemble_size < 1) throw std::invalid_argument("collapsed mc: empty ensemble");

    CollapsedMc res;
    res.trials = ensemble_size;
    res.rare_event_warning = (n > 10000);

    double s_diag = 0.0, s2_diag = 0.0, s_total = 0.0, s2_total = 0.0;
    std::vector<std::uint8_t> visited(g.num_vertices(), 0);
    std::vector<Vertex> touched;
    for (std::int64_t i = 0; i < ensemble_size; ++i) {
        SplitRng rng = SplitRng::derive(seed, static_cast<std::uint64_t>(i));
        Vertex pos = x;
        touched.clear();
        visited[x] = 1;
        touched.push_back(x);
        std::int64_t range = 1;
        for (std::int64_t t = 0; t < n; ++t) {
            pos = walk_step(g, pos, rng.next_unit());
            if (!visited[pos]) {
                visited[pos] = 1;
                touched.push_back(pos);
                ++range;
            }
        }
        const double wgt = (range < 1074) ? std::ldexp(1.0, -static_cast<int>(range)) : 0.0;
        s_total += wgt;
        s2_total += wgt * wgt;
        if (pos == x) {
            ++res.return_hits;
            s_diag += wgt;
            s2_diag += wgt * wgt;
        }
        for (Vertex v : touched) visited[v] = 0;
    }
    const double M = static_cast<double>(ensemble_size);
    res.diag = s_diag / M;
    res.total = s_total / M;
    res.diag_se = std::sqrt(std::max(0.0, s2_diag / M - res.diag * res.diag) / M);
    res.total_se = std::sqrt(std::max(0.0, s2_total / M - res.total * res.total) / M);
    return res;
}

} // namespace lamplab
