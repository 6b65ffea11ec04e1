#include "lamplab/lamplighter.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "lamplab/walk.hpp"

namespace lamplab {

bool WreathState::lamp_on(Vertex v) const {
    return std::binary_search(lamps.begin(), lamps.end(), v);
}

void WreathState::flip(Vertex v) {
    auto it = std::lower_bound(lamps.begin(), lamps.end(), v);
    if (it != lamps.end() && *it == v)
        lamps.erase(it);
    else
        lamps.insert(it, v);
}

std::int64_t lamp_difference(const WreathState& a, const WreathState& b) {
    std::size_t i = 0, j = 0;
    std::int64_t diff = 0;
    while (i < a.lamps.size() && j < b.lamps.size()) {
        if (a.lamps[i] == b.lamps[j]) { ++i; ++j; }
        else if (a.lamps[i] < b.lamps[j]) { ++diff; ++i; }
        else { ++diff; ++j; }
    }
    return diff + static_cast<std::int64_t>(a.lamps.size() - i) +
           static_cast<std::int64_t>(b.lamps.size() - j);
}

WreathState lamplighter_step(const WeightedGraph& g, const WreathState& state, SplitRng& rng) {
    WreathState next = state;
    if (rng.next_coin()) next.flip(next.position);
    next.position = walk_step(g, next.position, rng.next_unit());
    if (rng.next_coin()) next.flip(next.position);
    return next;
}

namespace {

void check_subgraph(const WeightedGraph& g, const std::vector<Vertex>& vs, Vertex x) {
    if (!std::binary_search(vs.begin(), vs.end(), x))
        throw std::invalid_argument("cover path: endpoint not in the subgraph");
    if (!induced_connected(g, vs))
        throw std::invalid_argument("cover path: subgraph is disconnected");
}

// DFS exploration path of a spanning tree from x, appended in place.
// Emits x v ... v x, crossing each tree edge twice. Neighbor order follows
// the adjacency order, so the result is deterministic.
void tree_exploration(const WeightedGraph& g, const std::vector<Vertex>& vs, Vertex x,
                      std::vector<Vertex>& out) {
    std::unordered_map<Vertex, std::uint8_t> seen;
    seen.reserve(vs.size());
    auto in_set = [&](Vertex v) { return std::binary_search(vs.begin(), vs.end(), v); };

    struct Frame { Vertex v; std::size_t next_slot; };
    std::vector<Frame> stack;
    out.push_back(x);
    seen[x] = 1;
    stack.push_back({x, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        const Vertex* nb = g.neighbors(f.v);
        const std::size_t deg = g.degree(f.v);
        bool descended = false;
        while (f.next_slot < deg) {
            const Vertex y = nb[f.next_slot++];
            if (!in_set(y) || seen[y]) continue;
            seen[y] = 1;
            out.push_back(y);
            stack.push_back({y, 0});
            descended = true;
            break;
        }
        if (!descended) {
            stack.pop_back();
            if (!stack.empty()) out.push_back(stack.back().v);
        }
    }
}

} // namespace

void validate_cover_path(const WeightedGraph& g, const std::vector<Vertex>& subgraph_vertices,
                         const CoverPath& path, Vertex x, Vertex y) {
    const auto& vs = subgraph_vertices;
    const auto& w = path.vertices;
    if (w.empty()) throw std::logic_error("cover path: empty vertex sequence");
    if (w.front() != x || w.back() != y)
        throw std::logic_error("cover path: wrong endpoints");
    auto in_set = [&](Vertex v) { return std::binary_search(vs.begin(), vs.end(), v); };
    std::vector<Vertex> covered;
    std::map<std::pair<Vertex, Vertex>, int> uses;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!in_set(w[i])) throw std::logic_error("cover path: vertex outside the subgraph");
        covered.push_back(w[i]);
        if (i + 1 < w.size()) {
            if (!g.adjacent(w[i], w[i + 1]))
                throw std::logic_error("cover path: consecutive vertices not adjacent");
            const std::pair<Vertex, Vertex> key{std::min(w[i], w[i + 1]),
                                                std::max(w[i], w[i + 1])};
            if (++uses[key] > 2)
                throw std::logic_error("cover path: edge traversed more than twice");
        }
    }
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    if (covered != vs)
        throw std::logic_error("cover path: does not visit every subgraph vertex");
}

CoverPath cover_path_tree(const WeightedGraph& g, std::vector<Vertex> subgraph_vertices,
                          Vertex x) {
    std::sort(subgraph_vertices.begin(), subgraph_vertices.end());
    subgraph_vertices.erase(std::unique(subgraph_vertices.begin(), subgraph_vertices.end()),
                            subgraph_vertices.end());
    check_subgraph(g, subgraph_vertices, x);
    CoverPath path;
    if (subgraph_vertices.size() == 1) {
        path.vertices = {x};
        return path;
    }
    tree_exploration(g, subgraph_vertices, x, path.vertices);
    return path;
}

CoverPath cover_path_surgery(const WeightedGraph& g, std::vector<Vertex> subgraph_vertices,
                             Vertex x, Vertex y, std::vector<std::int64_t>* excess_trace) {
    std::sort(subgraph_vertices.begin(), subgraph_vertices.end());
    subgraph_vertices.erase(std::unique(subgraph_vertices.begin(), subgraph_vertices.end()),
                            subgraph_vertices.end());
    const auto& vs = subgraph_vertices;
    check_subgraph(g, vs, x);
    if (!std::binary_search(vs.begin(), vs.end(), y))
        throw std::invalid_argument("cover path: endpoint not in the subgraph");

    CoverPath path;
    if (vs.size() == 1) {
        path.vertices = {x};
        return path;
    }

    // Initial covering walk: tree exploration from x (ends at x), then a
    // shortest path to y inside the subgraph.
    std::vector<Vertex>& seq = path.vertices;
    tree_exploration(g, vs, x, seq);
    if (x != y) {
        // BFS restricted to the subgraph
        std::unordered_map<Vertex, Vertex> parent;
        parent.reserve(vs.size());
        auto in_set = [&](Vertex v) { return std::binary_search(vs.begin(), vs.end(), v); };
        std::queue<Vertex> q;
        q.push(x);
        parent[x] = x;
        while (!q.empty() && !parent.count(y)) {
            const Vertex v = q.front();
            q.pop();
            const Vertex* nb = g.neighbors(v);
            for (std::size_t s = 0; s < g.degree(v); ++s) {
                const Vertex z = nb[s];
                if (in_set(z) && !parent.count(z)) {
                    parent[z] = v;
                    q.push(z);
                }
            }
        }
        std::vector<Vertex> tail;
        for (Vertex v = y; v != x; v = parent[v]) tail.push_back(v);
        std::reverse(tail.begin(), tail.end());
        seq.insert(seq.end(), tail.begin(), tail.end());
    }

    // Surgery: while an undirected edge is traversed three or more times,
    // two of the traversals share a direction; reversing the enclosed
    // segment removes exactly two traversals of that edge and touches no
    // other edge's multiplicity.
    auto undirected = [](Vertex a, Vertex b) {
        return std::pair<Vertex, Vertex>(std::min(a, b), std::max(a, b));
    };
    for (;;) {
        std::map<std::pair<Vertex, Vertex>, std::vector<std::size_t>> slots;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i)
            slots[undirected(seq[i], seq[i + 1])].push_back(i);
        if (excess_trace) {
            std::int64_t excess = 0;
            for (const auto& [edge, occ] : slots)
                excess += std::max<std::int64_t>(0, static_cast<std::int64_t>(occ.size()) - 2);
            excess_trace->push_back(excess);
        }
        bool changed = false;
        for (auto& [edge, occ] : slots) {
            if (occ.size() < 3) continue;
            // find two same-direction traversals s < t
            std::size_t s = static_cast<std::size_t>(-1), t = s;
            for (std::size_t a = 0; a + 1 < occ.size() && t == static_cast<std::size_t>(-1); ++a)
                for (std::size_t b = a + 1; b < occ.size(); ++b)
                    if (seq[occ[a]] == seq[occ[b]]) {
                        s = occ[a];
                        t = occ[b];
                        break;
                    }
            if (t == static_cast<std::size_t>(-1))
                throw std::logic_error("surgery: no same-direction pair among 3+ traversals");
            // replace u_{s+1} .. u_t by the reversal u_{t-1} .. u_{s+1},
            // dropping u_{s+1} and u_t
            std::vector<Vertex> next;
            next.reserve(seq.size() - 2);
            next.insert(next.end(), seq.begin(), seq.begin() + s + 1);
            for (std::size_t i = t - 1; i > s + 1; --i) next.push_back(seq[i]);
            next.insert(next.end(), seq.begin() + t + 1, seq.end());
            seq.swap(next);
            changed = true;
            break;
        }
        if (!changed) break;
    }
    return path;
}

DistanceBounds lamp_distance_bounds(const WeightedGraph& g, const WreathState& s0,
                                    const WreathState& s1) {
    DistanceBounds b;
    b.lamp_toggles = lamp_difference(s0, s1);
    b.lower = b.lamp_toggles;
    if (s0 == s1) return b;

    // Required vertices: both positions and every differing lamp.
    std::vector<Vertex> required = {s0.position, s1.position};
    {
        std::size_t i = 0, j = 0;
        const auto& a = s0.lamps;
        const auto& c = s1.lamps;
        while (i < a.size() || j < c.size()) {
            if (j >= c.size() || (i < a.size() && a[i] < c[j])) required.push_back(a[i++]);
            else if (i >= a.size() || c[j] < a[i]) required.push_back(c[j++]);
            else { ++i; ++j; }
        }
    }
    std::sort(required.begin(), required.end());
    required.erase(std::unique(required.begin(), required.end()), required.end());

    // Steiner-connect greedily: grow from the start position, repeatedly
    // attaching the nearest still-missing required vertex by a shortest path.
    std::vector<Vertex> chosen = {s0.position};
    std::vector<std::uint8_t> in_chosen(g.num_vertices(), 0);
    in_chosen[s0.position] = 1;
    std::vector<Vertex> missing;
    for (Vertex v : required)
        if (v != s0.position) missing.push_back(v);

    std::vector<std::int32_t> dist(g.num_vertices());
    std::vector<Vertex> parent(g.num_vertices());
    while (!missing.empty()) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<Vertex> q;
        for (Vertex v : chosen) {
            dist[v] = 0;
            parent[v] = v;
            q.push(v);
        }
        Vertex hit = -1;
        while (!q.empty() && hit < 0) {
            const Vertex v = q.front();
            q.pop();
            const Vertex* nb = g.neighbors(v);
            for (std::size_t s = 0; s < g.degree(v); ++s) {
                const Vertex z = nb[s];
                if (dist[z] >= 0) continue;
                dist[z] = dist[v] + 1;
                parent[z] = v;
                if (std::binary_search(missing.begin(), missing.end(), z)) {
                    hit = z;
                    break;
                }
                q.push(z);
            }
        }
        for (Vertex v = hit; !in_chosen[v]; v = parent[v]) {
            in_chosen[v] = 1;
            chosen.push_back(v);
        }
        missing.erase(std::remove_if(missing.begin(), missing.end(),
                                     [&](Vertex v) { return in_chosen[v]; }),
                      missing.end());
    }

    std::sort(chosen.begin(), chosen.end());
    CoverPath cover = cover_path_tree(g, chosen, s0.position);
    std::int64_t walk_len = cover.length();
    if (s1.position != s0.position) {
        // finish at the target position along a shortest path in the
        // (connected) chosen set
        std::unordered_map<Vertex, Vertex> par;
        std::queue<Vertex> q;
        q.push(s0.position);
        par[s0.position] = s0.position;
        while (!q.empty() && !par.count(s1.position)) {
            const Vertex v = q.front();
            q.pop();
            const Vertex* nb = g.neighbors(v);
            for (std::size_t s = 0; s < g.degree(v); ++s) {
                const Vertex z = nb[s];
                if (std::binary_search(chosen.begin(), chosen.end(), z) && !par.count(z)) {
                    par[z] = v;
                    q.push(z);
                }
            }
        }
        for (Vertex v = s1.position; v != s0.position; v = par[v]) ++walk_len;
    }
    b.cover_walk_length = walk_len;
    b.upper = walk_len + b.lamp_toggles;
    return b;
}

namespace {

void check_wreath_size(const WeightedGraph& g, int max_base_vertices) {
    if (g.num_vertices() > max_base_vertices)
        throw std::invalid_argument("wreath: base graph has " +
                                    std::to_string(g.num_vertices()) +
                                    " vertices, exceeding the exact-oracle limit of " +
                                    std::to_string(max_base_vertices));
}

std::uint32_t lamp_mask(const WreathState& s) {
    std::uint32_t mask = 0;
    for (Vertex v : s.lamps) mask |= (1u << v);
    return mask;
}

} // namespace

std::size_t wreath_state_index(const WeightedGraph& g, const WreathState& s) {
    return static_cast<std::size_t>(lamp_mask(s)) * g.num_vertices() +
           static_cast<std::size_t>(s.position);
}

std::vector<std::int32_t> wreath_distance_table(const WeightedGraph& g, const WreathState& s0,
                                                int max_base_vertices) {
    check_wreath_size(g, max_base_vertices);
    const std::size_t n = g.num_vertices();
    const std::size_t states = (std::size_t{1} << n) * n;
    std::vector<std::int32_t> dist(states, -1);
    std::vector<std::uint32_t> cur, nxt;

    auto index = [&](std::uint32_t mask, Vertex pos) {
        return static_cast<std::uint32_t>(mask * n + static_cast<std::uint32_t>(pos));
    };
    const std::uint32_t start = static_cast<std::uint32_t>(wreath_state_index(g, s0));
    dist[start] = 0;
    cur.push_back(start);
    std::int32_t level = 0;
    while (!cur.empty()) {
        ++level;
        nxt.clear();
        for (std::uint32_t id : cur) {
            const Vertex pos = static_cast<Vertex>(id % n);
            const std::uint32_t mask = id / static_cast<std::uint32_t>(n);
            // (a) walk edges
            const Vertex* nb = g.neighbors(pos);
            for (std::size_t s = 0; s < g.degree(pos); ++s) {
                const std::uint32_t to = index(mask, nb[s]);
                if (dist[to] < 0) {
                    dist[to] = level;
                    nxt.push_back(to);
                }
            }
            // (b) lamp flip at the position
            const std::uint32_t to = index(mask ^ (1u << pos), pos);
            if (dist[to] < 0) {
                dist[to] = level;
                nxt.push_back(to);
            }
        }
        cur.swap(nxt);
    }
    return dist;
}

std::int64_t wreath_distance_exact(const WeightedGraph& g, const WreathState& s0,
                                   const WreathState& s1, int max_base_vertices) {
    const auto table = wreath_distance_table(g, s0, max_base_vertices);
    const std::int32_t d = table[wreath_state_index(g, s1)];
    if (d < 0) throw std::logic_error("wreath: state unreachable");
    return d;
}

std::vector<double> wreath_chain_distribution(const WeightedGraph& g, const WreathState& start,
                                              int n_steps, int max_base_vertices) {
    check_wreath_size(g, max_base_vertices);
    if (n_steps < 0) throw std::invalid_argument("wreath chain: negative step count");
    const std::size_t n = g.num_vertices();
    const std::size_t states = (std::size_t{1} << n) * n;
    std::vector<double> v(states, 0.0), w(states, 0.0);
    v[wreath_state_index(g, start)] = 1.0;

    for (int t = 0; t < n_steps; ++t) {
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t id = 0; id < states; ++id) {
            const double pv = v[id];
            if (pv == 0.0) continue;
            const Vertex pos = static_cast<Vertex>(id % n);
            const std::uint32_t mask = static_cast<std::uint32_t>(id / n);
            const Vertex* nb = g.neighbors(pos);
            const double* wt = g.weights(pos);
            for (std::size_t s = 0; s < g.degree(pos); ++s) {
                const Vertex y = nb[s];
                // each lamp outcome at {pos, y} carries 1/4 p(pos,y)
                const double out_p = pv * 0.25 * wt[s] / g.measure(pos);
                for (int flip_here = 0; flip_here < 2; ++flip_here)
                    for (int flip_there = 0; flip_there < 2; ++flip_there) {
                        std::uint32_t m2 = mask;
                        if (flip_here) m2 ^= (1u << pos);
                        if (flip_there) m2 ^= (1u << y);
                        w[m2 * n + static_cast<std::size_t>(y)] += out_p;
                    }
            }
        }
        v.swap(w);
    }
    return v;
}

} // namespace lamplab
