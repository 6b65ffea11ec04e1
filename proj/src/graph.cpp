#include "lamplab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace lamplab {

namespace {

std::string edge_str(Vertex u, Vertex v) {
    return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

} // namespace

WeightedGraph WeightedGraph::build(Vertex n_vertices, const std::vector<Edge>& edges) {
    if (n_vertices <= 0) throw std::invalid_argument("graph: vertex count must be positive");

    WeightedGraph g;
    g.n_ = n_vertices;
    std::vector<std::size_t> deg(n_vertices, 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.u < 0 || e.u >= n_vertices || e.v < 0 || e.v >= n_vertices)
            throw std::invalid_argument("graph: edge " + std::to_string(i) + " " +
                                        edge_str(e.u, e.v) + " out of range");
        if (e.u == e.v)
            throw std::invalid_argument("graph: self-loop at edge " + std::to_string(i));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw std::invalid_argument("graph: non-positive weight at edge " +
                                        std::to_string(i) + " " + edge_str(e.u, e.v));
        ++deg[e.u];
        ++deg[e.v];
    }

    g.offsets_.assign(static_cast<std::size_t>(n_vertices) + 1, 0);
    for (Vertex x = 0; x < n_vertices; ++x) g.offsets_[x + 1] = g.offsets_[x] + deg[x];
    const std::size_t slots = g.offsets_.back();
    g.neighbors_.assign(slots, 0);
    g.weights_.assign(slots, 0.0);

    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges) {
        g.neighbors_[cursor[e.u]] = e.v;
        g.weights_[cursor[e.u]++] = e.weight;
        g.neighbors_[cursor[e.v]] = e.u;
        g.weights_[cursor[e.v]++] = e.weight;
    }

    // Canonical neighbor order: ascending id. Duplicate edges surface here.
    std::vector<std::pair<Vertex, double>> block;
    for (Vertex x = 0; x < n_vertices; ++x) {
        const std::size_t lo = g.offsets_[x], hi = g.offsets_[x + 1];
        block.assign(hi - lo, {});
        for (std::size_t k = lo; k < hi; ++k) block[k - lo] = {g.neighbors_[k], g.weights_[k]};
        std::sort(block.begin(), block.end());
        for (std::size_t k = 1; k < block.size(); ++k)
            if (block[k].first == block[k - 1].first)
                throw std::invalid_argument("graph: duplicate edge " +
                                            edge_str(x, block[k].first));
        for (std::size_t k = lo; k < hi; ++k) {
            g.neighbors_[k] = block[k - lo].first;
            g.weights_[k] = block[k - lo].second;
        }
    }

    // Measures as exact adjacency prefix sums.
    g.cum_.assign(slots, 0.0);
    g.m_.assign(n_vertices, 0.0);
    g.max_degree_ = 0;
    for (Vertex x = 0; x < n_vertices; ++x) {
        double acc = 0.0;
        for (std::size_t k = g.offsets_[x]; k < g.offsets_[x + 1]; ++k) {
            acc += g.weights_[k];
            g.cum_[k] = acc;
        }
        g.m_[x] = acc;
        if (acc <= 0.0)
            throw std::invalid_argument("graph: isolated vertex " + std::to_string(x));
        g.total_measure_ += acc;
        g.max_degree_ = std::max(g.max_degree_, deg[x]);
    }
    g.p0_ = 1.0;
    for (Vertex x = 0; x < n_vertices; ++x)
        for (std::size_t k = g.offsets_[x]; k < g.offsets_[x + 1]; ++k)
            g.p0_ = std::min(g.p0_, g.weights_[k] / g.m_[x]);

    // Connectivity.
    std::vector<std::uint8_t> seen(n_vertices, 0);
    std::vector<Vertex> stack = {0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex x = stack.back();
        stack.pop_back();
        for (std::size_t k = g.offsets_[x]; k < g.offsets_[x + 1]; ++k) {
            const Vertex y = g.neighbors_[k];
            if (!seen[y]) {
                seen[y] = 1;
                ++reached;
                stack.push_back(y);
            }
        }
    }
    if (reached != static_cast<std::size_t>(n_vertices)) {
        Vertex other = -1;
        for (Vertex x = 0; x < n_vertices; ++x)
            if (!seen[x]) { other = x; break; }
        throw std::invalid_argument("graph: disconnected (vertex 0 and vertex " +
                                    std::to_string(other) + " lie in different components)");
    }
    return g;
}

double WeightedGraph::edge_weight(Vertex x, Vertex y) const {
    const Vertex* nb = neighbors(x);
    const std::size_t d = degree(x);
    const Vertex* it = std::lower_bound(nb, nb + d, y);
    if (it != nb + d && *it == y) return weights_[offsets_[x] + (it - nb)];
    return 0.0;
}

void WeightedGraph::set_boundary_flags(std::vector<std::uint8_t> flags) {
    if (!flags.empty() && flags.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("graph: boundary flag size mismatch");
    boundary_ = std::move(flags);
}

void WeightedGraph::set_coordinates(std::vector<std::pair<double, double>> coords) {
    if (!coords.empty() && coords.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("graph: coordinate size mismatch");
    coords_ = std::move(coords);
}

std::vector<Edge> WeightedGraph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(num_edges()));
    for (Vertex x = 0; x < n_; ++x)
        for (std::size_t k = offsets_[x]; k < offsets_[x + 1]; ++k)
            if (x < neighbors_[k]) out.push_back({x, neighbors_[k], weights_[k]});
    return out;
}

std::vector<std::int32_t> distances_from(const WeightedGraph& g, Vertex x) {
    if (x < 0 || x >= g.num_vertices()) throw std::invalid_argument("distances_from: bad vertex");
    std::vector<std::int32_t> dist(g.num_vertices(), -1);
    std::vector<Vertex> cur = {x}, nxt;
    dist[x] = 0;
    std::int32_t level = 0;
    while (!cur.empty()) {
        ++level;
        nxt.clear();
        for (Vertex v : cur) {
            const Vertex* nb = g.neighbors(v);
            const std::size_t d = g.degree(v);
            for (std::size_t k = 0; k < d; ++k) {
                const Vertex y = nb[k];
                if (dist[y] < 0) {
                    dist[y] = level;
                    nxt.push_back(y);
                }
            }
        }
        cur.swap(nxt);
    }
    return dist;
}

int graph_distance(const WeightedGraph& g, Vertex x, Vertex y) {
    if (y < 0 || y >= g.num_vertices()) throw std::invalid_argument("graph_distance: bad vertex");
    if (x == y) return 0;
    // plain BFS with early exit
    std::vector<std::int32_t> dist(g.num_vertices(), -1);
    std::vector<Vertex> cur = {x}, nxt;
    dist[x] = 0;
    std::int32_t level = 0;
    while (!cur.empty()) {
        ++level;
        nxt.clear();
        for (Vertex v : cur) {
            const Vertex* nb = g.neighbors(v);
            const std::size_t d = g.degree(v);
            for (std::size_t k = 0; k < d; ++k) {
                const Vertex z = nb[k];
                if (dist[z] < 0) {
                    if (z == y) return level;
                    dist[z] = level;
                    nxt.push_back(z);
                }
            }
        }
        cur.swap(nxt);
    }
    throw std::logic_error("graph_distance: unreachable vertex in connected graph");
}

std::vector<std::int32_t> distance_to_boundary(const WeightedGraph& g) {
    std::vector<std::int32_t> dist(g.num_vertices(), std::numeric_limits<std::int32_t>::max());
    if (!g.has_boundary_info()) return dist;
    std::vector<Vertex> cur, nxt;
    for (Vertex x = 0; x < g.num_vertices(); ++x)
        if (g.is_boundary(x)) {
            dist[x] = 0;
            cur.push_back(x);
        }
    std::int32_t level = 0;
    while (!cur.empty()) {
        ++level;
        nxt.clear();
        for (Vertex v : cur) {
            const Vertex* nb = g.neighbors(v);
            const std::size_t d = g.degree(v);
            for (std::size_t k = 0; k < d; ++k) {
                const Vertex y = nb[k];
                if (dist[y] > level) {
                    dist[y] = level;
                    nxt.push_back(y);
                }
            }
        }
        cur.swap(nxt);
    }
    return dist;
}

Vertex deepest_interior_vertex(const WeightedGraph& g) {
    if (!g.has_boundary_info()) return 0;
    const std::vector<std::int32_t> dist = distance_to_boundary(g);
    Vertex best = 0;
    for (Vertex v = 1; v < g.num_vertices(); ++v)
        if (dist[v] > dist[best]) best = v;
    return best;
}

Ball ball_volume(const WeightedGraph& g, Vertex x, int r) {
    if (x < 0 || x >= g.num_vertices()) throw std::invalid_argument("ball_volume: bad vertex");
    if (r < 0) throw std::invalid_argument("ball_volume: negative radius");
    Ball ball;
    std::vector<std::int32_t> dist(g.num_vertices(), -1);
    std::vector<Vertex> cur = {x}, nxt;
    dist[x] = 0;
    ball.members.push_back(x);
    ball.measure = g.measure(x);
    for (int level = 1; level <= r && !cur.empty(); ++level) {
        nxt.clear();
        for (Vertex v : cur) {
            const Vertex* nb = g.neighbors(v);
            const std::size_t d = g.degree(v);
            for (std::size_t k = 0; k < d; ++k) {
                const Vertex y = nb[k];
                if (dist[y] < 0) {
                    dist[y] = level;
                    nxt.push_back(y);
                    ball.members.push_back(y);
                    ball.measure += g.measure(y);
                }
            }
        }
        cur.swap(nxt);
    }
    return ball;
}

GraphStats graph_stats(const WeightedGraph& g, const std::vector<Vertex>& sample_centers,
                       int r_max, int r_min) {
    if (sample_centers.empty()) throw std::invalid_argument("graph_stats: no sample centers");
    if (r_max < 2) throw std::invalid_argument("graph_stats: r_max must be >= 2");
    if (r_min < 1) throw std::invalid_argument("graph_stats: r_min must be >= 1");

    GraphStats s;
    s.max_degree = g.max_degree();
    s.p0 = g.p0();

    std::vector<std::size_t> center_breaks = {0};
    for (Vertex c : sample_centers) {
        const std::vector<std::int32_t> dist = distances_from(g, c);
        std::int32_t ecc = 0;
        for (std::int32_t d : dist) ecc = std::max(ecc, d);

        // one BFS worth of volumes: V(c, r) for all r
        std::vector<double> vol(static_cast<std::size_t>(ecc) + 1, 0.0);
        for (Vertex y = 0; y < g.num_vertices(); ++y) vol[dist[y]] += g.measure(y);
        for (std::size_t r = 1; r < vol.size(); ++r) vol[r] += vol[r - 1];

        for (int r = r_min; r <= r_max; r *= 2) {
            if (r > ecc) {
                s.r_clipped = true;
                break;
            }
            s.volume_samples.emplace_back(static_cast<double>(r), vol[r]);
        }
        center_breaks.push_back(s.volume_samples.size());
    }
    if (s.volume_samples.size() < 2)
        throw std::invalid_argument("graph_stats: not enough radii below eccentricity");

    // shared slope across centers: each center carries its own constant, so
    // the pooled fit works on per-center deviations (plain OLS when a single
    // center is given)
    std::vector<double> dx, dy, mean_x, mean_y;
    for (std::size_t c = 0; c + 1 < center_breaks.size(); ++c) {
        const std::size_t lo = center_breaks[c], hi = center_breaks[c + 1];
        if (hi - lo < 2) continue;
        double mx = 0.0, my = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            mx += std::log(s.volume_samples[i].first);
            my += std::log(s.volume_samples[i].second);
        }
        mx /= static_cast<double>(hi - lo);
        my /= static_cast<double>(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            dx.push_back(std::log(s.volume_samples[i].first) - mx);
            dy.push_back(std::log(s.volume_samples[i].second) - my);
        }
        mean_x.push_back(mx);
        mean_y.push_back(my);
    }
    if (dx.size() < 2)
        throw std::invalid_argument("graph_stats: not enough radii below eccentricity");
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        sxx += dx[i] * dx[i];
        sxy += dx[i] * dy[i];
        syy += dy[i] * dy[i];
    }
    s.df_fit.slope = sxy / sxx;
    s.df_fit.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    s.df_fit.n_points = s.volume_samples.size();
    s.df_fit.x_lo = r_min;
    s.df_fit.x_hi = r_max;
    for (std::size_t c = 0; c < mean_x.size(); ++c)
        s.df_fit.intercept += (mean_y[c] - s.df_fit.slope * mean_x[c]);
    s.df_fit.intercept /= static_cast<double>(mean_x.size());

    s.c1 = std::numeric_limits<double>::infinity();
    s.c2 = 0.0;
    for (auto& [r, v] : s.volume_samples) {
        const double ratio = v / std::pow(r, s.df_fit.slope);
        s.c1 = std::min(s.c1, ratio);
        s.c2 = std::max(s.c2, ratio);
    }
    return s;
}

namespace {

// Shortest text that round-trips through from_chars.
std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view sv, int line_no) {
    double out = 0.0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
        throw std::invalid_argument("edge file: bad number '" + std::string(sv) +
                                    "' at line " + std::to_string(line_no));
    return out;
}

long parse_long(std::string_view sv, int line_no) {
    long out = 0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
        throw std::invalid_argument("edge file: bad integer '" + std::string(sv) +
                                    "' at line " + std::to_string(line_no));
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

} // namespace

void save_graph(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_graph: cannot open " + path);
    out << "n " << g.num_vertices() << "\n";
    for (const Edge& e : g.edge_list())
        out << e.u << " " << e.v << " " << format_double(e.weight) << "\n";
    if (!out) throw std::runtime_error("save_graph: write failed for " + path);
}

WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_graph: cannot open " + path);
    std::string line;
    int line_no = 0;
    long n = -1;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (n < 0) {
            if (tok.size() != 2 || tok[0] != "n")
                throw std::invalid_argument("edge file: expected header 'n <count>' at line " +
                                            std::to_string(line_no));
            n = parse_long(tok[1], line_no);
            if (n <= 0 || n > 2000000000L)
                throw std::invalid_argument("edge file: bad vertex count at line " +
                                            std::to_string(line_no));
            continue;
        }
        if (tok.size() != 3)
            throw std::invalid_argument("edge file: expected 'u v mu' at line " +
                                        std::to_string(line_no));
        Edge e;
        e.u = static_cast<Vertex>(parse_long(tok[0], line_no));
        e.v = static_cast<Vertex>(parse_long(tok[1], line_no));
        e.weight = parse_double(tok[2], line_no);
        edges.push_back(e);
    }
    if (n < 0) throw std::invalid_argument("edge file: missing header line 'n <count>'");
    return WeightedGraph::build(static_cast<Vertex>(n), edges);
}

bool induced_connected(const WeightedGraph& g, const std::vector<Vertex>& sorted_vertices) {
    if (sorted_vertices.empty()) return false;
    if (sorted_vertices.size() == 1) return true;
    auto in_set = [&](Vertex v) {
        return std::binary_search(sorted_vertices.begin(), sorted_vertices.end(), v);
    };
    std::unordered_map<Vertex, bool> seen;
    seen.reserve(sorted_vertices.size());
    std::vector<Vertex> stack = {sorted_vertices[0]};
    seen[sorted_vertices[0]] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex x = stack.back();
        stack.pop_back();
        const Vertex* nb = g.neighbors(x);
        for (std::size_t k = 0; k < g.degree(x); ++k) {
            const Vertex y = nb[k];
            if (in_set(y) && !seen[y]) {
                seen[y] = true;
                ++reached;
                stack.push_back(y);
            }
        }
    }
    return reached == sorted_vertices.size();
}

} // namespace lamplab
