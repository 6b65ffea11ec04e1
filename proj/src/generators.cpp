#include "lamplab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace lamplab {

GraphFamily parse_family(const std::string& name) {
    if (name == "lattice") return GraphFamily::lattice;
    if (name == "gasket") return GraphFamily::gasket;
    if (name == "carpet") return GraphFamily::carpet;
    if (name == "file") return GraphFamily::file;
    throw std::invalid_argument("unknown graph family '" + name + "'");
}

std::string family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::lattice: return "lattice";
        case GraphFamily::gasket: return "gasket";
        case GraphFamily::carpet: return "carpet";
        case GraphFamily::file: return "file";
    }
    return "?";
}

WeightedGraph GeneratorSpec::build() const {
    switch (family) {
        case GraphFamily::lattice: return make_lattice(dim, level, weight);
        case GraphFamily::gasket: return make_gasket(level);
        case GraphFamily::carpet: return make_carpet(level);
        case GraphFamily::file: return load_graph(path);
    }
    throw std::invalid_argument("bad generator spec");
}

double GeneratorSpec::guard_walk_dimension() const {
    switch (family) {
        case GraphFamily::lattice: return 2.0;
        case GraphFamily::gasket: return std::log(5.0) / std::log(2.0); // ~2.3219
        case GraphFamily::carpet: return 2.58;                           // known numeric value
        case GraphFamily::file: return 2.0;
    }
    return 2.0;
}

WeightedGraph make_lattice(int d, int radius, double weight) {
    if (d < 1 || d > 4) throw std::invalid_argument("make_lattice: dim must be in 1..4");
    if (radius < 1) throw std::invalid_argument("make_lattice: radius must be >= 1");
    if (!(weight > 0.0)) throw std::invalid_argument("make_lattice: weight must be positive");

    const std::int64_t side = 2 * static_cast<std::int64_t>(radius) + 1;
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) {
        count *= side;
        if (count > 100000000LL)
            throw std::invalid_argument("make_lattice: vertex count exceeds 1e8");
    }

    // id = sum over axes of (c_i + radius) * side^{d-1-i}  (row-major)
    std::vector<std::int64_t> stride(d);
    stride[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(count) * d);
    std::vector<std::uint8_t> boundary(count, 0);
    std::vector<int> c(d, 0); // coordinates shifted to 0..side-1
    for (std::int64_t id = 0; id < count; ++id) {
        bool on_surface = false;
        for (int i = 0; i < d; ++i)
            if (c[i] == 0 || c[i] == side - 1) on_surface = true;
        if (on_surface) boundary[id] = 1;
        for (int i = 0; i < d; ++i)
            if (c[i] + 1 < side)
                edges.push_back({static_cast<Vertex>(id), static_cast<Vertex>(id + stride[i]),
                                 weight});
        // advance mixed-radix counter
        for (int i = d - 1; i >= 0; --i) {
            if (++c[i] < side) break;
            c[i] = 0;
        }
    }
    WeightedGraph g = WeightedGraph::build(static_cast<Vertex>(count), edges);
    g.set_boundary_flags(std::move(boundary));
    if (count <= 4000000 && d <= 2) {
        std::vector<std::pair<double, double>> coords(count);
        for (std::int64_t id = 0; id < count; ++id) {
            const std::int64_t x = id / stride[0] - radius;
            const std::int64_t y = (d == 2) ? id % side - radius : 0;
            coords[id] = {static_cast<double>(x), static_cast<double>(y)};
        }
        g.set_coordinates(std::move(coords));
    }
    return g;
}

namespace {

using Point = std::pair<std::int32_t, std::int32_t>;

struct PointHash {
    std::size_t operator()(const Point& p) const {
        return static_cast<std::size_t>(mix64((static_cast<std::uint64_t>(
                                                   static_cast<std::uint32_t>(p.first))
                                               << 32) ^
                                              static_cast<std::uint32_t>(p.second)));
    }
};

} // namespace

WeightedGraph make_gasket(int level) {
    if (level < 0 || level > 12) throw std::invalid_argument("make_gasket: level must be in 0..12");

    const std::int32_t side = std::int32_t(1) << level;
    std::unordered_map<Point, Vertex, PointHash> id_of;
    std::vector<Point> points;
    auto vertex_id = [&](Point p) {
        auto it = id_of.find(p);
        if (it != id_of.end()) return it->second;
        const Vertex v = static_cast<Vertex>(points.size());
        id_of.emplace(p, v);
        points.push_back(p);
        return v;
    };

    std::vector<Edge> edges;
    // Iterative subdivision over (corner a, corner b, corner c, size) frames.
    struct Frame { Point a, b, c; std::int32_t s; };
    std::vector<Frame> stack = {{ {0, 0}, {side, 0}, {0, side}, side }};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.s == 1) {
            const Vertex a = vertex_id(f.a), b = vertex_id(f.b), c = vertex_id(f.c);
            edges.push_back({a, b, 1.0});
            edges.push_back({b, c, 1.0});
            edges.push_back({c, a, 1.0});
            continue;
        }
        const std::int32_t h = f.s / 2;
        const Point ab{(f.a.first + f.b.first) / 2, (f.a.second + f.b.second) / 2};
        const Point bc{(f.b.first + f.c.first) / 2, (f.b.second + f.c.second) / 2};
        const Point ca{(f.c.first + f.a.first) / 2, (f.c.second + f.a.second) / 2};
        stack.push_back({f.a, ab, ca, h});
        stack.push_back({ab, f.b, bc, h});
        stack.push_back({ca, bc, f.c, h});
    }
    // Smallest-triangle sides never coincide across triangles, so the edge
    // list is already duplicate-free.
    const Vertex n = static_cast<Vertex>(points.size());
    WeightedGraph g = WeightedGraph::build(n, edges);

    std::vector<std::uint8_t> boundary(n, 0);
    boundary[id_of.at({0, 0})] = 1;
    boundary[id_of.at({side, 0})] = 1;
    boundary[id_of.at({0, side})] = 1;
    g.set_boundary_flags(std::move(boundary));

    std::vector<std::pair<double, double>> coords(n);
    for (Vertex v = 0; v < n; ++v)
        coords[v] = {static_cast<double>(points[v].first), static_cast<double>(points[v].second)};
    g.set_coordinates(std::move(coords));
    return g;
}

WeightedGraph make_carpet(int level) {
    if (level < 0 || level > 7) throw std::invalid_argument("make_carpet: level must be in 0..7");

    const std::int32_t side = [&] {
        std::int32_t s = 1;
        for (int i = 0; i < level; ++i) s *= 3;
        return s;
    }();

    auto retained = [&](std::int32_t i, std::int32_t j) {
        for (std::int32_t s = side / 3; s >= 1; s /= 3)
            if ((i / s) % 3 == 1 && (j / s) % 3 == 1) return false;
        return true;
    };

    std::vector<Vertex> id(static_cast<std::size_t>(side) * side, -1);
    Vertex n = 0;
    for (std::int32_t i = 0; i < side; ++i)
        for (std::int32_t j = 0; j < side; ++j)
            if (retained(i, j)) id[static_cast<std::size_t>(i) * side + j] = n++;

    std::vector<Edge> edges;
    std::vector<std::uint8_t> boundary(n, 0);
    std::vector<std::pair<double, double>> coords(n);
    for (std::int32_t i = 0; i < side; ++i)
        for (std::int32_t j = 0; j < side; ++j) {
            const Vertex v = id[static_cast<std::size_t>(i) * side + j];
            if (v < 0) continue;
            coords[v] = {static_cast<double>(i), static_cast<double>(j)};
            if (i == 0 || j == 0 || i == side - 1 || j == side - 1) boundary[v] = 1;
            if (i + 1 < side) {
                const Vertex w = id[static_cast<std::size_t>(i + 1) * side + j];
                if (w >= 0) edges.push_back({v, w, 1.0});
            }
            if (j + 1 < side) {
                const Vertex w = id[static_cast<std::size_t>(i) * side + j + 1];
                if (w >= 0) edges.push_back({v, w, 1.0});
            }
        }

    if (n == 1)
        throw std::invalid_argument(
            "make_carpet: level 0 is a single isolated cell, not a valid weighted graph");
    WeightedGraph g = WeightedGraph::build(n, edges);
    g.set_boundary_flags(std::move(boundary));
    g.set_coordinates(std::move(coords));
    return g;
}

WeightedGraph random_connected_graph(int n, double extra_edge_prob, SplitRng& rng,
                                     double weight) {
    if (n < 2) throw std::invalid_argument("random_connected_graph: need n >= 2");
    std::vector<Edge> edges;
    std::map<std::pair<Vertex, Vertex>, bool> present;
    // random attachment tree
    for (Vertex v = 1; v < n; ++v) {
        const Vertex u = static_cast<Vertex>(rng.next_below(v));
        edges.push_back({u, v, weight});
        present[{u, v}] = true;
    }
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) {
            if (present.count({u, v})) continue;
            if (rng.next_unit() < extra_edge_prob) edges.push_back({u, v, weight});
        }
    return WeightedGraph::build(n, edges);
}

} // namespace lamplab
