#ifndef LAMPLAB_GRAPH_HPP
#define LAMPLAB_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lamplab/fit.hpp"

namespace lamplab {

using Vertex = std::int32_t;

struct Edge {
    Vertex u;
    Vertex v;
    double weight;
};

// Immutable symmetric weighted graph in CSR form. The vertex measure
// m(x) = sum of incident weights is cached as the exact prefix-sum total
// of the adjacency block, so CDF sampling over neighbors never falls
// off the end for u in [0,1).
class WeightedGraph {
public:
    // `edges` lists each undirected edge exactly once, weights > 0.
    // Throws std::invalid_argument on duplicate edges, self-loops,
    // non-positive weights, out-of-range ids or a disconnected graph.
    static WeightedGraph build(Vertex n_vertices, const std::vector<Edge>& edges);

    Vertex num_vertices() const { return n_; }
    std::int64_t num_edges() const { return static_cast<std::int64_t>(weights_.size()) / 2; }

    std::size_t degree(Vertex x) const { return offsets_[x + 1] - offsets_[x]; }
    double measure(Vertex x) const { return m_[x]; }
    double total_measure() const { return total_measure_; }

    // Neighbor block of x (ids sorted ascending).
    const Vertex* neighbors(Vertex x) const { return &neighbors_[offsets_[x]]; }
    const double* weights(Vertex x) const { return &weights_[offsets_[x]]; }
    // Cumulative weights within the block; last entry equals measure(x).
    const double* cum_weights(Vertex x) const { return &cum_[offsets_[x]]; }

    // Weight of edge (x,y), 0 if absent.
    double edge_weight(Vertex x, Vertex y) const;
    bool adjacent(Vertex x, Vertex y) const { return edge_weight(x, y) > 0.0; }

    // One-step transition probability mu_xy / m(x).
    double transition(Vertex x, Vertex y) const { return edge_weight(x, y) / m_[x]; }

    // Vertices flagged by generators as boundary of the finite truncation.
    const std::vector<std::uint8_t>& boundary_flags() const { return boundary_; }
    bool is_boundary(Vertex x) const { return !boundary_.empty() && boundary_[x]; }
    bool has_boundary_info() const { return !boundary_.empty(); }
    void set_boundary_flags(std::vector<std::uint8_t> flags);

    // Optional generator-provided coordinates (debugging sidecar).
    const std::vector<std::pair<double, double>>& coordinates() const { return coords_; }
    void set_coordinates(std::vector<std::pair<double, double>> coords);

    std::size_t max_degree() const { return max_degree_; }
    // min over directed pairs of mu_xy / m(x).
    double p0() const { return p0_; }

    // Recover the unique undirected edge list (u < v), in canonical order.
    std::vector<Edge> edge_list() const;

private:
    WeightedGraph() = default;

    Vertex n_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> neighbors_;
    std::vector<double> weights_;
    std::vector<double> cum_;
    std::vector<double> m_;
    double total_measure_ = 0.0;
    std::size_t max_degree_ = 0;
    double p0_ = 0.0;
    std::vector<std::uint8_t> boundary_;
    std::vector<std::pair<double, double>> coords_;
};

// Exact hop distance via breadth-first search.
int graph_distance(const WeightedGraph& g, Vertex x, Vertex y);

// Distances from x to every vertex (-1 unreachable; construction forbids that).
std::vector<std::int32_t> distances_from(const WeightedGraph& g, Vertex x);

// Hop distance from every vertex to the nearest flagged boundary vertex.
// Empty flag set -> all distances INT32_MAX.
std::vector<std::int32_t> distance_to_boundary(const WeightedGraph& g);

// Vertex farthest from the flagged boundary (vertex 0 when unflagged);
// the canonical interior start for finite-truncation experiments.
Vertex deepest_interior_vertex(const WeightedGraph& g);

struct Ball {
    std::vector<Vertex> members; // BFS order from the center
    double measure = 0.0;        // V(x,r)
};

// B(x,r) = {y : d(x,y) <= r} and its measure V(x,r).
Ball ball_volume(const WeightedGraph& g, Vertex x, int r);

struct GraphStats {
    std::size_t max_degree = 0;
    double p0 = 0.0;
    // (r, V(x,r)) samples over all requested centers, dyadic r grid.
    std::vector<std::pair<double, double>> volume_samples;
    FitResult df_fit;       // least-squares d_f over the dyadic grid
    double c1 = 0.0;        // min V / r^{d_f} over samples
    double c2 = 0.0;        // max V / r^{d_f}
    bool r_clipped = false; // r_max exceeded an eccentricity and was clipped
};

// Volume-growth statistics: fits d_f on radii r = r_min, 2 r_min, ... <= r_max.
GraphStats graph_stats(const WeightedGraph& g, const std::vector<Vertex>& sample_centers,
                       int r_max, int r_min = 2);

// Edge-list text format: '#' comment lines, then "n <count>", then one
// "u v mu" line per undirected edge. Round-trips bit-exactly.
void save_graph(const WeightedGraph& g, const std::string& path);
WeightedGraph load_graph(const std::string& path);

// True if the subgraph of g induced by the sorted vertex set is connected.
bool induced_connected(const WeightedGraph& g, const std::vector<Vertex>& sorted_vertices);

} // namespace lamplab

#endif
