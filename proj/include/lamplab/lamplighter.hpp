#ifndef LAMPLAB_LAMPLIGHTER_HPP
#define LAMPLAB_LAMPLIGHTER_HPP

#include <cstdint>
#include <vector>

#include "lamplab/graph.hpp"
#include "lamplab/rng.hpp"

namespace lamplab {

// Vertex of Z2 wr G: a finite set of on-lamps plus the lighter position.
struct WreathState {
    std::vector<Vertex> lamps; // sorted, unique
    Vertex position = 0;

    bool operator==(const WreathState& o) const {
        return position == o.position && lamps == o.lamps;
    }
    bool lamp_on(Vertex v) const;
    void flip(Vertex v); // toggle, keeping the set sorted
};

// Number of on-lamps.
inline std::int64_t lamp_sum(const WreathState& s) {
    return static_cast<std::int64_t>(s.lamps.size());
}

// Lamps present in exactly one of the two states.
std::int64_t lamp_difference(const WreathState& a, const WreathState& b);

// One switch-walk-switch move: flip the lamp at the current position with
// probability 1/2, move to a neighbor via the base-walk kernel, flip the
// lamp at the new position with probability 1/2.
WreathState lamplighter_step(const WeightedGraph& g, const WreathState& state, SplitRng& rng);

// Walk through a connected subgraph of g (given by its vertex set).
struct CoverPath {
    std::vector<Vertex> vertices; // w_0 .. w_k
    std::int64_t length() const { return static_cast<std::int64_t>(vertices.size()) - 1; }
};

// Checks: consecutive vertices adjacent and inside the set, every vertex of
// the set visited, every undirected edge used at most twice, endpoints as
// given. Throws std::logic_error naming the violated condition.
void validate_cover_path(const WeightedGraph& g, const std::vector<Vertex>& subgraph_vertices,
                         const CoverPath& path, Vertex x, Vertex y);

// Closed exploration of a DFS spanning tree from x: each tree edge is
// crossed exactly twice, so the length is 2(#V - 1).
CoverPath cover_path_tree(const WeightedGraph& g, std::vector<Vertex> subgraph_vertices,
                          Vertex x);

// Covering path from x to y built by reversal surgery: start from a DFS
// exploration continued to y, then while some undirected edge is traversed
// three or more times, pick two same-direction traversals and reverse the
// segment between them, removing two traversals of that edge. Satisfies
// the visit-all / at-most-twice / endpoint conditions with length at most
// 2 * max_degree * #V. `excess_trace`, when given, records the total
// over-twice traversal excess before and after each surgery.
CoverPath cover_path_surgery(const WeightedGraph& g, std::vector<Vertex> subgraph_vertices,
                             Vertex x, Vertex y,
                             std::vector<std::int64_t>* excess_trace = nullptr);

// Certified bracket for the wreath distance between two states.
struct DistanceBounds {
    std::int64_t lower = 0; // lamps that must be toggled
    std::int64_t upper = 0; // covering-walk construction + toggles
    std::int64_t cover_walk_length = 0;
    std::int64_t lamp_toggles = 0;
};
DistanceBounds lamp_distance_bounds(const WeightedGraph& g, const WreathState& s0,
                                    const WreathState& s1);

// Exact BFS distance on Z2 wr G. Requires #V(G) <= max_base_vertices
// (state space 2^N * N). Edges: base-walk moves and single-lamp flips.
std::int64_t wreath_distance_exact(const WeightedGraph& g, const WreathState& s0,
                                   const WreathState& s1, int max_base_vertices = 16);

// Distances from s0 to every wreath state, indexed by (lamp mask << log2N) | position
// packing produced by wreath_state_index.
std::vector<std::int32_t> wreath_distance_table(const WeightedGraph& g, const WreathState& s0,
                                                int max_base_vertices = 16);
std::size_t wreath_state_index(const WeightedGraph& g, const WreathState& s);

// Exact n-step distribution of the switch-walk-switch chain from `start`
// over all 2^N * N wreath states (small G only). Probabilities are dyadic
// combinations of the base kernel, so doubles stay exact for unit weights.
std::vector<double> wreath_chain_distribution(const WeightedGraph& g, const WreathState& start,
                                              int n_steps, int max_base_vertices = 16);

} // namespace lamplab

#endif
