#ifndef LAMPLAB_GENERATORS_HPP
#define LAMPLAB_GENERATORS_HPP

#include <cstdint>
#include <string>

#include "lamplab/graph.hpp"
#include "lamplab/rng.hpp"

namespace lamplab {

enum class GraphFamily { lattice, gasket, carpet, file };

// Which concrete graph to build. `level` doubles as the box radius for
// lattices; `dim` is lattice-only.
struct GeneratorSpec {
    GraphFamily family = GraphFamily::lattice;
    int level = 1;
    int dim = 1;
    double weight = 1.0;
    std::string path; // family == file

    WeightedGraph build() const;
    // Default walk-dimension used by boundary guards for this family.
    double guard_walk_dimension() const;
};

GraphFamily parse_family(const std::string& name);
std::string family_name(GraphFamily f);

// Box {-radius..radius}^d, nearest-neighbor edges of the given weight.
// Vertices on the box surface are flagged as boundary.
WeightedGraph make_lattice(int d, int radius, double weight = 1.0);

// Level-L pre-Sierpinski gasket: corners of the triangle subdivision,
// unit weights, 3(3^L+1)/2 vertices; the three extreme corners are the
// boundary flags. Coordinates are in skewed (triangular) integer axes.
WeightedGraph make_gasket(int level);

// Level-L pre-Sierpinski carpet on cell adjacency: the 8^L retained cells
// of the 3^L x 3^L grid, edges between side-sharing cells, unit weights.
// Outer-ring cells are the boundary flags.
WeightedGraph make_carpet(int level);

// Random connected graph on n vertices: a uniform random spanning tree plus
// each remaining pair independently with probability extra_edge_prob.
WeightedGraph random_connected_graph(int n, double extra_edge_prob, SplitRng& rng,
                                     double weight = 1.0);

} // namespace lamplab

#endif
