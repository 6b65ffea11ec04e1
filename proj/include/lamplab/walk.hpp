#ifndef LAMPLAB_WALK_HPP
#define LAMPLAB_WALK_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lamplab/graph.hpp"
#include "lamplab/rng.hpp"

namespace lamplab {

// Neighbor of x chosen with probability mu_xy/m(x); deterministic in (g,x,u).
// u must lie in [0,1).
Vertex walk_step(const WeightedGraph& g, Vertex x, double u);

struct CheckpointRow {
    std::int64_t n = 0;
    std::int64_t range = 0;        // R_n, counting X_0..X_n
    double local_time_max = 0.0;   // L*_n = max_x (visits to x before n)/m(x)
    std::int32_t max_displacement = 0;
    Vertex final_vertex = 0;
    std::int64_t lamp_sum = 0;     // on-lamps, when lamps are simulated
};

struct Trajectory {
    Vertex start = 0;
    std::int64_t steps = 0;
    std::uint64_t seed = 0;
    std::int64_t range = 0;
    double local_time_max = 0.0;
    std::int32_t max_displacement = 0;
    Vertex final_vertex = 0;
    std::vector<Vertex> visited;                     // distinct, in first-visit order
    std::unordered_map<Vertex, std::int64_t> visit_counts; // visits before time n
    std::vector<CheckpointRow> checkpoints;

    double local_time(const WeightedGraph& g, Vertex x) const {
        auto it = visit_counts.find(x);
        return it == visit_counts.end() ? 0.0 : static_cast<double>(it->second) / g.measure(x);
    }
};

// Boundary guard: walks of n steps are allowed when 3 n^{1/d_w} does not
// exceed the hop distance from the start to the flagged boundary. Graphs
// without boundary info are unguarded (max_steps = INT64_MAX).
struct GuardCheck {
    std::int64_t max_steps = 0;
    std::int32_t boundary_distance = 0;
    bool guarded = false;
};
GuardCheck boundary_guard(const WeightedGraph& g, Vertex start, double walk_dim);
// Throws std::invalid_argument naming the required graph size unless
// n is admissible or `override_guard` is set.
void require_guard(const WeightedGraph& g, Vertex start, std::int64_t n, double walk_dim,
                   bool override_guard);

struct SimulateOptions {
    std::vector<std::int64_t> checkpoints; // ascending; empty = final state only
    double guard_walk_dim = 2.0;
    bool override_guard = false;
    bool with_lamps = false;         // run the switch-walk-switch lamp layer too
    bool keep_visit_counts = true;   // false drops the per-vertex map (ensembles)
};

// Random walk from x0 for n steps, fully reproducible from (g, x0, n, seed).
Trajectory simulate(const WeightedGraph& g, Vertex x0, std::int64_t n, std::uint64_t seed,
                    const SimulateOptions& opts = {});

// Dyadic schedule {16, 32, ...} up to n, always ending at n.
std::vector<std::int64_t> dyadic_checkpoints(std::int64_t n, std::int64_t first = 16);

} // namespace lamplab

#endif
