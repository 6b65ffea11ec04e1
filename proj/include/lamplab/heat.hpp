#ifndef LAMPLAB_HEAT_HPP
#define LAMPLAB_HEAT_HPP

#include <cstdint>
#include <vector>

#include "lamplab/graph.hpp"

namespace lamplab {

// Sparse n-step distribution p_n(x, .) at one snapshot time.
struct HeatVector {
    Vertex base = 0;
    std::int64_t n = 0;
    std::vector<std::pair<Vertex, double>> entries; // nonzero p_n(x,y)
    double mass = 0.0;                              // sum of entries
};

struct HeatKernelOptions {
    std::vector<std::int64_t> snapshot_times; // materialize p_n(x,.) at these n
    bool absorb_at_boundary = false;          // kill mass on boundary-flagged vertices
    std::size_t memory_budget_bytes = 6ULL << 30;
};

struct HeatKernelResult {
    Vertex base = 0;
    std::int64_t n_max = 0;
    // p_t(x,x) for t = 0 .. 2*n_max, the even entries fold two half-time
    // vectors through reversibility: p_{s+t}(x,x) = sum_y p_s(x,y) p_t(x,y) m(x)/m(y).
    std::vector<double> diag;
    std::vector<HeatVector> snapshots;
    double absorbed_mass = 0.0; // total mass killed (absorbing mode)

    double diag_even(std::int64_t t) const { return diag[2 * t]; }
};

// Exact sparse-vector iteration of v_{t+1}(y) = sum_z v_t(z) p(z,y) from
// v_0 = delta_x. Throws when the dense work arrays would exceed the budget.
HeatKernelResult heat_kernel_exact(const WeightedGraph& g, Vertex x, std::int64_t n_max,
                                   const HeatKernelOptions& opts = {});

// Survival probabilities P_x(max_{0<=j<=t} d(x,X_j) <= r) for t = 0..n_max,
// by absorbing iteration on B(x,r). Throws if the ball exceeds max_states.
std::vector<double> confinement_survival_series(const WeightedGraph& g, Vertex x, int r,
                                                std::int64_t n_max,
                                                std::size_t max_states = 100000);

struct ConfinementResult {
    double estimate = 0.0; // MC point estimate
    double wilson_lo = 0.0;
    double wilson_hi = 0.0; // 95% Wilson score interval
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    bool zero_successes = false;
    bool exact_available = false;
    double exact_value = 0.0; // absorbing-iteration value when the ball is small
};

// Empirical P_x(max_{0<=j<=n} d(x,X_j) <= r) plus the exact value when
// B(x,r) has at most `exact_state_limit` vertices.
ConfinementResult confinement_prob(const WeightedGraph& g, Vertex x, std::int64_t n, int r,
                                   std::int64_t ensemble_size, std::uint64_t seed,
                                   std::size_t exact_state_limit = 100000);

} // namespace lamplab

#endif
