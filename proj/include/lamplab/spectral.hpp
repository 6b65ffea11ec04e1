#ifndef LAMPLAB_SPECTRAL_HPP
#define LAMPLAB_SPECTRAL_HPP

#include <cstdint>
#include <vector>

#include "lamplab/fit.hpp"
#include "lamplab/graph.hpp"

namespace lamplab {

// The quadratic form sums (f(x)-f(y))^2 mu_xy either once per undirected
// edge (single_count, the resistor convention: a unit edge is a unit
// resistor) or over ordered pairs (double_sum, twice that).
enum class EnergyConvention { single_count, double_sum };

double dirichlet_energy(const WeightedGraph& g, const std::vector<double>& f,
                        EnergyConvention conv = EnergyConvention::single_count);

struct ResistanceProblem {
    std::vector<Vertex> source; // f = 1 here
    std::vector<Vertex> sink;   // f = 0 here
    std::vector<double> potential;
    double energy = 0.0;       // in the reported convention
    double resistance = 0.0;   // 1 / energy
    EnergyConvention convention = EnergyConvention::single_count;
    double residual = 0.0;     // relative CG residual at termination
    int iterations = 0;
};

// Solves the discrete Laplace problem with f|A = 1, f|B = 0 by Jacobi-
// preconditioned conjugate gradient on the interior (relative residual
// 1e-10, iteration cap 50 sqrt(N)). Throws std::runtime_error with the
// residual if the cap is hit.
ResistanceProblem effective_resistance(const WeightedGraph& g, const std::vector<Vertex>& A,
                                       const std::vector<Vertex>& B,
                                       EnergyConvention conv = EnergyConvention::single_count);

struct RhoPoint {
    int radius = 0;
    double rho = 0.0;
    double residual = 0.0;
    bool clipped = false; // ball swallowed the graph; no complement left
};

// rho(x,n) = R_eff({x}, B(x,n)^c) for each n, nondecreasing in n.
std::vector<RhoPoint> rho_growth(const WeightedGraph& g, Vertex x,
                                 const std::vector<int>& n_list,
                                 EnergyConvention conv = EnergyConvention::single_count);

// Spread of rho(x, n_max) - rho(x, n_min) over sample centers: the
// uniform-convergence (condition U) diagnostic. Reported, never asserted.
struct RhoSpread {
    double max_spread = 0.0;
    std::vector<double> final_rho; // rho(x, n_max) per center
};
RhoSpread rho_uniformity(const WeightedGraph& g, const std::vector<Vertex>& centers,
                         int n_min, int n_max);

enum class GreenMode { series, mc };

struct ReturnStats {
    double green = 0.0;            // G(x,x) truncated at the horizon
    double first_return = 0.0;     // F(x,x)
    bool divergent = false;        // recurrent signature: partial sums not Cauchy
    std::int64_t horizon = 0;
    double tail_estimate = 0.0;    // bound on the neglected series tail
    std::int64_t mc_trials = 0;
};

// Green function / first-return statistics at x. With boundary-flagged
// graphs the walk is absorbed at the boundary, emulating the transient
// infinite graph; series mode sums p_n(x,x), mc mode runs first-return
// trials. F and G are linked by G - 1 = F G.
ReturnStats green_and_return(const WeightedGraph& g, Vertex x, std::int64_t horizon,
                             GreenMode mode, std::int64_t mc_trials = 200000,
                             std::uint64_t seed = 1);

// Least-squares slope of -log p_{2n}(x,x) against log n over the dyadic
// window [n_lo, n_hi]; the slope estimates d_s/2. `diag` holds p_t(x,x)
// for t = 0..2*n_hi at least. Throws if the window has under 4 points.
FitResult spectral_dim_fit(const std::vector<double>& diag, std::int64_t n_lo,
                           std::int64_t n_hi);

} // namespace lamplab

#endif
