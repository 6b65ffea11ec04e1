#ifndef LAMPLAB_COLLAPSED_HPP
#define LAMPLAB_COLLAPSED_HPP

#include <cstdint>
#include <vector>

#include "lamplab/graph.hpp"

namespace lamplab {

// Collapsed return probability on the line: conditioned on the base path,
// the lamp configuration is uniform over the visited set, so
//   p_n((0,x),(0,x)) = E[ 1{X_n = x} 2^{-R_n} ]   for n >= 1,
// and P(Y_n is any x-state) <= E[ 2^{-R_n} ].
//
// `diag[n]` holds the collapsed functional E[1{X_n=0} 2^{-R_n}] (which at
// n = 0 is 1/2, not the trivial p_0 = 1); use p_return() for the kernel.
struct CollapsedSeries {
    int width_cut = 0;
    std::vector<std::int64_t> ns;
    std::vector<double> diag;
    std::vector<double> total;
    double truncation_bound = 0.0; // uniform-in-n bound on the dropped width tail
    double discarded_mass = 0.0;   // probability mass pruned by the DP cutoff

    double p_return(std::size_t i) const { return ns[i] == 0 ? 1.0 : diag[i]; }
};

// Literal (left extent, right extent, offset) chain on Z, stepped n_max
// times with widths capped at width_cut. O(n_max * width_cut^3).
CollapsedSeries collapsed_dp_series(std::int64_t n_max, int width_cut = 96);

// Same series evaluated in closed form: decomposing over the final extents
// [-a,b] turns the expectation into
//   E[1{X_n=0} 2^{-R_n}] = sum_w 2^{-(w+3)} sum_{j=1}^{w+1} cos^n(pi j/(w+2)),
// the interval-confined kernels being explicit cosine powers. Exact to
// floating point for arbitrary n; width_cut = 0 picks a cutoff that puts
// the truncation tail far below the value. Throws if the needed cutoff
// exceeds 512.
CollapsedSeries collapsed_interval_series(const std::vector<std::int64_t>& ns,
                                          int width_cut = 0);

struct CollapsedMc {
    double diag = 0.0;
    double diag_se = 0.0;
    double total = 0.0;
    double total_se = 0.0;
    std::int64_t return_hits = 0;
    std::int64_t trials = 0;
    bool rare_event_warning = false; // n beyond the regime MC can resolve
};

// Monte-Carlo average of 1{X_n=x} 2^{-R_n} and 2^{-R_n} on any graph.
CollapsedMc collapsed_mc(const WeightedGraph& g, Vertex x, std::int64_t n,
                         std::int64_t ensemble_size, std::uint64_t seed);

} // namespace lamplab

#endif
