#ifndef LAMPLAB_EXPERIMENTS_HPP
#define LAMPLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "lamplab/fit.hpp"
#include "lamplab/generators.hpp"
#include "lamplab/graph.hpp"
#include "lamplab/walk.hpp"

namespace lamplab {

// Runs fn(worker, i) for i = 0..count-1 across `workers` threads. Each
// index is processed independently of the scheduling (worker id only keys
// reusable scratch), and results land in index order, so the merged output
// is identical for any worker count.
template <typename T>
std::vector<T> run_indexed_ws(std::int64_t count, int workers,
                              const std::function<T(int, std::int64_t)>& fn) {
    std::vector<T> results(static_cast<std::size_t>(count));
    if (workers < 1) workers = 1;
    if (workers == 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) results[i] = fn(0, i);
        return results;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t i = w; i < count; i += workers) results[i] = fn(w, i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

template <typename T>
std::vector<T> run_indexed(std::int64_t count, int workers,
                           const std::function<T(std::int64_t)>& fn) {
    return run_indexed_ws<T>(count, workers,
                             [&fn](int, std::int64_t i) { return fn(i); });
}

// ---------------------------------------------------------------------------
// Wreath return-probability exponent (the d_f/(d_f+d_w) law)

enum class ExponentEstimator { collapsed, exact_kernel };
ExponentEstimator parse_estimator(const std::string& name);

struct ExponentPoint {
    std::int64_t n = 0;   // p_{2n} is fitted
    double p = 0.0;       // wreath return probability estimate
    double se = 0.0;      // standard error (MC only)
};

struct ExponentResult {
    FitResult fit;              // slope of log(-log p_{2n}) vs log n
    double target = 0.0;        // d_f/(d_f+d_w) for the family, if known
    std::vector<ExponentPoint> points;
    bool variance_flag = false; // some MC point has relative se > 10%
    std::string estimator;
};

// Fits the stretched-exponential exponent of the lamplighter return
// probability over roughly-dyadic n in [n_lo, n_hi].
//  - collapsed: exact collapsed series on the line (interval spectral
//    evaluation of the extent chain); Monte-Carlo elsewhere, with honest
//    variance flags (the MC estimator cannot resolve large n).
//  - exact_kernel: exact switch-walk-switch chain enumeration, feasible
//    only on tiny base graphs; a small-scale cross-validation route.
ExponentResult exponent_experiment(const GeneratorSpec& spec, std::int64_t n_lo,
                                   std::int64_t n_hi, ExponentEstimator estimator,
                                   std::int64_t mc_ensemble = 100000,
                                   std::uint64_t seed = 1, int workers = 1);

// ---------------------------------------------------------------------------
// LIL band statistics

enum class LilFunctional {
    range_sup,
    range_inf,
    loctime_sup,
    loctime_inf,
    lamp_sup,        // lamp-distance lower proxy (on-lamp count), limsup scaling
    lamp_inf,        // same proxy, liminf scaling
    transient_ratio, // lamp-distance lower proxy over n
};
LilFunctional parse_functional(const std::string& name);
std::string functional_name(LilFunctional f);

// Denominator of the scaled functional at time n (n >= 16 so loglog > 0).
double lil_scale(LilFunctional f, double ds2, std::int64_t n);
// Numerator drawn from a checkpoint row.
double lil_value(LilFunctional f, const CheckpointRow& row);
// Running max for sup-type functionals, running min for inf-type.
bool lil_is_sup(LilFunctional f);

struct LilBand {
    std::int64_t n = 0;
    double q05 = 0.0, q50 = 0.0, q95 = 0.0;
    double lo = 0.0, hi = 0.0; // ensemble min/max of the running extremum
};

struct LILStatistic {
    LilFunctional functional = LilFunctional::range_sup;
    double ds2 = 0.5;
    std::vector<std::int64_t> checkpoints;
    // scaled[i][k]: trajectory i, checkpoint k
    std::vector<std::vector<double>> scaled;
    std::vector<std::vector<double>> running_extremum;
    std::vector<LilBand> bands; // of the running extremum

    // [5%,95%] band overlap between two checkpoints (indices into bands)
    bool bands_overlap(std::size_t a, std::size_t b) const {
        return bands[a].q05 <= bands[b].q95 && bands[b].q05 <= bands[a].q95;
    }
};

LILStatistic lil_bands(const GeneratorSpec& spec, double ds2, LilFunctional functional,
                       std::int64_t ensemble, const std::vector<std::int64_t>& checkpoints,
                       std::uint64_t seed, int workers = 1, bool override_guard = false);

// ---------------------------------------------------------------------------
// Z^2 range law R_n ~ pi n / log n

struct RangeScalingPoint {
    std::int64_t n = 0;
    double mean_range = 0.0;
    double se = 0.0;
    double ratio = 0.0; // E[R_n] log n / (pi n)
    double ratio_lo = 0.0, ratio_hi = 0.0;
};

struct RangeScalingResult {
    std::vector<RangeScalingPoint> points;
    std::int64_t radius = 0;
    std::int64_t boundary_touches = 0; // trajectories that reached the box surface
};

// Walks the {-radius..radius}^2 box without materializing it; radius 0
// picks the smallest guard-satisfying box for the largest n.
RangeScalingResult z2_range_scaling(std::int64_t radius, const std::vector<std::int64_t>& n_list,
                                    std::int64_t ensemble, std::uint64_t seed, int workers = 1);

// Evaluates the scaling ratio on a synthetic range series (formula audit).
double range_ratio(double mean_range, std::int64_t n);

// ---------------------------------------------------------------------------
// Distance sandwich audits (exact oracle scale)

struct SandwichRow {
    int graph_id = 0;
    std::int64_t trajectory = 0;
    std::int64_t n = 0;
    std::int64_t range = 0;
    std::int64_t lamp_sum = 0;
    std::int64_t lower = 0;
    std::int64_t exact = 0;
    std::int64_t upper = 0;
    std::int64_t cap = 0; // (2M+1) R_n
};

struct SandwichAudit {
    std::vector<SandwichRow> rows;
    std::int64_t violations_lower = 0;   // lamp_sum > exact
    std::int64_t violations_upper = 0;   // exact > upper
    std::int64_t violations_cap = 0;     // exact > (2M+1) R_n
    std::int64_t quarter_range_hits = 0; // lamp_sum < R_n/4 (allowed, counted)
};

// Random graphs of `graph_size` vertices, switch-walk-switch trajectories,
// checkpoint rows with the certified bounds and the exact BFS distance.
SandwichAudit sandwich_audit(int n_graphs, int graph_size, std::int64_t steps_per_trajectory,
                             const std::vector<std::int64_t>& checkpoint_list,
                             std::int64_t trajectories_per_graph, std::uint64_t seed,
                             int workers = 1);

// Fraction of Z^1 lamplighter trajectories with lamp_sum < R_n/4 at time n.
double prop52_low_lamp_fraction(std::int64_t n, std::int64_t ensemble, std::uint64_t seed,
                                int workers = 1);

// ---------------------------------------------------------------------------
// Walk-dimension estimators

struct DwConfinementFit {
    std::vector<int> radii;
    std::vector<double> slopes;    // confinement decay rate per step, by radius
    std::vector<double> fit_r2;    // of the affine -log P fits
    std::vector<double> pair_dw;   // log2(slope ratio) per radius doubling
    double dw = 0.0;               // mean of pair estimates
};

// Fits -log P_x(max disp <= r) ~ c + s(r) n over n in [5 r^dw, 50 r^dw]
// (exact absorbing iteration) and reads d_w off the slope ratios between
// consecutive radius doublings.
DwConfinementFit estimate_dw_confinement(const WeightedGraph& g, Vertex x,
                                         const std::vector<int>& radii, double dw_hint);

struct DwResistanceFit {
    FitResult rho_fit; // log rho(x,r) vs log r; slope = d_w - d_f
    double dw = 0.0;
    double df_used = 0.0;
};

DwResistanceFit estimate_dw_resistance(const WeightedGraph& g, Vertex x,
                                       const std::vector<int>& radii, double df);

} // namespace lamplab

#endif
