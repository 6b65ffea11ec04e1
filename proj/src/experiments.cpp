#include "lamplab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lamplab/collapsed.hpp"
#include "lamplab/heat.hpp"
#include "lamplab/lamplighter.hpp"
#include "lamplab/lattice_walk.hpp"
#include "lamplab/spectral.hpp"

namespace lamplab {

namespace {

std::vector<std::int64_t> fit_grid(std::int64_t n_lo, std::int64_t n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("exponent: bad n window");
    std::vector<std::int64_t> ns;
    for (std::int64_t n = n_lo; n < n_hi; n *= 2) ns.push_back(n);
    ns.push_back(n_hi);
    return ns;
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

} // namespace

ExponentEstimator parse_estimator(const std::string& name) {
    if (name == "collapsed") return ExponentEstimator::collapsed;
    if (name == "exact-kernel") return ExponentEstimator::exact_kernel;
    throw std::invalid_argument("unknown estimator '" + name + "'");
}

ExponentResult exponent_experiment(const GeneratorSpec& spec, std::int64_t n_lo,
                                   std::int64_t n_hi, ExponentEstimator estimator,
                                   std::int64_t mc_ensemble, std::uint64_t seed, int workers) {
    const std::vector<std::int64_t> ns = fit_grid(n_lo, n_hi);
    if (ns.size() < 4)
        throw std::invalid_argument("exponent: window must contain at least 4 points");

    ExponentResult res;
    if (spec.family == GraphFamily::lattice) {
        const double d = spec.dim;
        res.target = d / (d + 2.0);
    }

    if (estimator == ExponentEstimator::collapsed) {
        res.estimator = "collapsed";
        if (spec.family == GraphFamily::lattice && spec.dim == 1) {
            std::vector<std::int64_t> steps;
            for (std::int64_t n : ns) steps.push_back(2 * n);
            const CollapsedSeries series = collapsed_interval_series(steps);
            for (std::size_t i = 0; i < ns.size(); ++i)
                res.points.push_back({ns[i], series.diag[i], 0.0});
        } else {
            const WeightedGraph g = spec.build();
            const Vertex x0 = deepest_interior_vertex(g);
            const std::vector<CollapsedMc> rows = run_indexed<CollapsedMc>(
                static_cast<std::int64_t>(ns.size()), workers, [&](std::int64_t i) {
                    return collapsed_mc(g, x0, 2 * ns[i], mc_ensemble,
                                        seed + static_cast<std::uint64_t>(i) * 0x51ab);
                });
            for (std::size_t i = 0; i < ns.size(); ++i) {
                res.points.push_back({ns[i], rows[i].diag, rows[i].diag_se});
                if (rows[i].diag <= 0.0 || rows[i].diag_se > 0.1 * rows[i].diag)
                    res.variance_flag = true;
            }
        }
    } else {
        res.estimator = "exact-kernel";
        const WeightedGraph g = spec.build();
        if (g.num_vertices() > 16)
            throw std::invalid_argument(
                "exponent: exact-kernel enumeration needs a base graph of <= 16 vertices");
        WreathState start;
        start.position = deepest_interior_vertex(g);
        const std::size_t idx = wreath_state_index(g, start);
        for (std::int64_t n : ns) {
            if (2 * n > 100000)
                throw std::invalid_argument("exponent: exact-kernel window too long");
            const auto dist = wreath_chain_distribution(g, start, static_cast<int>(2 * n));
            res.points.push_back({n, dist[idx], 0.0});
        }
    }

    std::vector<double> xs, ys;
    for (const ExponentPoint& pt : res.points) {
        if (!(pt.p > 0.0) || !(-std::log(pt.p) > 0.0)) {
            res.variance_flag = true;
            continue;
        }
        xs.push_back(std::log(static_cast<double>(pt.n)));
        ys.push_back(std::log(-std::log(pt.p)));
    }
    if (xs.size() < 4) throw std::runtime_error("exponent: fewer than 4 usable points");
    res.fit = fit_line(xs, ys);
    return res;
}

// ---------------------------------------------------------------------------

LilFunctional parse_functional(const std::string& name) {
    if (name == "range-sup") return LilFunctional::range_sup;
    if (name == "range-inf") return LilFunctional::range_inf;
    if (name == "loc-time-sup") return LilFunctional::loctime_sup;
    if (name == "loc-time-inf") return LilFunctional::loctime_inf;
    if (name == "lamp-dist-sup") return LilFunctional::lamp_sup;
    if (name == "lamp-dist-inf") return LilFunctional::lamp_inf;
    if (name == "transient-ratio") return LilFunctional::transient_ratio;
    throw std::invalid_argument("unknown LIL functional '" + name + "'");
}

std::string functional_name(LilFunctional f) {
    switch (f) {
        case LilFunctional::range_sup: return "range-sup";
        case LilFunctional::range_inf: return "range-inf";
        case LilFunctional::loctime_sup: return "loc-time-sup";
        case LilFunctional::loctime_inf: return "loc-time-inf";
        case LilFunctional::lamp_sup: return "lamp-dist-sup";
        case LilFunctional::lamp_inf: return "lamp-dist-inf";
        case LilFunctional::transient_ratio: return "transient-ratio";
    }
    return "?";
}

double lil_scale(LilFunctional f, double ds2, std::int64_t n) {
    if (n < 16) throw std::invalid_argument("lil: checkpoints start at n = 16");
    const double nn = static_cast<double>(n);
    const double ll = std::log(std::log(nn));
    switch (f) {
        case LilFunctional::range_sup:
        case LilFunctional::lamp_sup:
            return std::pow(nn, ds2) * std::pow(ll, 1.0 - ds2);
        case LilFunctional::range_inf:
        case LilFunctional::lamp_inf:
            return std::pow(nn, ds2) * std::pow(ll, -ds2);
        case LilFunctional::loctime_sup:
            return std::pow(nn, 1.0 - ds2) * std::pow(ll, ds2);
        case LilFunctional::loctime_inf:
            return std::pow(nn, 1.0 - ds2) * std::pow(ll, ds2 - 1.0);
        case LilFunctional::transient_ratio:
            return nn;
    }
    return nn;
}

double lil_value(LilFunctional f, const CheckpointRow& row) {
    switch (f) {
        case LilFunctional::range_sup:
        case LilFunctional::range_inf:
            return static_cast<double>(row.range);
        case LilFunctional::loctime_sup:
        case LilFunctional::loctime_inf:
            return row.local_time_max;
        case LilFunctional::lamp_sup:
        case LilFunctional::lamp_inf:
        case LilFunctional::transient_ratio:
            return static_cast<double>(row.lamp_sum);
    }
    return 0.0;
}

bool lil_is_sup(LilFunctional f) {
    switch (f) {
        case LilFunctional::range_sup:
        case LilFunctional::loctime_sup:
        case LilFunctional::lamp_sup:
            return true;
        case LilFunctional::range_inf:
        case LilFunctional::loctime_inf:
        case LilFunctional::lamp_inf:
            return false;
        case LilFunctional::transient_ratio:
            return false; // liminf side of Theorem 2.4(II)
    }
    return true;
}

LILStatistic lil_bands(const GeneratorSpec& spec, double ds2, LilFunctional functional,
                       std::int64_t ensemble, const std::vector<std::int64_t>& checkpoints,
                       std::uint64_t seed, int workers, bool override_guard) {
    if (checkpoints.empty()) throw std::invalid_argument("lil: no checkpoints");
    for (std::int64_t c : checkpoints)
        if (c < 16) throw std::invalid_argument("lil: checkpoints start at n = 16");
    if (ensemble < 2) throw std::invalid_argument("lil: ensemble too small");

    const WeightedGraph g = spec.build();
    const Vertex x0 = deepest_interior_vertex(g);
    const std::int64_t n_max = checkpoints.back();
    require_guard(g, x0, n_max, spec.guard_walk_dimension(), override_guard);

    const bool lamps = functional == LilFunctional::lamp_sup ||
                       functional == LilFunctional::lamp_inf ||
                       functional == LilFunctional::transient_ratio;

    LILStatistic st;
    st.functional = functional;
    st.ds2 = ds2;
    st.checkpoints = checkpoints;

    SimulateOptions opts;
    opts.checkpoints = checkpoints;
    opts.guard_walk_dim = spec.guard_walk_dimension();
    opts.override_guard = true; // checked once above
    opts.with_lamps = lamps;
    opts.keep_visit_counts = false;

    st.scaled = run_indexed<std::vector<double>>(ensemble, workers, [&](std::int64_t i) {
        const Trajectory tr =
            simulate(g, x0, n_max, mix64(seed + 0x11d0 * static_cast<std::uint64_t>(i) + 1), opts);
        std::vector<double> vals(checkpoints.size());
        for (std::size_t k = 0; k < checkpoints.size(); ++k)
            vals[k] = lil_value(functional, tr.checkpoints[k]) /
                      lil_scale(functional, ds2, checkpoints[k]);
        return vals;
    });

    const bool sup = lil_is_sup(functional);
    st.running_extremum.resize(st.scaled.size());
    for (std::size_t i = 0; i < st.scaled.size(); ++i) {
        st.running_extremum[i].resize(checkpoints.size());
        double acc = st.scaled[i][0];
        for (std::size_t k = 0; k < checkpoints.size(); ++k) {
            acc = sup ? std::max(acc, st.scaled[i][k]) : std::min(acc, st.scaled[i][k]);
            st.running_extremum[i][k] = acc;
        }
    }

    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        std::vector<double> col(st.scaled.size());
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = st.running_extremum[i][k];
        LilBand band;
        band.n = checkpoints[k];
        band.q05 = quantile(col, 0.05);
        band.q50 = quantile(col, 0.50);
        band.q95 = quantile(col, 0.95);
        band.lo = *std::min_element(col.begin(), col.end());
        band.hi = *std::max_element(col.begin(), col.end());
        st.bands.push_back(band);
    }
    return st;
}

// ---------------------------------------------------------------------------

double range_ratio(double mean_range, std::int64_t n) {
    return mean_range * std::log(static_cast<double>(n)) /
           (std::numbers::pi * static_cast<double>(n));
}

RangeScalingResult z2_range_scaling(std::int64_t radius, const std::vector<std::int64_t>& n_list,
                                    std::int64_t ensemble, std::uint64_t seed, int workers) {
    if (n_list.empty()) throw std::invalid_argument("range scaling: empty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("range scaling: n list must be increasing");
    if (ensemble < 2) throw std::invalid_argument("range scaling: ensemble too small");
    const std::int64_t n_max = n_list.back();
    const std::int64_t guard_radius =
        static_cast<std::int64_t>(std::ceil(3.0 * std::sqrt(static_cast<double>(n_max)))) + 8;
    if (radius <= 0) radius = guard_radius;
    if (radius < guard_radius)
        throw std::invalid_argument("range scaling: boundary guard needs radius >= " +
                                    std::to_string(guard_radius) + " for n = " +
                                    std::to_string(n_max));

    const std::int64_t side = 2 * radius + 1;
    struct PerTraj {
        std::vector<std::int64_t> ranges;
        bool touched_boundary = false;
    };

    // Per-worker reusable visit bitmaps, cleared through the touched list.
    if (workers < 1) workers = 1;
    std::vector<std::vector<std::uint64_t>> bitmaps(workers);

    const std::function<PerTraj(int, std::int64_t)> body = [&](int w, std::int64_t i) {
        auto& bits = bitmaps[w];
        if (bits.empty()) bits.assign(static_cast<std::size_t>((side * side + 63) / 64), 0);
        std::vector<std::int64_t> touched;
        touched.reserve(static_cast<std::size_t>(
            4.0 * static_cast<double>(n_max) / std::log(std::max(3.0, double(n_max)))));

        PerTraj out;
        out.ranges.resize(n_list.size());
        SplitRng rng = SplitRng::derive(seed, static_cast<std::uint64_t>(i));
        LatticeBoxWalk walk(2, radius);
        auto mark = [&](std::int64_t id) {
            if (!(bits[id >> 6] & (1ULL << (id & 63)))) {
                bits[id >> 6] |= (1ULL << (id & 63));
                touched.push_back(id);
                return true;
            }
            return false;
        };
        std::int64_t range = 1;
        mark(walk.packed_position());
        std::size_t next = 0;
        for (std::int64_t t = 1; t <= n_max; ++t) {
            walk.step(rng);
            if (mark(walk.packed_position())) ++range;
            if (walk.displacement_linf() >= radius) out.touched_boundary = true;
            if (next < n_list.size() && n_list[next] == t) {
                out.ranges[next] = range;
                ++next;
            }
        }
        for (std::int64_t id : touched) bits[id >> 6] &= ~(1ULL << (id & 63));
        return out;
    };
    const std::vector<PerTraj> rows = run_indexed_ws<PerTraj>(ensemble, workers, body);

    RangeScalingResult res;
    res.radius = radius;
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        double mean = 0.0, var = 0.0;
        for (const PerTraj& r : rows) mean += static_cast<double>(r.ranges[k]);
        mean /= static_cast<double>(ensemble);
        for (const PerTraj& r : rows) {
            const double d = static_cast<double>(r.ranges[k]) - mean;
            var += d * d;
        }
        var /= static_cast<double>(ensemble - 1);
        RangeScalingPoint pt;
        pt.n = n_list[k];
        pt.mean_range = mean;
        pt.se = std::sqrt(var / static_cast<double>(ensemble));
        pt.ratio = range_ratio(mean, pt.n);
        pt.ratio_lo = range_ratio(mean - 1.96 * pt.se, pt.n);
        pt.ratio_hi = range_ratio(mean + 1.96 * pt.se, pt.n);
        res.points.push_back(pt);
    }
    for (const PerTraj& r : rows)
        if (r.touched_boundary) ++res.boundary_touches;
    return res;
}

// ---------------------------------------------------------------------------

SandwichAudit sandwich_audit(int n_graphs, int graph_size, std::int64_t steps_per_trajectory,
                             const std::vector<std::int64_t>& checkpoint_list,
                             std::int64_t trajectories_per_graph, std::uint64_t seed,
                             int workers) {
    if (graph_size < 2 || graph_size > 16)
        throw std::invalid_argument("sandwich: graph size must be in 2..16");
    for (std::int64_t c : checkpoint_list)
        if (c < 1 || c > steps_per_trajectory)
            throw std::invalid_argument("sandwich: bad checkpoint");

    struct GraphRows {
        std::vector<SandwichRow> rows;
        std::int64_t quarter_hits = 0, v_lower = 0, v_upper = 0, v_cap = 0;
    };

    const std::function<GraphRows(std::int64_t)> body = [&](std::int64_t gi) {
        SplitRng graph_rng = SplitRng::derive(seed, 0x9a9a + static_cast<std::uint64_t>(gi));
        const WeightedGraph g =
            random_connected_graph(graph_size, 0.25 + 0.5 * graph_rng.next_unit(), graph_rng);
        WreathState origin;
        origin.position = 0;
        const auto table = wreath_distance_table(g, origin);
        const std::int64_t cap_factor = 2 * static_cast<std::int64_t>(g.max_degree()) + 1;

        GraphRows out;
        for (std::int64_t ti = 0; ti < trajectories_per_graph; ++ti) {
            SplitRng rng = SplitRng::derive(seed ^ 0xf00d, static_cast<std::uint64_t>(
                                                               gi * trajectories_per_graph + ti));
            WreathState state = origin;
            std::vector<std::uint8_t> visited(g.num_vertices(), 0);
            visited[0] = 1;
            std::int64_t range = 1;
            std::size_t next = 0;
            for (std::int64_t t = 1; t <= steps_per_trajectory; ++t) {
                state = lamplighter_step(g, state, rng);
                if (!visited[state.position]) {
                    visited[state.position] = 1;
                    ++range;
                }
                if (next < checkpoint_list.size() && checkpoint_list[next] == t) {
                    ++next;
                    SandwichRow row;
                    row.graph_id = static_cast<int>(gi);
                    row.trajectory = ti;
                    row.n = t;
                    row.range = range;
                    row.lamp_sum = lamp_sum(state);
                    const DistanceBounds b = lamp_distance_bounds(g, origin, state);
                    row.lower = b.lower;
                    row.upper = b.upper;
                    row.exact = table[wreath_state_index(g, state)];
                    row.cap = cap_factor * range;
                    if (row.lower > row.exact) ++out.v_lower;
                    if (row.exact > row.upper) ++out.v_upper;
                    if (row.exact > row.cap) ++out.v_cap;
                    if (4 * row.lamp_sum < row.range) ++out.quarter_hits;
                    out.rows.push_back(row);
                }
            }
        }
        return out;
    };
    const std::vector<GraphRows> per_graph = run_indexed<GraphRows>(n_graphs, workers, body);

    SandwichAudit audit;
    for (const GraphRows& gr : per_graph) {
        audit.rows.insert(audit.rows.end(), gr.rows.begin(), gr.rows.end());
        audit.violations_lower += gr.v_lower;
        audit.violations_upper += gr.v_upper;
        audit.violations_cap += gr.v_cap;
        audit.quarter_range_hits += gr.quarter_hits;
    }
    return audit;
}

double prop52_low_lamp_fraction(std::int64_t n, std::int64_t ensemble, std::uint64_t seed,
                                int workers) {
    const std::int64_t radius =
        static_cast<std::int64_t>(std::ceil(3.0 * std::sqrt(static_cast<double>(n)))) + 8;
    GeneratorSpec spec;
    spec.family = GraphFamily::lattice;
    spec.dim = 1;
    spec.level = static_cast<int>(radius);
    const WeightedGraph g = spec.build();
    const Vertex x0 = static_cast<Vertex>(radius); // center of the path

    SimulateOptions opts;
    opts.with_lamps = true;
    opts.keep_visit_counts = false;
    opts.checkpoints = {n};

    const std::vector<std::uint8_t> hits = run_indexed<std::uint8_t>(
        ensemble, workers, [&](std::int64_t i) -> std::uint8_t {
            const Trajectory tr =
                simulate(g, x0, n, mix64(seed + 0x52 + static_cast<std::uint64_t>(i)), opts);
            const CheckpointRow& row = tr.checkpoints[0];
            return 4 * row.lamp_sum < row.range ? 1 : 0;
        });
    std::int64_t count = 0;
    for (std::uint8_t h : hits) count += h;
    return static_cast<double>(count) / static_cast<double>(ensemble);
}

// ---------------------------------------------------------------------------

DwConfinementFit estimate_dw_confinement(const WeightedGraph& g, Vertex x,
                                         const std::vector<int>& radii, double dw_hint) {
    if (radii.size() < 2) throw std::invalid_argument("dw fit: need at least two radii");
    DwConfinementFit out;
    out.radii = radii;
    for (int r : radii) {
        const double rdw = std::pow(static_cast<double>(r), dw_hint);
        const std::int64_t n_lo = static_cast<std::int64_t>(5.0 * rdw);
        const std::int64_t n_hi = static_cast<std::int64_t>(50.0 * rdw);
        const std::vector<double> surv = confinement_survival_series(g, x, r, n_hi);
        std::vector<double> xs, ys;
        const std::int64_t stride = std::max<std::int64_t>(1, (n_hi - n_lo) / 64);
        for (std::int64_t n = n_lo; n <= n_hi; n += stride) {
            if (!(surv[n] > 0.0)) break;
            xs.push_back(static_cast<double>(n));
            ys.push_back(-std::log(surv[n]));
        }
        if (xs.size() < 4) throw std::runtime_error("dw fit: survival vanished in the window");
        const FitResult f = fit_line(xs, ys);
        out.slopes.push_back(f.slope);
        out.fit_r2.push_back(f.r2);
    }
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        const double scale = std::log2(static_cast<double>(radii[i + 1]) /
                                       static_cast<double>(radii[i]));
        out.pair_dw.push_back(std::log2(out.slopes[i] / out.slopes[i + 1]) / scale);
    }
    for (double d : out.pair_dw) out.dw += d;
    out.dw /= static_cast<double>(out.pair_dw.size());
    return out;
}

DwResistanceFit estimate_dw_resistance(const WeightedGraph& g, Vertex x,
                                       const std::vector<int>& radii, double df) {
    const std::vector<RhoPoint> pts = rho_growth(g, x, radii);
    std::vector<double> rs, rhos;
    for (const RhoPoint& p : pts) {
        if (p.clipped) continue;
        rs.push_back(static_cast<double>(p.radius));
        rhos.push_back(p.rho);
    }
    DwResistanceFit out;
    out.rho_fit = fit_loglog(rs, rhos);
    out.df_used = df;
    out.dw = df + out.rho_fit.slope;
    return out;
}

} // namespace lamplab
