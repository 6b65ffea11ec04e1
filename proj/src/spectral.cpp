#include "lamplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lamplab/heat.hpp"
#include "lamplab/rng.hpp"
#include "lamplab/walk.hpp"

namespace lamplab {

double dirichlet_energy(const WeightedGraph& g, const std::vector<double>& f,
                        EnergyConvention conv) {
    if (f.size() != static_cast<std::size_t>(g.num_vertices()))
        throw std::invalid_argument("dirichlet_energy: f must cover every vertex");
    double acc = 0.0;
    for (Vertex x = 0; x < g.num_vertices(); ++x) {
        const Vertex* nb = g.neighbors(x);
        const double* w = g.weights(x);
        for (std::size_t k = 0; k < g.degree(x); ++k) {
            if (nb[k] < x) continue; // each undirected edge once
            const double d = f[x] - f[nb[k]];
            acc += d * d * w[k];
        }
    }
    return conv == EnergyConvention::single_count ? acc : 2.0 * acc;
}

ResistanceProblem effective_resistance(const WeightedGraph& g, const std::vector<Vertex>& A,
                                       const std::vector<Vertex>& B, EnergyConvention conv) {
    if (A.empty() || B.empty())
        throw std::invalid_argument("effective_resistance: empty terminal set");
    const Vertex N = g.num_vertices();
    std::vector<std::int8_t> role(N, 0); // 1 source, -1 sink
    for (Vertex v : A) role[v] = 1;
    for (Vertex v : B) {
        if (role[v] == 1)
            throw std::invalid_argument("effective_resistance: source and sink overlap");
        role[v] = -1;
    }

    ResistanceProblem prob;
    prob.source = A;
    prob.sink = B;
    prob.convention = conv;
    prob.potential.assign(N, 0.0);
    for (Vertex v : A) prob.potential[v] = 1.0;

    // unknowns: interior vertices
    std::vector<Vertex> interior;
    std::vector<std::int32_t> slot(N, -1);
    for (Vertex v = 0; v < N; ++v)
        if (role[v] == 0) {
            slot[v] = static_cast<std::int32_t>(interior.size());
            interior.push_back(v);
        }

    const std::size_t M = interior.size();
    if (M > 0) {
        // L_II u = rhs, rhs_i = sum_{j in A} mu_ij
        std::vector<double> rhs(M, 0.0), u(M, 0.0), r(M), z(M), p(M), q(M);
        for (std::size_t i = 0; i < M; ++i) {
            const Vertex v = interior[i];
            const Vertex* nb = g.neighbors(v);
            const double* w = g.weights(v);
            for (std::size_t k = 0; k < g.degree(v); ++k)
                if (role[nb[k]] == 1) rhs[i] += w[k];
        }
        auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
            for (std::size_t i = 0; i < M; ++i) {
                const Vertex v = interior[i];
                const Vertex* nb = g.neighbors(v);
                const double* w = g.weights(v);
                double acc = g.measure(v) * x[i];
                for (std::size_t k = 0; k < g.degree(v); ++k) {
                    const std::int32_t j = slot[nb[k]];
                    if (j >= 0) acc -= w[k] * x[j];
                }
                y[i] = acc;
            }
        };

        double rhs_norm = 0.0;
        for (double b : rhs) rhs_norm += b * b;
        rhs_norm = std::sqrt(rhs_norm);
        if (rhs_norm == 0.0) rhs_norm = 1.0;

        r = rhs; // u = 0 initially
        for (std::size_t i = 0; i < M; ++i) z[i] = r[i] / g.measure(interior[i]);
        p = z;
        double rz = 0.0;
        for (std::size_t i = 0; i < M; ++i) rz += r[i] * z[i];

        const int cap = static_cast<int>(50.0 * std::sqrt(static_cast<double>(N))) + 10;
        const double tol = 1e-10;
        double rel = 1.0;
        int it = 0;
        for (; it < cap; ++it) {
            double rnorm = 0.0;
            for (double ri : r) rnorm += ri * ri;
            rel = std::sqrt(rnorm) / rhs_norm;
            if (rel <= tol) break;
            apply(p, q);
            double pq = 0.0;
            for (std::size_t i = 0; i < M; ++i) pq += p[i] * q[i];
            const double alpha = rz / pq;
            for (std::size_t i = 0; i < M; ++i) {
                u[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            for (std::size_t i = 0; i < M; ++i) z[i] = r[i] / g.measure(interior[i]);
            double rz_new = 0.0;
            for (std::size_t i = 0; i < M; ++i) rz_new += r[i] * z[i];
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < M; ++i) p[i] = z[i] + beta * p[i];
        }
        prob.iterations = it;
        prob.residual = rel;
        if (rel > tol)
            throw std::runtime_error("effective_resistance: conjugate gradient stalled at "
                                     "relative residual " + std::to_string(rel));
        for (std::size_t i = 0; i < M; ++i) prob.potential[interior[i]] = u[i];
    }

    prob.energy = dirichlet_energy(g, prob.potential, conv);
    if (prob.energy <= 0.0)
        throw std::runtime_error("effective_resistance: degenerate zero energy");
    prob.resistance = 1.0 / prob.energy;
    return prob;
}

std::vector<RhoPoint> rho_growth(const WeightedGraph& g, Vertex x,
                                 const std::vector<int>& n_list, EnergyConvention conv) {
    std::vector<RhoPoint> out;
    const std::vector<std::int32_t> dist = distances_from(g, x);
    for (int n : n_list) {
        RhoPoint pt;
        pt.radius = n;
        std::vector<Vertex> complement;
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            if (dist[v] > n) complement.push_back(v);
        if (complement.empty()) {
            pt.clipped = true;
            pt.rho = std::numeric_limits<double>::infinity();
            out.push_back(pt);
            continue;
        }
        ResistanceProblem prob = effective_resistance(g, {x}, complement, conv);
        pt.rho = prob.resistance;
        pt.residual = prob.residual;
        out.push_back(pt);
    }
    return out;
}

RhoSpread rho_uniformity(const WeightedGraph& g, const std::vector<Vertex>& centers,
                         int n_min, int n_max) {
    RhoSpread out;
    for (Vertex c : centers) {
        const auto pts = rho_growth(g, c, {n_min, n_max});
        out.max_spread = std::max(out.max_spread, pts[1].rho - pts[0].rho);
        out.final_rho.push_back(pts[1].rho);
    }
    return out;
}

ReturnStats green_and_return(const WeightedGraph& g, Vertex x, std::int64_t horizon,
                             GreenMode mode, std::int64_t mc_trials, std::uint64_t seed) {
    if (horizon < 1) throw std::invalid_argument("green_and_return: horizon must be >= 1");
    ReturnStats st;
    st.horizon = horizon;

    if (mode == GreenMode::series) {
        HeatKernelOptions opts;
        opts.absorb_at_boundary = g.has_boundary_info();
        const std::int64_t half = (horizon + 1) / 2;
        const HeatKernelResult hk = heat_kernel_exact(g, x, half, opts);

        double green = 0.0;
        for (std::int64_t t = 0; t <= horizon; ++t) green += hk.diag[t];
        st.green = green;

        // Cauchy check on the on-diagonal partial sums: the increment over
        // the last half-decade should be a vanishing fraction of the sum.
        double tail_inc = 0.0;
        for (std::int64_t t = horizon / 2 + 1; t <= horizon; ++t) tail_inc += hk.diag[t];
        // geometric tail extrapolation from the last even terms
        const double p_last = hk.diag[horizon - (horizon % 2)];
        const double p_prev = hk.diag[horizon - (horizon % 2) - 2];
        double ratio = (p_prev > 0.0) ? p_last / p_prev : 0.0;
        ratio = std::pow(std::min(ratio, 1.0), 0.5); // per-step decay
        st.tail_estimate = (ratio < 1.0) ? p_last * ratio / (1.0 - ratio) : tail_inc;
        if (tail_inc > 0.05 * green || ratio >= 1.0 - 1e-12) {
            st.divergent = true;
            st.first_return = 1.0;
        } else {
            st.first_return = (green - 1.0) / green;
        }
        return st;
    }

    // MC first-return trials, absorbed at flagged boundary vertices.
    std::int64_t returned = 0;
    for (std::int64_t i = 0; i < mc_trials; ++i) {
        SplitRng rng = SplitRng::derive(seed, static_cast<std::uint64_t>(i));
        Vertex pos = x;
        for (std::int64_t t = 1; t <= horizon; ++t) {
            pos = walk_step(g, pos, rng.next_unit());
            if (pos == x) {
                ++returned;
                break;
            }
            if (g.is_boundary(pos)) break;
        }
    }
    st.mc_trials = mc_trials;
    st.first_return = static_cast<double>(returned) / static_cast<double>(mc_trials);
    if (st.first_return < 1.0) st.green = 1.0 / (1.0 - st.first_return);
    else st.divergent = true;
    return st;
}

FitResult spectral_dim_fit(const std::vector<double>& diag, std::int64_t n_lo,
                           std::int64_t n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("spectral fit: bad window");
    std::vector<double> xs, ys;
    for (std::int64_t n = n_lo; n <= n_hi; n *= 2) {
        if (static_cast<std::size_t>(2 * n) >= diag.size())
            throw std::invalid_argument("spectral fit: series shorter than the window");
        const double p = diag[2 * n];
        if (!(p > 0.0)) throw std::invalid_argument("spectral fit: vanishing p_{2n}");
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(-std::log(p));
    }
    if (xs.size() < 4)
        throw std::invalid_argument("spectral fit: window must contain at least 4 dyadic points");
    return fit_line(xs, ys);
}

} // namespace lamplab
