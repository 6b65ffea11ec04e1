// lamplab: switch-walk-switch random-walk laboratory on fractal-like graphs.
// Batch CLI over the library: graph generation, walks, exact kernels,
// resistance, LIL bands, sandwich audits and exponent fits, all to CSV.

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "lamplab/collapsed.hpp"
#include "lamplab/csv.hpp"
#include "lamplab/experiments.hpp"
#include "lamplab/generators.hpp"
#include "lamplab/heat.hpp"
#include "lamplab/lamplighter.hpp"
#include "lamplab/log.hpp"
#include "lamplab/spectral.hpp"
#include "lamplab/walk.hpp"

namespace {

using namespace lamplab;

using Config = std::map<std::string, std::string>;

// effective value: explicit flag > config file > built-in default
template <typename T>
void merge_key(const CLI::Option* opt, const Config& cfg, const std::string& key, T& value) {
    if (opt->count() > 0) return;
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    T parsed{};
    if constexpr (std::is_same_v<T, std::string>) parsed = it->second;
    else if constexpr (std::is_same_v<T, bool>) parsed = (it->second == "1" || it->second == "true");
    else if constexpr (std::is_integral_v<T>) parsed = static_cast<T>(std::stoll(it->second));
    else parsed = static_cast<T>(std::stod(it->second));
    value = parsed;
}

struct GraphArgs {
    std::string family = "lattice";
    int dim = 1;
    int level = 1;
    int radius = 1;
    double weight = 1.0;
    std::string graph_path;

    CLI::Option *o_family = nullptr, *o_dim = nullptr, *o_level = nullptr, *o_radius = nullptr,
                *o_weight = nullptr, *o_path = nullptr;

    void attach(CLI::App* cmd) {
        o_family = cmd->add_option("--family", family, "graph family: lattice|gasket|carpet");
        o_dim = cmd->add_option("--dim", dim, "lattice dimension (1..4)");
        o_radius = cmd->add_option("--radius", radius, "lattice box radius");
        o_level = cmd->add_option("--level", level, "gasket/carpet level");
        o_weight = cmd->add_option("--weight", weight, "uniform edge weight");
        o_path = cmd->add_option("--graph", graph_path, "edge-list file (overrides family)");
    }
    void merge(const Config& cfg) {
        merge_key(o_family, cfg, "family", family);
        merge_key(o_dim, cfg, "dim", dim);
        merge_key(o_radius, cfg, "radius", radius);
        merge_key(o_level, cfg, "level", level);
        merge_key(o_weight, cfg, "weight", weight);
        merge_key(o_path, cfg, "graph", graph_path);
    }
    GeneratorSpec spec() const {
        GeneratorSpec s;
        if (!graph_path.empty()) {
            s.family = GraphFamily::file;
            s.path = graph_path;
            return s;
        }
        s.family = parse_family(family);
        s.dim = dim;
        s.level = (s.family == GraphFamily::lattice) ? radius : level;
        s.weight = weight;
        return s;
    }
    void describe(Config& cfg) const {
        if (!graph_path.empty()) {
            cfg["family"] = "file";
            cfg["graph"] = graph_path;
            return;
        }
        cfg["family"] = family;
        if (parse_family(family) == GraphFamily::lattice) {
            cfg["dim"] = std::to_string(dim);
            cfg["radius"] = std::to_string(radius);
        } else {
            cfg["level"] = std::to_string(level);
        }
    }
};

Config load_config(const std::string& path) {
    if (path.empty()) return {};
    return parse_config_file(path);
}

std::vector<std::int64_t> checkpoint_list(const std::string& text, std::int64_t n) {
    if (text.empty() || text == "dyadic") return dyadic_checkpoints(n);
    if (text == "final") return {n};
    auto list = parse_int_list(text);
    if (list.empty() || list.back() > n)
        throw std::invalid_argument("checkpoints must be nonempty and end at or before --steps");
    return list;
}

int cmd_generate(const GraphArgs& ga, const std::string& out) {
    const WeightedGraph g = ga.spec().build();
    save_graph(g, out);
    std::printf("generated family=%s vertices=%d edges=%lld out=%s\n",
                family_name(ga.spec().family).c_str(), g.num_vertices(),
                static_cast<long long>(g.num_edges()), out.c_str());
    return 0;
}

int cmd_walk(const GraphArgs& ga, std::int64_t steps, std::int64_t start,
             std::int64_t ensemble, std::uint64_t seed, int workers,
             const std::string& cps_text, bool lamps, bool force, const std::string& out) {
    if (steps < 0) throw std::invalid_argument("--steps must be nonnegative");
    if (ensemble < 1) throw std::invalid_argument("--ensemble must be positive");
    const GeneratorSpec spec = ga.spec();
    const WeightedGraph g = spec.build();
    const Vertex x0 = (start >= 0) ? static_cast<Vertex>(start) : deepest_interior_vertex(g);
    require_guard(g, x0, steps, spec.guard_walk_dimension(), force);

    SimulateOptions opts;
    opts.checkpoints = checkpoint_list(cps_text, steps);
    opts.guard_walk_dim = spec.guard_walk_dimension();
    opts.override_guard = true;
    opts.with_lamps = lamps;
    opts.keep_visit_counts = false;

    Config cfg;
    ga.describe(cfg);
    cfg["command"] = lamps ? "lamplighter" : "walk";
    cfg["steps"] = std::to_string(steps);
    cfg["start"] = std::to_string(x0);
    cfg["ensemble"] = std::to_string(ensemble);
    cfg["seed"] = std::to_string(seed);
    cfg["checkpoints"] = cps_text.empty() ? "dyadic" : cps_text;

    std::vector<std::string> cols = {"trajectory", "n",           "range", "lstar",
                                     "maxdisp",    "final_vertex", "seed"};
    if (lamps) cols.push_back("lamp_sum");
    CsvWriter csv(out, cfg, cols);

    const auto rows = run_indexed<std::vector<CheckpointRow>>(
        ensemble, workers, [&](std::int64_t i) {
            const std::uint64_t s = mix64(seed + 0xabc0 + static_cast<std::uint64_t>(i));
            return simulate(g, x0, steps, s, opts).checkpoints;
        });
    for (std::int64_t i = 0; i < ensemble; ++i)
        for (const CheckpointRow& row : rows[i]) {
            std::vector<std::string> fields = {
                format_number(i),
                format_number(row.n),
                format_number(row.range),
                format_number(row.local_time_max),
                format_number(static_cast<std::int64_t>(row.max_displacement)),
                format_number(static_cast<std::int64_t>(row.final_vertex)),
                format_number(static_cast<std::int64_t>(
                    mix64(seed + 0xabc0 + static_cast<std::uint64_t>(i)))),
            };
            if (lamps) fields.push_back(format_number(row.lamp_sum));
            csv.row(fields);
        }
    std::printf("walk done: %lld trajectories x %lld steps -> %s\n",
                static_cast<long long>(ensemble), static_cast<long long>(steps), out.c_str());
    return 0;
}

int cmd_heatkernel(const GraphArgs& ga, std::int64_t start, std::int64_t nmax, bool force,
                   const std::string& out) {
    const GeneratorSpec spec = ga.spec();
    const WeightedGraph g = spec.build();
    const Vertex x0 = (start >= 0) ? static_cast<Vertex>(start) : deepest_interior_vertex(g);
    require_guard(g, x0, 2 * nmax, spec.guard_walk_dimension(), force);
    const HeatKernelResult hk = heat_kernel_exact(g, x0, nmax);

    Config cfg;
    ga.describe(cfg);
    cfg["command"] = "heatkernel";
    cfg["start"] = std::to_string(x0);
    cfg["nmax"] = std::to_string(nmax);
    CsvWriter csv(out, cfg, {"n", "p_n_xx"});
    for (std::size_t t = 0; t < hk.diag.size(); ++t)
        csv.row({format_number(static_cast<std::int64_t>(t)), format_number(hk.diag[t])});
    std::printf("heatkernel done: base=%d diag terms=%zu -> %s\n", x0, hk.diag.size(),
                out.c_str());
    return 0;
}

int cmd_resistance(const GraphArgs& ga, std::int64_t center, const std::string& radii_text,
                   const std::string& out) {
    const WeightedGraph g = ga.spec().build();
    const Vertex x0 = (center >= 0) ? static_cast<Vertex>(center) : deepest_interior_vertex(g);
    std::vector<int> radii;
    for (std::int64_t r : parse_int_list(radii_text.empty() ? "1,2,4,8" : radii_text))
        radii.push_back(static_cast<int>(r));
    const auto pts = rho_growth(g, x0, radii);

    Config cfg;
    ga.describe(cfg);
    cfg["command"] = "resistance";
    cfg["center"] = std::to_string(x0);
    cfg["radii"] = radii_text.empty() ? "1,2,4,8" : radii_text;
    CsvWriter csv(out, cfg, {"n", "rho", "convention", "residual", "clipped"});
    for (const RhoPoint& p : pts)
        csv.row({format_number(static_cast<std::int64_t>(p.radius)), format_number(p.rho),
                 "single-count", format_number(p.residual),
                 format_number(static_cast<std::int64_t>(p.clipped ? 1 : 0))});
    std::printf("resistance done: %zu radii -> %s\n", pts.size(), out.c_str());
    return 0;
}

int cmd_lil(const GraphArgs& ga, const std::string& functional, double ds2,
            std::int64_t ensemble, std::int64_t nmax, std::uint64_t seed, int workers,
            bool force, const std::string& out) {
    const LilFunctional f = parse_functional(functional);
    const auto cps = dyadic_checkpoints(nmax);
    const LILStatistic st = lil_bands(ga.spec(), ds2, f, ensemble, cps, seed, workers, force);

    Config cfg;
    ga.describe(cfg);
    cfg["command"] = "lil";
    cfg["functional"] = functional;
    cfg["ds2"] = format_number(ds2);
    cfg["ensemble"] = std::to_string(ensemble);
    cfg["nmax"] = std::to_string(nmax);
    cfg["seed"] = std::to_string(seed);
    CsvWriter csv(out, cfg, {"n", "q05", "q50", "q95", "min", "max"});
    for (const LilBand& b : st.bands)
        csv.row({format_number(b.n), format_number(b.q05), format_number(b.q50),
                 format_number(b.q95), format_number(b.lo), format_number(b.hi)});
    std::printf("lil %s done: ensemble=%lld checkpoints=%zu -> %s\n", functional.c_str(),
                static_cast<long long>(ensemble), st.bands.size(), out.c_str());
    return 0;
}

int cmd_sandwich(int graphs, int size, std::int64_t steps, std::int64_t per_graph,
                 std::uint64_t seed, int workers, const std::string& out) {
    const auto cps = dyadic_checkpoints(steps, 4);
    const SandwichAudit audit =
        sandwich_audit(graphs, size, steps, cps, per_graph, seed, workers);

    Config cfg;
    cfg["command"] = "sandwich-audit";
    cfg["graphs"] = std::to_string(graphs);
    cfg["size"] = std::to_string(size);
    cfg["steps"] = std::to_string(steps);
    cfg["per_graph"] = std::to_string(per_graph);
    cfg["seed"] = std::to_string(seed);
    CsvWriter csv(out, cfg,
                  {"graph", "trajectory", "n", "range", "lamp_sum", "lower", "exact", "upper",
                   "cap"});
    for (const SandwichRow& r : audit.rows)
        csv.row({format_number(static_cast<std::int64_t>(r.graph_id)),
                 format_number(r.trajectory), format_number(r.n), format_number(r.range),
                 format_number(r.lamp_sum), format_number(r.lower), format_number(r.exact),
                 format_number(r.upper), format_number(r.cap)});
    std::printf("sandwich audit: rows=%zu violations lower/upper/cap = %lld/%lld/%lld -> %s\n",
                audit.rows.size(), static_cast<long long>(audit.violations_lower),
                static_cast<long long>(audit.violations_upper),
                static_cast<long long>(audit.violations_cap), out.c_str());
    return (audit.violations_lower || audit.violations_upper || audit.violations_cap) ? 2 : 0;
}

int cmd_exponent(const GraphArgs& ga, const std::string& estimator, std::int64_t nmin,
                 std::int64_t nmax, std::int64_t mc_ensemble, std::uint64_t seed, int workers,
                 const std::string& out) {
    const ExponentResult res = exponent_experiment(ga.spec(), nmin, nmax,
                                                   parse_estimator(estimator), mc_ensemble,
                                                   seed, workers);
    Config cfg;
    ga.describe(cfg);
    cfg["command"] = "exponent";
    cfg["estimator"] = estimator;
    cfg["nmin"] = std::to_string(nmin);
    cfg["nmax"] = std::to_string(nmax);
    cfg["seed"] = std::to_string(seed);
    if (!out.empty()) {
        CsvWriter csv(out, cfg,
                      {"slope", "intercept", "r2", "n_lo", "n_hi", "points", "target",
                       "variance_flag"});
        csv.row({format_number(res.fit.slope), format_number(res.fit.intercept),
                 format_number(res.fit.r2), format_number(nmin), format_number(nmax),
                 format_number(static_cast<std::int64_t>(res.points.size())),
                 format_number(res.target),
                 format_number(static_cast<std::int64_t>(res.variance_flag ? 1 : 0))});
    }
    std::printf("exponent fit: slope=%.4f r2=%.5f target=%.4f estimator=%s%s\n", res.fit.slope,
                res.fit.r2, res.target, res.estimator.c_str(),
                res.variance_flag ? " [variance flag]" : "");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lamplighter random-walk laboratory"};
    app.require_subcommand(1);
    app.fallthrough(); // subcommands pass --config etc. up to the app

    std::string config_path, out = "out.csv";
    std::uint64_t seed = 1;
    int workers = 1;
    app.add_option("--config", config_path, "key = value config file")
        ->configurable(false);

    // generate
    auto* gen = app.add_subcommand("generate", "build a graph and save the edge list");
    GraphArgs gen_ga;
    gen_ga.attach(gen);
    auto* gen_out = gen->add_option("--out", out, "output edge-list path");

    // walk / lamplighter
    GraphArgs walk_ga, lamp_ga, heat_ga, res_ga, lil_ga, exp_ga;
    std::int64_t steps = 1000, start = -1, ensemble = 1;
    std::string cps_text;
    bool force = false;

    auto* walk = app.add_subcommand("walk", "simulate base random walks");
    walk_ga.attach(walk);
    auto* w_steps = walk->add_option("--steps", steps, "number of steps");
    auto* w_start = walk->add_option("--start", start, "start vertex (-1 = deepest interior)");
    auto* w_ens = walk->add_option("--ensemble", ensemble, "trajectory count");
    auto* w_seed = walk->add_option("--seed", seed, "master seed");
    auto* w_workers = walk->add_option("--workers", workers, "worker threads");
    auto* w_cps = walk->add_option("--checkpoints", cps_text, "dyadic|final|comma list");
    walk->add_flag("--force", force, "override the boundary guard");
    auto* w_out = walk->add_option("--out", out, "output CSV");

    auto* lamp = app.add_subcommand("lamplighter", "simulate switch-walk-switch walks");
    lamp_ga.attach(lamp);
    auto* l_steps = lamp->add_option("--steps", steps, "number of steps");
    auto* l_start = lamp->add_option("--start", start, "start vertex (-1 = deepest interior)");
    auto* l_ens = lamp->add_option("--ensemble", ensemble, "trajectory count");
    auto* l_seed = lamp->add_option("--seed", seed, "master seed");
    auto* l_workers = lamp->add_option("--workers", workers, "worker threads");
    auto* l_cps = lamp->add_option("--checkpoints", cps_text, "dyadic|final|comma list");
    lamp->add_flag("--force", force, "override the boundary guard");
    auto* l_out = lamp->add_option("--out", out, "output CSV");

    auto* heat = app.add_subcommand("heatkernel", "exact n-step kernel series");
    heat_ga.attach(heat);
    std::int64_t nmax = 1024;
    auto* h_start = heat->add_option("--start", start, "base vertex (-1 = deepest interior)");
    auto* h_nmax = heat->add_option("--nmax", nmax, "half-horizon; series reaches p_{2 nmax}");
    heat->add_flag("--force", force, "override the boundary guard");
    auto* h_out = heat->add_option("--out", out, "output CSV");

    auto* resist = app.add_subcommand("resistance", "rho(x,n) growth by Laplace solves");
    res_ga.attach(resist);
    std::string radii_text;
    std::int64_t center = -1;
    auto* r_center = resist->add_option("--center", center, "center vertex");
    auto* r_radii = resist->add_option("--radii", radii_text, "comma list of radii");
    auto* r_out = resist->add_option("--out", out, "output CSV");

    auto* lil = app.add_subcommand("lil", "LIL band statistics");
    lil_ga.attach(lil);
    std::string functional = "range-sup";
    double ds2 = 0.5;
    auto* lb_f = lil->add_option("--functional", functional,
                                 "range-sup|range-inf|loc-time-sup|loc-time-inf|"
                                 "lamp-dist-sup|lamp-dist-inf|transient-ratio");
    auto* lb_ds2 = lil->add_option("--ds2", ds2, "spectral dimension over two");
    auto* lb_ens = lil->add_option("--ensemble", ensemble, "trajectory count");
    auto* lb_nmax = lil->add_option("--nmax", nmax, "largest checkpoint");
    auto* lb_seed = lil->add_option("--seed", seed, "master seed");
    auto* lb_workers = lil->add_option("--workers", workers, "worker threads");
    lil->add_flag("--force", force, "override the boundary guard");
    auto* lb_out = lil->add_option("--out", out, "output CSV");

    auto* sand = app.add_subcommand("sandwich-audit", "distance sandwich audit rows");
    int graphs = 20, size = 8;
    std::int64_t per_graph = 10;
    auto* s_graphs = sand->add_option("--graphs", graphs, "number of random graphs");
    auto* s_size = sand->add_option("--size", size, "vertices per graph (2..16)");
    auto* s_steps = sand->add_option("--steps", steps, "steps per trajectory");
    auto* s_per = sand->add_option("--per-graph", per_graph, "trajectories per graph");
    auto* s_seed = sand->add_option("--seed", seed, "master seed");
    auto* s_workers = sand->add_option("--workers", workers, "worker threads");
    auto* s_out = sand->add_option("--out", out, "output CSV");

    auto* expo = app.add_subcommand("exponent", "stretched-exponential return exponent fit");
    exp_ga.attach(expo);
    std::string estimator = "collapsed";
    std::int64_t nmin = 1000;
    std::int64_t mc_ensemble = 100000;
    auto* e_est = expo->add_option("--estimator", estimator, "collapsed|exact-kernel");
    auto* e_nmin = expo->add_option("--nmin", nmin, "window start (p_{2n})");
    auto* e_nmax = expo->add_option("--nmax", nmax, "window end");
    auto* e_mc = expo->add_option("--mc-ensemble", mc_ensemble, "MC sample count");
    auto* e_seed = expo->add_option("--seed", seed, "master seed");
    auto* e_workers = expo->add_option("--workers", workers, "worker threads");
    auto* e_out = expo->add_option("--out", out, "output CSV (optional)");

    try {
        app.parse(argc, argv);
        const Config cfg = load_config(config_path);
        auto mi = [&](const CLI::Option* o, const char* k, auto& v) { merge_key(o, cfg, k, v); };

        if (gen->parsed()) {
            gen_ga.merge(cfg);
            mi(gen_out, "out", out);
            return cmd_generate(gen_ga, out);
        }
        if (walk->parsed() || lamp->parsed()) {
            const bool lamps = lamp->parsed();
            GraphArgs& ga = lamps ? lamp_ga : walk_ga;
            ga.merge(cfg);
            mi(lamps ? l_steps : w_steps, "steps", steps);
            mi(lamps ? l_start : w_start, "start", start);
            mi(lamps ? l_ens : w_ens, "ensemble", ensemble);
            mi(lamps ? l_seed : w_seed, "seed", seed);
            mi(lamps ? l_workers : w_workers, "workers", workers);
            mi(lamps ? l_cps : w_cps, "checkpoints", cps_text);
            mi(lamps ? l_out : w_out, "out", out);
            return cmd_walk(ga, steps, start, ensemble, seed, workers, cps_text, lamps, force,
                            out);
        }
        if (heat->parsed()) {
            heat_ga.merge(cfg);
            mi(h_start, "start", start);
            mi(h_nmax, "nmax", nmax);
            mi(h_out, "out", out);
            return cmd_heatkernel(heat_ga, start, nmax, force, out);
        }
        if (resist->parsed()) {
            res_ga.merge(cfg);
            mi(r_center, "center", center);
            mi(r_radii, "radii", radii_text);
            mi(r_out, "out", out);
            return cmd_resistance(res_ga, center, radii_text, out);
        }
        if (lil->parsed()) {
            lil_ga.merge(cfg);
            mi(lb_f, "functional", functional);
            mi(lb_ds2, "ds2", ds2);
            mi(lb_ens, "ensemble", ensemble);
            mi(lb_nmax, "nmax", nmax);
            mi(lb_seed, "seed", seed);
            mi(lb_workers, "workers", workers);
            mi(lb_out, "out", out);
            return cmd_lil(lil_ga, functional, ds2, ensemble, nmax, seed, workers, force, out);
        }
        if (sand->parsed()) {
            mi(s_graphs, "graphs", graphs);
            mi(s_size, "size", size);
            mi(s_steps, "steps", steps);
            mi(s_per, "per_graph", per_graph);
            mi(s_seed, "seed", seed);
            mi(s_workers, "workers", workers);
            mi(s_out, "out", out);
            return cmd_sandwich(graphs, size, steps, per_graph, seed, workers, out);
        }
        if (expo->parsed()) {
            exp_ga.merge(cfg);
            mi(e_est, "estimator", estimator);
            mi(e_nmin, "nmin", nmin);
            mi(e_nmax, "nmax", nmax);
            mi(e_mc, "mc_ensemble", mc_ensemble);
            mi(e_seed, "seed", seed);
            mi(e_workers, "workers", workers);
            mi(e_out, "out", out);
            return cmd_exponent(exp_ga, estimator, nmin, nmax, mc_ensemble, seed, workers, out);
        }
        std::fprintf(stderr, "no subcommand\n");
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 2;
    }
}
