#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lamplab/experiments.hpp"
#include "lamplab/generators.hpp"
#include "lamplab/lamplighter.hpp"
#include "support/oracles.hpp"

using namespace lamplab;

namespace {

GeneratorSpec line_spec(int radius) {
    GeneratorSpec s;
    s.family = GraphFamily::lattice;
    s.dim = 1;
    s.level = radius;
    return s;
}

} // namespace

TEST_CASE("collapsed exponent fit on the line sits near 1/3") {
    const ExponentResult res =
        exponent_experiment(line_spec(4), 1000, 100000, ExponentEstimator::collapsed);
    CHECK(res.target == doctest::Approx(1.0 / 3.0));
    CHECK(res.fit.slope > 0.28);
    CHECK(res.fit.slope < 0.39);
    CHECK(res.fit.r2 > 0.999);
    CHECK_FALSE(res.variance_flag);

    CHECK_THROWS_AS(exponent_experiment(line_spec(4), 1000, 4000,
                                        ExponentEstimator::collapsed),
                    std::invalid_argument); // 3-point window
}

TEST_CASE("exact-kernel estimator matches path enumeration on tiny graphs") {
    GeneratorSpec p3 = line_spec(1); // path on 3 vertices, center start
    const ExponentResult res =
        exponent_experiment(p3, 2, 16, ExponentEstimator::exact_kernel);
    const WeightedGraph g = p3.build();
    const Vertex center = deepest_interior_vertex(g);
    REQUIRE(center == 1);
    for (const ExponentPoint& pt : res.points) {
        if (pt.n > 6) continue; // enumeration cost 2^(2n)
        const auto oracle_val =
            oracle::enumerate_collapsed(g, center, static_cast<int>(2 * pt.n));
        CHECK(pt.p == doctest::Approx(oracle_val.diag).epsilon(1e-12));
    }
    CHECK_THROWS_AS(
        exponent_experiment(line_spec(20), 2, 16, ExponentEstimator::exact_kernel),
        std::invalid_argument); // base graph too large for enumeration
}

TEST_CASE("MC exponent flags noisy points") {
    // dim 1 uses the exact series and stays clean
    const ExponentResult res = exponent_experiment(line_spec(400), 64, 1024,
                                                   ExponentEstimator::collapsed, 2000, 5);
    CHECK_FALSE(res.variance_flag);

    // other families go through Monte Carlo, whose variance blows up with n
    GeneratorSpec gasket;
    gasket.family = GraphFamily::gasket;
    gasket.level = 5;
    const ExponentResult mc = exponent_experiment(gasket, 4, 64,
                                                  ExponentEstimator::collapsed, 20000, 5, 2);
    CHECK(mc.estimator == "collapsed");
    CHECK(mc.variance_flag);
}

TEST_CASE("lil scale formulas") {
    const double n = 100000.0;
    const double ll = std::log(std::log(n));
    CHECK(lil_scale(LilFunctional::range_sup, 0.5, 100000) ==
          doctest::Approx(std::sqrt(n) * std::sqrt(ll)));
    CHECK(lil_scale(LilFunctional::range_inf, 0.5, 100000) ==
          doctest::Approx(std::sqrt(n) / std::sqrt(ll)));
    CHECK(lil_scale(LilFunctional::loctime_sup, 0.5, 100000) ==
          doctest::Approx(std::sqrt(n) * std::sqrt(ll)));
    CHECK(lil_scale(LilFunctional::loctime_inf, 0.5, 100000) ==
          doctest::Approx(std::sqrt(n) / std::sqrt(ll)));
    CHECK(lil_scale(LilFunctional::transient_ratio, 0.5, 100000) == doctest::Approx(n));
    CHECK_THROWS_AS(lil_scale(LilFunctional::range_sup, 0.5, 8), std::invalid_argument);

    // synthetic trajectory R_n = n: the scaled statistic is exactly
    // n^{1/2} (loglog n)^{-1/2}
    CheckpointRow row;
    row.n = 100000;
    row.range = 100000;
    const double scaled = lil_value(LilFunctional::range_sup, row) /
                          lil_scale(LilFunctional::range_sup, 0.5, row.n);
    CHECK(scaled == doctest::Approx(std::sqrt(n) / std::sqrt(ll)));
}

TEST_CASE("lil bands on the line are stable and deterministic") {
    const auto cps = dyadic_checkpoints(1 << 14);
    const LILStatistic a = lil_bands(line_spec(500), 0.5, LilFunctional::range_sup, 80, cps,
                                     2024, 1);
    const LILStatistic b = lil_bands(line_spec(500), 0.5, LilFunctional::range_sup, 80, cps,
                                     2024, 2);
    REQUIRE(a.bands.size() == cps.size());
    for (std::size_t k = 0; k < a.bands.size(); ++k) {
        CHECK(a.bands[k].q05 == b.bands[k].q05); // worker-count independent
        CHECK(a.bands[k].q95 == b.bands[k].q95);
        CHECK(a.bands[k].q05 > 0.0);
    }
    // running max never decreases
    for (const auto& traj : a.running_extremum)
        for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj[k] >= traj[k - 1]);
    CHECK(a.bands_overlap(a.bands.size() - 2, a.bands.size() - 1));
}

TEST_CASE("range scaling: synthetic ratio and a short real run") {
    for (std::int64_t n : {10000L, 1000000L})
        CHECK(range_ratio(M_PI * static_cast<double>(n) / std::log(static_cast<double>(n)), n) ==
              doctest::Approx(1.0));

    const RangeScalingResult real = z2_range_scaling(0, {1000, 10000}, 60, 77, 2);
    REQUIRE(real.points.size() == 2);
    CHECK(real.points[1].ratio > 0.5);
    CHECK(real.points[1].ratio < 1.2);
    CHECK(real.boundary_touches == 0);

    const RangeScalingResult again = z2_range_scaling(0, {1000, 10000}, 60, 77, 1);
    CHECK(again.points[0].mean_range == real.points[0].mean_range); // determinism

    CHECK_THROWS_AS(z2_range_scaling(50, {10000}, 60, 1, 1), std::invalid_argument);
}

TEST_CASE("sandwich audit finds no violations") {
    const SandwichAudit audit = sandwich_audit(12, 8, 64, dyadic_checkpoints(64, 4), 6, 99, 2);
    CHECK(audit.rows.size() == 12 * 6 * dyadic_checkpoints(64, 4).size());
    CHECK(audit.violations_lower == 0);
    CHECK(audit.violations_upper == 0);
    CHECK(audit.violations_cap == 0);

    const SandwichAudit rerun = sandwich_audit(12, 8, 64, dyadic_checkpoints(64, 4), 6, 99, 1);
    REQUIRE(rerun.rows.size() == audit.rows.size());
    for (std::size_t i = 0; i < audit.rows.size(); ++i)
        CHECK(rerun.rows[i].exact == audit.rows[i].exact);
}

TEST_CASE("low-lamp fraction is tiny at moderate n") {
    CHECK(prop52_low_lamp_fraction(10000, 100, 31, 2) <= 0.05);
}

TEST_CASE("independently fitted exponents satisfy d_s/2 = d_f/d_w on lattices") {
    // d_f from ball volumes, d_w from confinement, d_s/2 from the kernel
    const WeightedGraph line = make_lattice(1, 3000);
    const GraphStats ls = graph_stats(line, {3000}, 512, 16);
    const DwConfinementFit ld = estimate_dw_confinement(line, 3000, {8, 16, 32}, 2.0);
    const HeatKernelResult lk = heat_kernel_exact(line, 3000, 2048);
    const FitResult lf = spectral_dim_fit(lk.diag, 64, 2048);
    CHECK(std::abs(lf.slope - ls.df_fit.slope / ld.dw) <= 0.05);

    const WeightedGraph box = make_lattice(2, 220);
    const Vertex c = (441 * 441 - 1) / 2;
    const GraphStats bs = graph_stats(box, {c}, 128, 16);
    const DwConfinementFit bd = estimate_dw_confinement(box, c, {8, 16, 32}, 2.0);
    const HeatKernelResult bk = heat_kernel_exact(box, c, 1024);
    const FitResult bf = spectral_dim_fit(bk.diag, 64, 1024);
    CHECK(std::abs(bf.slope - bs.df_fit.slope / bd.dw) <= 0.05);
}

TEST_CASE("walk dimension estimators on the line and the gasket") {
    const WeightedGraph line = make_lattice(1, 3000);
    const DwConfinementFit lf = estimate_dw_confinement(line, 3000, {8, 16, 32}, 2.0);
    CHECK(lf.dw == doctest::Approx(2.0).epsilon(0.05));
    for (double r2 : lf.fit_r2) CHECK(r2 > 0.99);

    const WeightedGraph gasket = make_gasket(7);
    const Vertex c = deepest_interior_vertex(gasket);
    const DwConfinementFit gf = estimate_dw_confinement(gasket, c, {4, 8, 16}, 2.3219);
    CHECK(gf.dw == doctest::Approx(std::log(5.0) / std::log(2.0)).epsilon(0.08));

    const DwResistanceFit rf = estimate_dw_resistance(gasket, c, {2, 4, 8, 16, 32},
                                                      std::log(3.0) / std::log(2.0));
    CHECK(rf.dw == doctest::Approx(std::log(5.0) / std::log(2.0)).epsilon(0.08));
}
