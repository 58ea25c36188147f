#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shearlab/semigroup_norms.hpp"

using namespace shearlab;
namespace {
constexpr double kPi = std::numbers::pi;

Trajectory viscous_run(double M, double gamma, double band_cells, double T,
                       double dt_scale = 1.0, int nsnap = 40) {
    auto p = make_viscous_params(M, gamma, 0.05);
    auto grid = make_grid(-band_cells / gamma - 1.0, T + 5.0 / gamma + 1.0, 0.25);
    auto s = init_band(grid, band_cells / gamma);
    EvolutionConfig cfg;
    cfg.variant = EvolutionVariant::ModifiedViscous;
    cfg.dt = EvolutionConfig::max_dt(p) * dt_scale;
    for (int i = 1; i < nsnap; ++i) cfg.snapshot_times.push_back(T * i / nsnap);
    return evolve(s, cfg, p, T);
}
}  // namespace

TEST_CASE("ghost weight bounds") {
    for (double t : {0.0, 3.0, 100.0})
        for (int i = -50; i <= 50; ++i) {
            const double w = ghost_weight(t, i * 2.0, 1);
            CHECK(w >= std::exp(-kPi));
            CHECK(w <= std::exp(kPi));
        }
}

TEST_CASE("ghost energy: zero state, indicator oracle, weight envelope") {
    auto grid = make_grid(-10.0, 10.0, 0.005);
    ModeState z;
    z.k = 1;
    z.t = 0.0;
    z.grid = grid;
    z.values.assign(grid.n, cplx{0.0, 0.0});
    CHECK(ghost_energy(z) == 0.0);

    auto s = init_band(grid, 1.0);
    // oracle: high-resolution Simpson of int_{-1}^{1} e^{2 atan xi} dxi
    const int N = 200001;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double xi = -1.0 + 2.0 * i / (N - 1);
        const double w = (i == 0 || i == N - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * std::exp(2.0 * std::atan(xi));
    }
    acc *= (2.0 / (N - 1)) / 3.0;
    CHECK(ghost_energy(s) == doctest::Approx(acc).epsilon(5e-3));  // band-edge trapezoid slack
    const double l2sq = s.l2_xi() * s.l2_xi();
    CHECK(ghost_energy(s) >= std::exp(-kPi) * l2sq);
    CHECK(ghost_energy(s) <= std::exp(kPi) * l2sq);
}

TEST_CASE("C0 calibration: zero for Couette, stable for the viscous preset") {
    auto p0 = make_free_params(0.0, 0.1, std::pow(0.1, 3.0), 0.0, 0.0, 1.0, 0.0);
    auto grid = make_grid(-5.0, 10.0 + 51.0, 0.25);
    auto s = init_band(grid, 4.0);
    EvolutionConfig cfg;
    cfg.variant = EvolutionVariant::ModifiedViscous;
    for (int i = 1; i < 20; ++i) cfg.snapshot_times.push_back(0.5 * i);
    auto traj0 = evolve(s, cfg, p0, 10.0);
    CHECK(calibrate_C0(traj0) == 0.0);

    auto t1 = viscous_run(5.0, 0.1, 4.0, 20.0);
    const double C0 = calibrate_C0(t1);
    CHECK(C0 > 0.0);
    CHECK(std::isfinite(C0));
    // monotonicity holds at the calibrated C0
    const auto& p = t1.params;
    double prev = 1e300;
    for (const auto& snap : t1.snapshots) {
        const double e = std::exp(-C0 * p.M * p.M * p.gamma * snap.t) * ghost_energy(snap);
        CHECK(e <= prev * (1.0 + 1e-10));
        prev = e;
    }
    // dt-halving stability within 5%
    auto t2 = viscous_run(5.0, 0.1, 4.0, 20.0, 0.5);
    CHECK(calibrate_C0(t2) == doctest::Approx(C0).epsilon(0.05));
    // band-width dependence is reported, not asserted: at desk gamma the
    // calibrated C0 shrinks as the band widens (both stay finite and positive)
    auto t3 = viscous_run(5.0, 0.1, 2.0, 20.0);
    const double C0n = calibrate_C0(t3);
    CHECK(C0n > 0.0);
    CHECK(std::isfinite(C0n));
}

TEST_CASE("prop41 suite: zero data, M=0 oracle agreement, T growth") {
    auto p = make_free_params(0.0, 0.1, 1e-3, 0.0, 0.0, 1.0, 0.0);
    auto grid = make_grid(-5.0, 20.0 + 51.0, 0.25);
    ModeState z;
    z.k = 1;
    z.t = 0.0;
    z.grid = grid;
    z.values.assign(grid.n, cplx{0.0, 0.0});
    EvolutionConfig cfg;
    cfg.variant = EvolutionVariant::ModifiedViscous;
    for (int i = 1; i < 30; ++i) cfg.snapshot_times.push_back(20.0 * i / 30.0);
    auto tz = evolve(z, cfg, p, 20.0);
    auto rep0 = prop41_suite(tz);
    for (double v : rep0.lhs) CHECK(v == 0.0);

    // M=0: evolved snapshots equal the closed form, so the suite constants
    // must match those computed from analytically constructed snapshots.
    auto s = init_band(grid, 4.0);
    auto traj = evolve(s, cfg, p, 20.0);
    Trajectory exact = traj;
    for (auto& snap : exact.snapshots)
        for (int i = 0; i < grid.n; ++i)
            snap.values[i] = s.values[i] * couette_exact_factor(p, 1, grid.xi(i), snap.t);
    auto r1 = prop41_suite(traj);
    auto r2 = prop41_suite(exact);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::isfinite(r1.C1[i]));
        CHECK(r1.C1[i] > 0.0);
        CHECK(r1.C1[i] == doctest::Approx(r2.C1[i]).epsilon(0.02));
    }

    // doubling T leaves the constants bounded
    auto tA = viscous_run(5.0, 0.1, 4.0, 15.0);
    auto tB = viscous_run(5.0, 0.1, 4.0, 30.0);
    auto rA = prop41_suite(tA);
    auto rB = prop41_suite(tB);
    for (int i = 0; i < 5; ++i) CHECK(rB.C1[i] <= 1.6 * rA.C1[i] + 1e-12);
}

TEST_CASE("cl_norm on a single-mode field") {
    // f = 2 cos(x) g(y): modes +-1 each carry g; FL1_k L2_y = 2 ||g||_{L2}
    const int ny = 2001;
    std::vector<double> ygrid(ny);
    for (int i = 0; i < ny; ++i) ygrid[i] = -10.0 + 20.0 * i / (ny - 1);
    auto f = PhysicalField::make({0.0, 1.0}, {-1, 1}, ygrid);
    double gl2 = 0.0;
    for (int i = 0; i < ny; ++i) {
        const double g = std::exp(-ygrid[i] * ygrid[i]);
        f.data[0][0][i] = f.data[0][1][i] = g;
        f.data[1][0][i] = f.data[1][1][i] = g;
        const double w = (i == 0 || i == ny - 1) ? 0.5 : 1.0;
        gl2 += w * g * g;
    }
    gl2 = std::sqrt(gl2 * (ygrid[1] - ygrid[0]));
    CHECK(cl_norm(f, 0, 2) == doctest::Approx(2.0 * gl2).epsilon(1e-12));
    // zero field
    auto z = PhysicalField::make({0.0, 1.0}, {0}, ygrid);
    CHECK(cl_norm(z, 1, 2) == 0.0);
}

TEST_CASE("bilinear inequality: identity, randomized, single mode") {
    const int ny = 301;
    std::vector<double> ygrid(ny);
    for (int i = 0; i < ny; ++i) ygrid[i] = -6.0 + 12.0 * i / (ny - 1);
    // g == 1 zero mode: reduces to norm homogeneity (equality)
    auto f = random_field(7, 2, 9, ny, 3.0, 6.0);
    auto one = PhysicalField::make(f.times, {0}, ygrid);
    for (auto& t : one.data)
        for (auto& kk : t)
            for (auto& v : kk) v = 1.0;
    const auto fg = field_multiply(f, one);
    CHECK(cl_norm(fg, 2, 2) == doctest::Approx(cl_norm(f, 2, 2)).epsilon(1e-12));
    CHECK(bilinear_check(f, one, 2, 2, 0, 0));

    // randomized property: 100 seeded trials across exponent splits
    int pass = 0;
    for (unsigned seed = 0; seed < 100; ++seed) {
        auto a = random_field(seed * 2 + 1, 2, 7, ny, 2.0, 6.0);
        auto b = random_field(seed * 2 + 2, 2, 7, ny, 2.0, 6.0);
        const int splits[4][4] = {{2, 2, 2, 2}, {0, 2, 2, 2}, {2, 0, 2, 2}, {0, 0, 2, 2}};
        bool ok = true;
        for (const auto& sp : splits)
            ok = ok && bilinear_check(a, b, sp[0], sp[2], sp[1], sp[3]);
        pass += ok;
    }
    CHECK(pass == 100);

    // f = g single mode: ||f^2||_{FL1 L1} <= ||f||^2_{FL1 L2}
    auto s = random_field(42, 1, 7, ny, 2.0, 6.0);
    CHECK(bilinear_check(s, s, 2, 2, 2, 2));

    // incompatible split
    CHECK_THROWS_AS(bilinear_check(f, f, 1, 2, 1, 2), std::invalid_argument);
}
