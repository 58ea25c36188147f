#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shearlab/complex_erf.hpp"
#include "shearlab/rayleigh.hpp"

using namespace shearlab;
namespace {
constexpr double kPi = std::numbers::pi;

RayleighConfig m0_cfg() {
    RayleighConfig cfg;
    cfg.M = 0.0;
    cfg.gamma = 0.1;
    return cfg;
}

RayleighConfig desk_cfg() {
    RayleighConfig cfg;
    cfg.M = 20.0;
    cfg.gamma = 0.02;
    return cfg;
}
}  // namespace

TEST_CASE("complex erf reference values") {
    auto close = [](cd a, cd b, double tol) { return std::abs(a - b) <= tol; };
    CHECK(close(complex_erf({1.0, 1.0}), {1.316151281697948, 0.1904534692378346}, 1e-12));
    CHECK(close(complex_erf({2.5, -0.7}), {1.000533059170744, 0.0003659618036248685}, 1e-12));
    CHECK(close(complex_erf({0.3, 3.0}), {1467.690283218233, -166.5609245255573}, 1e-9));
    CHECK(close(complex_erf({-1.2, 0.4}), {-0.9617239319807712, 0.09565958435283001}, 1e-12));
    CHECK(close(faddeeva_w({1.0, 0.5}), {0.35490033286757783, 0.3428717191311008}, 1e-13));
    // real axis agrees with std::erf
    for (double x : {-3.0, -0.5, 0.0, 0.7, 4.2})
        CHECK(close(complex_erf({x, 0.0}), {std::erf(x), 0.0}, 1e-14));
}

TEST_CASE("phi1 at M=0 is sinh(x)/x") {
    auto cfg = m0_cfg();
    const double cr = 0.3;
    auto sol = solve_phi1(cfg, cr);
    const int n = static_cast<int>(sol.y.size());
    double max_rel = 0.0, max_F = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sol.y[i] - cr;
        if (std::abs(x) > 8.0) continue;
        const double exact = (std::abs(x) < 1e-12) ? 1.0 : std::sinh(x) / x;
        max_rel = std::max(max_rel, std::abs(sol.phi1[i] - exact) / exact);
        if (std::abs(x) > 1e-12) {
            const double Fex = 1.0 / std::tanh(x) - 1.0 / x;
            max_F = std::max(max_F, std::abs(sol.F[i] - Fex));
        }
    }
    CHECK(max_rel < 1e-8);
    CHECK(max_F < 1e-8);
    // C4 = min_{|x|>=1} |F| = coth(1) - 1
    CHECK(sol.C4 == doctest::Approx(1.0 / std::tanh(1.0) - 1.0).epsilon(1e-6));
    // Volterra cross-check agrees
    CHECK(phi1_volterra_residual(cfg, sol, 4.0) < 1e-7);
}

TEST_CASE("phi1 invariants hold across the desk c_r grid") {
    auto cfg = desk_cfg();
    const auto regions = ExclusionRegions::from(cfg);
    for (int i = 0; i <= 40; ++i) {
        const double cr = -regions.cr_max + 2.0 * regions.cr_max * i / 40.0;
        CHECK_NOTHROW(solve_phi1(cfg, cr));  // invariants asserted inside
    }
    auto sol = solve_phi1(cfg, 0.01);
    CHECK(phi1_volterra_residual(cfg, sol, 3.0) < 1e-6);
}

TEST_CASE("phi2: limits, scaling, conjugation") {
    auto cfg = desk_cfg();
    auto p1 = solve_phi1(cfg, 0.0);
    // c_i -> 0: phi2 -> 1 with ||phi2 - 1|| <= C |c_i|, C stable
    double Cs[3];
    int k = 0;
    for (double ci : {1e-2, 1e-3, 1e-4}) {
        auto p2 = solve_phi2(cfg, p1, cd{0.0, ci});
        Cs[k++] = p2.sup_dev / ci;
        const int ic = p1.center();
        CHECK(std::abs(p2.phi2[ic] - 1.0) < 1e-12);
        CHECK(std::abs(p2.phi2_prime[ic]) < 1e-10);
    }
    CHECK(Cs[1] == doctest::Approx(Cs[0]).epsilon(0.15));
    CHECK(Cs[2] == doctest::Approx(Cs[1]).epsilon(0.15));
    // conjugation symmetry
    auto pa = solve_phi2(cfg, p1, cd{0.0, 0.05});
    auto pb = solve_phi2(cfg, p1, cd{0.0, -0.05});
    double dmax = 0.0;
    for (std::size_t i = 0; i < pa.phi2.size(); ++i)
        dmax = std::max(dmax, std::abs(std::conj(pa.phi2[i]) - pb.phi2[i]));
    CHECK(dmax < 1e-12);
    // |Im c| guard
    CHECK_THROWS_AS(solve_phi2(cfg, p1, cd{0.0, 0.9}), std::invalid_argument);
}

TEST_CASE("M=0 Wronskian is -2 everywhere off the axis") {
    auto cfg = m0_cfg();
    const cd samples[] = {
        {0.3, 0.01},  {-0.1, 0.5},  {0.0, 2.0},   {0.2, 5.0},  {0.1, 1e-4},
        {0.05, 0.02}, {-1.5, 0.7},  {0.0, -0.3},  {1.0, 1e-3}, {-2.0, 1e-3},
        {0.5, -1e-4}, {2.5, 0.25},  {-0.7, -1.2}, {0.9, 3.3},  {1.7, 0.08},
        {-0.4, 0.04}, {0.6, -0.6},  {-1.0, 1.0},  {0.05, 4.0}, {1.2, 0.35}};
    for (const auto& c : samples) {
        const auto w = wronskian_D(cfg, c);
        CHECK(std::abs(w.D - cd{-2.0, 0.0}) < 1e-7);
        CHECK(w.tail_estimate < 1e-9 * std::abs(w.D) + 1e-12);
    }
}

TEST_CASE("D conjugation symmetry and analyticity proxy") {
    auto cfg = desk_cfg();
    const cd c{0.01, 0.12};
    const auto Da = wronskian_D(cfg, c).D;
    const auto Db = wronskian_D(cfg, std::conj(c)).D;
    CHECK(std::abs(std::conj(Da) - Db) < 1e-9 * std::abs(Da));
    CHECK(cr_residual(cfg, c) < 1e-5);
}

TEST_CASE("M=0 J functions: Pi1=0, Pi2=-2, J1=-2, J2=0, scan min 4") {
    auto cfg = m0_cfg();
    auto J = j_functions(cfg, 0.2);
    CHECK(std::abs(J.Pi1) < 1e-8);
    CHECK(J.Pi2 == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(J.J1 == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(J.J2 == 0.0);
    auto scan = embedded_scan(cfg, 11);
    CHECK(scan.min_J1sq_plus_J2sq == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("Lemma 5.4 limit: D(c_r + i eps) matches J1 -+ i J2") {
    auto cfg = desk_cfg();
    for (double cr : {0.0, 0.03, -0.06}) {
        const auto J = j_functions(cfg, cr);
        const double tol = 1e-2 * (1.0 + std::abs(J.J1) + std::abs(J.J2));
        const auto Dp = wronskian_D(cfg, cd{cr, 1e-4}).D;
        const auto Dm = wronskian_D(cfg, cd{cr, -1e-4}).D;
        CHECK(std::abs(Dp - cd{J.J1, -J.J2}) < tol);
        CHECK(std::abs(Dm - cd{J.J1, +J.J2}) < tol);
        if (std::abs(J.J2) > 1e-4) CHECK(Dp.imag() * Dm.imag() < 0.0);
    }
}

TEST_CASE("embedded scan at desk scale: no embedded eigenvalue") {
    auto cfg = desk_cfg();
    auto scan = embedded_scan(cfg, 21);
    CHECK(scan.min_J1sq_plus_J2sq > 0.0);
    CHECK(scan.J2_at_zero == 0.0);  // b0'' vanishes at 0 by symmetry
    // J1(0) grows with M
    RayleighConfig cfg40 = cfg;
    cfg40.M = 40.0;
    CHECK(j_functions(cfg40, 0.0).J1 > j_functions(cfg, 0.0).J1);
}

TEST_CASE("matrix oracle and winding count at M=20, gamma=0.02") {
    auto cfg = desk_cfg();
    auto oracle = matrix_oracle(cfg, 601);
    REQUIRE(!oracle.eigenvalues.empty());
    // conjugate pair with positive and negative imaginary parts
    bool has_pos = false, has_neg = false;
    for (const auto& ev : oracle.eigenvalues) {
        if (ev.imag() > 0) has_pos = true;
        if (ev.imag() < 0) has_neg = true;
    }
    CHECK(has_pos);
    CHECK(has_neg);
    // Richardson stability: coarse and fine runs agree to 1e-3 after pairing
    cd coarse_top, fine_top;
    double best = 1e300;
    for (const auto& e : oracle.raw_coarse)
        if (e.imag() > 0 && e.imag() < best) void();
    // top unstable mode of each resolution
    auto top = [](const std::vector<cd>& v) {
        cd t{0.0, 0.0};
        for (const auto& e : v)
            if (e.imag() > t.imag()) t = e;
        return t;
    };
    coarse_top = top(oracle.raw_coarse);
    fine_top = top(oracle.raw_fine);
    CHECK(std::abs(coarse_top - fine_top) / std::abs(fine_top) < 1e-3);

    auto result = count_and_refine(cfg, &oracle.eigenvalues);
    CHECK(result.winding_upper >= 1);
    CHECK(!result.basin_collision);
    REQUIRE(result.roots.size() >= 1);
    const auto regions = ExclusionRegions::from(cfg);
    for (const auto& r : result.roots) {
        CHECK(r.abs_D < 1e-8);
        CHECK(r.in_E);
        CHECK(regions.classify(r.c) == 0);
        CHECK(r.c.imag() >= cfg.gamma);
        CHECK(r.c.imag() <= 8.0 * std::sqrt(kPi) * cfg.M * cfg.gamma);
        CHECK(std::abs(r.c.real()) <= regions.cr_max);
        CHECK(r.oracle_rel_diff < 1e-3);
        CHECK(r.eigenfunction_residual < 1e-6);
    }
    // oracle output lies outside the exclusion regions
    for (const auto& ev : oracle.eigenvalues)
        if (ev.imag() > 0) CHECK(regions.classify(ev) == 0);
}

TEST_CASE("M=0 count is zero") {
    auto cfg = m0_cfg();
    auto result = count_and_refine(cfg, nullptr);
    CHECK(result.winding_upper == 0);
    CHECK(result.roots.empty());
}

TEST_CASE("semigroup growth rates") {
    auto cfg0 = m0_cfg();
    auto rep0 = semigroup_growth(cfg0, 60.0, 401);
    CHECK(std::abs(rep0.rate) < 0.01 * cfg0.gamma);
    CHECK(rep0.norm_ratio <= 2.0);

    auto cfg = desk_cfg();
    auto rep = semigroup_growth(cfg, 120.0, 601);
    CHECK(rep.ci_star > 0.0);
    CHECK(rep.rate == doctest::Approx(rep.ci_star).epsilon(0.05));
    CHECK(rep.rate >= cfg.gamma);
}

TEST_CASE("inhomogeneous solution and mu limits") {
    auto cfg = desk_cfg();
    auto w_in = [](double y) { return std::exp(-y * y); };
    std::function<double(double)> f = w_in;

    // zero data
    std::function<double(double)> zero = [](double) { return 0.0; };
    auto z = inhomogeneous_phi(cfg, zero, cd{0.0, 0.05});
    CHECK(std::abs(z.mu) == 0.0);
    for (const auto& v : z.Phi) CHECK(std::abs(v) == 0.0);

    auto sol = inhomogeneous_phi(cfg, f, cd{0.01, 0.05});
    CHECK(sol.rep_agreement < 1e-8);
    CHECK(sol.residual < 1e-6);

    // mu limit check against the J-function forms
    auto [mup, mum] = mu_limits(cfg, 0.01, f);
    auto up = inhomogeneous_phi(cfg, f, cd{0.01, 1e-4});
    auto um = inhomogeneous_phi(cfg, f, cd{0.01, -1e-4});
    CHECK(std::abs(up.mu - mup) < 1e-2 * (1.0 + std::abs(mup)));
    CHECK(std::abs(um.mu - mum) < 1e-2 * (1.0 + std::abs(mum)));
}
