#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shearlab/params.hpp"
#include "shearlab/shear_profile.hpp"

using namespace shearlab;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("viscous coupling and eps1 defaults") {
    auto p = make_viscous_params(5.0, 0.01, 0.05);
    CHECK(p.nu == doctest::Approx(std::pow(0.01, 3.0 / 0.9)).epsilon(1e-14));
    CHECK(p.eps1 == doctest::Approx(2.0 * 0.05 / (5.0 * kPi)).epsilon(1e-14));
    auto q = make_inviscid_params(10.0, 0.1);
    CHECK(q.eps1 == doctest::Approx(1.0 / (9.0 * 10.0 * kPi)).epsilon(1e-14));
    CHECK(q.nu == 0.0);
}

TEST_CASE("config parsing rejects unknown keys and validates") {
    std::map<std::string, std::string> kv{{"M", "5"}, {"gamma", "0.01"}, {"regime", "viscous"}};
    auto p = params_from_config(kv);
    CHECK(p.regime == Regime::ViscousCoupled);
    CHECK(p.nu == doctest::Approx(std::pow(0.01, 3.0 / (1.0 - 2.0 * p.delta0))));
    kv["bogus"] = "1";
    CHECK_THROWS_AS(params_from_config(kv), config_error);
    std::map<std::string, std::string> bad{{"gamma", "-1"}};
    CHECK_THROWS_AS(params_from_config(bad), config_error);
}

TEST_CASE("b values: Couette identity and static symmetry") {
    auto p = make_free_params(5.0, 0.01, 0.0, 0.05, 0.0, 1.0, 0.1);
    ShearProfile couette(p, ProfileKind::Couette);
    CHECK(couette.b(2.0, 3.7) == 3.7);
    ShearProfile st(p, ProfileKind::Static);
    CHECK(st.b(0.0, 0.0) == 0.0);
    CHECK(st.b_second(0.0, 0.0) == 0.0);
}

TEST_CASE("large-y limit of the time evolved profile") {
    // b(0, y->inf) - y -> pi M gamma^2 = 1.5708e-3 at M=5, gamma=0.01
    auto p = make_viscous_params(5.0, 0.01, 0.05);
    ShearProfile b(p, ProfileKind::TimeEvolved);
    const double dev = b.b(0.0, 5.0) - 5.0;
    CHECK(dev == doctest::Approx(1.5707963267948e-3).epsilon(1e-10));
    CHECK(b.sup_deviation() == doctest::Approx(kPi * 5.0 * 1e-4).epsilon(1e-14));
}

TEST_CASE("sup deviation: formula vs dense sampling") {
    auto p = make_viscous_params(5.0, 0.01, 0.05);
    ShearProfile b(p, ProfileKind::TimeEvolved);
    for (double t : {0.0, 3.0, 50.0}) {
        double num = 0.0;
        for (int i = 0; i <= 20000; ++i) {
            const double y = -1.0 + 2.0 * i / 20000.0;
            num = std::max(num, std::abs(b.b(t, y) - y));
        }
        CHECK(num == doctest::Approx(b.sup_deviation()).epsilon(1e-8));
    }
    auto z = make_free_params(0.0, 0.01, 0.0, 0.0, 0.0, 1.0, 0.0);
    CHECK(ShearProfile(z, ProfileKind::Static).sup_deviation() == 0.0);
}

TEST_CASE("Hdot1 deviation vs quadrature of (b'-1)^2") {
    auto p = make_viscous_params(5.0, 0.01, 0.05);
    ShearProfile b(p, ProfileKind::TimeEvolved);
    CHECK(b.hdot1_deviation(0.0) ==
          doctest::Approx(std::pow(2.0 * kPi, 0.75) * 5.0 * std::pow(0.01, 1.5))
              .epsilon(1e-12));
    CHECK(b.hdot1_deviation(0.0) == doctest::Approx(1.97413e-2).epsilon(1e-4));
    for (double t : {0.0, 0.01 * 0.01 / p.nu}) {
        const int n = 400001;
        const double L = 1.0;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double y = -L + 2.0 * L * i / (n - 1);
            const double d = b.b_prime(t, y) - 1.0;
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += w * d * d;
        }
        acc *= 2.0 * L / (n - 1);
        CHECK(std::sqrt(acc) == doctest::Approx(b.hdot1_deviation(t)).epsilon(1e-6));
    }
    // strict decay of the Hdot1 norm in t for nu > 0
    CHECK(b.hdot1_deviation(1.0) < b.hdot1_deviation(0.5));
    CHECK(b.hdot1_deviation(0.5) < b.hdot1_deviation(0.0));
}

TEST_CASE("heat residual: zero at M=0, second order in h") {
    auto z = make_free_params(0.0, 0.05, 0.05 * 0.05, 0.0, 0.0, 1.0, 0.0);
    ShearProfile bz(z, ProfileKind::TimeEvolved);
    CHECK(bz.heat_residual(1.0, 0.3, 1e-3) == 0.0);

    auto p = make_free_params(5.0, 0.05, std::pow(0.05, 3.0), 0.0, 0.0, 1.0, 0.0);
    ShearProfile b(p, ProfileKind::TimeEvolved);
    const double r1 = std::abs(b.heat_residual(1.0, 0.02, 1e-3));
    CHECK(r1 < 1e-5);
    const double r2 = std::abs(b.heat_residual(1.0, 0.02, 5e-4));
    // halving h quarters the residual (order-2 slope within 10%)
    const double order = std::log2(r1 / r2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("y_c inverts b0") {
    auto p = make_free_params(20.0, 0.02, 0.0, 0.0, 0.0, 1.0, 0.0);
    ShearProfile b(p, ProfileKind::Static);
    CHECK(b.y_c(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    // fixed-point residual at c_r = 0.05
    const double y = b.y_c(0.05);
    CHECK(std::abs(b.b(0.0, y) - 0.05) < 1e-13 * 1.05);
    // identity on a grid
    for (int i = 0; i <= 40; ++i) {
        const double yy = -10.0 + 0.5 * i;
        CHECK(b.y_c(b.b(0.0, yy)) == doctest::Approx(yy).epsilon(1e-12));
    }
    // M=0: y_c = c_r
    auto z = make_free_params(0.0, 0.02, 0.0, 0.0, 0.0, 1.0, 0.0);
    ShearProfile bz(z, ProfileKind::Static);
    CHECK(bz.y_c(0.37) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("b' >= 1 on a dense grid for several t") {
    auto p = make_viscous_params(5.0, 0.05, 0.05);
    ShearProfile b(p, ProfileKind::TimeEvolved);
    for (double t : {0.0, 1.0, 10.0, 1000.0})
        for (int i = 0; i <= 4000; ++i) {
            const double y = -10.0 + 20.0 * i / 4000.0;
            CHECK(b.b_prime(t, y) >= 1.0);
        }
}
