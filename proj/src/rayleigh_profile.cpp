#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shearlab/complex_erf.hpp"
#include "shearlab/rayleigh.hpp"

namespace shearlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
}  // namespace

void RayleighConfig::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("RayleighConfig: gamma must be > 0");
    if (dy > 0.0 && dy > std::min(gamma / 8.0, 0.05) + 1e-15)
        throw std::invalid_argument("RayleighConfig: dy must satisfy dy <= min(gamma/8, 0.05)");
    if (Y_max < 10.0) throw std::invalid_argument("RayleighConfig: Y_max must be >= 10");
}

double RayleighProfile::b0(double y) const {
    if (M_ == 0.0) return y;
    return y + kPi * M_ * gamma_ * gamma_ * std::erf(y / gamma_);
}

double RayleighProfile::b0p(double y) const {
    if (M_ == 0.0) return 1.0;
    const double x = y / gamma_;
    return 1.0 + 2.0 * kSqrtPi * M_ * gamma_ * std::exp(-x * x);
}

double RayleighProfile::b0pp(double y) const {
    if (M_ == 0.0) return 0.0;
    const double x = y / gamma_;
    return -4.0 * kSqrtPi * M_ * x * std::exp(-x * x);
}

double RayleighProfile::b0ppp(double y) const {
    if (M_ == 0.0) return 0.0;
    const double x = y / gamma_;
    return -4.0 * kSqrtPi * M_ / gamma_ * (1.0 - 2.0 * x * x) * std::exp(-x * x);
}

cd RayleighProfile::b0(cd y) const {
    if (M_ == 0.0) return y;
    return y + kPi * M_ * gamma_ * gamma_ * complex_erf(y / gamma_);
}

cd RayleighProfile::b0p(cd y) const {
    if (M_ == 0.0) return {1.0, 0.0};
    const cd x = y / gamma_;
    return 1.0 + 2.0 * kSqrtPi * M_ * gamma_ * std::exp(-x * x);
}

cd RayleighProfile::b0pp(cd y) const {
    if (M_ == 0.0) return {0.0, 0.0};
    const cd x = y / gamma_;
    return -4.0 * kSqrtPi * M_ * x * std::exp(-x * x);
}

double RayleighProfile::yc(double c_r) const {
    if (M_ == 0.0) return c_r;
    const double dev = kPi * M_ * gamma_ * gamma_;
    double lo = c_r - dev - 1e-12, hi = c_r + dev + 1e-12;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (b0(mid) < c_r ? lo : hi) = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 10; ++i) {
        const double step = (b0(y) - c_r) / b0p(y);
        y -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(y))) break;
    }
    return y;
}

cd RayleighProfile::yc_complex(cd c) const {
    if (M_ == 0.0) return c;
    cd y{yc(c.real()), 0.0};
    // continuation in Im c keeps Newton inside the correct basin: the bump
    // term explodes off-axis, so a cold start can land on a spurious root
    const int nstep = std::max(1, static_cast<int>(std::abs(c.imag()) / (0.25 * gamma_)) + 1);
    for (int k = 1; k <= nstep; ++k) {
        const cd ck{c.real(), c.imag() * k / nstep};
        for (int it = 0; it < 100; ++it) {
            cd step = (b0(y) - ck) / b0p(y);
            const double cap = 0.5 * gamma_;
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            y -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(y))) break;
        }
    }
    if (std::abs(b0(y) - c) > 1e-10 * (1.0 + std::abs(c)))
        throw std::runtime_error("yc_complex: continuation failed at c = (" +
                                 std::to_string(c.real()) + ", " +
                                 std::to_string(c.imag()) + ")");
    return y;
}

std::vector<cd> RayleighProfile::b0_series(cd y0, int order) const {
    std::vector<cd> B(order + 1, cd{0.0, 0.0});
    B[0] = b0(y0);
    B[1] = b0p(y0);
    if (M_ == 0.0) return B;
    // g = exp(-(y/gamma)^2): g^{(m+1)} = -(2/gamma^2)(y g^{(m)} + m g^{(m-1)})
    std::vector<cd> g(std::max(order, 2));
    g[0] = std::exp(-(y0 / gamma_) * (y0 / gamma_));
    const double inv2 = 2.0 / (gamma_ * gamma_);
    for (int m = 0; m + 1 < static_cast<int>(g.size()); ++m)
        g[m + 1] = -inv2 * (y0 * g[m] + (m > 0 ? double(m) * g[m - 1] : cd{0.0, 0.0}));
    // b0^{(m)} = 2 sqrt(pi) M gamma g^{(m-1)} for m >= 2
    double fact = 1.0;
    for (int m = 2; m <= order; ++m) {
        fact *= m;
        B[m] = 2.0 * kSqrtPi * M_ * gamma_ * g[m - 1] / fact;
    }
    return B;
}

ExclusionRegions ExclusionRegions::from(const RayleighConfig& cfg) {
    ExclusionRegions r;
    r.cr_max = 4.0 * cfg.gamma * std::sqrt(std::log(std::log(1.0 / cfg.gamma)));
    r.ci_E2 = 8.0 * kSqrtPi * cfg.M * cfg.gamma;
    r.ci_E3 = cfg.gamma;
    return r;
}

int ExclusionRegions::classify(cd c) const {
    const double cr = std::abs(c.real()), ci = std::abs(c.imag());
    if (ci >= ci_E2) return 2;
    if (cr >= cr_max && ci > 0.0) return 1;
    if (cr <= cr_max && ci > 0.0 && ci <= ci_E3) return 3;
    return 0;
}

}  // namespace shearlab
