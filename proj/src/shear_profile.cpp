#include "shearlab/shear_profile.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace shearlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
}  // namespace

ShearProfile::ShearProfile(ModelParams params, ProfileKind kind)
    : params_(params), kind_(kind) {
    params_.validate();
}

double ShearProfile::width(double t) const {
    if (kind_ == ProfileKind::TimeEvolved)
        return std::sqrt(4.0 * params_.nu * t + params_.gamma * params_.gamma);
    return params_.gamma;
}

double ShearProfile::b(double t, double y) const {
    if (kind_ == ProfileKind::Couette || params_.M == 0.0) return y;
    const double s = width(t);
    return y + kPi * params_.M * params_.gamma * params_.gamma * std::erf(y / s);
}

double ShearProfile::b_prime(double t, double y) const {
    if (kind_ == ProfileKind::Couette || params_.M == 0.0) return 1.0;
    const double s = width(t);
    const double g2 = params_.gamma * params_.gamma;
    return 1.0 + 2.0 * kSqrtPi * params_.M * g2 / s * std::exp(-(y * y) / (s * s));
}

double ShearProfile::b_second(double t, double y) const {
    if (kind_ == ProfileKind::Couette || params_.M == 0.0) return 0.0;
    const double s = width(t);
    const double g2 = params_.gamma * params_.gamma;
    return -4.0 * kSqrtPi * params_.M * g2 * y / (s * s * s) *
           std::exp(-(y * y) / (s * s));
}

double ShearProfile::b_third(double t, double y) const {
    if (kind_ == ProfileKind::Couette || params_.M == 0.0) return 0.0;
    const double s = width(t);
    const double g2 = params_.gamma * params_.gamma;
    const double x = y / s;
    return -4.0 * kSqrtPi * params_.M * g2 / (s * s * s) * (1.0 - 2.0 * x * x) *
           std::exp(-x * x);
}

double ShearProfile::sup_deviation() const {
    if (kind_ == ProfileKind::Couette)
        throw std::logic_error("sup_deviation: Couette profile has no bump");
    return kPi * params_.M * params_.gamma * params_.gamma;
}

double ShearProfile::hdot1_deviation(double t) const {
    if (kind_ == ProfileKind::Couette)
        throw std::logic_error("hdot1_deviation: Couette profile has no bump");
    const double g2 = params_.gamma * params_.gamma;
    const double s2 = (kind_ == ProfileKind::TimeEvolved)
                          ? 4.0 * params_.nu * t + g2
                          : g2;
    return std::pow(2.0 * kPi, 0.75) * params_.M * g2 / std::pow(s2, 0.25);
}

double ShearProfile::heat_residual(double t, double y, double h) const {
    if (kind_ != ProfileKind::TimeEvolved)
        throw std::logic_error("heat_residual: requires the TimeEvolved profile");
    if (!(h > 0.0)) throw std::invalid_argument("heat_residual: h must be > 0");
    const double bt = (b(t + h, y) - b(t - h, y)) / (2.0 * h);
    const double byy = (b(t, y + h) - 2.0 * b(t, y) + b(t, y - h)) / (h * h);
    return bt - params_.nu * byy;
}

double ShearProfile::y_c(double c_r) const {
    if (kind_ != ProfileKind::Static)
        throw std::logic_error("y_c: requires the Static profile");
    const double dev = kPi * params_.M * params_.gamma * params_.gamma;
    double lo = c_r - dev - 1e-12, hi = c_r + dev + 1e-12;
    // bisection bracket, then Newton polish
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (b(0.0, mid) < c_r) lo = mid; else hi = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double f = b(0.0, y) - c_r;
        const double step = f / b_prime(0.0, y);
        y -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(y))) break;
    }
    return y;
}

void ShearProfile::export_csv(const std::string& path, double t,
                              double half_width, int n) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "y,b_minus_y\n";
    out.precision(17);
    for (int i = 0; i < n; ++i) {
        const double y = -half_width + 2.0 * half_width * i / (n - 1);
        out << y << ',' << b(t, y) - y << '\n';
    }
}

double default_halfwidth(const ModelParams& p) {
    return std::max(10.0, 10.0 * p.gamma);
}

}  // namespace shearlab
