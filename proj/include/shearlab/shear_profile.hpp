#pragma once

#include <string>
#include <vector>

#include "shearlab/params.hpp"

namespace shearlab {

enum class ProfileKind {
    TimeEvolved,  ///< b_nu(t,y), heat evolution of the Gaussian bump
    Static,       ///< b_0(y), the t=0 / inviscid profile
    Couette,      ///< b(y) = y
};

/// Closed-form shear profile b(t,y) = y + pi*M*gamma^2 * erf(y/s(t)),
/// s(t)^2 = 4*nu*t + gamma^2, together with its y-derivatives.
///
/// All members are pure; a profile value is freely shareable across threads.
class ShearProfile {
  public:
    ShearProfile(ModelParams params, ProfileKind kind);

    const ModelParams& params() const { return params_; }
    ProfileKind kind() const { return kind_; }

    double b(double t, double y) const;
    double b_prime(double t, double y) const;
    double b_second(double t, double y) const;
    double b_third(double t, double y) const;

    /// sup_y |b(t,y) - y| = pi*M*gamma^2 (t-independent).
    double sup_deviation() const;

    /// ||b(t,.) - y||_{H^1-dot} = (2 pi)^{3/4} M gamma^2 / (4 nu t + gamma^2)^{1/4}.
    double hdot1_deviation(double t) const;

    /// Central finite-difference residual of d_t b - nu d_yy b at (t,y).
    double heat_residual(double t, double y, double h) const;

    /// Unique root of b0(y) = c_r for the Static profile (strictly increasing).
    double y_c(double c_r) const;

    /// Width parameter s(t) = sqrt(4 nu t + gamma^2) (TimeEvolved), gamma else.
    double width(double t) const;

    /// Two-column CSV (y, b - y) sampled on [-half_width, half_width].
    void export_csv(const std::string& path, double t, double half_width,
                    int n) const;

  private:
    ModelParams params_;
    ProfileKind kind_;
};

/// Default y-grid half width: max(10, 10*gamma).
double default_halfwidth(const ModelParams& p);

}  // namespace shearlab
