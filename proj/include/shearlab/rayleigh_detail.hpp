#pragma once

#include <array>
#include <vector>

#include "shearlab/rayleigh.hpp"

namespace shearlab::detail {

/// Quadrature of int H(v)/(v - c)^2 dv on the uniform y grid (v = b0(y)),
/// with the analytic double-pole subtraction inside a unit window around the
/// critical point. The caller passes H on the grid together with its value
/// and first two v-derivatives at v = Re c (the grid center node).
///
/// For Im c = 0 the boundary (principal value) form is used; then H(c_r)
/// must vanish, which is the case in every PV integral of the module.
class SingularQuad {
  public:
    SingularQuad(const std::vector<double>& y, const std::vector<double>& v,
                 const std::vector<double>& vp, int center, cd c);

    cd integrate(const std::vector<cd>& H, cd Hc, cd Hp, cd Hq) const;

    /// Cumulative version: out[i] = int_{y_0}^{y_i}, Im c != 0 only.
    void cumulative(const std::vector<cd>& H, cd Hc, cd Hp, cd Hq,
                    std::vector<cd>& out) const;

    int window_lo() const { return iL_; }
    int window_hi() const { return iR_; }

  private:
    const std::vector<double>& y_;
    const std::vector<double>& v_;
    const std::vector<double>& vp_;
    int ic_;
    cd c_;
    int iL_ = 0, iR_ = 0;
};

/// Value/derivative fit of H at cr from the five nodes around the center
/// (degree-4 interpolation).
void fit_H_derivatives(const std::vector<double>& v, const std::vector<cd>& H,
                       int ic, double cr, cd& Hc, cd& Hp, cd& Hq);

cd simpson_slice(const std::vector<cd>& f, int i0, int i1, double h);

}  // namespace shearlab::detail
