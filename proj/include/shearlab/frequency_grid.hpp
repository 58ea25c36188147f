#pragma once

#include <stdexcept>

namespace shearlab {

/// Uniform frequency grid xi_i = xi_min + i*dxi, i = 0..n-1.
///
/// dxi must resolve the unit-width Lorentzian (dxi <= 0.25) and the grid must
/// keep the moving growth region inside for the whole run
/// (xi_max >= T_final + 5/gamma).
struct FrequencyGrid {
    double xi_min = 0.0;
    double xi_max = 0.0;
    int n = 0;

    double dxi() const { return (xi_max - xi_min) / (n - 1); }
    double xi(int i) const { return xi_min + dxi() * i; }

    /// Nearest grid index for a frequency (clamped).
    int index_of(double xi_val) const;

    void check_spacing() const;
    void check_covers(double t_final, double gamma) const;
};

/// Grid spanning [xi_min, xi_max] with spacing <= dxi_max (exact end points).
FrequencyGrid make_grid(double xi_min, double xi_max, double dxi_max = 0.25);

struct grid_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shearlab
