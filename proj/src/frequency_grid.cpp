#include "shearlab/frequency_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shearlab {

int FrequencyGrid::index_of(double xi_val) const {
    int i = static_cast<int>(std::lround((xi_val - xi_min) / dxi()));
    return std::clamp(i, 0, n - 1);
}

void FrequencyGrid::check_spacing() const {
    if (n < 2) throw grid_error("frequency grid needs at least 2 points");
    if (dxi() > 0.25 + 1e-12)
        throw grid_error("dxi = " + std::to_string(dxi()) +
                         " too coarse; need dxi <= 0.25");
}

void FrequencyGrid::check_covers(double t_final, double gamma) const {
    const double need = t_final + 5.0 / gamma;
    if (xi_max < need - 1e-9)
        throw grid_error("xi_max = " + std::to_string(xi_max) +
                         " < T_final + 5/gamma = " + std::to_string(need));
}

FrequencyGrid make_grid(double xi_min, double xi_max, double dxi_max) {
    FrequencyGrid g;
    g.xi_min = xi_min;
    g.xi_max = xi_max;
    g.n = static_cast<int>(std::ceil((xi_max - xi_min) / dxi_max)) + 1;
    g.check_spacing();
    return g;
}

}  // namespace shearlab
