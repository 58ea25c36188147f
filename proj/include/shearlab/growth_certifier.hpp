#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shearlab/mode_evolution.hpp"

namespace shearlab {

/// Time/frequency cells: I_n = (n/(N gamma), (n+1)/(N gamma)], T_m = m/(N gamma),
/// with N = floor(gamma^{-1/3}).
struct CellDecomposition {
    double gamma = 0.1;
    double eps1 = 0.0;
    int N = 1;

    static CellDecomposition from_params(const ModelParams& p);

    double cell_width() const { return 1.0 / (N * gamma); }
    double T(int m) const { return m * cell_width(); }
    double cell_lo(int n) const { return n * cell_width(); }
    double cell_hi(int n) const { return (n + 1) * cell_width(); }
    /// Largest waiting-region cell index, 2 eps1 ln(1/gamma) N.
    double waiting_top() const;
};

enum class RegionTag { Remainder, Excitation, Growth, Waiting };

/// Case split of the frequency line for t in I_m (first match wins):
/// Excitation |n-m| <= 2; Growth m+3 <= n <= m+2+4N;
/// Waiting m+3+4N <= n <= 2 eps1 ln(1/gamma) N; Remainder otherwise.
RegionTag region(const CellDecomposition& cd, int m, int n);

/// Exact ledger sequences a_j = a_{j-1}+b_{j-1}, b_j = a_{j-1}+1, a_0=b_0=1.
/// Overflow guard at j > 90.
std::pair<std::int64_t, std::int64_t> fibonacci(int j);

struct Violation {
    std::string check;
    double t = 0.0, xi = 0.0, lhs = 0.0, rhs = 0.0;
};

struct DriftReport {
    int m = 0;
    double max_drift = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// |h(t,xi) - h(T_m,xi)| <= (6 M pi / N^2) e^{M pi (m+1)/N} on excitation cells
/// (exponent (m-1)/N for the inviscid variant).
DriftReport check_excitation_drift(const Trajectory& traj, int m);

struct GrowthCheckReport {
    int m = 0, n = 0;
    double E_measured = 0.0;     ///< inf over tau in I_m, eta in the 3 center cells
    bool assumption_ok = false;  ///< E_measured >= 9/10
    double min_margin = 0.0;     ///< min over checked (t,xi) of lhs - rhs
    bool ok = false;             ///< growth inequality holds with measured E
};

/// h(t,xi) >= h(T_m,xi) + (t-T_m) (4 g M (n-m-2) pi / 9N) e^{-(n-m-2)^2/2N^2} E.
GrowthCheckReport check_growth(const Trajectory& traj, int m, int n);

struct WaitingReport {
    int m = 0, n = 0;
    double min_value = 0.0;
    double floor_bound = 0.0;  ///< 19/20 minus the grid slack
    bool ok = false;
};

WaitingReport check_waiting_floor(const Trajectory& traj, int m, int n);

/// Gronwall floor e^{-6 eps1^3 g^{6 d0} ln(1/g)^3} (1 - g^{2/3-3 d0}/pi).
double waiting_floor_formula(const ModelParams& p);

struct GrowthLedger {
    std::vector<std::int64_t> a, b;
    std::vector<double> E;                    ///< E_j, j = 1..j_max
    std::vector<std::array<double, 3>> cell_minima;  ///< per j: three cell infima
    int j_max = 0;                            ///< largest j attempted
    int certified_j_max = -1;       ///< largest j with the three cell bounds met
    int certified_full_j_max = -1;  ///< also requires (10/9) E_j >= a_{j-1}
    std::vector<Violation> violations;
};

/// Prop 3.1 induction over snapshots at t = j/gamma: cell lower bounds
/// >= a_j, b_j, 1 and (10/9) E_j >= a_{j-1}; partial certificates allowed.
GrowthLedger check_induction(const Trajectory& traj);

struct RateFit {
    double c0 = 0.0;
    double c1 = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    bool window_reliable = true;  ///< false when window < 3/gamma
};

/// Least squares ln||h(t)||_{L2_xi} = ln c0 + c1 gamma t over [lo, hi].
RateFit fit_growth_rate(const Trajectory& traj, double lo, double hi);

/// Snapshot times for certification: every T_m plus `interior` samples per
/// block, up to t_final.
std::vector<double> certification_snapshot_times(const CellDecomposition& cd,
                                                 double t_final, int interior = 8);

}  // namespace shearlab
