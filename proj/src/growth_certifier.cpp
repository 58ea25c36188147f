#include "shearlab/growth_certifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shearlab {

namespace {
constexpr double kPi = std::numbers::pi;

/// Minimum of Re h over grid points with xi in [lo, hi] (closed cell).
double cell_min(const ModeState& s, double lo, double hi) {
    const double dxi = s.grid.dxi();
    int i0 = static_cast<int>(std::ceil((lo - s.grid.xi_min) / dxi - 1e-9));
    int i1 = static_cast<int>(std::floor((hi - s.grid.xi_min) / dxi + 1e-9));
    i0 = std::max(i0, 0);
    i1 = std::min(i1, s.grid.n - 1);
    if (i0 > i1) throw std::out_of_range("cell outside the frequency grid");
    double m = s.values[i0].real();
    for (int i = i0; i <= i1; ++i) m = std::min(m, s.values[i].real());
    return m;
}

/// Snapshots with t in [lo, hi] (closed).
std::vector<const ModeState*> snaps_in(const Trajectory& traj, double lo, double hi) {
    std::vector<const ModeState*> out;
    for (const auto& s : traj.snapshots)
        if (s.t >= lo - 1e-9 && s.t <= hi + 1e-9) out.push_back(&s);
    return out;
}

/// inf over tau in I_m, eta in cells m-1..m+1 (the excitation core).
double excitation_inf(const Trajectory& traj, const CellDecomposition& cd, int m) {
    const auto snaps = snaps_in(traj, cd.T(m), cd.T(m + 1));
    if (snaps.size() < 2)
        throw std::runtime_error("insufficient snapshots inside block I_" + std::to_string(m));
    double v = 1e300;
    for (const auto* s : snaps)
        v = std::min(v, cell_min(*s, cd.cell_lo(m - 1), cd.cell_hi(m + 1)));
    return v;
}
}  // namespace

CellDecomposition CellDecomposition::from_params(const ModelParams& p) {
    CellDecomposition cd;
    cd.gamma = p.gamma;
    cd.eps1 = p.eps1;
    cd.N = std::max(1, static_cast<int>(std::floor(std::pow(p.gamma, -1.0 / 3.0) + 1e-9)));
    return cd;
}

double CellDecomposition::waiting_top() const {
    return 2.0 * eps1 * std::log(1.0 / gamma) * N;
}

RegionTag region(const CellDecomposition& cd, int m, int n) {
    if (std::abs(n - m) <= 2) return RegionTag::Excitation;
    if (n >= m + 3 && n <= m + 2 + 4 * cd.N) return RegionTag::Growth;
    if (n >= m + 3 + 4 * cd.N && n <= cd.waiting_top()) return RegionTag::Waiting;
    return RegionTag::Remainder;
}

std::pair<std::int64_t, std::int64_t> fibonacci(int j) {
    if (j < 0) throw std::invalid_argument("fibonacci: j must be >= 0");
    if (j > 90) throw std::overflow_error("fibonacci: j > 90 overflows 64-bit ledger");
    std::int64_t a = 1, b = 1;
    for (int i = 1; i <= j; ++i) {
        const std::int64_t a_next = a + b;
        const std::int64_t b_next = a + 1;
        a = a_next;
        b = b_next;
    }
    return {a, b};
}

DriftReport check_excitation_drift(const Trajectory& traj, int m) {
    const auto& p = traj.params;
    const auto cd = CellDecomposition::from_params(p);
    DriftReport rep;
    rep.m = m;
    const bool inviscid = traj.cfg.variant == EvolutionVariant::ModifiedInviscid ||
                          p.nu == 0.0;
    const double expo = p.M * kPi * (inviscid ? (m - 1.0) : (m + 1.0)) / cd.N;
    rep.bound = 6.0 * p.M * kPi / (cd.N * cd.N) * std::exp(expo);
    const auto snaps = snaps_in(traj, cd.T(m), cd.T(m + 1));
    if (snaps.size() < 2)
        throw std::runtime_error("insufficient snapshots for drift check in block " +
                                 std::to_string(m));
    const auto& ref = *snaps.front();
    for (int n = m - 2; n <= m + 2; ++n) {
        const double lo = std::max(cd.cell_lo(n), ref.grid.xi_min);
        const double hi = std::min(cd.cell_hi(n), ref.grid.xi_max);
        if (lo >= hi) continue;
        const double dxi = ref.grid.dxi();
        const int i0 = std::max(0, static_cast<int>(std::ceil((lo - ref.grid.xi_min) / dxi - 1e-9)));
        const int i1 = std::min(ref.grid.n - 1,
                                static_cast<int>(std::floor((hi - ref.grid.xi_min) / dxi + 1e-9)));
        for (const auto* s : snaps)
            for (int i = i0; i <= i1; ++i)
                rep.max_drift = std::max(rep.max_drift,
                                         std::abs(s->values[i].real() - ref.values[i].real()));
    }
    rep.ok = rep.max_drift <= rep.bound;
    return rep;
}

GrowthCheckReport check_growth(const Trajectory& traj, int m, int n) {
    const auto& p = traj.params;
    const auto cd = CellDecomposition::from_params(p);
    if (region(cd, m, n) != RegionTag::Growth)
        throw std::invalid_argument("check_growth: (m,n) not in the growth region");
    GrowthCheckReport rep;
    rep.m = m;
    rep.n = n;
    rep.E_measured = excitation_inf(traj, cd, m);
    rep.assumption_ok = rep.E_measured >= 0.9;
    const auto snaps = snaps_in(traj, cd.T(m), cd.T(m + 1));
    const auto& ref = *snaps.front();
    const double x = n - m - 2.0;
    const double rate = 4.0 * p.gamma * p.M * x * kPi / (9.0 * cd.N) *
                        std::exp(-x * x / (2.0 * cd.N * cd.N));
    const double dxi = ref.grid.dxi();
    const double lo = cd.cell_lo(n), hi = cd.cell_hi(n);
    const int i0 = std::max(0, static_cast<int>(std::ceil((lo - ref.grid.xi_min) / dxi - 1e-9)));
    const int i1 = std::min(ref.grid.n - 1,
                            static_cast<int>(std::floor((hi - ref.grid.xi_min) / dxi + 1e-9)));
    if (i0 > i1) throw std::out_of_range("growth cell outside the grid");
    rep.min_margin = 1e300;
    for (const auto* s : snaps)
        for (int i = i0; i <= i1; ++i) {
            const double lhs = s->values[i].real();
            const double rhs = ref.values[i].real() +
                               (s->t - cd.T(m)) * rate * std::max(rep.E_measured, 0.0);
            rep.min_margin = std::min(rep.min_margin, lhs - rhs);
        }
    rep.ok = rep.min_margin >= -1e-10;
    return rep;
}

WaitingReport check_waiting_floor(const Trajectory& traj, int m, int n) {
    const auto cd = CellDecomposition::from_params(traj.params);
    if (region(cd, m, n) != RegionTag::Waiting)
        throw std::invalid_argument("check_waiting_floor: (m,n) not in the waiting region");
    WaitingReport rep;
    rep.m = m;
    rep.n = n;
    rep.floor_bound = 19.0 / 20.0 - 1e-3;
    rep.min_value = 1e300;
    for (const auto* s : snaps_in(traj, cd.T(m), cd.T(m + 1)))
        rep.min_value = std::min(rep.min_value, cell_min(*s, cd.cell_lo(n), cd.cell_hi(n)));
    rep.ok = rep.min_value >= rep.floor_bound;
    return rep;
}

double waiting_floor_formula(const ModelParams& p) {
    const double g = p.gamma;
    const double l = std::log(1.0 / g);
    return std::exp(-6.0 * std::pow(p.eps1, 3.0) * std::pow(g, 6.0 * p.delta0) * l * l * l) *
           (1.0 - std::pow(g, 2.0 / 3.0 - 3.0 * p.delta0) / kPi);
}

GrowthLedger check_induction(const Trajectory& traj) {
    const auto& p = traj.params;
    const auto cd = CellDecomposition::from_params(p);
    const double ginv = 1.0 / p.gamma;
    GrowthLedger led;

    // largest j with a snapshot at t = j/gamma and cell (j+3)/gamma on grid
    int j_max = 0;
    for (int j = 1; j <= 90; ++j) {
        bool have = false;
        for (const auto& s : traj.snapshots)
            if (std::abs(s.t - j * ginv) < 1e-6 * (1.0 + j * ginv)) have = true;
        if (!have || (j + 3) * ginv > traj.snapshots.front().grid.xi_max + 1e-9) break;
        j_max = j;
    }
    led.j_max = j_max;
    led.a.resize(j_max + 1);
    led.b.resize(j_max + 1);
    for (int j = 0; j <= j_max; ++j) {
        auto [aj, bj] = fibonacci(j);
        led.a[j] = aj;
        led.b[j] = bj;
    }
    led.E.assign(j_max + 1, 0.0);
    led.cell_minima.assign(j_max + 1, {0.0, 0.0, 0.0});
    led.certified_j_max = -1;
    led.certified_full_j_max = -1;

    bool chain_ok = true;
    bool full_ok = true;
    for (int j = 0; j <= j_max; ++j) {
        const ModeState* snap = nullptr;
        for (const auto& s : traj.snapshots)
            if (std::abs(s.t - j * ginv) < 1e-6 * (1.0 + j * ginv)) snap = &s;
        const double c1 = cell_min(*snap, j * ginv, (j + 1) * ginv);
        const double c2 = cell_min(*snap, (j + 1) * ginv, (j + 2) * ginv);
        const double c3 = cell_min(*snap, (j + 2) * ginv, (j + 3) * ginv);
        led.cell_minima[j] = {c1, c2, c3};
        auto log_violation = [&](const std::string& what, double lhs, double rhs) {
            led.violations.push_back({what, j * ginv, 0.0, lhs, rhs});
        };
        bool ok = true;
        if (c1 < static_cast<double>(led.a[j])) {
            log_violation("induction cell >= a_j (j=" + std::to_string(j) + ")", c1,
                          static_cast<double>(led.a[j]));
            ok = false;
        }
        if (c2 < static_cast<double>(led.b[j])) {
            log_violation("induction cell >= b_j (j=" + std::to_string(j) + ")", c2,
                          static_cast<double>(led.b[j]));
            ok = false;
        }
        if (c3 < 1.0) {
            log_violation("induction cell >= 1 (j=" + std::to_string(j) + ")", c3, 1.0);
            ok = false;
        }
        bool e_ok = true;
        if (j >= 1) {
            double Ej = 1e300;
            for (int m = (j - 1) * cd.N; m <= j * cd.N - 1; ++m)
                Ej = std::min(Ej, excitation_inf(traj, cd, m));
            led.E[j] = Ej;
            if (10.0 / 9.0 * Ej < static_cast<double>(led.a[j - 1])) {
                log_violation("(10/9) E_j >= a_{j-1} (j=" + std::to_string(j) + ")",
                              10.0 / 9.0 * Ej, static_cast<double>(led.a[j - 1]));
                e_ok = false;
            }
        }
        if (ok && chain_ok)
            led.certified_j_max = j;
        else
            chain_ok = false;
        if (ok && e_ok && full_ok)
            led.certified_full_j_max = j;
        else
            full_ok = false;
    }
    return led;
}

RateFit fit_growth_rate(const Trajectory& traj, double lo, double hi) {
    RateFit fit;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.window_reliable = (hi - lo) >= 3.0 / traj.params.gamma - 1e-9;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, l2] : traj.norm_history)
        if (t >= lo - 1e-9 && t <= hi + 1e-9) pts.emplace_back(t, l2);
    if (pts.size() < 8)
        for (const auto& s : traj.snapshots)
            if (s.t >= lo - 1e-9 && s.t <= hi + 1e-9) pts.emplace_back(s.t, s.l2_xi());
    for (const auto& [t, l2] : pts) {
        const double x = traj.params.gamma * t;
        const double y = std::log(l2);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("fit_growth_rate: fewer than 2 snapshots in window");
    const double det = n * sxx - sx * sx;
    fit.c1 = (n * sxy - sx * sy) / det;
    fit.c0 = std::exp((sy * sxx - sx * sxy) / det);
    return fit;
}

std::vector<double> certification_snapshot_times(const CellDecomposition& cd,
                                                 double t_final, int interior) {
    std::vector<double> out;
    const double w = cd.cell_width();
    for (int m = 0;; ++m) {
        const double t0 = cd.T(m);
        if (t0 > t_final + 1e-12) break;
        for (int i = 0; i <= interior; ++i) {
            const double t = t0 + w * i / (interior + 1.0);
            if (t <= t_final + 1e-12) out.push_back(std::min(t, t_final));
        }
    }
    out.push_back(t_final);
    return out;
}

}  // namespace shearlab
