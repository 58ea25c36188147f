#include "shearlab/semigroup_norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace shearlab {

double ghost_weight(double t, double xi, int k) {
    return std::exp(2.0 * std::atan(xi / k - t));
}

double ghost_energy(const ModeState& s) {
    const double dxi = s.grid.dxi();
    double acc = 0.0;
    for (int i = 0; i < s.grid.n; ++i) {
        const double w = (i == 0 || i == s.grid.n - 1) ? 0.5 : 1.0;
        acc += w * ghost_weight(s.t, s.grid.xi(i), s.k) * std::norm(s.values[i]);
    }
    return acc * dxi;
}

double calibrate_C0(const Trajectory& traj, double tol) {
    const auto& p = traj.params;
    if (traj.snapshots.size() < 2)
        throw std::runtime_error("calibrate_C0: need at least two snapshots");
    if (p.M == 0.0) return 0.0;
    std::vector<double> E, T;
    for (const auto& s : traj.snapshots) {
        E.push_back(ghost_energy(s));
        T.push_back(s.t);
    }
    auto monotone = [&](double C0) {
        for (std::size_t i = 0; i + 1 < E.size(); ++i) {
            const double decay = std::exp(-C0 * p.M * p.M * p.gamma * (T[i + 1] - T[i]));
            if (E[i + 1] * decay > E[i] * (1.0 + 1e-10)) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (!monotone(hi)) {
        hi *= 2.0;
        if (++guard > 60) throw std::runtime_error("calibrate_C0: no finite C0 found");
    }
    if (monotone(lo)) return 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (monotone(mid) ? hi : lo) = mid;
    }
    return hi;
}

NormReport prop41_suite(const Trajectory& traj) {
    const auto& p = traj.params;
    NormReport rep;
    rep.C0 = calibrate_C0(traj);
    const auto& f = traj.snapshots.front();
    rep.f_norm = f.l2_xi();
    rep.dxi = f.grid.dxi();
    rep.n_grid = f.grid.n;
    rep.n_snapshots = static_cast<int>(traj.snapshots.size());
    if (rep.f_norm == 0.0) return rep;

    const int k = f.k;
    const double halfC0 = 0.5 * rep.C0 * p.M * p.M * p.gamma;
    const int n = f.grid.n;
    const double dxi = f.grid.dxi();

    // per-snapshot integrands
    std::vector<double> t_s, a1, a2, a3, a4, a5;
    for (const auto& s : traj.snapshots) {
        const double w = std::exp(-halfC0 * s.t);
        double l2 = 0.0, grad2 = 0.0, vel_inf = 0.0, dxvel_inf = 0.0;
        for (int i = 0; i < n; ++i) {
            const double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            const double xi = s.grid.xi(i);
            const double mod2 = std::norm(s.values[i]);
            const double moda = std::abs(s.values[i]);
            const double m2 = double(k) * k + (xi - k * s.t) * (xi - k * s.t);
            l2 += tw * mod2;
            grad2 += tw * m2 * mod2;
            vel_inf += tw * moda / std::sqrt(m2);
            dxvel_inf += tw * std::abs(double(k)) / m2 * moda;
        }
        t_s.push_back(s.t);
        a1.push_back(w * std::sqrt(l2 * dxi));
        a2.push_back(w * std::sqrt(grad2 * dxi));
        a3.push_back(w * std::abs(double(k)) * std::sqrt(l2 * dxi));
        a4.push_back(w * vel_inf * dxi);
        a5.push_back(w * dxvel_inf * dxi);
    }
    auto sup = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end());
    };
    auto int_t = [&](const std::vector<double>& v, int pow) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double va = (pow == 2) ? v[i] * v[i] : v[i];
            const double vb = (pow == 2) ? v[i + 1] * v[i + 1] : v[i + 1];
            acc += 0.5 * (va + vb) * (t_s[i + 1] - t_s[i]);
        }
        return (pow == 2) ? std::sqrt(acc) : acc;
    };
    rep.lhs[0] = sup(a1);
    rep.lhs[1] = int_t(a2, 2);
    rep.lhs[2] = int_t(a3, 1);
    rep.lhs[3] = sup(a4);
    rep.lhs[4] = int_t(a5, 2);
    const double sqnu = std::sqrt(std::max(p.nu, 0.0));
    rep.C1[0] = rep.lhs[0] / rep.f_norm;
    rep.C1[1] = rep.lhs[1] * sqnu / rep.f_norm;
    rep.C1[2] = rep.lhs[2] * sqnu / rep.f_norm;
    rep.C1[3] = rep.lhs[3] / rep.f_norm;
    rep.C1[4] = rep.lhs[4] / rep.f_norm;
    return rep;
}

// ---------------------------------------------------------------------------
// PhysicalField
// ---------------------------------------------------------------------------
int PhysicalField::k_index(int k) const {
    const auto it = std::find(ks.begin(), ks.end(), k);
    return it == ks.end() ? -1 : static_cast<int>(it - ks.begin());
}

PhysicalField PhysicalField::make(std::vector<double> times, std::vector<int> ks,
                                  std::vector<double> ygrid) {
    PhysicalField f;
    f.times = std::move(times);
    f.ks = std::move(ks);
    f.ygrid = std::move(ygrid);
    f.data.assign(f.times.size(),
                  std::vector<std::vector<cplx>>(f.ks.size(),
                                                std::vector<cplx>(f.ygrid.size())));
    return f;
}

namespace {
double lq_y(const std::vector<cplx>& v, const std::vector<double>& y, int q) {
    if (q == 0) {  // L^inf
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    const double dy = y[1] - y[0];
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
        const double a = std::abs(v[i]);
        acc += w * (q == 2 ? a * a : a);
    }
    acc *= dy;
    return q == 2 ? std::sqrt(acc) : acc;
}

int hoelder_combine(int e1, int e2) {
    // exponents encoded as 1, 2, 0 (= inf); combine 1/e = 1/e1 + 1/e2
    auto inv = [](int e) { return e == 0 ? 0.0 : 1.0 / e; };
    const double s = inv(e1) + inv(e2);
    if (std::abs(s - 1.0) < 1e-12) return 1;
    if (std::abs(s - 0.5) < 1e-12) return 2;
    if (std::abs(s) < 1e-12) return 0;
    throw std::invalid_argument("incompatible Hoelder exponent split");
}
}  // namespace

double cl_norm(const PhysicalField& f, int p, int q, double exp_weight) {
    double total = 0.0;
    for (std::size_t ik = 0; ik < f.ks.size(); ++ik) {
        std::vector<double> a(f.times.size());
        for (std::size_t it = 0; it < f.times.size(); ++it)
            a[it] = std::exp(-exp_weight * f.times[it]) * lq_y(f.data[it][ik], f.ygrid, q);
        double tk = 0.0;
        if (p == 0) {
            tk = *std::max_element(a.begin(), a.end());
        } else {
            for (std::size_t i = 0; i + 1 < a.size(); ++i) {
                const double va = (p == 2) ? a[i] * a[i] : a[i];
                const double vb = (p == 2) ? a[i + 1] * a[i + 1] : a[i + 1];
                tk += 0.5 * (va + vb) * (f.times[i + 1] - f.times[i]);
            }
            if (p == 2) tk = std::sqrt(tk);
        }
        total += tk;
    }
    return total;
}

PhysicalField field_multiply(const PhysicalField& f, const PhysicalField& g) {
    if (f.times != g.times || f.ygrid != g.ygrid)
        throw std::invalid_argument("field_multiply: incompatible grids");
    const int klo = f.ks.front() + g.ks.front();
    const int khi = f.ks.back() + g.ks.back();
    std::vector<int> ks;
    for (int k = klo; k <= khi; ++k) ks.push_back(k);
    auto out = PhysicalField::make(f.times, ks, f.ygrid);
    for (std::size_t it = 0; it < f.times.size(); ++it)
        for (std::size_t i = 0; i < f.ks.size(); ++i)
            for (std::size_t j = 0; j < g.ks.size(); ++j) {
                const int k = f.ks[i] + g.ks[j];
                auto& dst = out.data[it][k - klo];
                const auto& a = f.data[it][i];
                const auto& b = g.data[it][j];
                for (std::size_t iy = 0; iy < dst.size(); ++iy)
                    dst[iy] += a[iy] * b[iy];
            }
    return out;
}

bool bilinear_check(const PhysicalField& f, const PhysicalField& g, int p1,
                    int q1, int p2, int q2) {
    const int p = hoelder_combine(p1, p2);
    const int q = hoelder_combine(q1, q2);
    const auto fg = field_multiply(f, g);
    const double lhs = cl_norm(fg, p, q);
    const double rhs = cl_norm(f, p1, q1) * cl_norm(g, p2, q2);
    return lhs <= rhs * (1.0 + 1e-8);
}

PhysicalField random_field(unsigned seed, int kmax, int nt, int ny, double T,
                           double ylim) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> times(nt), ygrid(ny);
    for (int i = 0; i < nt; ++i) times[i] = T * i / (nt - 1);
    for (int i = 0; i < ny; ++i) ygrid[i] = -ylim + 2.0 * ylim * i / (ny - 1);
    std::vector<int> ks;
    for (int k = -kmax; k <= kmax; ++k) ks.push_back(k);
    auto f = PhysicalField::make(times, ks, ygrid);
    // band-limited smooth profiles: few random Fourier modes in y, Gaussian cutoff
    for (std::size_t ik = 0; ik < ks.size(); ++ik) {
        double c[3], s[3], ph[3];
        for (int m = 0; m < 3; ++m) {
            c[m] = uni(rng);
            s[m] = uni(rng);
            ph[m] = uni(rng);
        }
        for (int it = 0; it < nt; ++it)
            for (int iy = 0; iy < ny; ++iy) {
                const double y = ygrid[iy];
                double re = 0.0, im = 0.0;
                for (int m = 0; m < 3; ++m) {
                    re += c[m] * std::cos((m + 1) * 0.7 * y + ph[m] * times[it]);
                    im += s[m] * std::sin((m + 1) * 0.5 * y - ph[m] * times[it]);
                }
                const double cut = std::exp(-(y * y) / (0.3 * ylim * ylim));
                f.data[it][ik][iy] = cplx{re, im} * cut;
            }
    }
    return f;
}

}  // namespace shearlab
