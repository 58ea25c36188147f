#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shearlab/rayleigh.hpp"

namespace shearlab {

namespace {

struct OracleGrid {
    std::vector<double> y, sp, spp, b0, b0pp;
    double du = 0.0;
    int n = 0;  // interior size
};

OracleGrid make_oracle_grid(const RayleighConfig& cfg, int N, double L, double U) {
    OracleGrid g;
    const auto pr = cfg.profile();
    const double A = L / std::sinh(U);
    g.du = 2.0 * U / (N - 1);
    g.n = N - 2;
    g.y.resize(N);
    g.sp.resize(N);
    g.spp.resize(N);
    g.b0.resize(N);
    g.b0pp.resize(N);
    for (int i = 0; i < N; ++i) {
        const double u = -U + g.du * i;
        g.y[i] = A * std::sinh(u);
        g.sp[i] = A * std::cosh(u);
        g.spp[i] = A * std::sinh(u);
        g.b0[i] = pr.b0(g.y[i]);
        g.b0pp[i] = pr.b0pp(g.y[i]);
    }
    return g;
}

/// Dense Rayleigh matrix R = diag(b0) - diag(b0'') T^{-1} on the interior
/// nodes, T = mapped (d_yy - 1) with homogeneous Dirichlet ends.
std::vector<double> build_R(const OracleGrid& g) {
    const int n = g.n;
    std::vector<double> dl(n - 1), d(n), du(n - 1), du2(n - 2);
    std::vector<lapack_int> ipiv(n);
    for (int j = 0; j < n; ++j) {
        const int i = j + 1;  // global node
        const double isp2 = 1.0 / (g.sp[i] * g.sp[i]);
        d[j] = -2.0 * isp2 / (g.du * g.du) - 1.0;
        const double offd = isp2 / (g.du * g.du);
        const double drift = (g.spp[i] / (g.sp[i] * g.sp[i] * g.sp[i])) / (2.0 * g.du);
        if (j + 1 < n) du[j] = offd - drift;
        if (j > 0) dl[j - 1] = offd + drift;
    }
    lapack_int info = LAPACKE_dgttrf(n, dl.data(), d.data(), du.data(), du2.data(),
                                     ipiv.data());
    if (info != 0) throw std::runtime_error("matrix_oracle: dgttrf failed");
    // X = T^{-1} (column-major)
    std::vector<double> X(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) X[static_cast<std::size_t>(j) * n + j] = 1.0;
    info = LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n, n, dl.data(), d.data(), du.data(),
                          du2.data(), ipiv.data(), X.data(), n);
    if (info != 0) throw std::runtime_error("matrix_oracle: dgttrs failed");
    // R = diag(b0) - diag(b0'') X
    std::vector<double> R(static_cast<std::size_t>(n) * n);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) {
            const int i = row + 1;
            double val = -g.b0pp[i] * X[static_cast<std::size_t>(col) * n + row];
            if (row == col) val += g.b0[i];
            R[static_cast<std::size_t>(col) * n + row] = val;
        }
    return R;
}

std::vector<cd> unstable_eigen(const RayleighConfig& cfg, std::vector<double> R, int n) {
    std::vector<double> wr(n), wi(n);
    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, R.data(), n, wr.data(), wi.data(),
                      nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("matrix_oracle: dgeev failed");
    std::vector<cd> out;
    for (int i = 0; i < n; ++i)
        if (std::abs(wi[i]) > 0.5 * cfg.gamma) out.emplace_back(wr[i], wi[i]);
    std::sort(out.begin(), out.end(),
              [](const cd& a, const cd& b) { return a.imag() > b.imag(); });
    return out;
}
}  // namespace

OracleResult matrix_oracle(const RayleighConfig& cfg, int n_coarse, double L, double U) {
    cfg.validate();
    OracleResult res;
    res.n_coarse = n_coarse;
    res.n_fine = 2 * n_coarse - 1;  // halves du with the same map geometry
    const auto g1 = make_oracle_grid(cfg, n_coarse, L, U);
    const auto g2 = make_oracle_grid(cfg, res.n_fine, L, U);
    res.raw_coarse = unstable_eigen(cfg, build_R(g1), g1.n);
    res.raw_fine = unstable_eigen(cfg, build_R(g2), g2.n);
    // Richardson over the second-order pair, matching by proximity
    for (const auto& ef : res.raw_fine) {
        double best = 1e300;
        cd match;
        for (const auto& ec : res.raw_coarse) {
            const double d = std::abs(ec - ef);
            if (d < best) {
                best = d;
                match = ec;
            }
        }
        if (best < 0.25 * std::abs(ef) + 0.1 * cfg.gamma)
            res.eigenvalues.push_back((4.0 * ef - match) / 3.0);
        else
            res.eigenvalues.push_back(ef);  // fine-only mode, reported unextrapolated
    }
    return res;
}

SemigroupGrowthReport semigroup_growth(const RayleighConfig& cfg, double T, int n_grid) {
    cfg.validate();
    const auto g = make_oracle_grid(cfg, n_grid, 8.0, 4.0);
    const int n = g.n;
    auto R = build_R(g);
    const auto eigs = unstable_eigen(cfg, R, n);  // dgeev destroys its copy
    R = build_R(g);

    SemigroupGrowthReport rep;
    rep.T = T;
    rep.ci_star = eigs.empty() ? 0.0 : eigs.front().imag();

    // band-profile data
    const double eps1 = (cfg.M > 0.0) ? 1.0 / (9.0 * cfg.M * 3.14159265358979323846)
                                      : 0.02;
    const double W = 2.0 * eps1 / cfg.gamma * std::log(1.0 / cfg.gamma);
    std::vector<cd> w(n);
    for (int i = 0; i < n; ++i) {
        const double y = g.y[i + 1];
        w[i] = (std::abs(y) < 1e-12) ? 2.0 * W : 2.0 * std::sin(W * y) / y;
    }
    auto matvec = [&](const std::vector<cd>& x, std::vector<cd>& out) {
        // out = -i R x
        for (int row = 0; row < n; ++row) {
            double re = 0.0, im = 0.0;
            for (int col = 0; col < n; ++col) {
                const double a = R[static_cast<std::size_t>(col) * n + row];
                re += a * x[col].real();
                im += a * x[col].imag();
            }
            out[row] = cd{im, -re};  // multiply by -i
        }
    };
    auto norm2 = [&](const std::vector<cd>& x) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += std::norm(x[i]) * g.sp[i + 1] * g.du;
        return std::sqrt(acc);
    };
    const double n0 = norm2(w);
    double dt = 0.25;
    const int nst = std::max(8, static_cast<int>(std::ceil(T / dt)));
    dt = T / nst;
    std::vector<cd> k1(n), k2(n), k3(n), k4(n), tmp(n);
    std::vector<double> ts, lg;
    for (int s = 0; s < nst; ++s) {
        matvec(w, k1);
        for (int i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * dt * k1[i];
        matvec(tmp, k2);
        for (int i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * dt * k2[i];
        matvec(tmp, k3);
        for (int i = 0; i < n; ++i) tmp[i] = w[i] + dt * k3[i];
        matvec(tmp, k4);
        for (int i = 0; i < n; ++i)
            w[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double t = (s + 1) * dt;
        if (t >= 0.5 * T) {
            ts.push_back(t);
            lg.push_back(std::log(norm2(w)));
        }
    }
    rep.norm_ratio = norm2(w) / n0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sx += ts[i];
        sy += lg[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * lg[i];
    }
    const double m = static_cast<double>(ts.size());
    rep.rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

}  // namespace shearlab
