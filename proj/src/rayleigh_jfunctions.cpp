#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shearlab/rayleigh.hpp"
#include "shearlab/rayleigh_detail.hpp"

namespace shearlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

JFunctions j_functions(const RayleighConfig& cfg, double c_r,
                       const std::function<double(double)>* f) {
    cfg.validate();
    const auto pr = cfg.profile();
    const auto p1 = solve_phi1(cfg, c_r);
    const int n = static_cast<int>(p1.y.size());
    const int ic = p1.center();
    const double dy = p1.dy;
    const double b1c = pr.b0p(p1.yc);

    std::vector<double> v(n), vp(n);
    for (int i = 0; i < n; ++i) {
        v[i] = pr.b0(p1.y[i]);
        vp[i] = pr.b0p(p1.y[i]);
    }

    JFunctions out;
    out.c_r = c_r;
    out.J2 = kPi * pr.b0pp(p1.yc) / (b1c * b1c * b1c);

    // Pi2 = int (1/phi1^2 - 1)/(b0-c_r)^2 dy, bounded integrand, plus tails
    {
        std::vector<cd> q(n);
        for (int i = 0; i < n; ++i) {
            if (i == ic) {
                q[i] = -1.0 / (3.0 * b1c * b1c);
            } else {
                const double bc = v[i] - c_r;
                q[i] = (1.0 / (p1.phi1[i] * p1.phi1[i]) - 1.0) / (bc * bc);
            }
        }
        const cd body = detail::simpson_slice(q, 0, n - 1, dy);
        const double tail = -1.0 / (v[n - 1] - c_r) - 1.0 / (c_r - v[0]);
        out.Pi2 = body.real() + tail;
    }

    // Pi1 = PV int (b0'(y_c) - b0') / (b0 - c_r)^2 dy via the subtraction form
    {
        std::vector<cd> H(n);
        for (int i = 0; i < n; ++i) H[i] = (b1c - vp[i]) / vp[i];
        cd Hc, Hp, Hq;
        detail::fit_H_derivatives(v, H, ic, c_r, Hc, Hp, Hq);
        detail::SingularQuad quad(p1.y, v, vp, ic, cd{c_r, 0.0});
        const cd body = quad.integrate(H, cd{0.0, 0.0}, Hp, Hq);
        const double Hinf = b1c - 1.0;
        const double tails = Hinf / (v[n - 1] - c_r) + Hinf / (c_r - v[0]);
        out.Pi1 = body.real() + tails;
    }
    out.J1 = out.Pi1 / b1c + out.Pi2;

    if (f != nullptr) {
        // N(y) = int_{y_c}^{y} f phi1
        std::vector<double> N(n, 0.0);
        for (int i = ic; i + 1 < n; ++i)
            N[i + 1] = N[i] + 0.5 * dy * ((*f)(p1.y[i]) * p1.phi1[i] +
                                          (*f)(p1.y[i + 1]) * p1.phi1[i + 1]);
        for (int i = ic; i > 0; --i)
            N[i - 1] = N[i] - 0.5 * dy * ((*f)(p1.y[i]) * p1.phi1[i] +
                                          (*f)(p1.y[i - 1]) * p1.phi1[i - 1]);
        std::vector<cd> H(n);
        for (int i = 0; i < n; ++i)
            H[i] = N[i] / (vp[i] * p1.phi1[i] * p1.phi1[i]);
        cd Hc, Hp, Hq;
        detail::fit_H_derivatives(v, H, ic, c_r, Hc, Hp, Hq);
        detail::SingularQuad quad(p1.y, v, vp, ic, cd{c_r, 0.0});
        out.J3 = quad.integrate(H, cd{0.0, 0.0}, Hp, Hq).real();
        out.J4 = kPi * (*f)(p1.yc) / (b1c * b1c);
    }
    return out;
}

EmbeddedScanReport embedded_scan(const RayleighConfig& cfg, int n_grid) {
    const auto regions = ExclusionRegions::from(cfg);
    const double R = 1.25 * regions.cr_max;
    EmbeddedScanReport rep;
    rep.min_J1sq_plus_J2sq = 1e300;
    for (int i = 0; i < n_grid; ++i) {
        const double cr = -R + 2.0 * R * i / (n_grid - 1);
        const auto J = j_functions(cfg, cr);
        const double val = J.J1 * J.J1 + J.J2 * J.J2;
        rep.grid.push_back(cr);
        rep.J1s.push_back(J.J1);
        rep.J2s.push_back(J.J2);
        if (val < rep.min_J1sq_plus_J2sq) {
            rep.min_J1sq_plus_J2sq = val;
            rep.argmin_cr = cr;
        }
    }
    rep.J2_at_zero = j_functions(cfg, 0.0).J2;
    return rep;
}

std::pair<cd, cd> mu_limits(const RayleighConfig& cfg, double c_r,
                            const std::function<double(double)>& w_in) {
    const auto J = j_functions(cfg, c_r, &w_in);
    const cd i{0.0, 1.0};
    const cd mu_plus = (J.J3 + i * J.J4) / (J.J1 - i * J.J2);
    const cd mu_minus = (J.J3 - i * J.J4) / (J.J1 + i * J.J2);
    return {mu_plus, mu_minus};
}

InhomogeneousSolution inhomogeneous_phi(const RayleighConfig& cfg,
                                        const std::function<double(double)>& w_in,
                                        cd c) {
    cfg.validate();
    if (c.imag() == 0.0)
        throw std::invalid_argument("inhomogeneous_phi: needs Im c != 0 (mu_limits handles the boundary)");
    const auto pr = cfg.profile();
    const auto phi = solve_phi_analytic(cfg, c);
    const int n = static_cast<int>(phi.y.size());
    const int ic = phi.center();
    const double dy = phi.dy;

    std::vector<double> v(n), vp(n);
    std::vector<cd> u(n);
    for (int i = 0; i < n; ++i) {
        v[i] = pr.b0(phi.y[i]);
        vp[i] = pr.b0p(phi.y[i]);
        u[i] = phi.phi[i] / (cd{v[i], 0.0} - c);
    }
    // N(y) = int_{y_c}^y w_in u
    std::vector<cd> N(n, cd{0.0, 0.0});
    for (int i = ic; i + 1 < n; ++i)
        N[i + 1] = N[i] + 0.5 * dy * (w_in(phi.y[i]) * u[i] + w_in(phi.y[i + 1]) * u[i + 1]);
    for (int i = ic; i > 0; --i)
        N[i - 1] = N[i] - 0.5 * dy * (w_in(phi.y[i]) * u[i] + w_in(phi.y[i - 1]) * u[i - 1]);

    std::vector<cd> H_D(n), H_N(n);
    for (int i = 0; i < n; ++i) {
        const cd uu = u[i] * u[i];
        H_D[i] = 1.0 / (vp[i] * uu);
        H_N[i] = N[i] / (vp[i] * uu);
    }
    detail::SingularQuad quad(phi.y, v, vp, ic, c);
    cd HDc, HDp, HDq, HNc, HNp, HNq;
    detail::fit_H_derivatives(v, H_D, ic, c.real(), HDc, HDp, HDq);
    detail::fit_H_derivatives(v, H_N, ic, c.real(), HNc, HNp, HNq);
    std::vector<cd> CD, CN;
    quad.cumulative(H_D, HDc, HDp, HDq, CD);
    quad.cumulative(H_N, HNc, HNp, HNq, CN);
    const cd D_tot = CD.back();
    const cd N_tot = CN.back();
    if (std::abs(D_tot) < 1e-6)
        throw resolvent_singular("inhomogeneous_phi: D(c) vanishes within tolerance; c is an eigenvalue");

    InhomogeneousSolution out;
    out.c = c;
    out.mu = N_tot / D_tot;
    out.y = phi.y;
    out.Phi.resize(n);
    const cd iu{0.0, 1.0};
    double phimax = 0.0;
    std::vector<cd> Phi_plus(n);
    for (int i = 0; i < n; ++i) {
        out.Phi[i] = iu * phi.phi[i] * (CN[i] - out.mu * CD[i]);
        Phi_plus[i] = iu * phi.phi[i] * ((CN[i] - N_tot) - out.mu * (CD[i] - D_tot));
        phimax = std::max(phimax, std::abs(out.Phi[i]));
    }
    out.rep_agreement = 0.0;
    for (int i = 0; i < n; ++i)
        out.rep_agreement =
            std::max(out.rep_agreement, std::abs(out.Phi[i] - Phi_plus[i]));
    out.rep_agreement /= std::max(phimax, 1e-300);

    // ODE residual away from the critical layer
    double resid = 0.0, scale = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        if (std::abs(phi.y[i] - phi.yc_r) < 0.1) continue;
        const cd second = (out.Phi[i + 1] - 2.0 * out.Phi[i] + out.Phi[i - 1]) / (dy * dy);
        const cd bc = cd{v[i], 0.0} - c;
        const cd r = second - out.Phi[i] - pr.b0pp(phi.y[i]) / bc * out.Phi[i] -
                     iu * w_in(phi.y[i]) / bc;
        resid = std::max(resid, std::abs(r));
        scale = std::max(scale, std::abs(out.Phi[i]) + std::abs(w_in(phi.y[i])));
    }
    out.residual = resid / std::max(scale, 1e-300);
    return out;
}

}  // namespace shearlab
