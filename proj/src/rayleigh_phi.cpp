#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shearlab/rayleigh.hpp"

namespace shearlab {

namespace {

/// Taylor coefficients of the regular solution u of ((b0-c)^2 u')' =
/// (b0-c)^2 u at the critical point (u(0)=1, u'(0)=0), plus the series of
/// w = (b0-c)^2 u'.
struct SeriesSeed {
    std::vector<cd> u;  ///< u_m
    std::vector<cd> P;  ///< w_m
    double radius = 0.0;

    cd eval_u(cd s) const {
        cd acc{0.0, 0.0};
        for (int m = static_cast<int>(u.size()) - 1; m >= 0; --m) acc = acc * s + u[m];
        return acc;
    }
    cd eval_w(cd s) const {
        cd acc{0.0, 0.0};
        for (int m = static_cast<int>(P.size()) - 1; m >= 0; --m) acc = acc * s + P[m];
        return acc;
    }
};

SeriesSeed make_seed(const RayleighProfile& pr, cd c, cd yct, int order,
                     double r0_init) {
    const auto B = pr.b0_series(yct, order + 2);
    std::vector<cd> D(order + 3, cd{0.0, 0.0});
    for (int m = 1; m < static_cast<int>(D.size()) && m < static_cast<int>(B.size()); ++m)
        D[m] = B[m];
    // W = (b0 - c)^2, W_m = sum_{i+j=m} D_i D_j (D_0 = 0 at the root)
    std::vector<cd> W(order + 3, cd{0.0, 0.0});
    for (int m = 2; m < static_cast<int>(W.size()); ++m)
        for (int i = 1; i <= m - 1; ++i) W[m] += D[i] * D[m - i];
    SeriesSeed seed;
    seed.u.assign(order + 1, cd{0.0, 0.0});
    seed.u[0] = 1.0;
    for (int m = 2; m <= order; ++m) {
        cd rhs{0.0, 0.0};
        for (int j = 0; j <= m - 2; ++j) rhs += seed.u[j] * W[m - j];
        cd lhs_rest{0.0, 0.0};
        for (int k = 1; k <= m - 1; ++k) lhs_rest += double(k) * seed.u[k] * W[m + 2 - k];
        seed.u[m] = (rhs - double(m + 1) * lhs_rest) / (double(m + 1) * double(m) * W[2]);
    }
    seed.P.assign(order + 2, cd{0.0, 0.0});
    for (int m = 0; m <= order + 1; ++m)
        for (int k = 1; k <= order && m + 1 - k >= 0; ++k)
            if (m + 1 - k < static_cast<int>(W.size()))
                seed.P[m] += double(k) * seed.u[k] * W[m + 1 - k];
    // shrink the radius until the series tail is negligible
    double r0 = r0_init;
    for (int halvings = 0; halvings < 8; ++halvings) {
        const double tail = std::abs(seed.u[order]) * std::pow(r0, order) +
                            std::abs(seed.u[order - 1]) * std::pow(r0, order - 1);
        if (tail < 1e-13) break;
        r0 *= 0.5;
    }
    seed.radius = r0;
    return seed;
}

/// One adaptive RK4 march of (u, w) from p to q along the straight segment.
void march_uw(const RayleighProfile& pr, cd c, cd p, cd q, cd& u, cd& w) {
    auto deriv = [&](cd y, cd uu, cd ww, cd& du, cd& dw) {
        const cd W = (pr.b0(y) - c) * (pr.b0(y) - c);
        du = ww / W;
        dw = W * uu;
    };
    cd pos = p;
    const cd dir = q - p;
    const double len = std::abs(dir);
    if (len == 0.0) return;
    const cd unit = dir / len;
    double s = 0.0;
    while (s < len - 1e-15) {
        // local rate of the second-order form: 2 b0'/(b0-c) and unit
        const cd bc = pr.b0(pos) - c;
        const double kappa = 1.0 + 2.0 * std::abs(pr.b0p(pos) / bc);
        double h = std::min(len - s, 0.2 / kappa);
        h = std::min(h, 0.35);
        cd k1u, k1w, k2u, k2w, k3u, k3w, k4u, k4w;
        deriv(pos, u, w, k1u, k1w);
        deriv(pos + 0.5 * h * unit, u + 0.5 * h * k1u, w + 0.5 * h * k1w, k2u, k2w);
        deriv(pos + 0.5 * h * unit, u + 0.5 * h * k2u, w + 0.5 * h * k2w, k3u, k3w);
        deriv(pos + h * unit, u + h * k3u, w + h * k3w, k4u, k4w);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        s += h;
        pos = p + s * unit;
    }
}

struct USolution {
    cd c;
    cd yct;
    double yc_r;
    double dy;
    std::vector<double> y;
    std::vector<cd> u, w;
};

/// u on the real grid centered at yc(Re c), seeded at the complex critical
/// point; the same routine serves real c (phi1) and complex c (analytic phi).
USolution solve_u(const RayleighConfig& cfg, cd c, double Y) {
    const auto pr = cfg.profile();
    USolution sol;
    sol.c = c;
    sol.yct = pr.yc_complex(c);
    sol.yc_r = pr.yc(c.real());
    sol.dy = cfg.dy_eff();
    const int n = static_cast<int>(std::ceil(Y / sol.dy));
    sol.y.resize(2 * n + 1);
    for (int j = 0; j <= 2 * n; ++j) sol.y[j] = sol.yc_r + (j - n) * sol.dy;
    sol.u.assign(2 * n + 1, cd{0.0, 0.0});
    sol.w.assign(2 * n + 1, cd{0.0, 0.0});

    const double r0_init = (pr.M() > 0.0) ? std::min(0.4 * pr.gamma(), 0.5) : 0.5;
    const auto seed = make_seed(pr, c, sol.yct, cfg.series_order, r0_init);
    const double r0 = seed.radius;
    const double gap = std::max(2.0 * r0, 1.5 * std::abs(sol.yct.imag()));
    std::vector<bool> filled(2 * n + 1, false);

    for (int sgn : {+1, -1}) {
        const cd target0{sol.yc_r + sgn * gap, 0.0};
        const cd dir = (target0 - sol.yct) / std::abs(target0 - sol.yct);
        const cd p0 = sol.yct + r0 * dir;
        cd u = seed.eval_u(p0 - sol.yct);
        cd w = seed.eval_w(p0 - sol.yct);
        march_uw(pr, c, p0, target0, u, w);
        if (sgn > 0) {
            const int ks = static_cast<int>(std::ceil((target0.real() - sol.y[0]) / sol.dy - 1e-9));
            cd prev = target0;
            for (int k = std::max(ks, 0); k <= 2 * n; ++k) {
                march_uw(pr, c, prev, cd{sol.y[k], 0.0}, u, w);
                sol.u[k] = u;
                sol.w[k] = w;
                filled[k] = true;
                prev = cd{sol.y[k], 0.0};
            }
        } else {
            const int ks = static_cast<int>(std::floor((target0.real() - sol.y[0]) / sol.dy + 1e-9));
            cd prev = target0;
            for (int k = std::min(ks, 2 * n); k >= 0; --k) {
                march_uw(pr, c, prev, cd{sol.y[k], 0.0}, u, w);
                sol.u[k] = u;
                sol.w[k] = w;
                filled[k] = true;
                prev = cd{sol.y[k], 0.0};
            }
        }
    }
    for (int k = 0; k <= 2 * n; ++k) {
        if (filled[k]) continue;
        const cd yy{sol.y[k], 0.0};
        if (std::abs(yy - sol.yct) <= r0) {
            sol.u[k] = seed.eval_u(yy - sol.yct);
            sol.w[k] = seed.eval_w(yy - sol.yct);
        } else {
            const cd dir = (yy - sol.yct) / std::abs(yy - sol.yct);
            const cd p0 = sol.yct + r0 * dir;
            cd u = seed.eval_u(p0 - sol.yct);
            cd w = seed.eval_w(p0 - sol.yct);
            march_uw(pr, c, p0, yy, u, w);
            sol.u[k] = u;
            sol.w[k] = w;
        }
    }
    return sol;
}

}  // namespace

Phi1Solution solve_phi1(const RayleighConfig& cfg, double c_r, double Y_override) {
    cfg.validate();
    const double Y = Y_override > 0.0 ? Y_override : cfg.Y_max;
    const auto us = solve_u(cfg, cd{c_r, 0.0}, Y);
    const auto pr = cfg.profile();
    Phi1Solution sol;
    sol.c_r = c_r;
    sol.yc = us.yc_r;
    sol.dy = us.dy;
    sol.y = us.y;
    const int n = static_cast<int>(us.y.size());
    sol.phi1.resize(n);
    sol.F.resize(n);
    const int ic = us.y.size() / 2;
    for (int i = 0; i < n; ++i) {
        sol.phi1[i] = us.u[i].real();
        if (i == ic) {
            sol.F[i] = 0.0;
        } else {
            const double bc = pr.b0(us.y[i]) - c_r;
            sol.F[i] = (us.w[i].real() / (bc * bc)) / us.u[i].real();
        }
    }
    // invariants (spec: violation errors name the bound and location)
    sol.C4 = 1e300;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(us.y[i] - sol.yc);
        if (sol.phi1[i] < 1.0 - 1e-9)
            throw std::runtime_error("phi1 invariant phi1 >= 1 violated at y = " +
                                     std::to_string(us.y[i]));
        if (std::abs(sol.F[i]) > std::min(1.0, d) + 1e-7)
            throw std::runtime_error("phi1 invariant |F| <= min(1,|y-y_c|) violated at y = " +
                                     std::to_string(us.y[i]));
        if (d >= 1.0) sol.C4 = std::min(sol.C4, std::abs(sol.F[i]));
    }
    const double Fp_c = (sol.F[ic + 1] - sol.F[ic - 1]) / (2.0 * sol.dy);
    if (std::abs(Fp_c - 1.0 / 3.0) > 1e-4)
        throw std::runtime_error("phi1 invariant F'(y_c) = 1/3 violated: measured " +
                                 std::to_string(Fp_c));
    for (int i = 0; i + 1 < n; ++i) {
        const double ratio = sol.phi1[i + 1] / sol.phi1[i];
        if (ratio > std::exp(sol.dy) * (1.0 + 1e-9) ||
            ratio < std::exp(-sol.dy) * (1.0 - 1e-9))
            throw std::runtime_error("phi1 invariant e^{-|dy|} <= ratio <= e^{|dy|} violated");
    }
    return sol;
}

double phi1_volterra_residual(const RayleighConfig& cfg, const Phi1Solution& sol,
                              double span) {
    const auto pr = cfg.profile();
    const int ic = sol.center();
    const int m = std::min<int>(static_cast<int>(span / sol.dy), ic);
    const int n = 2 * m + 1;
    std::vector<double> y(n), bc2(n), v(n, 1.0), nv(n), inner(n), outer(n);
    for (int i = 0; i < n; ++i) {
        y[i] = sol.y[ic - m + i];
        const double bc = pr.b0(y[i]) - sol.c_r;
        bc2[i] = bc * bc;
    }
    const int c = m;
    for (int it = 0; it < 200; ++it) {
        // inner cumulative from the center: int_{y_c}^{y} v (b0-c)^2
        inner[c] = 0.0;
        for (int i = c; i + 1 < n; ++i)
            inner[i + 1] = inner[i] + 0.5 * sol.dy * (v[i] * bc2[i] + v[i + 1] * bc2[i + 1]);
        for (int i = c; i > 0; --i)
            inner[i - 1] = inner[i] - 0.5 * sol.dy * (v[i] * bc2[i] + v[i - 1] * bc2[i - 1]);
        // outer integrand inner/(b0-c)^2, center value -> 0 limit
        for (int i = 0; i < n; ++i) outer[i] = (i == c) ? 0.0 : inner[i] / bc2[i];
        nv[c] = 1.0;
        double acc = 0.0;
        for (int i = c; i + 1 < n; ++i) {
            acc += 0.5 * sol.dy * (outer[i] + outer[i + 1]);
            nv[i + 1] = 1.0 + acc;
        }
        acc = 0.0;
        for (int i = c; i > 0; --i) {
            acc -= 0.5 * sol.dy * (outer[i] + outer[i - 1]);
            nv[i - 1] = 1.0 + acc;
        }
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(nv[i] - v[i]));
        v = nv;
        if (diff < 1e-12) break;
    }
    double rel = 0.0;
    for (int i = 0; i < n; ++i)
        rel = std::max(rel, std::abs(v[i] - sol.phi1[ic - m + i]) / sol.phi1[ic - m + i]);
    return rel;
}

Phi2Solution solve_phi2(const RayleighConfig& cfg, const Phi1Solution& phi1, cd c) {
    cfg.validate();
    const double ci = c.imag();
    if (ci == 0.0) throw std::invalid_argument("solve_phi2: needs Im c != 0");
    if (std::abs(ci) > cfg.ci_max_phi2)
        throw std::invalid_argument("solve_phi2: |Im c| exceeds the admitted range");
    if (std::abs(c.real() - phi1.c_r) > 1e-12)
        throw std::invalid_argument("solve_phi2: Re c must match the phi1 solution");
    const auto pr = cfg.profile();
    const int n = static_cast<int>(phi1.y.size());
    const int ic = phi1.center();
    const double dy = phi1.dy;

    std::vector<cd> K(n), denom(n);
    std::vector<double> ratio(n);  // F/(b0 - c_r), smooth through y_c
    for (int i = 0; i < n; ++i) {
        const double b = pr.b0(phi1.y[i]);
        ratio[i] = (i == ic) ? 1.0 / (3.0 * pr.b0p(phi1.yc))
                             : phi1.F[i] / (b - phi1.c_r);
        K[i] = pr.b0p(phi1.y[i]) * phi1.phi1[i] * phi1.phi1[i] * ratio[i] * (cd{b, 0.0} - c);
        const cd bc = cd{b, 0.0} - c;
        denom[i] = bc * bc * phi1.phi1[i] * phi1.phi1[i];
    }
    Phi2Solution out;
    out.c = c;
    out.phi2.assign(n, cd{1.0, 0.0});
    std::vector<cd> inner(n), outint(n), next(n);
    double prev_diff = 1e300;
    int grew = 0;
    for (int it = 0; it < 400; ++it) {
        inner[ic] = 0.0;
        for (int i = ic; i + 1 < n; ++i)
            inner[i + 1] = inner[i] + 0.5 * dy * (K[i] * out.phi2[i] + K[i + 1] * out.phi2[i + 1]);
        for (int i = ic; i > 0; --i)
            inner[i - 1] = inner[i] - 0.5 * dy * (K[i] * out.phi2[i] + K[i - 1] * out.phi2[i - 1]);
        outint[ic] = 0.0;
        auto integrand = [&](int i) { return inner[i] / denom[i]; };
        cd acc{0.0, 0.0};
        for (int i = ic; i + 1 < n; ++i) {
            acc += 0.5 * dy * (integrand(i) + integrand(i + 1));
            outint[i + 1] = acc;
        }
        acc = cd{0.0, 0.0};
        for (int i = ic; i > 0; --i) {
            acc -= 0.5 * dy * (integrand(i) + integrand(i - 1));
            outint[i - 1] = acc;
        }
        double diff = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] = 1.0 - 2.0 * cd{0.0, 1.0} * ci * outint[i];
            diff = std::max(diff, std::abs(next[i] - out.phi2[i]));
        }
        out.phi2.swap(next);
        out.iterations = it + 1;
        if (diff < 1e-12) break;
        if (diff > prev_diff * (1.0 + 1e-12)) {
            if (++grew >= 3)
                throw std::runtime_error("solve_phi2: iteration diverges; |Im c| too large");
        } else {
            grew = 0;
        }
        prev_diff = diff;
    }
    out.phi2_prime.resize(n);
    inner[ic] = 0.0;
    for (int i = ic; i + 1 < n; ++i)
        inner[i + 1] = inner[i] + 0.5 * dy * (K[i] * out.phi2[i] + K[i + 1] * out.phi2[i + 1]);
    for (int i = ic; i > 0; --i)
        inner[i - 1] = inner[i] - 0.5 * dy * (K[i] * out.phi2[i] + K[i - 1] * out.phi2[i - 1]);
    for (int i = 0; i < n; ++i)
        out.phi2_prime[i] = -2.0 * cd{0.0, 1.0} * ci * inner[i] / denom[i];
    for (int i = 0; i < n; ++i)
        out.sup_dev = std::max(out.sup_dev, std::abs(out.phi2[i] - 1.0));
    return out;
}

PhiAnalytic solve_phi_analytic(const RayleighConfig& cfg, cd c, double Y_override) {
    cfg.validate();
    if (c.imag() == 0.0)
        throw std::invalid_argument("solve_phi_analytic: needs Im c != 0 (use solve_phi1)");
    const double Y = Y_override > 0.0 ? Y_override : cfg.Y_max;
    const auto us = solve_u(cfg, c, Y);
    const auto pr = cfg.profile();
    PhiAnalytic out;
    out.c = c;
    out.yct = us.yct;
    out.yc_r = us.yc_r;
    out.dy = us.dy;
    out.y = us.y;
    const int n = static_cast<int>(us.y.size());
    out.phi.resize(n);
    out.phi_prime.resize(n);
    for (int i = 0; i < n; ++i) {
        const cd bc = cd{pr.b0(us.y[i]), 0.0} - c;
        out.phi[i] = bc * us.u[i];
        out.phi_prime[i] = pr.b0p(us.y[i]) * us.u[i] + us.w[i] / bc;
    }
    return out;
}

}  // namespace shearlab
