#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shearlab/rayleigh.hpp"
#include "shearlab/rayleigh_detail.hpp"

namespace shearlab {

namespace detail {

// Composite Simpson over a uniform grid slice [i0, i1] (inclusive); falls
// back to a trapezoid on a trailing odd interval.
cd simpson_slice(const std::vector<cd>& f, int i0, int i1, double h) {
    const int n = i1 - i0 + 1;
    if (n < 2) return {0.0, 0.0};
    if (n == 2) return 0.5 * h * (f[i0] + f[i0 + 1]);
    cd acc{0.0, 0.0};
    int i = i0;
    for (; i + 2 <= i1; i += 2) acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    if (i < i1) acc += 0.5 * h * (f[i] + f[i + 1]);
    return acc;
}

SingularQuad::SingularQuad(const std::vector<double>& y,
                           const std::vector<double>& v,
                           const std::vector<double>& vp, int center, cd c)
    : y_(y), v_(v), vp_(vp), ic_(center), c_(c) {
    const int n = static_cast<int>(y.size());
    // window of K nodes on each side; K parity matched to the center index so
    // the three Simpson segments all have odd node counts
    int K = std::min({ic_ - 1, n - 2 - ic_,
                      static_cast<int>(std::round(1.0 / (y[1] - y[0])))});
    if ((K & 1) != (ic_ & 1)) --K;
    K = std::max(K, 2);
    iL_ = ic_ - K;
    iR_ = ic_ + K;
}

cd SingularQuad::integrate(const std::vector<cd>& H, cd Hc, cd Hp, cd Hq) const {
    const double h = y_[1] - y_[0];
    const double cr = c_.real(), ci = c_.imag();
    const int n = static_cast<int>(y_.size());
    const double va = v_[iL_], vb = v_[iR_];
    cd S2, S1, S0;
    if (ci != 0.0) {
        S2 = 1.0 / (cd{va, 0.0} - c_) - 1.0 / (cd{vb, 0.0} - c_);
        const cd L = std::log(cd{vb, 0.0} - c_) - std::log(cd{va, 0.0} - c_);
        S1 = L + cd{0.0, ci} * S2;
        S0 = (vb - va) + 2.0 * cd{0.0, ci} * L - ci * ci * S2;
    } else {
        // principal-value boundary forms; the caller must pass Hc = 0
        if (std::abs(Hc) != 0.0)
            throw std::logic_error("SingularQuad: PV form needs a vanishing H(c_r)");
        S2 = {0.0, 0.0};
        S1 = std::log((vb - cr) / (cr - va));
        S0 = vb - va;
    }
    // windowed remainder (vanishes to cubic order at the center)
    std::vector<cd> R(n, cd{0.0, 0.0});
    for (int i = iL_; i <= iR_; ++i) {
        const double dv = v_[i] - cr;
        const cd denom = (cd{v_[i], 0.0} - c_) * (cd{v_[i], 0.0} - c_);
        R[i] = (H[i] - Hc - Hp * dv - Hq * dv * dv) / denom * vp_[i];
    }
    const cd mid = simpson_slice(R, iL_, iR_, h) + Hc * S2 + Hp * S1 + Hq * S0;
    // plain segments outside the window (the boundary nodes iL/iR carry the
    // plain integrand there; it is regular away from the center)
    std::vector<cd> G(n, cd{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        if (i > iL_ && i < iR_) continue;
        const cd denom = (cd{v_[i], 0.0} - c_) * (cd{v_[i], 0.0} - c_);
        G[i] = H[i] / denom * vp_[i];
    }
    const cd left = simpson_slice(G, 0, iL_, h);
    const cd right = simpson_slice(G, iR_, n - 1, h);
    return left + mid + right;
}

void SingularQuad::cumulative(const std::vector<cd>& H, cd Hc, cd Hp, cd Hq,
                              std::vector<cd>& out) const {
    const double h = y_[1] - y_[0];
    const double cr = c_.real(), ci = c_.imag();
    if (ci == 0.0)
        throw std::logic_error("SingularQuad::cumulative: needs Im c != 0");
    const int n = static_cast<int>(y_.size());
    out.assign(n, cd{0.0, 0.0});
    auto anti = [&](double v) {
        // antiderivatives of 1/(v-c)^2, (v-cr)/(v-c)^2, (v-cr)^2/(v-c)^2
        const cd z = cd{v, 0.0} - c_;
        const cd A2 = -1.0 / z;
        const cd L = std::log(z);
        const cd A1 = L + cd{0.0, ci} * A2;
        const cd A0 = v + 2.0 * cd{0.0, ci} * L - ci * ci * A2;
        return std::array<cd, 3>{A2, A1, A0};
    };
    auto plain = [&](int i) {
        const cd denom = (cd{v_[i], 0.0} - c_) * (cd{v_[i], 0.0} - c_);
        return H[i] / denom * vp_[i];
    };
    auto remainder = [&](int i) {
        const double dv = v_[i] - cr;
        const cd denom = (cd{v_[i], 0.0} - c_) * (cd{v_[i], 0.0} - c_);
        return (H[i] - Hc - Hp * dv - Hq * dv * dv) / denom * vp_[i];
    };
    cd acc{0.0, 0.0};
    for (int j = 0; j + 1 < n; ++j) {
        if (j >= iL_ && j < iR_) {
            acc += 0.5 * h * (remainder(j) + remainder(j + 1));
            const auto a0 = anti(v_[j]);
            const auto a1 = anti(v_[j + 1]);
            acc += Hc * (a1[0] - a0[0]) + Hp * (a1[1] - a0[1]) + Hq * (a1[2] - a0[2]);
        } else {
            acc += 0.5 * h * (plain(j) + plain(j + 1));
        }
        out[j + 1] = acc;
    }
}

void fit_H_derivatives(const std::vector<double>& v, const std::vector<cd>& H,
                       int ic, double cr, cd& Hc, cd& Hp, cd& Hq) {
    Hc = H[ic];
    // degree-4 interpolation through the 5 center nodes, coefficients at cr
    std::array<double, 5> x;
    std::array<cd, 5> b;
    for (int j = 0; j < 5; ++j) {
        x[j] = v[ic - 2 + j] - cr;
        b[j] = H[ic - 2 + j];
    }
    std::array<std::array<double, 5>, 5> A;
    for (int r = 0; r < 5; ++r) {
        A[r][0] = 1.0;
        for (int cix = 1; cix < 5; ++cix) A[r][cix] = A[r][cix - 1] * x[r];
    }
    for (int col = 0; col < 5; ++col) {
        int piv = col;
        for (int r = col + 1; r < 5; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 5; ++r) {
            const double fct = A[r][col] / A[col][col];
            for (int cix = col; cix < 5; ++cix) A[r][cix] -= fct * A[col][cix];
            b[r] -= fct * b[col];
        }
    }
    std::array<cd, 5> coef;
    for (int r = 4; r >= 0; --r) {
        cd acc = b[r];
        for (int cix = r + 1; cix < 5; ++cix) acc -= A[r][cix] * coef[cix];
        coef[r] = acc / A[r][r];
    }
    Hp = coef[1];
    Hq = coef[2];
}

}  // namespace detail

WronskianD wronskian_D(const RayleighConfig& cfg, cd c) {
    cfg.validate();
    if (c.imag() == 0.0)
        throw std::invalid_argument(
            "wronskian_D: Im c must be nonzero (j_functions handles the limit)");
    const auto pr = cfg.profile();
    double Y = cfg.Y_max;
    WronskianD out;
    out.c = c;
    for (int attempt = 0; attempt <= cfg.max_Y_doublings; ++attempt) {
        const auto phi = solve_phi_analytic(cfg, c, Y);
        const int n = static_cast<int>(phi.y.size());
        std::vector<double> v(n), vp(n);
        std::vector<cd> H(n);
        for (int i = 0; i < n; ++i) {
            v[i] = pr.b0(phi.y[i]);
            vp[i] = pr.b0p(phi.y[i]);
            const cd bc = cd{v[i], 0.0} - c;
            H[i] = bc * bc / (vp[i] * phi.phi[i] * phi.phi[i]);
        }
        detail::SingularQuad quad(phi.y, v, vp, phi.center(), c);
        cd Hc, Hp, Hq;
        detail::fit_H_derivatives(v, H, phi.center(), c.real(), Hc, Hp, Hq);
        out.D = quad.integrate(H, Hc, Hp, Hq);
        const double h = phi.dy;
        auto tail_one = [&](int iend, int ioff) {
            const double slope =
                std::abs(std::log(std::abs(phi.phi[iend] * phi.phi[iend])) -
                         std::log(std::abs(phi.phi[ioff] * phi.phi[ioff]))) /
                (std::abs(iend - ioff) * h);
            return std::abs(1.0 / (phi.phi[iend] * phi.phi[iend])) / std::max(slope, 0.5);
        };
        out.tail_estimate = tail_one(n - 1, n - 6) + tail_one(0, 5);
        out.Y_used = Y;
        if (out.tail_estimate <= cfg.tail_rel * std::abs(out.D) ||
            attempt == cfg.max_Y_doublings)
            break;
        Y *= 1.5;
    }
    return out;
}

double cr_residual(const RayleighConfig& cfg, cd c, double h) {
    const cd Dxp = wronskian_D(cfg, c + cd{h, 0.0}).D;
    const cd Dxm = wronskian_D(cfg, c - cd{h, 0.0}).D;
    const cd Dyp = wronskian_D(cfg, c + cd{0.0, h}).D;
    const cd Dym = wronskian_D(cfg, c - cd{0.0, h}).D;
    const cd Dx = (Dxp - Dxm) / (2.0 * h);
    const cd Dy = (Dyp - Dym) / (2.0 * h);
    return std::abs(Dx + cd{0.0, 1.0} * Dy) / std::abs(Dx);
}

}  // namespace shearlab
