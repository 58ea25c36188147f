#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shearlab/rayleigh.hpp"

namespace shearlab {

namespace {
constexpr double kPi = std::numbers::pi;

struct Rect {
    double x0, x1, y0, y1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diam() const { return std::hypot(width(), height()); }
};

/// Phase increment along a polyline of D samples with adaptive bisection
/// until consecutive samples differ by < pi/2 in phase.
class ContourWalker {
  public:
    ContourWalker(const RayleighConfig& cfg, std::vector<std::pair<cd, cd>>* log)
        : cfg_(cfg), log_(log) {}

    cd eval(cd c) {
        const cd D = wronskian_D(cfg_, c).D;
        if (log_) log_->emplace_back(c, D);
        return D;
    }

    /// Total winding (in turns) along the closed rectangle boundary.
    double winding(const Rect& r, int samples_per_edge = 8) {
        std::vector<cd> pts;
        auto edge = [&](cd a, cd b) {
            for (int i = 0; i < samples_per_edge; ++i)
                pts.push_back(a + (b - a) * (double(i) / samples_per_edge));
        };
        const cd c00{r.x0, r.y0}, c10{r.x1, r.y0}, c11{r.x1, r.y1}, c01{r.x0, r.y1};
        edge(c00, c10);
        edge(c10, c11);
        edge(c11, c01);
        edge(c01, c00);
        pts.push_back(c00);
        double total = 0.0;
        cd prev_c = pts[0];
        cd prev_D = eval(prev_c);
        for (std::size_t i = 1; i < pts.size(); ++i)
            total += walk_segment(prev_c, pts[i], prev_D);
        return total / (2.0 * kPi);
    }

  private:
    double walk_segment(cd& a, cd b, cd& Da, int depth = 0) {
        const cd Db = eval(b);
        const double dphase = std::arg(Db / Da);
        if (std::abs(dphase) < 0.5 * kPi || depth >= 24) {
            if (depth >= 24)
                throw std::runtime_error("winding: phase jump unresolved after refinement budget");
            a = b;
            Da = Db;
            return dphase;
        }
        const cd mid = 0.5 * (a + b);
        const double left = walk_segment(a, mid, Da, depth + 1);
        const double right = walk_segment(a, b, Da, depth + 1);
        return left + right;
    }

    const RayleighConfig& cfg_;
    std::vector<std::pair<cd, cd>>* log_;
};

cd newton_refine(const RayleighConfig& cfg, cd c0, double* absD_out) {
    cd c = c0;
    const double h = 1e-7;
    for (int it = 0; it < 60; ++it) {
        const cd D = wronskian_D(cfg, c).D;
        const cd Dp = (wronskian_D(cfg, c + cd{h, 0.0}).D -
                       wronskian_D(cfg, c - cd{h, 0.0}).D) /
                      (2.0 * h);
        const cd step = D / Dp;
        c -= step;
        if (std::abs(step) < 1e-13 * (1.0 + std::abs(c))) break;
    }
    if (absD_out) *absD_out = std::abs(wronskian_D(cfg, c).D);
    return c;
}

void localize(ContourWalker& walker, const RayleighConfig& cfg, Rect r,
              double tol, std::vector<cd>& seeds, int depth = 0) {
    const int w = static_cast<int>(std::lround(walker.winding(r)));
    if (w == 0) return;
    if (r.diam() < tol || depth > 14) {
        for (int i = 0; i < w; ++i)
            seeds.push_back(cd{0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)});
        return;
    }
    Rect a = r, b = r;
    if (r.width() > r.height()) {
        a.x1 = b.x0 = 0.5 * (r.x0 + r.x1);
    } else {
        a.y1 = b.y0 = 0.5 * (r.y0 + r.y1);
    }
    localize(walker, cfg, a, tol, seeds, depth + 1);
    localize(walker, cfg, b, tol, seeds, depth + 1);
}
}  // namespace

EigenResult count_and_refine(const RayleighConfig& cfg,
                             const std::vector<cd>* oracle_eigs) {
    cfg.validate();
    const auto regions = ExclusionRegions::from(cfg);
    EigenResult result;
    const Rect E{-regions.cr_max, regions.cr_max, regions.ci_E3, regions.ci_E2};
    ContourWalker walker(cfg, &result.contour_samples);
    result.winding_upper = static_cast<int>(std::lround(walker.winding(E, 12)));
    if (result.winding_upper == 0) return result;

    std::vector<cd> seeds;
    ContourWalker quiet(cfg, nullptr);
    localize(quiet, cfg, E, std::max(cfg.gamma / 2.0, E.diam() / 256.0), seeds);

    std::vector<cd> roots;
    for (const auto& s : seeds) {
        double absD = 0.0;
        const cd root = newton_refine(cfg, s, &absD);
        bool dup = false;
        for (const auto& r : roots)
            if (std::abs(r - root) < 1e-6 * (1.0 + std::abs(root))) dup = true;
        if (dup) continue;
        roots.push_back(root);
        RootRecord rec;
        rec.c = root;
        rec.abs_D = absD;
        rec.in_E = regions.classify(root) == 0;
        // eigenfunction residual: psi = phi * int_{-inf}^{y} 1/phi^2 decays on
        // both sides when D(c) = 0
        {
            const auto phi = solve_phi_analytic(cfg, root);
            const auto pr = cfg.profile();
            const int n = static_cast<int>(phi.y.size());
            std::vector<cd> cum(n, cd{0.0, 0.0});
            for (int i = 1; i < n; ++i) {
                const cd ga = 1.0 / (phi.phi[i - 1] * phi.phi[i - 1]);
                const cd gb = 1.0 / (phi.phi[i] * phi.phi[i]);
                cum[i] = cum[i - 1] + 0.5 * phi.dy * (ga + gb);
            }
            std::vector<cd> psi(n);
            double psimax = 0.0;
            for (int i = 0; i < n; ++i) {
                psi[i] = phi.phi[i] * cum[i];
                psimax = std::max(psimax, std::abs(psi[i]));
            }
            double resid = 0.0;
            for (int i = 1; i + 1 < n; ++i) {
                if (std::abs(phi.y[i] - phi.yc_r) < 0.1) continue;
                const cd second =
                    (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (phi.dy * phi.dy);
                const cd bc = cd{pr.b0(phi.y[i]), 0.0} - root;
                resid = std::max(resid,
                                 std::abs(second - psi[i] - pr.b0pp(phi.y[i]) / bc * psi[i]));
            }
            rec.eigenfunction_residual = resid / std::max(psimax, 1e-300);
        }
        if (oracle_eigs && !oracle_eigs->empty()) {
            double best = 1e300;
            for (const auto& ev : *oracle_eigs) {
                const double d = std::abs(ev - root);
                if (d < best) {
                    best = d;
                    rec.oracle_match = ev;
                }
            }
            rec.oracle_rel_diff = best / std::abs(root);
        }
        result.roots.push_back(rec);
    }
    result.basin_collision =
        static_cast<int>(result.roots.size()) < result.winding_upper;
    return result;
}

}  // namespace shearlab
