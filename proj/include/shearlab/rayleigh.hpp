#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shearlab/params.hpp"

namespace shearlab {

using cd = std::complex<double>;

/// Static profile b0 and derivatives, evaluable at complex y (the Rayleigh
/// solver marches short legs off the real axis near the critical layer).
class RayleighProfile {
  public:
    RayleighProfile(double M, double gamma) : M_(M), gamma_(gamma) {}

    double M() const { return M_; }
    double gamma() const { return gamma_; }

    double b0(double y) const;
    double b0p(double y) const;
    double b0pp(double y) const;
    double b0ppp(double y) const;

    cd b0(cd y) const;
    cd b0p(cd y) const;
    cd b0pp(cd y) const;

    /// Unique real root of b0(y) = c_r.
    double yc(double c_r) const;
    /// Complex critical point b0(y) = c, tracked by continuation in Im c.
    cd yc_complex(cd c) const;

    /// Taylor coefficients B_m = b0^{(m)}(y0)/m! for m = 0..order.
    std::vector<cd> b0_series(cd y0, int order) const;

  private:
    double M_, gamma_;
};

struct RayleighConfig {
    double M = 20.0;
    double gamma = 0.02;
    double Y_max = 12.0;        ///< initial half width (adaptively grown)
    double dy = 0.0;            ///< 0 = min(gamma/16, 0.01)
    double tail_rel = 1e-9;     ///< required tail bound relative to |D|
    double ci_max_phi2 = 0.25;  ///< admitted |c_i| for the phi2 iteration
    double M0_proxy = 7.0;      ///< existence assertions gated on M >= M0
    int series_order = 12;
    int max_Y_doublings = 6;

    double dy_eff() const { return dy > 0.0 ? dy : std::min(gamma / 16.0, 0.01); }
    RayleighProfile profile() const { return {M, gamma}; }
    void validate() const;
};

// ---------------------------------------------------------------------------
// Homogeneous solutions
// ---------------------------------------------------------------------------

/// phi1(y, c_r): the regular real solution of ((b0-c_r)^2 phi1')' =
/// (b0-c_r)^2 phi1 with phi1(y_c) = 1, phi1'(y_c) = 0, on the uniform grid
/// y_c + j dy, |j| <= n.
struct Phi1Solution {
    double c_r = 0.0;
    double yc = 0.0;
    double dy = 0.0;
    std::vector<double> y;
    std::vector<double> phi1;
    std::vector<double> F;   ///< phi1'/phi1
    double C4 = 0.0;         ///< measured min |F| over |y-y_c| >= 1

    int center() const { return static_cast<int>(y.size()) / 2; }
};

Phi1Solution solve_phi1(const RayleighConfig& cfg, double c_r,
                        double Y_override = 0.0);

/// Independent cross-check: Picard iteration of the Volterra form
/// phi1 = 1 + int (b0-c_r)^{-2} int phi1 (b0-c_r)^2; returns max |diff| vs
/// the marched solution on |y - y_c| <= span.
double phi1_volterra_residual(const RayleighConfig& cfg,
                              const Phi1Solution& sol, double span);

/// phi2(y, c): complex correction with phi2(y_c)=1, phi2'(y_c)=0, solved by
/// Picard iteration of the integral form; requires 0 < |Im c| <= ci_max_phi2.
struct Phi2Solution {
    cd c;
    std::vector<cd> phi2;
    std::vector<cd> phi2_prime;
    int iterations = 0;
    double sup_dev = 0.0;  ///< || phi2 - 1 ||_inf
};

Phi2Solution solve_phi2(const RayleighConfig& cfg, const Phi1Solution& phi1,
                        cd c);

/// The analytic-in-c regular solution phi(y, c) on the real grid, normalized
/// by its vanishing at the complex critical point (reduces to
/// (b0 - c_r) phi1(y, c_r) as Im c -> 0, and to sinh(y - c) at M = 0).
struct PhiAnalytic {
    cd c;
    cd yct;        ///< complex critical point
    double yc_r;   ///< real critical point b0^{-1}(Re c) (grid center)
    double dy = 0.0;
    std::vector<double> y;
    std::vector<cd> phi;
    std::vector<cd> phi_prime;
    int center() const { return static_cast<int>(y.size()) / 2; }
};

PhiAnalytic solve_phi_analytic(const RayleighConfig& cfg, cd c,
                               double Y_override = 0.0);

// ---------------------------------------------------------------------------
// Wronskian D and J-functions
// ---------------------------------------------------------------------------

struct WronskianD {
    cd c;
    cd D;
    double tail_estimate = 0.0;  ///< absolute bound on the truncated tails
    double Y_used = 0.0;
};

/// D(c) = int 1/phi^2 dy over the line, c_i != 0; quadrature with the
/// double-pole subtraction in v = b0(y); grid grown until the tail estimate
/// is below tail_rel * |D|.
WronskianD wronskian_D(const RayleighConfig& cfg, cd c);

/// Relative Cauchy-Riemann residual |D_x + i D_y| / |D_x| at c (stencil h).
double cr_residual(const RayleighConfig& cfg, cd c, double h = 1e-5);

struct JFunctions {
    double c_r = 0.0;
    double J1 = 0.0, J2 = 0.0;
    double Pi1 = 0.0, Pi2 = 0.0;
    double J3 = 0.0, J4 = 0.0;  ///< zero when no test function was given
};

/// Boundary values of D on the real axis: J1, J2 (and J3, J4 for the
/// optional test function f, smooth with fast decay).
JFunctions j_functions(const RayleighConfig& cfg, double c_r,
                       const std::function<double(double)>* f = nullptr);

struct EmbeddedScanReport {
    double min_J1sq_plus_J2sq = 0.0;
    double argmin_cr = 0.0;
    double J2_at_zero = 0.0;
    std::vector<double> grid;
    std::vector<double> J1s, J2s;
};

/// min over the c_r grid of J1^2 + J2^2 (grid spans the E-rectangle width
/// plus margin).
EmbeddedScanReport embedded_scan(const RayleighConfig& cfg, int n_grid = 41);

// ---------------------------------------------------------------------------
// Inhomogeneous solution
// ---------------------------------------------------------------------------

struct InhomogeneousSolution {
    cd c;
    cd mu;
    std::vector<double> y;
    std::vector<cd> Phi;
    double rep_agreement = 0.0;  ///< rel. diff of the two representations
    double residual = 0.0;       ///< ODE residual away from the critical layer
};

/// Phi(y,c) for c_i != 0 from the two Duhamel-style representations;
/// throws resolvent_singular when |D(c)| is below tolerance.
InhomogeneousSolution inhomogeneous_phi(const RayleighConfig& cfg,
                                        const std::function<double(double)>& w_in,
                                        cd c);

/// Boundary values mu_{+-}(c_r) = (J3 +- i J4) / (J1 -+ i J2).
std::pair<cd, cd> mu_limits(const RayleighConfig& cfg, double c_r,
                            const std::function<double(double)>& w_in);

struct resolvent_singular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Region classification, winding count, refinement, oracle
// ---------------------------------------------------------------------------

struct ExclusionRegions {
    double cr_max = 0.0;  ///< 4 gamma sqrt(ln ln 1/gamma)
    double ci_E2 = 0.0;   ///< 8 sqrt(pi) M gamma
    double ci_E3 = 0.0;   ///< gamma

    static ExclusionRegions from(const RayleighConfig& cfg);
    /// 1,2,3 for E1/E2/E3, 0 for the residual rectangle E.
    int classify(cd c) const;
};

struct RootRecord {
    cd c;
    double abs_D = 0.0;
    double eigenfunction_residual = 0.0;
    cd oracle_match;             ///< nearest oracle eigenvalue
    double oracle_rel_diff = 0.0;
    bool in_E = false;
};

struct EigenResult {
    int winding_upper = 0;
    std::vector<RootRecord> roots;  ///< upper-half roots (conjugates implied)
    bool basin_collision = false;
    std::vector<std::pair<cd, cd>> contour_samples;  ///< (c, D(c))
};

/// Winding of D along the boundary of the upper E rectangle with adaptive
/// phase refinement, recursive localization and Newton polish.
EigenResult count_and_refine(const RayleighConfig& cfg,
                             const std::vector<cd>* oracle_eigs = nullptr);

struct OracleResult {
    std::vector<cd> eigenvalues;     ///< Richardson-extrapolated, Im > gamma/2
    std::vector<cd> raw_coarse, raw_fine;
    int n_coarse = 0, n_fine = 0;
};

/// Independent check: dense eigensolve of the finite-difference Rayleigh
/// operator b0 - b0'' (d_yy - 1)^{-1} on a sinh-graded grid, two resolutions.
OracleResult matrix_oracle(const RayleighConfig& cfg, int n_coarse = 801,
                           double L = 8.0, double U = 4.0);

struct SemigroupGrowthReport {
    double rate = 0.0;        ///< fitted growth rate of ||e^{-itR} w||
    double T = 0.0;
    double ci_star = 0.0;     ///< dominant oracle eigenvalue imag part
    double norm_ratio = 0.0;  ///< final/initial norm
};

/// Time evolution of w' = -i R w on the oracle grid from band-profile data;
/// fits the late-time exponential rate.
SemigroupGrowthReport semigroup_growth(const RayleighConfig& cfg, double T,
                                       int n_grid = 801);

}  // namespace shearlab
