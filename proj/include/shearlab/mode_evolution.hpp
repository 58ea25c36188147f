#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "shearlab/frequency_grid.hpp"
#include "shearlab/params.hpp"

namespace shearlab {

using cplx = std::complex<double>;

/// Single-k Fourier profile h_k(t, xi) on a uniform frequency grid.
struct ModeState {
    int k = 1;
    double t = 0.0;
    FrequencyGrid grid;
    std::vector<cplx> values;

    double sup_abs() const;
    double max_imag_abs() const;
    double min_real() const;
    /// sqrt(int |h|^2 dxi), trapezoid.
    double l2_xi() const;
    /// L^2_y norm in the transform convention used throughout: 2*pi*l2_xi().
    double l2_y() const { return 2.0 * 3.14159265358979323846 * l2_xi(); }
};

enum class EvolutionVariant {
    ModifiedViscous,   ///< nonlocal kernel width nu*t + gamma^2/4, full dissipation
    ModifiedInviscid,  ///< nu = 0 variant, kernel width gamma^2/4
    TransportViscous,  ///< adds the static-profile transport convolution
    CouetteExact,      ///< M = 0 closed form (oracle)
};

struct EvolutionConfig {
    double dt = 0.1;                    ///< max step; segments land on snapshots
    EvolutionVariant variant = EvolutionVariant::ModifiedViscous;
    std::vector<double> snapshot_times; ///< t=0 and T_final are always added
    bool use_fft = true;                ///< FFT-accelerated trapezoid convolution
    bool check_ceiling = true;          ///< assert the sup-norm ceiling per snapshot

    /// Admissible step for the explicit convolution term.
    static double max_dt(const ModelParams& p);
};

struct Trajectory {
    ModelParams params;
    EvolutionConfig cfg;
    std::vector<ModeState> snapshots;  ///< ordered by t
    /// (t, ||h||_{L2_xi}) recorded at every accepted step
    std::vector<std::pair<double, double>> norm_history;

    const ModeState& at_time(double t, double tol = 1e-9) const;
    double initial_sup() const { return snapshots.front().sup_abs(); }
};

struct integration_diverged : std::runtime_error {
    double t_fail;
    explicit integration_diverged(double t)
        : std::runtime_error("mode evolution diverged at t = " + std::to_string(t)),
          t_fail(t) {}
};

/// Integrand coefficient of h_k(t,eta) in the nonlocal term:
/// M g^2 (xi-eta) exp(-(nu t + g^2/4)(xi-eta)^2) * k / ((eta - k t)^2 + k^2).
double kernel_value(const ModelParams& p, double t, double xi, double eta, int k);

/// Indicator band data: h(0,xi) = 1 on |xi| <= half_width, k = 1.
/// Default half_width (paper data): 2*eps1*ln(1/gamma)/gamma.
ModeState init_band(const FrequencyGrid& grid, double half_width);
double default_band_halfwidth(const ModelParams& p);

/// Exact M = 0 solution factor: h(t,xi) = h(0,xi) * exp(-nu*(k^2 t + xi^2 t - k xi t^2 + k^2 t^3/3)).
cplx couette_exact_factor(const ModelParams& p, int k, double xi, double t);

/// Advance one step of size dt with the integrating-factor RK4.
/// The stepper holds FFT workspaces; reuse it across steps.
class ModeStepper {
  public:
    ModeStepper(const ModelParams& p, const EvolutionConfig& cfg, int n_grid);
    ~ModeStepper();
    void step(ModeState& state, double dt) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Snapshots at cfg.snapshot_times plus t=0 and T_final; each snapshot is
/// checked against the sup-norm ceiling e^{-nu k^2 (t + t^3/12)} e^{M pi g t}.
Trajectory evolve(const ModeState& initial, const EvolutionConfig& cfg,
                  const ModelParams& params, double t_final);

/// Sup-norm ceiling at time t relative to the initial sup (slack excluded).
double ceiling_bound(const ModelParams& p, int k, double t);

struct TransportDecayReport {
    double a = 0.0;      ///< cubic coefficient of -a t^3 + b t fit
    double b = 0.0;      ///< linear coefficient
    double window_lo = 0.0, window_hi = 0.0;
    double C_b = 0.0;    ///< measured b / (M (gamma^{1/2} + |k| gamma^2)), 0 if M = 0
    bool a_positive = false;
};

/// Fit log(||h(t)||_L2 / ||h(0)||_L2) = -a t^3 + b t over [T/2, T].
/// Requires the TransportViscous variant with nu > 0 and T >= 2 nu^{-1/3}.
TransportDecayReport transport_decay_check(const Trajectory& traj);

/// CSV export: xi, Re h, Im h.
void export_snapshot_csv(const ModeState& s, const std::string& path);

}  // namespace shearlab
