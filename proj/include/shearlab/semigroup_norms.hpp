#pragma once

#include <array>
#include <functional>
#include <vector>

#include "shearlab/mode_evolution.hpp"

namespace shearlab {

/// Ghost weight w(t,xi,k) = e^{2 arctan(xi/k - t)}; bounded in [e^-pi, e^pi].
double ghost_weight(double t, double xi, int k);

/// Trapezoid value of int w(t,xi,k) |h|^2 dxi (no e^{-C0 M^2 g t} factor).
double ghost_energy(const ModeState& s);

/// Smallest C0 >= 0 (bisection to `tol`) such that t -> e^{-C0 M^2 g t} *
/// ghost_energy(t) is non-increasing over every snapshot pair (1e-10 slack).
double calibrate_C0(const Trajectory& traj, double tol = 1e-3);

/// The five Prop-4.1 functionals of a single-mode trajectory and their
/// implied constants; all weights use the calibrated C0.
struct NormReport {
    double C0 = 0.0;
    std::array<double, 5> lhs{};  ///< weighted norms
    std::array<double, 5> C1{};   ///< implied constants (nu-scalings divided out)
    double f_norm = 0.0;          ///< ||f||_{L2_xi}
    double dxi = 0.0;
    int n_grid = 0;
    int n_snapshots = 0;
};

NormReport prop41_suite(const Trajectory& traj);

// ---------------------------------------------------------------------------
// Discrete space-time fields for the Chemin-Lerner norms of Lemma 4.1.
// A field holds the x-Fourier mode profiles f_k(t, y) on a uniform y grid.
// ---------------------------------------------------------------------------
struct PhysicalField {
    std::vector<double> times;  ///< increasing
    std::vector<int> ks;        ///< increasing mode list
    std::vector<double> ygrid;  ///< uniform
    /// data[it][ik][iy]
    std::vector<std::vector<std::vector<cplx>>> data;

    int k_index(int k) const;
    static PhysicalField make(std::vector<double> times, std::vector<int> ks,
                              std::vector<double> ygrid);
};

/// Mixed norm sum_k ( int_0^T ( int |f_k|^q dy )^{p/q} dt )^{1/p} with
/// p, q in {1, 2, inf} (inf passed as 0). Optional exponential time weight
/// e^{-w t} applied inside.
double cl_norm(const PhysicalField& f, int p, int q, double exp_weight = 0.0);

/// Pointwise product via k-mode convolution.
PhysicalField field_multiply(const PhysicalField& f, const PhysicalField& g);

/// Lemma 4.1 check: ||f g||_{p,q} <= ||f||_{p1,q1} ||g||_{p2,q2} under the
/// Hoelder splits 1/p = 1/p1 + 1/p2, 1/q = 1/q1 + 1/q2. Throws on
/// incompatible exponents (resulting p or q outside {1,2,inf}).
bool bilinear_check(const PhysicalField& f, const PhysicalField& g, int p1,
                    int q1, int p2, int q2);

/// Random band-limited field for property tests (deterministic in seed).
PhysicalField random_field(unsigned seed, int kmax, int nt, int ny, double T,
                           double ylim);

}  // namespace shearlab
