#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace shearlab {

/// Physical regime of the model parameters.
enum class Regime {
    ViscousCoupled,  ///< nu = gamma^{3/(1-2*delta0)}, eps1 = 2*delta0/(M*pi)
    Inviscid,        ///< nu = 0, eps1 = 1/(9*M*pi)
    Free,            ///< all knobs independent
};

/// Bump amplitude/width, viscosity and the small exponents of the model.
///
/// The coupled quantities are derived in make_* factories; validate() checks
/// the regime invariants so a hand-built struct cannot drift silently.
struct ModelParams {
    double M = 0.0;       ///< bump amplitude (dimensionless)
    double gamma = 0.1;   ///< bump width
    double nu = 0.0;      ///< viscosity
    double delta0 = 0.05; ///< small exponent coupling nu to gamma
    double delta1 = 0.01; ///< small exponent in the nonlinear data size
    double eps0 = 1.0;    ///< data amplitude knob
    double eps1 = 0.0;    ///< horizon coefficient
    Regime regime = Regime::Free;

    void validate() const;

    /// Growth horizon T = eps1 * gamma^{-1} * ln(nu^{-1}) (viscous flavor).
    double horizon_viscous() const;
    /// Growth horizon T = eps1 * gamma^{-1} * ln(gamma^{-1}).
    double horizon_inviscid() const;
};

/// Viscous parameters with the paper couplings:
/// nu = gamma^{3/(1-2 delta0)}, eps1 = 2 delta0 / (M pi).
ModelParams make_viscous_params(double M, double gamma, double delta0,
                                double eps0 = 1.0, double delta1 = 0.0);

/// Inviscid parameters: nu = 0, eps1 = 1/(9 M pi).
ModelParams make_inviscid_params(double M, double gamma, double eps0 = 1.0);

/// Unconstrained parameter set (desk-scale experiments override couplings).
ModelParams make_free_params(double M, double gamma, double nu, double delta0,
                             double delta1, double eps0, double eps1);

/// Parse params from "key = value" lines (keys: M, gamma, nu, delta0, delta1,
/// eps0, eps1, regime). Unknown keys throw. Regime couplings are re-derived
/// for ViscousCoupled/Inviscid unless the file pins them explicitly.
ModelParams params_from_config(const std::map<std::string, std::string>& kv);

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shearlab
