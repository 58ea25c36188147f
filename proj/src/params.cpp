#include "shearlab/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace shearlab {

namespace {
constexpr double kPi = std::numbers::pi;

double parse_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw config_error("bad numeric value for '" + key + "': " + s);
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size())
        throw config_error("trailing junk in value for '" + key + "': " + s);
    return v;
}
}  // namespace

void ModelParams::validate() const {
    if (!(gamma > 0.0)) throw config_error("gamma must be > 0");
    if (!(nu >= 0.0)) throw config_error("nu must be >= 0");
    if (!(M >= 0.0)) throw config_error("M must be >= 0");
    if (regime == Regime::ViscousCoupled) {
        const double coupled = std::pow(gamma, 3.0 / (1.0 - 2.0 * delta0));
        if (std::abs(nu - coupled) > 1e-12 * std::max(nu, coupled))
            throw config_error("ViscousCoupled regime requires nu = gamma^{3/(1-2 delta0)}");
    }
    if (regime == Regime::Inviscid && nu != 0.0)
        throw config_error("Inviscid regime requires nu = 0");
}

double ModelParams::horizon_viscous() const {
    return eps1 / gamma * std::log(1.0 / nu);
}

double ModelParams::horizon_inviscid() const {
    return eps1 / gamma * std::log(1.0 / gamma);
}

ModelParams make_viscous_params(double M, double gamma, double delta0,
                                double eps0, double delta1) {
    ModelParams p;
    p.M = M;
    p.gamma = gamma;
    p.delta0 = delta0;
    p.nu = std::pow(gamma, 3.0 / (1.0 - 2.0 * delta0));
    p.eps1 = (M > 0.0) ? 2.0 * delta0 / (M * kPi) : 0.0;
    p.eps0 = eps0;
    p.delta1 = delta1;
    p.regime = Regime::ViscousCoupled;
    p.validate();
    return p;
}

ModelParams make_inviscid_params(double M, double gamma, double eps0) {
    ModelParams p;
    p.M = M;
    p.gamma = gamma;
    p.nu = 0.0;
    p.delta0 = 0.0;
    p.eps1 = (M > 0.0) ? 1.0 / (9.0 * M * kPi) : 0.0;
    p.eps0 = eps0;
    p.regime = Regime::Inviscid;
    p.validate();
    return p;
}

ModelParams make_free_params(double M, double gamma, double nu, double delta0,
                             double delta1, double eps0, double eps1) {
    ModelParams p{M, gamma, nu, delta0, delta1, eps0, eps1, Regime::Free};
    p.validate();
    return p;
}

ModelParams params_from_config(const std::map<std::string, std::string>& kv) {
    ModelParams p;
    bool nu_given = false, eps1_given = false;
    std::string regime = "free";
    for (const auto& [key, val] : kv) {
        if (key == "M") p.M = parse_double(key, val);
        else if (key == "gamma") p.gamma = parse_double(key, val);
        else if (key == "nu") { p.nu = parse_double(key, val); nu_given = true; }
        else if (key == "delta0") p.delta0 = parse_double(key, val);
        else if (key == "delta1") p.delta1 = parse_double(key, val);
        else if (key == "eps0") p.eps0 = parse_double(key, val);
        else if (key == "eps1") { p.eps1 = parse_double(key, val); eps1_given = true; }
        else if (key == "regime") regime = val;
        else throw config_error("unknown parameter key: " + key);
    }
    if (regime == "viscous" || regime == "viscous_coupled") {
        p.regime = Regime::ViscousCoupled;
        if (!nu_given) p.nu = std::pow(p.gamma, 3.0 / (1.0 - 2.0 * p.delta0));
        if (!eps1_given && p.M > 0.0) p.eps1 = 2.0 * p.delta0 / (p.M * kPi);
    } else if (regime == "inviscid") {
        p.regime = Regime::Inviscid;
        if (!nu_given) p.nu = 0.0;
        if (!eps1_given && p.M > 0.0) p.eps1 = 1.0 / (9.0 * p.M * kPi);
    } else if (regime == "free") {
        p.regime = Regime::Free;
    } else {
        throw config_error("unknown regime: " + regime);
    }
    p.validate();
    return p;
}

}  // namespace shearlab
