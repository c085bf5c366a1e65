#include "halfspec/params.hpp"

#include <cmath>

#include "halfspec/errors.hpp"

namespace halfspec {

namespace {

constexpr std::array<std::string_view, kNumParams> kParamNames = {
    "theta0", "theta1", "theta2", "theta3",
    "rho0",   "nu0",    "rho1",   "nu1",
    "zeta00", "zeta01", "zeta02", "zeta10", "zeta11", "zeta12",
    "beta",   "tau",
    "xi00",   "xi01",   "xi1",    "xi2",
    "phi1",   "phi2",
    "alpha",  "eta_st", "eta_t",
};

}  // namespace

std::string_view param_name(Param p) {
    return kParamNames[static_cast<int>(p)];
}

Param param_from_name(std::string_view name) {
    for (int i = 0; i < kNumParams; ++i) {
        if (kParamNames[i] == name) return static_cast<Param>(i);
    }
    throw config_error("unknown parameter name: " + std::string(name));
}

double ModelParams::get(Param p) const {
    switch (p) {
        case Param::theta0: return theta[0];
        case Param::theta1: return theta[1];
        case Param::theta2: return theta[2];
        case Param::theta3: return theta[3];
        case Param::rho0:   return rho0;
        case Param::nu0:    return nu0;
        case Param::rho1:   return rho1;
        case Param::nu1:    return nu1;
        case Param::zeta00: return zeta00;
        case Param::zeta01: return zeta01;
        case Param::zeta02: return zeta02;
        case Param::zeta10: return zeta10;
        case Param::zeta11: return zeta11;
        case Param::zeta12: return zeta12;
        case Param::beta:   return beta;
        case Param::tau:    return tau;
        case Param::xi00:   return xi00;
        case Param::xi01:   return xi01;
        case Param::xi1:    return xi1;
        case Param::xi2:    return xi2;
        case Param::phi1:   return phi1;
        case Param::phi2:   return phi2;
        case Param::alpha:  return alpha;
        case Param::eta_st: return eta_st;
        case Param::eta_t:  return eta_t;
    }
    throw config_error("invalid parameter index");
}

void ModelParams::set(Param p, double value) {
    switch (p) {
        case Param::theta0: theta[0] = value; return;
        case Param::theta1: theta[1] = value; return;
        case Param::theta2: theta[2] = value; return;
        case Param::theta3: theta[3] = value; return;
        case Param::rho0:   rho0 = value; return;
        case Param::nu0:    nu0 = value; return;
        case Param::rho1:   rho1 = value; return;
        case Param::nu1:    nu1 = value; return;
        case Param::zeta00: zeta00 = value; return;
        case Param::zeta01: zeta01 = value; return;
        case Param::zeta02: zeta02 = value; return;
        case Param::zeta10: zeta10 = value; return;
        case Param::zeta11: zeta11 = value; return;
        case Param::zeta12: zeta12 = value; return;
        case Param::beta:   beta = value; return;
        case Param::tau:    tau = value; return;
        case Param::xi00:   xi00 = value; return;
        case Param::xi01:   xi01 = value; return;
        case Param::xi1:    xi1 = value; return;
        case Param::xi2:    xi2 = value; return;
        case Param::phi1:   phi1 = value; return;
        case Param::phi2:   phi2 = value; return;
        case Param::alpha:  alpha = value; return;
        case Param::eta_st: eta_st = value; return;
        case Param::eta_t:  eta_t = value; return;
    }
    throw config_error("invalid parameter index");
}

std::array<double, kNumParams> ModelParams::to_array() const {
    std::array<double, kNumParams> a{};
    for (int i = 0; i < kNumParams; ++i) a[i] = get(static_cast<Param>(i));
    return a;
}

void ModelParams::from_array(const std::array<double, kNumParams>& a) {
    for (int i = 0; i < kNumParams; ++i) set(static_cast<Param>(i), a[i]);
}

void ModelParams::set_knots(double t_lo, double t_hi) {
    if (!(t_hi > t_lo)) throw config_error("knot window must have positive width");
    for (int j = 0; j < 4; ++j) {
        knot_times[j] = t_lo + j * (t_hi - t_lo) / 3.0;
    }
}

void ModelParams::validate() const {
    auto positive = [](double v, std::string_view name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw config_error(std::string(name) + " must be positive and finite");
        }
    };
    for (int j = 0; j < 4; ++j) positive(theta[j], param_name(static_cast<Param>(j)));
    positive(nu0, "nu0");
    positive(nu1, "nu1");
    positive(zeta00, "zeta00");
    positive(zeta01, "zeta01");
    positive(zeta02, "zeta02");
    positive(zeta10, "zeta10");
    positive(zeta11, "zeta11");
    positive(zeta12, "zeta12");
    positive(beta, "beta");
    positive(tau, "tau");
    positive(xi00, "xi00");
    positive(xi01, "xi01");
    positive(xi1, "xi1");
    positive(xi2, "xi2");
    positive(phi1, "phi1");
    positive(phi2, "phi2");
    positive(nu_s_below, "nu_s_below");
    positive(nu_s_above, "nu_s_above");
    positive(knot_decay, "knot_decay");
    if (!std::isfinite(rho0) || !std::isfinite(rho1) || !std::isfinite(alpha)) {
        throw config_error("rho0, rho1 and alpha must be finite");
    }
    if (eta_st < 0.0 || eta_t < 0.0 || !std::isfinite(eta_st) || !std::isfinite(eta_t)) {
        throw config_error("nugget standard deviations must be nonnegative");
    }
    for (int j = 1; j < 4; ++j) {
        if (!(knot_times[j] > knot_times[j - 1])) {
            throw config_error("knot_times must be strictly increasing");
        }
    }
}

namespace transform {

bool is_log(Param p) {
    switch (p) {
        case Param::rho0:
        case Param::rho1:
        case Param::alpha:
            return false;
        default:
            return true;
    }
}

double to_internal(Param p, double natural) {
    return is_log(p) ? std::log(natural) : natural;
}

double to_natural(Param p, double internal) {
    return is_log(p) ? std::exp(internal) : internal;
}

double jacobian(Param p, double natural) {
    return is_log(p) ? natural : 1.0;
}

}  // namespace transform

}  // namespace halfspec
