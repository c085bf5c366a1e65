#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace halfspec {

/// The 25 free parameters of the covariance model, in canonical order.
///
/// theta0..theta3   local scale values at the four time knots (m/s)
/// rho0/nu0         below-ABL temporal range / smoothness shape
/// rho1/nu1         above-ABL temporal range / smoothness shape
/// zeta0*/zeta1*    below/above-ABL coherence shape triples
/// beta             boundary layer height (m)
/// tau              sharpness of the below/above transition (1/m)
/// xi00/xi01        below/above-ABL low-frequency multiplier amplitudes
/// xi1/xi2          shared low-frequency multiplier shape
/// phi1/phi2        scale decay with altitude above the boundary layer
/// alpha            phase rate
/// eta_st/eta_t     spatio-temporal and temporal nugget standard deviations
enum class Param : int {
    theta0 = 0, theta1, theta2, theta3,
    rho0, nu0, rho1, nu1,
    zeta00, zeta01, zeta02, zeta10, zeta11, zeta12,
    beta, tau,
    xi00, xi01, xi1, xi2,
    phi1, phi2,
    alpha, eta_st, eta_t,
};

inline constexpr int kNumParams = 25;

inline constexpr std::array<Param, kNumParams> kAllParams = {
    Param::theta0, Param::theta1, Param::theta2, Param::theta3,
    Param::rho0,   Param::nu0,    Param::rho1,   Param::nu1,
    Param::zeta00, Param::zeta01, Param::zeta02,
    Param::zeta10, Param::zeta11, Param::zeta12,
    Param::beta,   Param::tau,
    Param::xi00,   Param::xi01,   Param::xi1,    Param::xi2,
    Param::phi1,   Param::phi2,
    Param::alpha,  Param::eta_st, Param::eta_t,
};

std::string_view param_name(Param p);

/// Throws config_error for unknown names.
Param param_from_name(std::string_view name);

/// Model parameters: the 25 free values plus structural constants.
///
/// Structural constants (knot times, knot decay, coherence smoothnesses) are
/// not estimated and have no entries in gradients.
struct ModelParams {
    // free parameters
    std::array<double, 4> theta{1.0, 1.0, 1.0, 1.0};
    double rho0 = 2.0;
    double nu0 = 1.0;
    double rho1 = 4.0;
    double nu1 = 1.5;
    double zeta00 = 10.0, zeta01 = 0.02, zeta02 = 1.0;
    double zeta10 = 14.0, zeta11 = 0.01, zeta12 = 1.0;
    double beta = 500.0;
    double tau = 0.05;
    double xi00 = 2.0, xi01 = 3.0;
    double xi1 = 0.03, xi2 = 2.0;
    double phi1 = 100.0, phi2 = 0.7;
    double alpha = 0.0;
    double eta_st = 0.05;
    double eta_t = 0.02;

    // structural constants
    std::array<double, 4> knot_times{0.0, 1.0, 2.0, 3.0};
    double knot_decay = 50.0;      // e^{-|t - t_j| / knot_decay}, in samples
    double nu_s_below = 0.5;       // coherence smoothness for x <= beta
    double nu_s_above = 0.75;

    double get(Param p) const;
    void set(Param p, double value);

    std::array<double, kNumParams> to_array() const;
    void from_array(const std::array<double, kNumParams>& a);

    /// Places the four knots evenly over [t_lo, t_hi], endpoints included.
    void set_knots(double t_lo, double t_hi);

    /// Throws config_error if a positivity or ordering invariant is violated.
    void validate() const;
};

/// Per-parameter maps used to fit in unconstrained coordinates: log for
/// positive parameters, identity for rho0, rho1 and alpha.
namespace transform {

bool is_log(Param p);
double to_internal(Param p, double natural);
double to_natural(Param p, double internal);
/// d(natural)/d(internal) evaluated at the natural value.
double jacobian(Param p, double natural);

}  // namespace transform

}  // namespace halfspec
