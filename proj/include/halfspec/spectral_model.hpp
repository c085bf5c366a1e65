#pragma once

#include <array>
#include <complex>

#include "halfspec/params.hpp"

namespace halfspec {

// ---------------------------------------------------------------------------
// Frequency-domain ingredients of the covariance model.  All functions here
// are pure and re-entrant.  Frequencies are in cycles per sample, altitudes
// in meters, time in sample units.
// ---------------------------------------------------------------------------

/// Butterworth-type utility B(z; xi0, xi1, xi2) = e^{xi0} [1 + (z^2/xi1^2)^{xi2}]^{-1}.
/// Even in z, monotone nonincreasing in |z|, value in (0, e^{xi0}].
double butterworth(double z, double xi0, double xi1, double xi2);

/// Logistic transition weight w(x) = (1 + e^{-tau (x - beta)})^{-1}.
double logistic_weight(double x, double beta, double tau);

/// Convex combination (1 - w(x)) p_below + w(x) p_above.
double interp_param(double x, double p_below, double p_above, double beta, double tau);

/// Matern correlation M_nu(d) = 2^{1-nu}/Gamma(nu) d^nu K_nu(d), M_nu(0) = 1.
/// Distance enters unscaled; the model supplies its own range elsewhere.
double matern_correlation(double d, double nu);

/// Value and derivative with respect to the distance argument,
/// M_nu'(d) = -2^{1-nu}/Gamma(nu) d^nu K_{nu-1}(d).
struct MaternEval {
    double value;
    double ddist;
};
MaternEval matern_correlation_with_deriv(double d, double nu);

/// Marginal temporal spectral density
///   S_x(f) = (1 + B(sin(pi f); xi0(x), xi1, xi2)) (e^{rho(x)} sin^2(pi f) + 1)^{-nu(x)-1/2}
double marginal_sdf(double f, double x, const ModelParams& p);

/// Frequency-dependent coherence range gamma(x)(f) = B(sin(pi f); zeta0(x), zeta1(x), zeta2(x)).
double coherence_gamma(double f, double x, const ModelParams& p);

/// Coherence smoothness: nu_s_below for x <= beta, nu_s_above otherwise.
double coherence_smoothness(double x, const ModelParams& p);

/// Coherence between altitudes x and xp at frequency f (Paciorek-Schervish
/// form with the averaged squared range).  Symmetric in (x, xp), 1 at x == xp.
double coherence(double f, double x, double xp, const ModelParams& p);

/// Phase factor e^{i alpha sin(pi f) dx}; unit modulus.
std::complex<double> phase_factor(double f, double dx, double alpha);

/// Space-time scale field
///   lambda(x, t) = B((x - beta)_+; 0, phi1, phi2) sum_j w_j(t) theta_j
/// with exponential knot weights normalized to sum to one.
double scale_lambda(double x, double t, const ModelParams& p);

/// Cross-spectrum between altitudes x and xp at frequency f,
///   Phi(f) = sqrt(S_x S_xp) C_f(x, xp) e^{i alpha sin(pi f)(x - xp)}.
std::complex<double> cross_spectrum(double f, double x, double xp, const ModelParams& p);

// ---------------------------------------------------------------------------
// Analytic parameter derivatives.  Partials are stored in compact arrays
// indexed by the enums below; everything not listed is identically zero.
// ---------------------------------------------------------------------------

/// Partial slots of S_x(f).
struct SdfGrad {
    enum Index { d_rho0, d_nu0, d_rho1, d_nu1, d_xi00, d_xi01, d_xi1, d_xi2, d_beta, d_tau, count };
    static constexpr std::array<Param, count> params = {
        Param::rho0, Param::nu0, Param::rho1, Param::nu1, Param::xi00,
        Param::xi01, Param::xi1, Param::xi2,  Param::beta, Param::tau};
};

/// Partial slots of gamma(x)(f).
struct GammaGrad {
    enum Index { d_z00, d_z01, d_z02, d_z10, d_z11, d_z12, d_beta, d_tau, count };
    static constexpr std::array<Param, count> params = {
        Param::zeta00, Param::zeta01, Param::zeta02, Param::zeta10,
        Param::zeta11, Param::zeta12, Param::beta,   Param::tau};
};

struct SdfEval {
    double value;
    std::array<double, SdfGrad::count> d;
};

struct GammaEval {
    double value;
    std::array<double, GammaGrad::count> d;
};

SdfEval marginal_sdf_with_grad(double f, double x, const ModelParams& p);
GammaEval coherence_gamma_with_grad(double f, double x, const ModelParams& p);

/// Coherence from two precomputed gamma evaluations.  dist = |x - xp|,
/// nu_bar = (nu_s(x) + nu_s(xp)) / 2.  Gradient entries line up with
/// GammaGrad::params (the only parameters the coherence depends on).
struct CoherenceEval {
    double value;
    std::array<double, GammaGrad::count> d;
};
CoherenceEval coherence_from_gammas(const GammaEval& gx, const GammaEval& gxp,
                                    double dist, double nu_bar);

/// lambda(x, t) together with its nonzero partials.
struct LambdaEval {
    double value;
    std::array<double, 4> d_theta;
    double d_phi1;
    double d_phi2;
    double d_beta;
};
LambdaEval scale_lambda_with_grad(double x, double t, const ModelParams& p);

}  // namespace halfspec
