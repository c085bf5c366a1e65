#include "halfspec/spectral_model.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace halfspec {

namespace {

// Shared Butterworth evaluation with partials.  r = (z^2/xi1^2)^{xi2} can
// overflow for sharp shapes (xi2 ~ 70 occurs in fitted models); the limits
// B -> 0 and ratio -> 1 keep every partial finite.
struct BEval {
    double value;
    double d_xi0;
    double d_xi1;
    double d_xi2;
    double d_z;  // meaningful only for z > 0; 0 at z == 0
};

BEval butterworth_eval(double z, double xi0, double xi1, double xi2) {
    const double z2 = z * z;
    const double base = z2 / (xi1 * xi1);
    const double r = std::pow(base, xi2);
    BEval e{};
    if (std::isinf(r)) {
        e.value = 0.0;
        return e;
    }
    const double q = 1.0 / (1.0 + r);
    const double ratio = r * q;  // r / (1 + r)
    e.value = std::exp(xi0) * q;
    e.d_xi0 = e.value;
    e.d_xi1 = e.value * ratio * 2.0 * xi2 / xi1;
    e.d_xi2 = (r == 0.0) ? 0.0 : -e.value * ratio * std::log(base);
    e.d_z = (z == 0.0) ? 0.0 : -e.value * ratio * 2.0 * xi2 / z;
    return e;
}

// Numerically stable logistic with the partials needed for the chain rule.
struct LogisticEval {
    double w;
    double d_beta;
    double d_tau;
};

LogisticEval logistic_eval(double x, double beta, double tau) {
    const double t = tau * (x - beta);
    double w;
    if (t >= 0.0) {
        w = 1.0 / (1.0 + std::exp(-t));
    } else {
        const double e = std::exp(t);
        w = e / (1.0 + e);
    }
    const double w1w = w * (1.0 - w);
    return {w, -tau * w1w, (x - beta) * w1w};
}

double matern_prefactor(double nu) {
    return std::pow(2.0, 1.0 - nu) / std::tgamma(nu);
}

}  // namespace

double butterworth(double z, double xi0, double xi1, double xi2) {
    if (!std::isfinite(z) || !std::isfinite(xi0) || !std::isfinite(xi1) || !std::isfinite(xi2)) {
        throw std::domain_error("butterworth: non-finite input");
    }
    return butterworth_eval(z, xi0, xi1, xi2).value;
}

double logistic_weight(double x, double beta, double tau) {
    return logistic_eval(x, beta, tau).w;
}

double interp_param(double x, double p_below, double p_above, double beta, double tau) {
    const double w = logistic_weight(x, beta, tau);
    return (1.0 - w) * p_below + w * p_above;
}

double matern_correlation(double d, double nu) {
    if (!(d >= 0.0)) throw std::domain_error("matern_correlation: distance must be >= 0");
    return matern_correlation_with_deriv(d, nu).value;
}

MaternEval matern_correlation_with_deriv(double d, double nu) {
    if (d < 1e-300) {
        return {1.0, nu == 0.5 ? -1.0 : 0.0};
    }
    if (nu == 0.5) {
        const double e = std::exp(-d);
        return {e, -e};
    }
    if (d > 700.0) return {0.0, 0.0};
    const double c = matern_prefactor(nu);
    const double dnu = std::pow(d, nu);
    const double value = c * dnu * boost::math::cyl_bessel_k(nu, d);
    // d/dd [d^nu K_nu(d)] = -d^nu K_{nu-1}(d)
    const double deriv = -c * dnu * boost::math::cyl_bessel_k(nu - 1.0, d);
    return {value, deriv};
}

double marginal_sdf(double f, double x, const ModelParams& p) {
    const double s = std::sin(std::numbers::pi * f);
    const double w = logistic_weight(x, p.beta, p.tau);
    const double xi0x = (1.0 - w) * p.xi00 + w * p.xi01;
    const double rhox = (1.0 - w) * p.rho0 + w * p.rho1;
    const double nux = (1.0 - w) * p.nu0 + w * p.nu1;
    const double b = butterworth_eval(s, xi0x, p.xi1, p.xi2).value;
    const double a = std::exp(rhox) * s * s + 1.0;
    return (1.0 + b) * std::pow(a, -nux - 0.5);
}

double coherence_gamma(double f, double x, const ModelParams& p) {
    const double s = std::sin(std::numbers::pi * f);
    const double w = logistic_weight(x, p.beta, p.tau);
    const double z0 = (1.0 - w) * p.zeta00 + w * p.zeta10;
    const double z1 = (1.0 - w) * p.zeta01 + w * p.zeta11;
    const double z2 = (1.0 - w) * p.zeta02 + w * p.zeta12;
    return butterworth_eval(s, z0, z1, z2).value;
}

double coherence_smoothness(double x, const ModelParams& p) {
    return x <= p.beta ? p.nu_s_below : p.nu_s_above;
}

double coherence(double f, double x, double xp, const ModelParams& p) {
    if (x == xp) return 1.0;
    const double gx = coherence_gamma(f, x, p);
    const double gxp = coherence_gamma(f, xp, p);
    const double gbar = std::sqrt(0.5 * (gx + gxp));
    const double nu_bar = 0.5 * (coherence_smoothness(x, p) + coherence_smoothness(xp, p));
    return std::pow(gx * gxp, 0.25) / gbar *
           matern_correlation(std::abs(x - xp) / gbar, nu_bar);
}

std::complex<double> phase_factor(double f, double dx, double alpha) {
    const double phase = alpha * std::sin(std::numbers::pi * f) * dx;
    return {std::cos(phase), std::sin(phase)};
}

double scale_lambda(double x, double t, const ModelParams& p) {
    return scale_lambda_with_grad(x, t, p).value;
}

std::complex<double> cross_spectrum(double f, double x, double xp, const ModelParams& p) {
    const double amp = std::sqrt(marginal_sdf(f, x, p) * marginal_sdf(f, xp, p)) *
                       coherence(f, x, xp, p);
    return amp * phase_factor(f, x - xp, p.alpha);
}

SdfEval marginal_sdf_with_grad(double f, double x, const ModelParams& p) {
    const double s = std::sin(std::numbers::pi * f);
    const LogisticEval lw = logistic_eval(x, p.beta, p.tau);
    const double w = lw.w;
    const double xi0x = (1.0 - w) * p.xi00 + w * p.xi01;
    const double rhox = (1.0 - w) * p.rho0 + w * p.rho1;
    const double nux = (1.0 - w) * p.nu0 + w * p.nu1;

    const BEval b = butterworth_eval(s, xi0x, p.xi1, p.xi2);
    const double erho_s2 = std::exp(rhox) * s * s;
    const double a = erho_s2 + 1.0;
    const double pw = std::pow(a, -nux - 0.5);

    SdfEval e{};
    e.value = (1.0 + b.value) * pw;

    // partials with respect to the interpolated quantities
    const double dS_dxi0x = b.d_xi0 * pw;
    const double dS_drhox = -(nux + 0.5) * (1.0 + b.value) * pw * erho_s2 / a;
    const double dS_dnux = -(1.0 + b.value) * pw * std::log(a);

    e.d[SdfGrad::d_xi00] = dS_dxi0x * (1.0 - w);
    e.d[SdfGrad::d_xi01] = dS_dxi0x * w;
    e.d[SdfGrad::d_rho0] = dS_drhox * (1.0 - w);
    e.d[SdfGrad::d_rho1] = dS_drhox * w;
    e.d[SdfGrad::d_nu0] = dS_dnux * (1.0 - w);
    e.d[SdfGrad::d_nu1] = dS_dnux * w;
    e.d[SdfGrad::d_xi1] = b.d_xi1 * pw;
    e.d[SdfGrad::d_xi2] = b.d_xi2 * pw;

    const double dS_dw = dS_dxi0x * (p.xi01 - p.xi00) + dS_drhox * (p.rho1 - p.rho0) +
                         dS_dnux * (p.nu1 - p.nu0);
    e.d[SdfGrad::d_beta] = dS_dw * lw.d_beta;
    e.d[SdfGrad::d_tau] = dS_dw * lw.d_tau;
    return e;
}

GammaEval coherence_gamma_with_grad(double f, double x, const ModelParams& p) {
    const double s = std::sin(std::numbers::pi * f);
    const LogisticEval lw = logistic_eval(x, p.beta, p.tau);
    const double w = lw.w;
    const double z0 = (1.0 - w) * p.zeta00 + w * p.zeta10;
    const double z1 = (1.0 - w) * p.zeta01 + w * p.zeta11;
    const double z2 = (1.0 - w) * p.zeta02 + w * p.zeta12;

    const BEval b = butterworth_eval(s, z0, z1, z2);

    GammaEval e{};
    e.value = b.value;
    e.d[GammaGrad::d_z00] = b.d_xi0 * (1.0 - w);
    e.d[GammaGrad::d_z10] = b.d_xi0 * w;
    e.d[GammaGrad::d_z01] = b.d_xi1 * (1.0 - w);
    e.d[GammaGrad::d_z11] = b.d_xi1 * w;
    e.d[GammaGrad::d_z02] = b.d_xi2 * (1.0 - w);
    e.d[GammaGrad::d_z12] = b.d_xi2 * w;

    const double dG_dw = b.d_xi0 * (p.zeta10 - p.zeta00) + b.d_xi1 * (p.zeta11 - p.zeta01) +
                         b.d_xi2 * (p.zeta12 - p.zeta02);
    e.d[GammaGrad::d_beta] = dG_dw * lw.d_beta;
    e.d[GammaGrad::d_tau] = dG_dw * lw.d_tau;
    return e;
}

CoherenceEval coherence_from_gammas(const GammaEval& gx, const GammaEval& gxp,
                                    double dist, double nu_bar) {
    CoherenceEval e{};
    if (dist == 0.0) {
        e.value = 1.0;
        return e;
    }
    const double sum = gx.value + gxp.value;
    const double gbar = std::sqrt(0.5 * sum);
    const double d = dist / gbar;
    const MaternEval m = matern_correlation_with_deriv(d, nu_bar);
    const double pre = std::pow(gx.value * gxp.value, 0.25) / gbar;
    e.value = pre * m.value;

    // dC/dgamma at each site; d(gbar)/dgamma = 1/(4 gbar)
    const double dC_dgx =
        m.value * pre * (0.25 / gx.value - 0.5 / sum) + pre * m.ddist * (-0.5 * d / sum);
    const double dC_dgxp =
        m.value * pre * (0.25 / gxp.value - 0.5 / sum) + pre * m.ddist * (-0.5 * d / sum);
    for (int i = 0; i < GammaGrad::count; ++i) {
        e.d[i] = dC_dgx * gx.d[i] + dC_dgxp * gxp.d[i];
    }
    return e;
}

LambdaEval scale_lambda_with_grad(double x, double t, const ModelParams& p) {
    // normalized knot weights
    std::array<double, 4> wt;
    double total = 0.0;
    for (int j = 0; j < 4; ++j) {
        wt[j] = std::exp(-std::abs(t - p.knot_times[j]) / p.knot_decay);
        total += wt[j];
    }
    double knot_sum = 0.0;
    for (int j = 0; j < 4; ++j) {
        wt[j] /= total;
        knot_sum += wt[j] * p.theta[j];
    }

    const double z = std::max(x - p.beta, 0.0);
    const BEval b = butterworth_eval(z, 0.0, p.phi1, p.phi2);

    LambdaEval e{};
    e.value = b.value * knot_sum;
    for (int j = 0; j < 4; ++j) e.d_theta[j] = b.value * wt[j];
    e.d_phi1 = knot_sum * b.d_xi1;
    e.d_phi2 = knot_sum * b.d_xi2;
    // (x - beta)_+ has zero one-sided derivative at x == beta
    e.d_beta = (x > p.beta) ? -knot_sum * b.d_z : 0.0;
    return e;
}

}  // namespace halfspec
