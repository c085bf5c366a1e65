#include "halfspec/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "halfspec/errors.hpp"
#include "halfspec/spectral_model.hpp"

namespace halfspec {

namespace {

std::vector<LambdaEval> lambda_field(const ObservationLayout& layout, const ModelParams& p) {
    std::vector<LambdaEval> lam(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& e = layout.entries[i];
        lam[i] = scale_lambda_with_grad(layout.site_altitudes[e.site],
                                        static_cast<double>(e.time), p);
    }
    return lam;
}

double lambda_partial(const LambdaEval& le, Param param) {
    switch (param) {
        case Param::theta0: return le.d_theta[0];
        case Param::theta1: return le.d_theta[1];
        case Param::theta2: return le.d_theta[2];
        case Param::theta3: return le.d_theta[3];
        case Param::phi1:   return le.d_phi1;
        case Param::phi2:   return le.d_phi2;
        case Param::beta:   return le.d_beta;
        default:            return 0.0;
    }
}

bool lambda_depends_on(Param param) {
    switch (param) {
        case Param::theta0:
        case Param::theta1:
        case Param::theta2:
        case Param::theta3:
        case Param::phi1:
        case Param::phi2:
        case Param::beta:
            return true;
        default:
            return false;
    }
}

}  // namespace

Eigen::MatrixXd assemble(const ObservationLayout& layout, const ModelParams& p,
                         const KernelTable& table) {
    layout.validate();
    const auto n = static_cast<Eigen::Index>(layout.size());
    std::vector<double> lam(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& e = layout.entries[i];
        lam[i] = scale_lambda(layout.site_altitudes[e.site], static_cast<double>(e.time), p);
    }
    const double eta_st2 = p.eta_st * p.eta_st;
    const double eta_t2 = p.eta_t * p.eta_t;

    Eigen::MatrixXd sigma(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& ei = layout.entries[i];
        for (Eigen::Index j = 0; j <= i; ++j) {
            const auto& ej = layout.entries[j];
            double v = lam[i] * lam[j] * table.value(ei.site, ej.site, ei.time - ej.time);
            if (ei.time == ej.time) v += eta_t2;
            if (i == j) v += eta_st2;
            sigma(i, j) = v;
            sigma(j, i) = v;
        }
    }
    return sigma;
}

Eigen::MatrixXd assemble_grad_one(const ObservationLayout& layout, const ModelParams& p,
                                  const KernelTable& table, Param param) {
    layout.validate();
    const auto n = static_cast<Eigen::Index>(layout.size());
    Eigen::MatrixXd dsigma = Eigen::MatrixXd::Zero(n, n);

    if (param == Param::eta_st) {
        dsigma.diagonal().setConstant(2.0 * p.eta_st);
        return dsigma;
    }
    if (param == Param::eta_t) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                if (layout.entries[i].time == layout.entries[j].time) {
                    dsigma(i, j) = dsigma(j, i) = 2.0 * p.eta_t;
                }
            }
        }
        return dsigma;
    }

    const auto& gp = table.grad_params();
    const auto it = std::find(gp.begin(), gp.end(), param);
    const bool spectrum_dep =
        std::find(spectrum_params().begin(), spectrum_params().end(), param) !=
        spectrum_params().end();
    if (spectrum_dep && it == gp.end()) {
        throw assembly_error(std::string("kernel table has no gradient grid for ") +
                             std::string(param_name(param)));
    }
    const int gidx = it == gp.end() ? -1 : static_cast<int>(it - gp.begin());
    const bool lam_dep = lambda_depends_on(param);

    const auto lam = lambda_field(layout, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& ei = layout.entries[i];
        for (Eigen::Index j = 0; j <= i; ++j) {
            const auto& ej = layout.entries[j];
            double v = 0.0;
            if (lam_dep) {
                const double k = table.value(ei.site, ej.site, ei.time - ej.time);
                v += (lambda_partial(lam[i], param) * lam[j].value +
                      lam[i].value * lambda_partial(lam[j], param)) *
                     k;
            }
            if (gidx >= 0) {
                v += lam[i].value * lam[j].value *
                     table.grad(ei.site, ej.site, ei.time - ej.time, gidx);
            }
            dsigma(i, j) = v;
            dsigma(j, i) = v;
        }
    }
    return dsigma;
}

std::vector<Eigen::MatrixXd> assemble_grad(const ObservationLayout& layout,
                                           const ModelParams& p, const KernelTable& table,
                                           std::span<const Param> free_params) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(free_params.size());
    for (Param param : free_params) {
        out.push_back(assemble_grad_one(layout, p, table, param));
    }
    return out;
}

}  // namespace halfspec
