#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "halfspec/kernel_table.hpp"
#include "halfspec/layout.hpp"
#include "halfspec/params.hpp"

namespace halfspec {

/// Full observation covariance:
///   Sigma_ij = lambda_i lambda_j K(t_i - t_j; x_i, x_j)
///              + eta_st^2 1{i == j} + eta_t^2 1{t_i == t_j}
///
/// The temporal nugget couples every site observed at the same instant, not
/// just repeated measurements at one site.  Throws assembly_error when the
/// table is missing a pair or lag.
Eigen::MatrixXd assemble(const ObservationLayout& layout, const ModelParams& p,
                         const KernelTable& table);

/// dSigma/dp for one parameter.  The table must carry gradient grids for
/// every spectrum-dependent parameter requested.
Eigen::MatrixXd assemble_grad_one(const ObservationLayout& layout, const ModelParams& p,
                                  const KernelTable& table, Param param);

/// dSigma/dp for each requested parameter, in request order.
std::vector<Eigen::MatrixXd> assemble_grad(const ObservationLayout& layout,
                                           const ModelParams& p, const KernelTable& table,
                                           std::span<const Param> free_params);

}  // namespace halfspec
