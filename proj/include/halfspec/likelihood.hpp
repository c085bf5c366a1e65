#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "halfspec/covariance.hpp"
#include "halfspec/frequency_grid.hpp"
#include "halfspec/kernel_table.hpp"
#include "halfspec/layout.hpp"
#include "halfspec/params.hpp"

namespace halfspec {

/// Fixed Rademacher probes for the stochastic trace estimators.  Regenerating
/// with the same (n, m, seed) reproduces identical probes, so objectives and
/// derivatives built on a ProbeSet define a deterministic surrogate problem.
struct ProbeSet {
    int m = 0;
    Eigen::MatrixXd probes;  // n x m, entries +-1
    std::uint64_t seed = 0;

    static ProbeSet rademacher(int n, int m, std::uint64_t seed);
    /// All 2^n sign vectors; the Hutchinson estimate is then exact.
    static ProbeSet exhaustive(int n);
};

/// Result of one likelihood evaluation.  Fields beyond `value` are filled
/// only when requested.
struct LikelihoodEval {
    double value = 0.0;
    Eigen::VectorXd grad;                // exact or stochastic, per request
    Eigen::MatrixXd fisher;              // stochastic expected Fisher
};

/// Exact zero-mean Gaussian log-likelihood via dense Cholesky,
///   -1/2 (n log 2pi + log det Sigma + y' Sigma^{-1} y).
/// Throws indefinite_matrix_error (with the failing pivot) if Sigma is not PD.
double loglik(const ModelParams& p, const Eigen::VectorXd& y,
              const ObservationLayout& layout, const FrequencyGrid& grid);

/// Exact gradient d loglik / dp via dense traces; meant for validation and
/// small problems.
Eigen::VectorXd loglik_grad_exact(const ModelParams& p, const Eigen::VectorXd& y,
                                  const ObservationLayout& layout, const FrequencyGrid& grid,
                                  std::span<const Param> free_params);

/// Gradient with the trace term replaced by the symmetrized Hutchinson
/// estimate (L^{-T} u)' dSigma (L^{-T} u) averaged over probes (two-sided
/// whitening by the Cholesky factor, Sigma = L L'); the quadratic form term
/// is exact.  Unbiased for loglik_grad_exact over probe draws.
Eigen::VectorXd stochastic_grad(const ModelParams& p, const Eigen::VectorXd& y,
                                const ObservationLayout& layout, const FrequencyGrid& grid,
                                std::span<const Param> free_params, const ProbeSet& probes);

/// Symmetrized stochastic estimate of the expected Fisher information
///   I_jk = 1/2 tr(Sigma^{-1} dSigma_j Sigma^{-1} dSigma_k),
/// computed as a Gram matrix of whitened probe images, hence PSD for every
/// draw and unbiased for the exact matrix.
Eigen::MatrixXd stochastic_fisher(const ModelParams& p, const ObservationLayout& layout,
                                  const FrequencyGrid& grid,
                                  std::span<const Param> free_params,
                                  const ProbeSet& probes);

/// Everything the optimizer needs from one parameter point, sharing a single
/// covariance assembly and factorization.  Set `want_*` to choose pieces;
/// `probes` may be null when only the value is requested.
LikelihoodEval eval_likelihood(const ModelParams& p, const Eigen::VectorXd& y,
                               const ObservationLayout& layout, const FrequencyGrid& grid,
                               std::span<const Param> free_params, const ProbeSet* probes,
                               bool want_grad, bool want_fisher);

/// Standard errors from a symmetric PSD Fisher matrix: square roots of the
/// diagonal of the (pseudo-)inverse.  Near-singular directions produce a
/// conditioning warning; a wholly singular matrix throws numeric_error
/// listing the null-space combinations.
struct StdErrors {
    Eigen::VectorXd values;
    bool conditioning_warning = false;
    std::vector<std::string> notes;  // near-null directions, human readable
};
StdErrors standard_errors(const Eigen::MatrixXd& fisher);

}  // namespace halfspec
