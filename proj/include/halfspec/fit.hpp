#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "halfspec/likelihood.hpp"
#include "halfspec/params.hpp"
#include "halfspec/trust_region.hpp"

namespace halfspec {

struct FitOptions {
    TrustRegionOptions trust_region;
    int probe_count = 72;
    std::uint64_t seed = 0;
    std::vector<std::string> freeze;  // parameter names held at their init values
};

struct FitResult {
    ModelParams estimates;
    std::vector<Param> free_params;
    Eigen::MatrixXd fisher;        // natural domain, evaluated once at the MLE
    Eigen::VectorXd std_errors;    // per free parameter
    bool se_conditioning_warning = false;
    std::vector<std::string> se_notes;
    std::vector<IterationRecord> trace;  // objective column holds the log-likelihood
    bool converged = false;
    int n_iterations = 0;
    std::uint64_t seed = 0;
    double final_loglik = 0.0;
};

/// Free-parameter list after removing the named frozen parameters.  Throws
/// config_error for unknown names or an empty free set.
std::vector<Param> free_params_after_freeze(const std::vector<std::string>& freeze);

/// Maximizes the log-likelihood by trust region in transformed coordinates
/// (log scale for positive parameters), with the symmetrized stochastic
/// gradient and expected-Fisher estimators as derivatives.  Probes are fixed
/// for the whole optimization (refreshed only by changing the seed), so runs
/// are deterministic given (data, init, seed, options).  Point estimates,
/// the Fisher matrix and standard errors are reported in the natural domain,
/// evaluated once at the untransformed optimum.
FitResult fit(const Eigen::VectorXd& y, const ObservationLayout& layout,
              const FrequencyGrid& grid, const ModelParams& init, const FitOptions& opts);

/// Moment-matching starting values: theta knots from windowed data spread,
/// beta at mid-domain, remaining parameters at neutral defaults.
ModelParams heuristic_init(const Eigen::VectorXd& y, const ObservationLayout& layout);

}  // namespace halfspec
