#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace halfspec {

struct TrustRegionOptions {
    double tolerance = 1e-6;   // relative objective change on accepted steps
    int max_iterations = 200;
    double initial_radius = 1.0;
    double max_radius = 100.0;
    double eta = 0.1;          // step acceptance threshold on the rho ratio
    double shrink = 0.25;
    double grow = 2.0;
    int max_consecutive_rejections = 30;
};

struct IterationRecord {
    int iteration;
    double objective;   // value at the current iterate before the trial
    double step_norm;
    double radius;
    double rho;
    bool accepted;
};

struct TrustRegionResult {
    Eigen::VectorXd x;
    double objective = 0.0;
    bool converged = false;
    int n_iterations = 0;
    std::string message;
    std::vector<IterationRecord> trace;
};

/// Minimizes `value` with gradient and (PSD) Hessian surrogate supplied by
/// `derivatives`.  Subproblems are solved by dogleg when the surrogate is
/// positive definite, steepest descent to the boundary otherwise.  Persistent
/// step rejection yields a non-converged result, not an exception; a
/// non-finite objective at the start throws numeric_error.
TrustRegionResult minimize_trust_region(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>&
        derivatives,
    const Eigen::VectorXd& x0, const TrustRegionOptions& opts);

}  // namespace halfspec
