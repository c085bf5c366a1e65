#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "halfspec/frequency_grid.hpp"
#include "halfspec/layout.hpp"
#include "halfspec/params.hpp"

namespace halfspec {

/// Exact Gaussian draws y = L z with Sigma = L L' from the model covariance
/// on the given layout.  Replicate r uses its own generator seeded with
/// seed + r, so replicates are independent and individually reproducible.
/// Throws indefinite_matrix_error if the covariance is not PD.
std::vector<Eigen::VectorXd> sample(const ModelParams& p, const ObservationLayout& layout,
                                    const FrequencyGrid& grid, std::uint64_t seed,
                                    int n_reps);

}  // namespace halfspec
