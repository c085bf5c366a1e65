#include "halfspec/simulation.hpp"

#include <random>
#include <sstream>

#include "halfspec/covariance.hpp"
#include "halfspec/errors.hpp"
#include "halfspec/kernel_table.hpp"

namespace halfspec {

std::vector<Eigen::VectorXd> sample(const ModelParams& p, const ObservationLayout& layout,
                                    const FrequencyGrid& grid, std::uint64_t seed,
                                    int n_reps) {
    if (n_reps < 1) throw config_error("n_reps must be >= 1");
    layout.validate();
    p.validate();
    const int n_lags = static_cast<int>(layout.time_span());
    const KernelTable table = build_kernel_table(layout.site_altitudes, p, grid, n_lags);
    const Eigen::MatrixXd sigma = assemble(layout, p, table);
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw indefinite_matrix_error("covariance matrix is not positive definite", -1);
    }
    const Eigen::MatrixXd l = llt.matrixL();

    const auto n = sigma.rows();
    std::vector<Eigen::VectorXd> reps;
    reps.reserve(n_reps);
    for (int r = 0; r < n_reps; ++r) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
        reps.emplace_back(l * z);
    }
    return reps;
}

}  // namespace halfspec
