#include "halfspec/likelihood.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "halfspec/errors.hpp"

namespace halfspec {

namespace {

// Locates the first non-positive pivot with a plain unblocked factorization;
// only runs after Eigen's LLT has already failed.
int find_failing_pivot(const Eigen::MatrixXd& sigma) {
    const auto n = sigma.rows();
    Eigen::MatrixXd a = sigma;
    for (Eigen::Index k = 0; k < n; ++k) {
        double d = a(k, k);
        for (Eigen::Index j = 0; j < k; ++j) d -= a(k, j) * a(k, j);
        if (!(d > 0.0)) return static_cast<int>(k);
        const double lkk = std::sqrt(d);
        a(k, k) = lkk;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            double s = a(i, k);
            for (Eigen::Index j = 0; j < k; ++j) s -= a(i, j) * a(k, j);
            a(i, k) = s / lkk;
        }
    }
    return -1;
}

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        const int pivot = find_failing_pivot(sigma);
        std::ostringstream msg;
        msg << "covariance matrix is not positive definite (pivot " << pivot << ")";
        throw indefinite_matrix_error(msg.str(), pivot);
    }
    return llt;
}

struct Shared {
    KernelTable table;
    Eigen::MatrixXd sigma;
    Eigen::LLT<Eigen::MatrixXd> llt;
};

Shared prepare(const ModelParams& p, const ObservationLayout& layout,
               const FrequencyGrid& grid, std::span<const Param> grad_params) {
    layout.validate();
    p.validate();
    const int n_lags = static_cast<int>(layout.time_span());
    Shared s;
    s.table = build_kernel_table(layout.site_altitudes, p, grid, n_lags, grad_params);
    s.sigma = assemble(layout, p, s.table);
    s.llt = factorize(s.sigma);
    return s;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

ProbeSet ProbeSet::rademacher(int n, int m, std::uint64_t seed) {
    if (n < 1 || m < 1) throw config_error("probe dimensions must be positive");
    ProbeSet ps;
    ps.m = m;
    ps.seed = seed;
    ps.probes.resize(n, m);
    std::mt19937_64 rng(seed);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < n; ++i) {
            ps.probes(i, l) = (rng() & 1u) ? 1.0 : -1.0;
        }
    }
    return ps;
}

ProbeSet ProbeSet::exhaustive(int n) {
    if (n < 1 || n > 20) throw config_error("exhaustive probes need 1 <= n <= 20");
    ProbeSet ps;
    ps.m = 1 << n;
    ps.seed = 0;
    ps.probes.resize(n, ps.m);
    for (int l = 0; l < ps.m; ++l) {
        for (int i = 0; i < n; ++i) {
            ps.probes(i, l) = (l >> i) & 1 ? 1.0 : -1.0;
        }
    }
    return ps;
}

double loglik(const ModelParams& p, const Eigen::VectorXd& y,
              const ObservationLayout& layout, const FrequencyGrid& grid) {
    return eval_likelihood(p, y, layout, grid, {}, nullptr, false, false).value;
}

Eigen::VectorXd loglik_grad_exact(const ModelParams& p, const Eigen::VectorXd& y,
                                  const ObservationLayout& layout, const FrequencyGrid& grid,
                                  std::span<const Param> free_params) {
    if (y.size() != static_cast<Eigen::Index>(layout.size())) {
        throw config_error("data vector length does not match layout");
    }
    const Shared s = prepare(p, layout, grid, free_params);
    const auto n = s.sigma.rows();
    const Eigen::MatrixXd sigma_inv =
        s.llt.solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::VectorXd v = s.llt.solve(y);

    Eigen::VectorXd grad(static_cast<Eigen::Index>(free_params.size()));
    for (std::size_t k = 0; k < free_params.size(); ++k) {
        const Eigen::MatrixXd dsigma = assemble_grad_one(layout, p, s.table, free_params[k]);
        const double trace_term = (sigma_inv.array() * dsigma.array()).sum();
        const double quad_term = v.dot(dsigma * v);
        grad(static_cast<Eigen::Index>(k)) = -0.5 * trace_term + 0.5 * quad_term;
    }
    return grad;
}

Eigen::VectorXd stochastic_grad(const ModelParams& p, const Eigen::VectorXd& y,
                                const ObservationLayout& layout, const FrequencyGrid& grid,
                                std::span<const Param> free_params, const ProbeSet& probes) {
    return eval_likelihood(p, y, layout, grid, free_params, &probes, true, false).grad;
}

Eigen::MatrixXd stochastic_fisher(const ModelParams& p, const ObservationLayout& layout,
                                  const FrequencyGrid& grid,
                                  std::span<const Param> free_params,
                                  const ProbeSet& probes) {
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size()));
    return eval_likelihood(p, y, layout, grid, free_params, &probes, false, true).fisher;
}

LikelihoodEval eval_likelihood(const ModelParams& p, const Eigen::VectorXd& y,
                               const ObservationLayout& layout, const FrequencyGrid& grid,
                               std::span<const Param> free_params, const ProbeSet* probes,
                               bool want_grad, bool want_fisher) {
    if (y.size() != static_cast<Eigen::Index>(layout.size())) {
        throw config_error("data vector length does not match layout");
    }
    const bool need_derivs = want_grad || want_fisher;
    const Shared s = prepare(p, layout, grid, need_derivs ? free_params : std::span<const Param>{});
    const auto n = s.sigma.rows();
    const Eigen::VectorXd v = s.llt.solve(y);

    LikelihoodEval out;
    out.value = -0.5 * (n * std::log(2.0 * std::numbers::pi) + log_det(s.llt) + y.dot(v));
    if (!need_derivs) return out;

    if (probes == nullptr) throw config_error("stochastic derivatives require a probe set");
    if (probes->probes.rows() != n) {
        throw config_error("probe dimension does not match layout size");
    }
    const int m = probes->m;
    const auto nf = static_cast<Eigen::Index>(free_params.size());

    // whitened probes W = L^{-T} U, so that E[W W'] = L^{-T} L^{-1} = Sigma^{-1}
    Eigen::MatrixXd w = probes->probes;
    s.llt.matrixU().solveInPlace(w);

    if (want_grad) out.grad.resize(nf);
    std::vector<Eigen::MatrixXd> whitened_images;  // A_k = L^{-1} dSigma_k W
    if (want_fisher) whitened_images.resize(free_params.size());

    for (Eigen::Index k = 0; k < nf; ++k) {
        const Eigen::MatrixXd dsigma =
            assemble_grad_one(layout, p, s.table, free_params[static_cast<std::size_t>(k)]);
        Eigen::MatrixXd sk = dsigma * w;
        if (want_grad) {
            // (1/m) sum_l w_l' dSigma w_l estimates tr(L^{-1} dSigma L^{-T})
            // = tr(Sigma^{-1} dSigma); the quadratic form term stays exact
            const double trace_est = (w.array() * sk.array()).sum() / m;
            const double quad_term = v.dot(dsigma * v);
            out.grad(k) = -0.5 * trace_est + 0.5 * quad_term;
        }
        if (want_fisher) {
            s.llt.matrixL().solveInPlace(sk);
            whitened_images[static_cast<std::size_t>(k)] = std::move(sk);
        }
    }

    if (want_fisher) {
        out.fisher.resize(nf, nf);
        for (Eigen::Index j = 0; j < nf; ++j) {
            for (Eigen::Index k = j; k < nf; ++k) {
                const double g = (whitened_images[static_cast<std::size_t>(j)].array() *
                                  whitened_images[static_cast<std::size_t>(k)].array())
                                     .sum() /
                                 (2.0 * m);
                out.fisher(j, k) = g;
                out.fisher(k, j) = g;
            }
        }
    }
    return out;
}

StdErrors standard_errors(const Eigen::MatrixXd& fisher) {
    if (fisher.rows() != fisher.cols()) throw config_error("fisher matrix must be square");
    const auto n = fisher.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fisher);
    if (es.info() != Eigen::Success) throw numeric_error("fisher eigendecomposition failed");
    const Eigen::VectorXd& evals = es.eigenvalues();
    const Eigen::MatrixXd& evecs = es.eigenvectors();
    const double max_eval = evals.cwiseMax(0.0).maxCoeff();

    StdErrors result;
    result.values = Eigen::VectorXd::Zero(n);
    if (max_eval <= 0.0) {
        throw numeric_error("fisher matrix is singular: every direction is in the null space");
    }
    const double cutoff = 1e-12 * max_eval;
    int n_dropped = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (evals(k) <= cutoff) {
            ++n_dropped;
            std::ostringstream note;
            note << "near-null direction (eigenvalue " << evals(k) << "):";
            for (Eigen::Index i = 0; i < n; ++i) {
                if (std::abs(evecs(i, k)) > 0.2) {
                    note << " " << evecs(i, k) << "*p" << i;
                }
            }
            result.notes.push_back(note.str());
        }
    }
    if (n_dropped == n) {
        std::string msg = "fisher matrix is wholly singular;";
        for (const auto& s : result.notes) msg += " " + s;
        throw numeric_error(msg);
    }
    result.conditioning_warning = n_dropped > 0;

    for (Eigen::Index i = 0; i < n; ++i) {
        double d = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (evals(k) > cutoff) d += evecs(i, k) * evecs(i, k) / evals(k);
        }
        result.values(i) = std::sqrt(d);
    }
    return result;
}

}  // namespace halfspec
