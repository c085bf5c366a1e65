#include "halfspec/fit.hpp"

#include <algorithm>
#include <cmath>

#include "halfspec/errors.hpp"

namespace halfspec {

namespace {

ModelParams params_from_internal(const ModelParams& base, std::span<const Param> free,
                                 const Eigen::VectorXd& u) {
    ModelParams p = base;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const Param param = free[static_cast<std::size_t>(k)];
        p.set(param, transform::to_natural(param, u(k)));
    }
    return p;
}

}  // namespace

std::vector<Param> free_params_after_freeze(const std::vector<std::string>& freeze) {
    std::vector<Param> frozen;
    frozen.reserve(freeze.size());
    for (const auto& name : freeze) frozen.push_back(param_from_name(name));
    std::vector<Param> free;
    for (Param p : kAllParams) {
        if (std::find(frozen.begin(), frozen.end(), p) == frozen.end()) free.push_back(p);
    }
    if (free.empty()) throw config_error("cannot freeze every parameter");
    return free;
}

FitResult fit(const Eigen::VectorXd& y, const ObservationLayout& layout,
              const FrequencyGrid& grid, const ModelParams& init, const FitOptions& opts) {
    init.validate();
    layout.validate();
    if (opts.probe_count < 1) throw config_error("probe count must be >= 1");
    const std::vector<Param> free = free_params_after_freeze(opts.freeze);

    const ProbeSet probes =
        ProbeSet::rademacher(static_cast<int>(layout.size()), opts.probe_count, opts.seed);

    Eigen::VectorXd u0(static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
        u0(static_cast<Eigen::Index>(k)) =
            transform::to_internal(free[k], init.get(free[k]));
    }

    const auto objective = [&](const Eigen::VectorXd& u) -> double {
        const ModelParams p = params_from_internal(init, free, u);
        return -loglik(p, y, layout, grid);
    };
    const auto derivatives = [&](const Eigen::VectorXd& u, Eigen::VectorXd& g,
                                 Eigen::MatrixXd& h) {
        const ModelParams p = params_from_internal(init, free, u);
        const LikelihoodEval ev =
            eval_likelihood(p, y, layout, grid, free, &probes, true, true);
        const auto nf = static_cast<Eigen::Index>(free.size());
        Eigen::VectorXd jac(nf);
        for (Eigen::Index k = 0; k < nf; ++k) {
            jac(k) = transform::jacobian(free[static_cast<std::size_t>(k)],
                                         p.get(free[static_cast<std::size_t>(k)]));
        }
        g = -(jac.array() * ev.grad.array()).matrix();
        h = jac.asDiagonal() * ev.fisher * jac.asDiagonal();
    };

    const TrustRegionResult tr =
        minimize_trust_region(objective, derivatives, u0, opts.trust_region);

    FitResult result;
    result.estimates = params_from_internal(init, free, tr.x);
    result.free_params = free;
    result.converged = tr.converged;
    result.n_iterations = tr.n_iterations;
    result.seed = opts.seed;
    result.trace = tr.trace;
    for (auto& rec : result.trace) rec.objective = -rec.objective;

    // one natural-domain evaluation at the optimum for reporting
    const LikelihoodEval final_eval =
        eval_likelihood(result.estimates, y, layout, grid, free, &probes, true, true);
    result.final_loglik = final_eval.value;
    result.fisher = final_eval.fisher;
    const StdErrors se = standard_errors(final_eval.fisher);
    result.std_errors = se.values;
    result.se_conditioning_warning = se.conditioning_warning;
    result.se_notes = se.notes;
    // rewrite pK placeholders as parameter names, longest indices first so
    // "p1" cannot clobber "p14"
    for (auto& note : result.se_notes) {
        for (std::size_t k = free.size(); k-- > 0;) {
            const std::string from = "p" + std::to_string(k);
            std::size_t pos;
            while ((pos = note.find(from)) != std::string::npos) {
                note.replace(pos, from.size(), std::string(param_name(free[k])));
            }
        }
    }
    return result;
}

ModelParams heuristic_init(const Eigen::VectorXd& y, const ObservationLayout& layout) {
    layout.validate();
    if (y.size() != static_cast<Eigen::Index>(layout.size())) {
        throw config_error("data vector length does not match layout");
    }
    ModelParams p;  // neutral defaults for everything not matched below
    const double t_lo = static_cast<double>(layout.min_time());
    const double t_hi = static_cast<double>(layout.max_time());
    p.set_knots(t_lo, t_hi > t_lo ? t_hi : t_lo + 1.0);

    // spread theta over quarters of the window
    const double span = t_hi - t_lo;
    for (int j = 0; j < 4; ++j) {
        double lo = t_lo + span * (j / 4.0);
        double hi = t_lo + span * ((j + 1) / 4.0);
        double sum = 0.0, sum2 = 0.0;
        long count = 0;
        for (std::size_t i = 0; i < layout.size(); ++i) {
            const double t = static_cast<double>(layout.entries[i].time);
            if (t >= lo && (t < hi || j == 3)) {
                sum += y(static_cast<Eigen::Index>(i));
                sum2 += y(static_cast<Eigen::Index>(i)) * y(static_cast<Eigen::Index>(i));
                ++count;
            }
        }
        double sd = 1.0;
        if (count > 1) {
            const double mean = sum / count;
            sd = std::sqrt(std::max(sum2 / count - mean * mean, 1e-12));
        }
        p.theta[j] = sd;
    }

    const double mid = 0.5 * (layout.site_altitudes.front() + layout.site_altitudes.back());
    p.beta = mid;
    const double overall_sd =
        std::sqrt(std::max((y.array() - y.mean()).square().mean(), 1e-12));
    p.eta_st = 0.1 * overall_sd;
    p.eta_t = 0.05 * overall_sd;
    return p;
}

}  // namespace halfspec
