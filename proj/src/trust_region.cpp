#include "halfspec/trust_region.hpp"

#include <cmath>
#include <limits>

#include "halfspec/errors.hpp"

namespace halfspec {

namespace {

// Dogleg step for min g'p + 1/2 p'Bp subject to |p| <= radius.
Eigen::VectorXd dogleg_step(const Eigen::VectorXd& g, const Eigen::MatrixXd& b,
                            double radius) {
    const Eigen::LLT<Eigen::MatrixXd> llt(b);
    Eigen::VectorXd newton;
    bool have_newton = false;
    if (llt.info() == Eigen::Success) {
        newton = -llt.solve(g);
        have_newton = newton.allFinite();
    }
    if (have_newton && newton.norm() <= radius) return newton;

    const double gnorm = g.norm();
    if (gnorm == 0.0) return Eigen::VectorXd::Zero(g.size());
    const double g_b_g = g.dot(b * g);
    if (!have_newton || g_b_g <= 0.0) {
        return -(radius / gnorm) * g;  // steepest descent to the boundary
    }
    const Eigen::VectorXd cauchy = -(g.squaredNorm() / g_b_g) * g;
    if (cauchy.norm() >= radius) {
        return -(radius / gnorm) * g;
    }
    // walk the cauchy->newton segment out to the boundary
    const Eigen::VectorXd d = newton - cauchy;
    const double a = d.squaredNorm();
    const double bb = 2.0 * cauchy.dot(d);
    const double c = cauchy.squaredNorm() - radius * radius;
    const double disc = std::max(bb * bb - 4.0 * a * c, 0.0);
    const double t = (-bb + std::sqrt(disc)) / (2.0 * a);
    return cauchy + t * d;
}

}  // namespace

TrustRegionResult minimize_trust_region(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>&
        derivatives,
    const Eigen::VectorXd& x0, const TrustRegionOptions& opts) {
    if (!(opts.tolerance > 0.0)) throw config_error("trust region tolerance must be > 0");

    TrustRegionResult result;
    result.x = x0;
    result.objective = value(x0);
    if (!std::isfinite(result.objective)) {
        throw numeric_error("objective is not finite at the initial point");
    }

    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    derivatives(result.x, grad, hess);

    double radius = opts.initial_radius;
    int consecutive_rejections = 0;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        const Eigen::VectorXd step = dogleg_step(grad, hess, radius);
        const double step_norm = step.norm();
        const double predicted = -(grad.dot(step) + 0.5 * step.dot(hess * step));
        if (!(predicted > std::numeric_limits<double>::min())) {
            result.converged = true;
            result.message = "no predicted reduction available (stationary point)";
            break;
        }

        double trial = std::numeric_limits<double>::infinity();
        try {
            trial = value(result.x + step);
        } catch (const std::exception&) {
            // an invalid trial point is treated as a rejected step
        }
        const double actual = result.objective - trial;
        const double rho = actual / predicted;
        const double used_radius = radius;
        const bool accepted = rho > opts.eta;

        if (rho < 0.25) {
            radius *= opts.shrink;
        } else if (rho > 0.75 && step_norm >= 0.99 * radius) {
            radius = std::min(opts.grow * radius, opts.max_radius);
        }

        bool done = false;
        if (accepted) {
            consecutive_rejections = 0;
            result.x += step;
            const double change = std::abs(actual);
            result.objective = trial;
            if (change <= opts.tolerance * std::max(1.0, std::abs(trial))) {
                result.converged = true;
                result.message = "relative objective change below tolerance";
                done = true;
            }
        }
        // objective column reports the value at the iterate after the decision
        result.trace.push_back({iter, result.objective, step_norm, used_radius, rho, accepted});
        result.n_iterations = iter;
        if (done) break;

        if (accepted) {
            derivatives(result.x, grad, hess);
        } else {
            if (++consecutive_rejections >= opts.max_consecutive_rejections) {
                result.converged = false;
                result.message = "persistent step rejection";
                return result;
            }
        }
    }
    if (result.message.empty()) {
        result.message = result.converged ? "converged" : "iteration limit reached";
    }
    return result;
}

}  // namespace halfspec
