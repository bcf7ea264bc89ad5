#include "newsclust/lbfgs.hpp"

#include <cmath>
#include <deque>

#include "newsclust/errors.hpp"

namespace newsclust {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::fmax(m, std::fabs(x));
    return m;
}

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

std::vector<double> two_loop(const std::deque<CurvaturePair>& memory, std::span<const double> grad) {
    std::vector<double> q(grad.begin(), grad.end());
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
        alpha[k] = memory[k].rho * dot(memory[k].s, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * memory[k].y[i];
    }
    if (!memory.empty()) {
        const auto& last = memory.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
        const double beta = memory[k].rho * dot(memory[k].y, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += memory[k].s[i] * (alpha[k] - beta);
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0, const LbfgsOptions& options) {
    const std::size_t n = x0.size();
    LbfgsResult result;
    result.x = std::move(x0);
    std::vector<double> grad(n), trial(n), trial_grad(n);
    double value = f(result.x, grad);
    if (!std::isfinite(value)) throw InvalidValue("lbfgs: objective is not finite at the starting point");

    std::deque<CurvaturePair> memory;
    std::size_t iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        if (inf_norm(grad) <= options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1) memory.clear();
            std::vector<double> dir = two_loop(memory, grad);
            double slope = dot(grad, dir);
            if (!(slope < 0.0)) {
                memory.clear();
                dir = two_loop(memory, grad);
                slope = dot(grad, dir);
            }
            // Without curvature information, scale the first step to unit length.
            double step = memory.empty() ? std::fmin(1.0, 1.0 / std::sqrt(dot(grad, grad))) : 1.0;
            for (std::size_t b = 0; b < options.max_backtracks; ++b, step *= 0.5) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = result.x[i] + step * dir[i];
                const double trial_value = f(trial, trial_grad);
                if (std::isfinite(trial_value) && trial_value <= value + options.armijo_c1 * step * slope) {
                    CurvaturePair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
                    for (std::size_t i = 0; i < n; ++i) {
                        pair.s[i] = trial[i] - result.x[i];
                        pair.y[i] = trial_grad[i] - grad[i];
                    }
                    const double sy = dot(pair.s, pair.y);
                    if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y)) && sy > 0.0) {
                        pair.rho = 1.0 / sy;
                        memory.push_back(std::move(pair));
                        if (memory.size() > options.memory) memory.pop_front();
                    }
                    result.x.swap(trial);
                    grad.swap(trial_grad);
                    value = trial_value;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted)
            throw LineSearchFailure("lbfgs: no descent step found at iteration " + std::to_string(iter) +
                                    " (|grad|_inf = " + std::to_string(inf_norm(grad)) + ")");
    }
    result.value = value;
    result.gradient_inf_norm = inf_norm(grad);
    result.iterations = iter;
    if (!result.converged && result.gradient_inf_norm <= options.gradient_tolerance) result.converged = true;
    return result;
}

}  // namespace newsclust
