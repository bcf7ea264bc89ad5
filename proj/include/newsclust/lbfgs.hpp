#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace newsclust {

// Writes the gradient at x into grad and returns the objective value.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
    std::size_t memory = 10;
    double gradient_tolerance = 1e-6;  // stop when |grad|_inf <= this
    std::size_t max_iterations = 1000;
    double armijo_c1 = 1e-4;
    std::size_t max_backtracks = 60;
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_inf_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;  // gradient tolerance reached
};

// Limited-memory BFGS: two-loop recursion for the search direction, Armijo
// backtracking for the step. Curvature pairs with s.y <= 0 are skipped. When
// backtracking fails along the quasi-Newton direction the memory is cleared
// and steepest descent is tried; if that fails too, LineSearchFailure.
LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0, const LbfgsOptions& options = {});

}  // namespace newsclust
