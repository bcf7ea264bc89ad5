#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace newsclust {

struct SvmOptions {
    double C = 1.0;
    // Stop when the maximal KKT violation of the working pair drops below this.
    double tolerance = 1e-6;
    // 0 picks a limit proportional to the sample count.
    std::size_t max_iterations = 0;
};

struct LinearSvm {
    std::vector<double> w;
    double bias = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    double decision(std::span<const double> x) const;
};

// Soft-margin linear SVM with an unregularized bias,
//   min 1/2 |w|^2 + C * sum_i max(0, 1 - y_i (w . x_i + b)),
// solved in the dual by SMO with second-order working-set selection. The
// solver is deterministic for a given input order.
//
// labels must be +1 or -1 with both present (DegenerateData otherwise).
LinearSvm train_svm(std::span<const std::vector<double>> rows, std::span<const int> labels,
                    const SvmOptions& options);

double hinge_objective(std::span<const double> w, double bias, std::span<const std::vector<double>> rows,
                       std::span<const int> labels, double C);

}  // namespace newsclust
