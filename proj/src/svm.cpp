#include "newsclust/svm.hpp"

#include <cmath>
#include <limits>

#include "newsclust/errors.hpp"

namespace newsclust {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

constexpr double kTau = 1e-12;

}  // namespace

double LinearSvm::decision(std::span<const double> x) const { return dot(w, x) + bias; }

double hinge_objective(std::span<const double> w, double bias, std::span<const std::vector<double>> rows,
                       std::span<const int> labels, double C) {
    double loss = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        loss += std::fmax(0.0, 1.0 - labels[i] * (dot(w, rows[i]) + bias));
    return 0.5 * dot(w, w) + C * loss;
}

LinearSvm train_svm(std::span<const std::vector<double>> rows, std::span<const int> labels,
                    const SvmOptions& options) {
    const std::size_t n = rows.size();
    if (labels.size() != n) throw InvalidValue("svm: row/label count mismatch");
    if (!(options.C > 0.0)) throw InvalidValue("svm: C must be positive");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y == 1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw InvalidValue("svm: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw DegenerateData("svm training data contains a single label");
    const std::size_t dim = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != dim) throw DimensionMismatch("svm: rows of unequal dimension");

    const double C = options.C;
    const std::size_t max_iter = options.max_iterations ? options.max_iterations
                                                        : std::max<std::size_t>(100000, 200 * n);

    std::vector<double> alpha(n, 0.0), grad(n, -1.0), diag(n);
    for (std::size_t t = 0; t < n; ++t) diag[t] = dot(rows[t], rows[t]);

    LinearSvm model;
    model.w.assign(dim, 0.0);
    const auto in_up = [&](std::size_t t) { return labels[t] == 1 ? alpha[t] < C : alpha[t] > 0.0; };
    const auto in_low = [&](std::size_t t) { return labels[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C; };

    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        // Dual gradient G_t = y_t (w . x_t) - 1, recomputed from w so it never drifts.
        for (std::size_t t = 0; t < n; ++t) grad[t] = labels[t] * dot(model.w, rows[t]) - 1.0;

        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (in_up(t) && -labels[t] * grad[t] >= gmax) {
                gmax = -labels[t] * grad[t];
                i = t;
            }
        }
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low(t)) continue;
            const double yg = labels[t] * grad[t];
            gmax2 = std::fmax(gmax2, yg);
            const double b = gmax + yg;
            if (b > 0.0 && i < n) {
                double a = diag[i] + diag[t] - 2.0 * dot(rows[i], rows[t]);
                if (a <= 0.0) a = kTau;
                const double obj = -(b * b) / a;
                if (obj <= best_obj) {
                    best_obj = obj;
                    j = t;
                }
            }
        }
        if (i == n || j == n || gmax + gmax2 < options.tolerance) {
            model.converged = true;
            break;
        }

        const double kij = dot(rows[i], rows[j]);
        const double old_ai = alpha[i], old_aj = alpha[j];
        if (labels[i] != labels[j]) {
            double quad = diag[i] + diag[j] - 2.0 * kij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0; alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else if (alpha[j] > C) {
                alpha[j] = C; alpha[i] = C + diff;
            }
        } else {
            double quad = diag[i] + diag[j] - 2.0 * kij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0; alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0; alpha[j] = sum;
            }
        }
        const double di = (alpha[i] - old_ai) * labels[i];
        const double dj = (alpha[j] - old_aj) * labels[j];
        for (std::size_t k = 0; k < dim; ++k) model.w[k] += di * rows[i][k] + dj * rows[j][k];
    }
    model.iterations = iter;

    for (std::size_t t = 0; t < n; ++t) grad[t] = labels[t] * dot(model.w, rows[t]) - 1.0;
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = labels[t] * grad[t];
        if (alpha[t] >= C) {
            if (labels[t] == -1) ub = std::fmin(ub, yg); else lb = std::fmax(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (labels[t] == 1) ub = std::fmin(ub, yg); else lb = std::fmax(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    model.bias = -rho;
    return model;
}

}  // namespace newsclust
