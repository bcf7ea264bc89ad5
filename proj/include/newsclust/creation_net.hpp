#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "newsclust/core.hpp"

namespace newsclust {

// Document vs. its most compatible cluster; y = 1 means a new cluster should
// have been created (the gold cluster was absent from the pool).
struct CreationSample {
    SimilarityVector x{};
    int y = 0;

    friend bool operator==(const CreationSample&, const CreationSample&) = default;
};

// 13 inputs -> 2 logistic hidden units -> 1 logistic output.
struct CreationNet {
    static constexpr std::size_t kHidden = 2;
    static constexpr std::size_t kParamCount = kHidden * (kFeatureCount + 1) + kHidden + 1;  // 31

    // hidden[h][0..12] input weights, hidden[h][13] bias
    std::array<std::array<double, kFeatureCount + 1>, kHidden> hidden{};
    // output[0..1] hidden weights, output[2] bias
    std::array<double, kHidden + 1> output{};

    double predict(const SimilarityVector& x) const;
    bool creates(const SimilarityVector& x) const { return predict(x) >= 0.5; }

    std::array<double, kParamCount> flatten() const;
    static CreationNet unflatten(std::span<const double> params);

    friend bool operator==(const CreationNet&, const CreationNet&) = default;
};

inline constexpr double kCreationL2 = 1e-4;

// Mean binary cross-entropy plus lambda * |theta|^2 over all 31 parameters.
// Writes the analytic gradient into grad when it is non-empty.
double creation_objective(std::span<const double> params, std::span<const CreationSample> samples, double lambda,
                          std::span<double> grad);

struct CreationTrainOptions {
    double lambda = kCreationL2;
    double gradient_tolerance = 1e-6;
    std::size_t max_iterations = 2000;
    // Independent seeded initializations; the lowest final objective wins.
    std::size_t restarts = 5;
};

// Throws DegenerateData unless both classes are present.
CreationNet train_creation_net(std::span<const CreationSample> samples, std::uint64_t seed,
                               const CreationTrainOptions& options = {});

double creation_accuracy(const CreationNet& net, std::span<const CreationSample> samples);

}  // namespace newsclust
