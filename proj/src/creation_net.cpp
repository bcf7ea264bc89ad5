#include "newsclust/creation_net.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "newsclust/errors.hpp"
#include "newsclust/lbfgs.hpp"

namespace newsclust {
namespace {

constexpr std::size_t kRow = kFeatureCount + 1;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z)
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double CreationNet::predict(const SimilarityVector& x) const {
    double z = output[kHidden];
    for (std::size_t h = 0; h < kHidden; ++h) {
        double pre = hidden[h][kFeatureCount];
        for (std::size_t k = 0; k < kFeatureCount; ++k) pre += hidden[h][k] * x[k];
        z += output[h] * sigmoid(pre);
    }
    return sigmoid(z);
}

std::array<double, CreationNet::kParamCount> CreationNet::flatten() const {
    std::array<double, kParamCount> p{};
    std::size_t i = 0;
    for (const auto& row : hidden)
        for (double v : row) p[i++] = v;
    for (double v : output) p[i++] = v;
    return p;
}

CreationNet CreationNet::unflatten(std::span<const double> params) {
    if (params.size() != kParamCount) throw InvalidValue("creation net expects 31 parameters");
    CreationNet net;
    std::size_t i = 0;
    for (auto& row : net.hidden)
        for (double& v : row) v = params[i++];
    for (double& v : net.output) v = params[i++];
    return net;
}

double creation_objective(std::span<const double> params, std::span<const CreationSample> samples, double lambda,
                          std::span<double> grad) {
    const bool want_grad = !grad.empty();
    if (want_grad)
        for (double& g : grad) g = 0.0;

    const double* w = params.data();              // hidden rows, kRow each
    const double* v = params.data() + CreationNet::kHidden * kRow;  // output weights + bias
    double loss = 0.0;
    std::array<double, CreationNet::kHidden> act{};
    for (const CreationSample& s : samples) {
        double z = v[CreationNet::kHidden];
        for (std::size_t h = 0; h < CreationNet::kHidden; ++h) {
            double pre = w[h * kRow + kFeatureCount];
            for (std::size_t k = 0; k < kFeatureCount; ++k) pre += w[h * kRow + k] * s.x[k];
            act[h] = sigmoid(pre);
            z += v[h] * act[h];
        }
        loss += softplus(z) - s.y * z;
        if (!want_grad) continue;

        const double dz = sigmoid(z) - s.y;
        double* gv = grad.data() + CreationNet::kHidden * kRow;
        gv[CreationNet::kHidden] += dz;
        for (std::size_t h = 0; h < CreationNet::kHidden; ++h) {
            gv[h] += dz * act[h];
            const double dpre = dz * v[h] * act[h] * (1.0 - act[h]);
            double* gw = grad.data() + h * kRow;
            for (std::size_t k = 0; k < kFeatureCount; ++k) gw[k] += dpre * s.x[k];
            gw[kFeatureCount] += dpre;
        }
    }
    const double inv_n = samples.empty() ? 0.0 : 1.0 / static_cast<double>(samples.size());
    double reg = 0.0;
    for (double p : params) reg += p * p;
    if (want_grad)
        for (std::size_t i = 0; i < params.size(); ++i) grad[i] = grad[i] * inv_n + 2.0 * lambda * params[i];
    return loss * inv_n + lambda * reg;
}

CreationNet train_creation_net(std::span<const CreationSample> samples, std::uint64_t seed,
                               const CreationTrainOptions& options) {
    bool has_pos = false, has_neg = false;
    for (const auto& s : samples) {
        if (s.y == 1) has_pos = true;
        else if (s.y == 0) has_neg = true;
        else throw InvalidValue("creation sample label must be 0 or 1");
    }
    if (!has_pos || !has_neg) throw DegenerateData("creation training data needs both merge and create samples");

    const Objective f = [&](std::span<const double> x, std::span<double> g) {
        return creation_objective(x, samples, options.lambda, g);
    };
    LbfgsOptions lbfgs;
    lbfgs.gradient_tolerance = options.gradient_tolerance;
    lbfgs.max_iterations = options.max_iterations;

    std::optional<LbfgsResult> best;
    std::optional<LineSearchFailure> last_failure;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        // Glorot-uniform bounds per layer.
        std::uniform_real_distribution<double> hidden_init(-std::sqrt(6.0 / (kFeatureCount + CreationNet::kHidden)),
                                                           std::sqrt(6.0 / (kFeatureCount + CreationNet::kHidden)));
        std::uniform_real_distribution<double> output_init(-std::sqrt(6.0 / (CreationNet::kHidden + 1)),
                                                           std::sqrt(6.0 / (CreationNet::kHidden + 1)));
        std::vector<double> x0(CreationNet::kParamCount);
        for (std::size_t i = 0; i < x0.size(); ++i)
            x0[i] = i < CreationNet::kHidden * kRow ? hidden_init(rng) : output_init(rng);
        try {
            LbfgsResult res = lbfgs_minimize(f, std::move(x0), lbfgs);
            if (!best || res.value < best->value) best = std::move(res);
        } catch (const LineSearchFailure& e) {
            last_failure = e;
        }
    }
    if (!best) throw *last_failure;
    return CreationNet::unflatten(best->x);
}

double creation_accuracy(const CreationNet& net, std::span<const CreationSample> samples) {
    if (samples.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& s : samples) correct += (net.creates(s.x) ? 1 : 0) == s.y;
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace newsclust
