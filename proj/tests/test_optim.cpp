#include <doctest.h>

#include <ostream>

#include <algorithm>
#include <cmath>
#include <random>

#include "newsclust/creation_net.hpp"
#include "newsclust/errors.hpp"
#include "newsclust/lbfgs.hpp"
#include "newsclust/smote.hpp"
#include "newsclust/svm.hpp"
#include "support/oracles.hpp"

using namespace newsclust;

namespace {

struct SvmInstance {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
};

// Two overlapping Gaussian blobs.
SvmInstance blobs(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    SvmInstance s;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = i % 2 == 0 ? 1 : -1;
        std::vector<double> x(dim);
        for (std::size_t k = 0; k < dim; ++k) x[k] = 0.8 * y * (k == 0 ? 1.0 : 0.5) + g(rng);
        s.rows.push_back(x);
        s.labels.push_back(y);
    }
    return s;
}

double rosenbrock(std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
}

}  // namespace

TEST_CASE("svm: one-dimensional separable pair") {
    const std::vector<std::vector<double>> rows{{2.0}, {-2.0}};
    const std::vector<int> labels{1, -1};
    const LinearSvm m = train_svm(rows, labels, SvmOptions{.C = 100.0});
    CHECK(m.converged);
    CHECK(m.w[0] > 0.0);
    // Both points sit on the margin.
    CHECK(m.decision(rows[0]) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.decision(rows[1]) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(m.w[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("svm: objective matches the grid oracle in two and three dimensions") {
    std::mt19937_64 rng(5);
    for (std::size_t dim : {2u, 3u}) {
        for (int trial = 0; trial < 3; ++trial) {
            const SvmInstance s = blobs(rng, 24, dim);
            const double C = trial == 0 ? 0.1 : trial == 1 ? 1.0 : 5.0;
            const LinearSvm m = train_svm(s.rows, s.labels, SvmOptions{.C = C});
            const double ours = hinge_objective(m.w, m.bias, s.rows, s.labels, C);
            const double grid = oracle::svm_grid_minimum(s.rows, s.labels, C);
            CHECK(std::abs(ours - grid) <= 1e-4 * std::max(1.0, std::abs(grid)));
        }
    }
}

TEST_CASE("svm: rejects single-class data") {
    const std::vector<std::vector<double>> rows{{1.0}, {2.0}};
    const std::vector<int> labels{1, 1};
    CHECK_THROWS_AS(train_svm(rows, labels, {}), DegenerateData);
}

TEST_CASE("lbfgs: quadratic and Rosenbrock") {
    const Objective quad = [](std::span<const double> x, std::span<double> g) {
        g[0] = 2.0 * x[0];
        g[1] = 2.0 * x[1];
        return x[0] * x[0] + x[1] * x[1];
    };
    const LbfgsResult q = lbfgs_minimize(quad, {3.0, -4.0});
    CHECK(q.converged);
    CHECK(std::abs(q.x[0]) < 1e-6);
    CHECK(std::abs(q.x[1]) < 1e-6);

    LbfgsOptions o;
    o.gradient_tolerance = 1e-9;
    const LbfgsResult r = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, o);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
    CHECK(std::abs(r.x[1] - 1.0) < 1e-4);
    CHECK(r.value < 1e-8);
}

TEST_CASE("lbfgs: unbounded objective fails the line search") {
    // A gradient that contradicts the function value defeats every step.
    const Objective liar = [](std::span<const double> x, std::span<double> g) {
        g[0] = -1.0;
        return x[0];
    };
    CHECK_THROWS_AS(lbfgs_minimize(liar, {0.0}), LineSearchFailure);
}

TEST_CASE("creation net: analytic gradient matches finite differences") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0), s01(0.0, 1.0);
    std::vector<CreationSample> samples(12);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (double& v : samples[i].x) v = s01(rng);
        samples[i].y = static_cast<int>(i % 2);
    }
    double worst = 0.0;
    for (int point = 0; point < 100; ++point) {
        std::vector<double> theta(CreationNet::kParamCount);
        for (double& v : theta) v = 2.0 * u(rng);
        std::vector<double> grad(theta.size());
        creation_objective(theta, samples, kCreationL2, grad);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double h = 1e-6;
            std::vector<double> up = theta, down = theta;
            up[i] += h;
            down[i] -= h;
            const double fd = (creation_objective(up, samples, kCreationL2, {}) -
                               creation_objective(down, samples, kCreationL2, {})) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1e-3, std::abs(fd) + std::abs(grad[i])));
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("creation net: flatten round trip and prediction range") {
    std::vector<double> p(CreationNet::kParamCount);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.1 * double(i) - 1.0;
    const CreationNet net = CreationNet::unflatten(p);
    const auto back = net.flatten();
    CHECK(std::equal(back.begin(), back.end(), p.begin()));
    SimilarityVector x;
    x.fill(0.3);
    const double y = net.predict(x);
    CHECK(y > 0.0);
    CHECK(y < 1.0);
}

TEST_CASE("creation net: XOR in two of thirteen coordinates") {
    std::vector<CreationSample> samples;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (int rep = 0; rep < 10; ++rep)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                CreationSample s;
                s.x[2] = a + jitter(rng);
                s.x[11] = b + jitter(rng);
                s.y = a ^ b;
                samples.push_back(s);
            }
    const CreationNet net = train_creation_net(samples, 1);
    CHECK(creation_accuracy(net, samples) == 1.0);
}

TEST_CASE("creation net: linearly separable samples") {
    std::vector<CreationSample> samples;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (samples.size() < 60) {
        CreationSample s;
        for (double& v : s.x) v = u(rng);
        const double margin = s.x[0] + s.x[9] - 1.0;
        if (std::abs(margin) < 0.1) continue;
        s.y = margin < 0.0 ? 1 : 0;
        samples.push_back(s);
    }
    const CreationNet net = train_creation_net(samples, 3);
    CHECK(creation_accuracy(net, samples) == 1.0);
    CHECK(train_creation_net(samples, 3) == net);

    std::vector<CreationSample> one_class(samples.begin(), samples.end());
    for (auto& s : one_class) s.y = 0;
    CHECK_THROWS_AS(train_creation_net(one_class, 1), DegenerateData);
}

TEST_CASE("smote: balanced input is untouched") {
    std::vector<CreationSample> s(4);
    s[0].y = s[1].y = 1;
    s[0].x[0] = 1.0;
    const auto out = smote_oversample(s, 5, 1);
    CHECK(out == s);
}

TEST_CASE("smote: two minority points interpolate on their segment") {
    std::vector<CreationSample> s(6);
    s[0].y = 1;
    s[0].x[0] = 0.0;
    s[0].x[1] = 1.0;
    s[3].y = 1;
    s[3].x[0] = 1.0;
    s[3].x[1] = 0.0;
    for (std::size_t i : {1u, 2u, 4u, 5u}) s[i].x[5] = 0.5 + 0.1 * double(i);
    const auto out = smote_oversample(s, 1, 9);
    REQUIRE(out.size() == 8);
    CHECK(std::equal(s.begin(), s.end(), out.begin()));
    for (std::size_t i = 6; i < 8; ++i) {
        CHECK(out[i].y == 1);
        CHECK(out[i].x[0] >= 0.0);
        CHECK(out[i].x[0] <= 1.0);
        CHECK(out[i].x[0] + out[i].x[1] == doctest::Approx(1.0));
        CHECK(out[i].x[5] == 0.0);
    }
}

TEST_CASE("smote: errors") {
    std::vector<CreationSample> s(3);
    s[0].y = 1;
    CHECK_THROWS_AS(smote_oversample(s, 5, 1), TooFewMinority);
    CHECK_THROWS_AS(smote_oversample(s, 0, 1), InvalidValue);
}
