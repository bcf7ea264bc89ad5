#include "newsclust/smote.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "newsclust/errors.hpp"

namespace newsclust {
namespace {

double squared_distance(const SimilarityVector& a, const SimilarityVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace

std::vector<CreationSample> smote_oversample(std::span<const CreationSample> samples, std::size_t k,
                                             std::uint64_t seed) {
    if (k == 0) throw InvalidValue("smote: k must be at least 1");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < samples.size(); ++i) (samples[i].y == 1 ? pos : neg).push_back(i);

    std::vector<CreationSample> out(samples.begin(), samples.end());
    if (pos.size() == neg.size()) return out;

    const auto& minority = pos.size() < neg.size() ? pos : neg;
    const std::size_t majority_count = std::max(pos.size(), neg.size());
    const int minority_label = pos.size() < neg.size() ? 1 : 0;
    if (minority.size() < 2)
        throw TooFewMinority("smote needs at least 2 minority samples, got " + std::to_string(minority.size()));

    const std::size_t m = minority.size();
    const std::size_t kk = std::min(k, m - 1);

    // k nearest minority neighbours of each minority point; ties by position.
    std::vector<std::vector<std::size_t>> neighbours(m);
    std::vector<std::size_t> order(m);
    std::vector<double> dist(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) dist[b] = squared_distance(samples[minority[a]].x, samples[minority[b]].x);
        std::iota(order.begin(), order.end(), 0);
        std::erase(order, a);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                          [&](std::size_t l, std::size_t r) { return dist[l] < dist[r] || (dist[l] == dist[r] && l < r); });
        neighbours[a].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk));
        order.resize(m);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, kk - 1);
    out.reserve(2 * majority_count);
    for (std::size_t made = 0; m + made < majority_count; ++made) {
        const std::size_t a = made % m;
        const auto& base = samples[minority[a]].x;
        const auto& nn = samples[minority[neighbours[a][pick(rng)]]].x;
        const double u = unit(rng);
        CreationSample s;
        s.y = minority_label;
        for (std::size_t i = 0; i < kFeatureCount; ++i) s.x[i] = base[i] + u * (nn[i] - base[i]);
        out.push_back(s);
    }
    return out;
}

}  // namespace newsclust
