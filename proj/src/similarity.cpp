#include "newsclust/similarity.hpp"

#include <cmath>
#include <limits>

#include "newsclust/errors.hpp"

namespace newsclust {
namespace {

double clamp_cosine(double c) { return std::fmin(1.0, std::fmax(-1.0, c)); }

double cosine_from_parts(double dot, double norm_a, double norm_b) {
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    return clamp_cosine(dot / (norm_a * norm_b));
}

// exp(-d^2 / 2 sigma^2), floored at the smallest normal double so the
// result stays strictly positive for arbitrarily distant timestamps.
double gaussian(double d, double sigma) {
    return std::fmax(std::exp(-(d * d) / (2.0 * sigma * sigma)), std::numeric_limits<double>::min());
}

double dense_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double cosine_sparse(const SparseVector& a, const SparseVector& b) {
    return cosine_from_parts(a.dot(b), std::sqrt(a.squared_norm()), std::sqrt(b.squared_norm()));
}

double cosine_dense(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DimensionMismatch("dense vectors of dimension " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    return cosine_from_parts(dense_dot(a, b), std::sqrt(dense_dot(a, a)), std::sqrt(dense_dot(b, b)));
}

double temporal_sim(Timestamp doc_ts, Timestamp cluster_ts, const SimilarityParams& p) {
    return gaussian(days_between(doc_ts, cluster_ts) - p.mu_days, p.sigma_days);
}

RawComparison compare(const DocRepSet& doc, const ClusterRep& cluster) {
    if (doc.dense.size() != cluster.dense_sum().size())
        throw DimensionMismatch("document dense dimension " + std::to_string(doc.dense.size()) +
                                " vs cluster " + std::to_string(cluster.dense_sum().size()));
    RawComparison raw;
    for (std::size_t k = 0; k < kSparseSlots; ++k) {
        const SparseVector& d = doc.sparse[k];
        if (d.empty()) continue;
        raw.cosines[k] = cosine_from_parts(d.dot(cluster.sparse_sum(k)), std::sqrt(d.squared_norm()),
                                           cluster.sparse_sum_norm(k));
    }
    if (!doc.dense.empty()) {
        raw.cosines[kDenseFeature] = cosine_from_parts(dense_dot(doc.dense, cluster.dense_sum()),
                                                       std::sqrt(dense_dot(doc.dense, doc.dense)),
                                                       cluster.dense_sum_norm());
    }
    raw.delta_days = {days_between(doc.timestamp, cluster.ts_min()), days_between(doc.timestamp, cluster.ts_max()),
                      days_between(doc.timestamp, cluster.ts_mean())};
    return raw;
}

SimilarityVector finalize(const RawComparison& raw, const SimilarityParams& p, const FeatureMask& mask) {
    SimilarityVector s{};
    for (std::size_t k = 0; k < raw.cosines.size(); ++k) s[k] = raw.cosines[k];
    for (std::size_t t = 0; t < 3; ++t)
        s[kTsMinFeature + t] = gaussian(raw.delta_days[t] - p.mu_days, p.sigma_days);
    apply_mask(s, mask);
    return s;
}

SimilarityVector similarity_vector(const DocRepSet& doc, const ClusterRep& cluster, const SimilarityParams& p,
                                   const FeatureMask& mask) {
    validate(p);
    return finalize(compare(doc, cluster), p, mask);
}

double c_score(const SimilarityVector& s, const WeightVector& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kFeatureCount; ++i) sum += w[i] * s[i];
    return sum;
}

BestMatch best_cluster(const DocRepSet& doc, std::span<const ClusterRep> pool, const WeightVector& w,
                       const SimilarityParams& p, const FeatureMask& mask) {
    if (pool.empty()) throw EmptyPool("no clusters to compare against");
    validate(p);
    BestMatch best;
    bool have = false;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const SimilarityVector s = finalize(compare(doc, pool[i]), p, mask);
        const double score = c_score(s, w);
        if (!have || score > best.score || (score == best.score && pool[i].id() < best.cluster_id)) {
            best = BestMatch{pool[i].id(), i, s, score};
            have = true;
        }
    }
    return best;
}

}  // namespace newsclust
