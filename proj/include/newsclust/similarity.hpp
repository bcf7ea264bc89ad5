#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "newsclust/core.hpp"

namespace newsclust {

// Cosine similarity; 0 when either vector has zero norm.
double cosine_sparse(const SparseVector& a, const SparseVector& b);
// Throws DimensionMismatch.
double cosine_dense(std::span<const double> a, std::span<const double> b);

// Gaussian similarity exp(-(delta - mu)^2 / (2 sigma^2)) with delta the
// document-minus-cluster difference in fractional days.
double temporal_sim(Timestamp doc_ts, Timestamp cluster_ts, const SimilarityParams& p);

// Document-cluster comparison before the temporal kernel is applied: the 10
// cosines plus the three day offsets against ts_min, ts_max and ts_mean.
// Lets training re-evaluate one simulated stream under many (mu, sigma).
struct RawComparison {
    std::array<double, 10> cosines{};
    std::array<double, 3> delta_days{};
};

RawComparison compare(const DocRepSet& doc, const ClusterRep& cluster);
SimilarityVector finalize(const RawComparison& raw, const SimilarityParams& p,
                          const FeatureMask& mask = all_features());

SimilarityVector similarity_vector(const DocRepSet& doc, const ClusterRep& cluster, const SimilarityParams& p,
                                   const FeatureMask& mask = all_features());

double c_score(const SimilarityVector& s, const WeightVector& w);

struct BestMatch {
    std::int64_t cluster_id = 0;
    std::size_t position = 0;  // index into the pool span
    SimilarityVector similarity{};
    double score = 0.0;
};

// Exhaustive argmax of c-score; ties go to the lowest cluster id.
// Throws EmptyPool.
BestMatch best_cluster(const DocRepSet& doc, std::span<const ClusterRep> pool, const WeightVector& w,
                       const SimilarityParams& p, const FeatureMask& mask = all_features());

}  // namespace newsclust
