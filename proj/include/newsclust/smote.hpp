#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "newsclust/creation_net.hpp"

namespace newsclust {

// SMOTE minority oversampling. Returns the input samples unchanged and in
// order, followed by synthetic minority samples
//   x_new = x_i + u * (x_nn - x_i),  u ~ U(0, 1),
// where x_nn is drawn uniformly from the k nearest (Euclidean) minority
// neighbours of x_i, until both classes have the same count. Base points are
// visited round-robin in input order. k is capped at (minority size - 1).
//
// This is plain SMOTE: the SVM-boundary variant's restriction of base points
// to borderline support vectors is not applied.
//
// Throws TooFewMinority when the classes differ in size and the smaller one
// has fewer than two members; InvalidValue when k == 0.
std::vector<CreationSample> smote_oversample(std::span<const CreationSample> samples, std::size_t k,
                                             std::uint64_t seed);

}  // namespace newsclust
