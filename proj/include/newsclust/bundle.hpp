#pragma once

#include <cstdint>

#include "newsclust/core.hpp"
#include "newsclust/creation_net.hpp"

namespace newsclust {

// Everything the engine needs to cluster a stream.
struct ModelBundle {
    static constexpr std::uint32_t kFormatVersion = 1;

    WeightVector weights;
    CreationNet creation_net;
    SimilarityParams sim_params;
    // Dense embedding dimension; 0 when the dense representation is unused.
    std::uint32_t embedding_dim = 0;
    FeatureMask features = all_features();
    std::uint32_t format_version = kFormatVersion;

    bool uses_dense() const { return features.test(kDenseFeature) && embedding_dim > 0; }

    friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

}  // namespace newsclust
