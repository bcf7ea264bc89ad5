#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "newsclust/bundle.hpp"
#include "newsclust/core.hpp"
#include "newsclust/representations.hpp"

namespace newsclust {

// Clusters created so far. Ids are allocated densely from 0 in creation
// order, so a cluster's id is also its position. The pool only grows.
class ClusterPool {
public:
    std::span<const ClusterRep> clusters() const { return clusters_; }
    std::size_t size() const { return clusters_.size(); }
    bool empty() const { return clusters_.empty(); }
    std::int64_t next_id() const { return static_cast<std::int64_t>(clusters_.size()); }
    const ClusterRep& at(std::int64_t id) const;

    std::int64_t create(const DocRepSet& rep);
    void fold(std::int64_t id, const DocRepSet& rep);

private:
    std::vector<ClusterRep> clusters_;
};

struct Assignment {
    std::string doc_id;
    std::int64_t cluster_id = 0;
    bool created = false;
    double c_score = 0.0;
    double creation_prob = 0.0;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Online clustering over encoded documents. Callers may interleave push()
// with inspection of pool(); one writer at a time.
class StreamClusterer {
public:
    explicit StreamClusterer(ModelBundle bundle);

    Assignment push(const DocRepSet& rep);
    const ClusterPool& pool() const { return pool_; }
    const ModelBundle& bundle() const { return bundle_; }

private:
    ModelBundle bundle_;
    ClusterPool pool_;
};

// Single decision on an already-encoded document: create when the pool is
// empty (creation_prob = 1 by convention), otherwise fold into the best
// cluster unless the creation network outputs >= 0.5.
Assignment step(ClusterPool& pool, const DocRepSet& rep, const ModelBundle& bundle);

// Encodes then decides. Throws MissingEmbedding when the bundle uses dense
// vectors and the store lacks the document.
std::pair<ClusterPool, Assignment> step(ClusterPool pool, const Document& doc, const ModelBundle& bundle,
                                        const TfidfModels& models, const EmbeddingStore* store);

enum class StreamOrder { Timestamp, Given };

struct StreamResult {
    ClusterPool pool;
    std::vector<Assignment> assignments;
};

DocRepSet encode_for_bundle(const Document& doc, const ModelBundle& bundle, const TfidfModels& models,
                            const EmbeddingStore* store);

StreamResult cluster_stream(std::vector<Document> docs, const ModelBundle& bundle, const TfidfModels& models,
                            const EmbeddingStore* store, StreamOrder order);
// Already-encoded documents, processed in the given order.
StreamResult cluster_encoded(std::span<const DocRepSet> docs, const ModelBundle& bundle);

}  // namespace newsclust
