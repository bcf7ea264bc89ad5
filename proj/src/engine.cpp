#include "newsclust/engine.hpp"

#include "newsclust/errors.hpp"
#include "newsclust/similarity.hpp"

namespace newsclust {

const ClusterRep& ClusterPool::at(std::int64_t id) const {
    if (id < 0 || id >= next_id()) throw InvalidValue("no cluster with id " + std::to_string(id));
    return clusters_[static_cast<std::size_t>(id)];
}

std::int64_t ClusterPool::create(const DocRepSet& rep) {
    const std::int64_t id = next_id();
    clusters_.push_back(cluster_from_doc(rep, id));
    return id;
}

void ClusterPool::fold(std::int64_t id, const DocRepSet& rep) {
    at(id);
    fold_in_place(clusters_[static_cast<std::size_t>(id)], rep);
}

Assignment step(ClusterPool& pool, const DocRepSet& rep, const ModelBundle& bundle) {
    // Dense vectors are carried along but ignored when the bundle masks them out.
    if (bundle.uses_dense() && rep.dense.size() != bundle.embedding_dim)
        throw DimensionMismatch("document '" + rep.doc_id + "' has dense dimension " +
                                std::to_string(rep.dense.size()) + ", bundle expects " +
                                std::to_string(bundle.embedding_dim));
    Assignment a;
    a.doc_id = rep.doc_id;
    if (pool.empty()) {
        a.cluster_id = pool.create(rep);
        a.created = true;
        a.creation_prob = 1.0;
        return a;
    }
    const BestMatch best = best_cluster(rep, pool.clusters(), bundle.weights, bundle.sim_params, bundle.features);
    a.c_score = best.score;
    a.creation_prob = bundle.creation_net.predict(best.similarity);
    if (a.creation_prob >= 0.5) {
        a.cluster_id = pool.create(rep);
        a.created = true;
    } else {
        pool.fold(best.cluster_id, rep);
        a.cluster_id = best.cluster_id;
    }
    return a;
}

DocRepSet encode_for_bundle(const Document& doc, const ModelBundle& bundle, const TfidfModels& models,
                            const EmbeddingStore* store) {
    if (bundle.uses_dense()) {
        if (store == nullptr) throw MissingEmbedding("bundle uses dense vectors but no embeddings were supplied");
        if (store->dim() != bundle.embedding_dim)
            throw DimensionMismatch("embedding store has dimension " + std::to_string(store->dim()) +
                                    ", bundle expects " + std::to_string(bundle.embedding_dim));
        return encode_document(doc, models, store);
    }
    return encode_document(doc, models, nullptr);
}

std::pair<ClusterPool, Assignment> step(ClusterPool pool, const Document& doc, const ModelBundle& bundle,
                                        const TfidfModels& models, const EmbeddingStore* store) {
    const DocRepSet rep = encode_for_bundle(doc, bundle, models, store);
    Assignment a = step(pool, rep, bundle);
    return {std::move(pool), std::move(a)};
}

StreamClusterer::StreamClusterer(ModelBundle bundle) : bundle_(std::move(bundle)) { validate(bundle_.sim_params); }

Assignment StreamClusterer::push(const DocRepSet& rep) { return step(pool_, rep, bundle_); }

StreamResult cluster_encoded(std::span<const DocRepSet> docs, const ModelBundle& bundle) {
    StreamClusterer clusterer(bundle);
    StreamResult out;
    out.assignments.reserve(docs.size());
    for (const DocRepSet& rep : docs) out.assignments.push_back(clusterer.push(rep));
    out.pool = clusterer.pool();
    return out;
}

StreamResult cluster_stream(std::vector<Document> docs, const ModelBundle& bundle, const TfidfModels& models,
                            const EmbeddingStore* store, StreamOrder order) {
    if (order == StreamOrder::Timestamp) sort_stream_order(docs);
    StreamClusterer clusterer(bundle);
    StreamResult out;
    out.assignments.reserve(docs.size());
    for (const Document& doc : docs) out.assignments.push_back(clusterer.push(encode_for_bundle(doc, bundle, models, store)));
    out.pool = clusterer.pool();
    return out;
}

}  // namespace newsclust
