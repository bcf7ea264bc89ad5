#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "newsclust/core.hpp"

namespace newsclust {

// Vocabulary and inverse document frequencies for one annotation unit.
class TfidfModel {
public:
    TfidfModel() = default;
    // terms[i] has index i. idf values must be finite and > 0.
    TfidfModel(Unit unit, std::size_t doc_count, std::vector<std::string> terms, std::vector<double> idf);

    Unit unit() const { return unit_; }
    std::size_t doc_count() const { return doc_count_; }
    std::size_t vocabulary_size() const { return terms_.size(); }

    std::optional<std::uint32_t> index_of(const std::string& term) const;
    const std::string& term(std::uint32_t index) const { return terms_[index]; }
    double idf(std::uint32_t index) const { return idf_[index]; }
    std::span<const std::string> terms() const { return terms_; }
    std::span<const double> idf_values() const { return idf_; }

    friend bool operator==(const TfidfModel& a, const TfidfModel& b) {
        return a.unit_ == b.unit_ && a.doc_count_ == b.doc_count_ && a.terms_ == b.terms_ &&
               a.idf_ == b.idf_;
    }

private:
    Unit unit_ = Unit::Token;
    std::size_t doc_count_ = 0;
    std::vector<std::string> terms_;
    std::vector<double> idf_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

using TfidfModels = std::array<TfidfModel, 3>;  // indexed by Unit

// idf(t) = ln(N / df(t)) + 1. Vocabulary is sorted lexicographically.
TfidfModel fit_tfidf(std::span<const Document> corpus, Unit unit);
TfidfModels fit_tfidf_all(std::span<const Document> corpus);

// Vocabulary-only models over corpus-provided weights (idf fixed at 1).
TfidfModels vocabulary_from_provided(std::span<const Document> corpus);

// tf(t) * idf(t) over the section's annotations for model.unit().
SparseVector encode_sparse(const Document& doc, const TfidfModel& model, Section section);
// Corpus-provided weights mapped through the model vocabulary; unknown terms dropped.
SparseVector encode_provided(const TermWeights& weights, const TfidfModel& model);

class EmbeddingStore {
public:
    explicit EmbeddingStore(std::size_t dim = 0) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return order_.size(); }
    bool contains(const std::string& id) const { return vectors_.contains(id); }

    // Throws DimensionMismatch or DuplicateDocument.
    void add(const std::string& id, std::vector<float> vec);
    // Throws MissingEmbedding.
    const std::vector<float>& at(const std::string& id) const;
    // Insertion order.
    std::span<const std::string> ids() const { return order_; }

    friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

private:
    std::size_t dim_;
    std::unordered_map<std::string, std::vector<float>> vectors_;
    std::vector<std::string> order_;
};

// Builds the 9 sparse bags, the dense vector and the timestamp. A null store
// yields an empty dense vector (dense representation disabled).
DocRepSet encode_document(const Document& doc, const TfidfModels& models, const EmbeddingStore* store);

ClusterRep cluster_from_doc(const DocRepSet& rep, std::int64_t id);
// Pure variant: returns the updated cluster. Throws DuplicateDocument.
ClusterRep fold_document(const ClusterRep& cluster, const DocRepSet& rep);
// In-place variant used by the engine under its single-writer contract.
void fold_in_place(ClusterRep& cluster, const DocRepSet& rep);

// Whitespace tokenization with identity lemmas and no entities; used when a
// corpus record carries raw text only.
SectionAnnotations annotate_raw_text(std::string_view text);

}  // namespace newsclust
