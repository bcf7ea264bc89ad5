#include "newsclust/representations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "newsclust/errors.hpp"

namespace newsclust {

TfidfModel::TfidfModel(Unit unit, std::size_t doc_count, std::vector<std::string> terms,
                       std::vector<double> idf)
    : unit_(unit), doc_count_(doc_count), terms_(std::move(terms)), idf_(std::move(idf)) {
    if (terms_.size() != idf_.size()) throw InvalidValue("tfidf: term/idf length mismatch");
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!(idf_[i] > 0.0) || !std::isfinite(idf_[i]))
            throw InvalidValue("tfidf: idf for '" + terms_[i] + "' must be finite and positive");
        if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
            throw InvalidValue("tfidf: duplicate term '" + terms_[i] + "'");
    }
}

std::optional<std::uint32_t> TfidfModel::index_of(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

TfidfModel fit_tfidf(std::span<const Document> corpus, Unit unit) {
    if (corpus.empty()) throw EmptyCorpus("cannot fit tf-idf on an empty corpus");

    // df counts each document once per term. TitleBody is normally the
    // concatenation of Title and Body; taking the union of all three sections
    // keeps df >= 1 even when a corpus supplies its own TitleBody annotations.
    std::map<std::string, std::size_t> df;
    std::set<std::string_view> seen;
    for (const Document& doc : corpus) {
        seen.clear();
        for (Section s : kSections)
            for (const std::string& term : doc.section(s).of(unit)) seen.insert(term);
        for (std::string_view term : seen) ++df[std::string(term)];
    }

    const double n = static_cast<double>(corpus.size());
    std::vector<std::string> terms;
    std::vector<double> idf;
    terms.reserve(df.size());
    idf.reserve(df.size());
    for (auto& [term, count] : df) {
        terms.push_back(term);
        idf.push_back(std::log(n / static_cast<double>(count)) + 1.0);
    }
    return TfidfModel(unit, corpus.size(), std::move(terms), std::move(idf));
}

TfidfModels fit_tfidf_all(std::span<const Document> corpus) {
    return {fit_tfidf(corpus, Unit::Token), fit_tfidf(corpus, Unit::Lemma),
            fit_tfidf(corpus, Unit::Entity)};
}

TfidfModels vocabulary_from_provided(std::span<const Document> corpus) {
    if (corpus.empty()) throw EmptyCorpus("no documents");
    TfidfModels out;
    for (Unit u : kUnits) {
        std::set<std::string> vocab;
        for (const Document& doc : corpus) {
            if (!doc.provided_weights) throw MissingField("document '" + doc.id + "' has no provided weights");
            for (Section s : kSections)
                for (const auto& [term, w] : (*doc.provided_weights)[sparse_slot(u, s)]) vocab.insert(term);
        }
        std::vector<std::string> terms(vocab.begin(), vocab.end());
        std::vector<double> idf(terms.size(), 1.0);
        out[static_cast<std::size_t>(u)] = TfidfModel(u, corpus.size(), std::move(terms), std::move(idf));
    }
    return out;
}

SparseVector encode_sparse(const Document& doc, const TfidfModel& model, Section section) {
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (const std::string& term : doc.section(section).of(model.unit())) {
        if (auto idx = model.index_of(term)) entries.emplace_back(*idx, 1.0);
    }
    // from_pairs sums the unit counts into term frequencies.
    SparseVector tf = SparseVector::from_pairs(std::move(entries));
    std::vector<std::uint32_t> idx(tf.indices().begin(), tf.indices().end());
    std::vector<double> val(tf.values().begin(), tf.values().end());
    for (std::size_t i = 0; i < idx.size(); ++i) val[i] *= model.idf(idx[i]);
    return SparseVector::from_sorted(std::move(idx), std::move(val));
}

SparseVector encode_provided(const TermWeights& weights, const TfidfModel& model) {
    std::vector<std::pair<std::uint32_t, double>> entries;
    entries.reserve(weights.size());
    for (const auto& [term, w] : weights) {
        if (auto idx = model.index_of(term)) entries.emplace_back(*idx, w);
    }
    return SparseVector::from_pairs(std::move(entries));
}

// ---------------------------------------------------------------------------

void EmbeddingStore::add(const std::string& id, std::vector<float> vec) {
    if (vec.size() != dim_)
        throw DimensionMismatch("embedding for '" + id + "' has dimension " + std::to_string(vec.size()) +
                                ", expected " + std::to_string(dim_));
    for (float v : vec)
        if (!std::isfinite(v)) throw InvalidValue("embedding for '" + id + "' has a non-finite value");
    if (!vectors_.emplace(id, std::move(vec)).second)
        throw DuplicateDocument("embedding id '" + id + "' appears twice");
    order_.push_back(id);
}

const std::vector<float>& EmbeddingStore::at(const std::string& id) const {
    auto it = vectors_.find(id);
    if (it == vectors_.end()) throw MissingEmbedding("no embedding for document '" + id + "'");
    return it->second;
}

DocRepSet encode_document(const Document& doc, const TfidfModels& models, const EmbeddingStore* store) {
    DocRepSet rep;
    rep.doc_id = doc.id;
    rep.timestamp = doc.timestamp;
    for (Unit u : kUnits) {
        const TfidfModel& model = models[static_cast<std::size_t>(u)];
        for (Section s : kSections) {
            const std::size_t slot = sparse_slot(u, s);
            rep.sparse[slot] = doc.provided_weights ? encode_provided((*doc.provided_weights)[slot], model)
                                                    : encode_sparse(doc, model, s);
        }
    }
    if (store != nullptr && store->dim() > 0) {
        const auto& vec = store->at(doc.id);
        rep.dense.assign(vec.begin(), vec.end());
    }
    return rep;
}

// ---------------------------------------------------------------------------

ClusterRep cluster_from_doc(const DocRepSet& rep, std::int64_t id) {
    ClusterRep c;
    c.id_ = id;
    c.sparse_sum_ = rep.sparse;
    c.dense_sum_ = rep.dense;
    c.ts_min_ = c.ts_max_ = rep.timestamp;
    c.ts_sum_ = rep.timestamp.seconds;
    c.member_ids_.push_back(rep.doc_id);
    c.members_.insert(rep.doc_id);
    c.refresh_norms();
    return c;
}

void fold_in_place(ClusterRep& c, const DocRepSet& rep) {
    if (c.contains(rep.doc_id))
        throw DuplicateDocument("document '" + rep.doc_id + "' is already in cluster " + std::to_string(c.id()));
    if (rep.dense.size() != c.dense_sum_.size())
        throw DimensionMismatch("dense dimension " + std::to_string(rep.dense.size()) + " vs cluster " +
                                std::to_string(c.dense_sum_.size()));
    for (std::size_t k = 0; k < kSparseSlots; ++k) {
        if (!rep.sparse[k].empty()) c.sparse_sum_[k] = c.sparse_sum_[k].add_scaled(rep.sparse[k], 1.0);
    }
    for (std::size_t i = 0; i < rep.dense.size(); ++i) c.dense_sum_[i] += rep.dense[i];
    c.ts_min_ = std::min(c.ts_min_, rep.timestamp);
    c.ts_max_ = std::max(c.ts_max_, rep.timestamp);
    c.ts_sum_ += rep.timestamp.seconds;
    c.member_ids_.push_back(rep.doc_id);
    c.members_.insert(rep.doc_id);
    c.refresh_norms();
}

ClusterRep fold_document(const ClusterRep& cluster, const DocRepSet& rep) {
    ClusterRep out = cluster;
    fold_in_place(out, rep);
    return out;
}

SectionAnnotations annotate_raw_text(std::string_view text) {
    SectionAnnotations out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) out.tokens.push_back(tok);
    out.lemmas = out.tokens;
    return out;
}

}  // namespace newsclust
