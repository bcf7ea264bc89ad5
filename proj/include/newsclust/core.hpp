#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "newsclust/datetime.hpp"

namespace newsclust {

enum class Section : std::uint8_t { Title = 0, Body = 1, TitleBody = 2 };
enum class Unit : std::uint8_t { Token = 0, Lemma = 1, Entity = 2 };

inline constexpr std::array<Section, 3> kSections{Section::Title, Section::Body,
                                                  Section::TitleBody};
inline constexpr std::array<Unit, 3> kUnits{Unit::Token, Unit::Lemma, Unit::Entity};

std::string_view to_string(Section s);
std::string_view to_string(Unit u);
std::optional<Unit> parse_unit(std::string_view text);

// ---------------------------------------------------------------------------
// Canonical feature layout shared by every SimilarityVector and WeightVector:
//
//   0..8   sparse cosines, unit-major: tok/{title,body,titlebody},
//          lem/{title,body,titlebody}, ent/{title,body,titlebody}
//   9      dense cosine
//   10..12 temporal similarity against the cluster's ts_min, ts_max, ts_mean
// ---------------------------------------------------------------------------
inline constexpr std::size_t kSparseSlots = 9;
inline constexpr std::size_t kFeatureCount = 13;
inline constexpr std::size_t kDenseFeature = 9;
inline constexpr std::size_t kTsMinFeature = 10;
inline constexpr std::size_t kTsMaxFeature = 11;
inline constexpr std::size_t kTsMeanFeature = 12;

constexpr std::size_t sparse_slot(Unit unit, Section section) {
    return static_cast<std::size_t>(unit) * 3 + static_cast<std::size_t>(section);
}

const std::array<std::string_view, kFeatureCount>& canonical_feature_order();
std::optional<std::size_t> feature_index(std::string_view label);

using SimilarityVector = std::array<double, kFeatureCount>;

// Which of the 13 features a model consumes. Disabled features are forced to
// zero wherever similarity vectors are produced, so the learned weights for
// them stay at zero.
using FeatureMask = std::bitset<kFeatureCount>;

FeatureMask all_features();
// "tfidf", "dense", "time" joined by '+', or "all". Throws InvalidValue.
FeatureMask parse_feature_set(std::string_view spec);
std::string format_feature_set(const FeatureMask& mask);
void apply_mask(SimilarityVector& s, const FeatureMask& mask);

// True when every entry is finite, sparse/dense cosines lie in [-1, 1] and
// temporal entries in (0, 1]. Masked-out entries must be exactly zero.
bool similarity_in_range(const SimilarityVector& s, const FeatureMask& mask = all_features());

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------
struct SectionAnnotations {
    std::vector<std::string> tokens;
    std::vector<std::string> lemmas;
    std::vector<std::string> entities;

    const std::vector<std::string>& of(Unit unit) const;
    std::vector<std::string>& of(Unit unit);

    friend bool operator==(const SectionAnnotations&, const SectionAnnotations&) = default;
};

SectionAnnotations concat_annotations(const SectionAnnotations& a, const SectionAnnotations& b);

// Corpus-provided TF-IDF weights for one (unit, section) bag.
using TermWeights = std::vector<std::pair<std::string, double>>;

struct Document {
    std::string id;
    std::string title;
    std::string body;
    Timestamp timestamp;
    std::array<SectionAnnotations, 3> sections;
    std::optional<std::string> gold_cluster;
    // Indexed by sparse_slot(). When present, used verbatim instead of tf*idf.
    std::optional<std::array<TermWeights, kSparseSlots>> provided_weights;

    const SectionAnnotations& section(Section s) const {
        return sections[static_cast<std::size_t>(s)];
    }
    SectionAnnotations& section(Section s) { return sections[static_cast<std::size_t>(s)]; }
};

// Stream order: timestamp, then id.
bool stream_before(const Document& a, const Document& b);
void sort_stream_order(std::vector<Document>& docs);

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------
class SparseVector {
public:
    SparseVector() = default;

    // Indices must be strictly increasing, values finite. Zeros are dropped.
    static SparseVector from_sorted(std::vector<std::uint32_t> indices, std::vector<double> values);
    // Any order; duplicate indices are summed and zeros dropped.
    static SparseVector from_pairs(std::vector<std::pair<std::uint32_t, double>> entries);

    std::span<const std::uint32_t> indices() const { return indices_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    double squared_norm() const;
    double dot(const SparseVector& other) const;
    // this + scale * other over the union support; exact zeros are dropped.
    SparseVector add_scaled(const SparseVector& other, double scale) const;
    SparseVector scaled(double factor) const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
};

using DenseVector = std::vector<double>;

// The 11 representations of one document. An empty dense vector means the
// dense representation is unavailable (embedding dimension 0).
struct DocRepSet {
    std::string doc_id;
    std::array<SparseVector, kSparseSlots> sparse;
    DenseVector dense;
    Timestamp timestamp;
};

// Aggregated cluster state. Member vectors are kept as running sums; means are
// derived on demand so that the mean of k folded documents is exact up to
// floating-point summation order. Cosine is scale invariant, so similarity is
// computed against the sums directly.
class ClusterRep {
public:
    std::int64_t id() const { return id_; }
    std::size_t size() const { return member_ids_.size(); }

    const SparseVector& sparse_sum(std::size_t slot) const { return sparse_sum_[slot]; }
    double sparse_sum_norm(std::size_t slot) const { return sparse_norm_[slot]; }
    SparseVector sparse_mean(std::size_t slot) const;

    const DenseVector& dense_sum() const { return dense_sum_; }
    double dense_sum_norm() const { return dense_norm_; }
    DenseVector dense_mean() const;

    Timestamp ts_min() const { return ts_min_; }
    Timestamp ts_max() const { return ts_max_; }
    // Mean on the epoch-seconds axis, rounded to the nearest second.
    Timestamp ts_mean() const;

    const std::vector<std::string>& member_ids() const { return member_ids_; }
    bool contains(const std::string& doc_id) const { return members_.contains(doc_id); }

private:
    friend ClusterRep cluster_from_doc(const DocRepSet& rep, std::int64_t id);
    friend void fold_in_place(ClusterRep& cluster, const DocRepSet& rep);

    void refresh_norms();

    std::int64_t id_ = 0;
    std::array<SparseVector, kSparseSlots> sparse_sum_;
    std::array<double, kSparseSlots> sparse_norm_{};
    DenseVector dense_sum_;
    double dense_norm_ = 0.0;
    Timestamp ts_min_;
    Timestamp ts_max_;
    std::int64_t ts_sum_ = 0;
    std::vector<std::string> member_ids_;
    std::unordered_set<std::string> members_;
};

// ---------------------------------------------------------------------------
// Model parameters
// ---------------------------------------------------------------------------
struct SimilarityParams {
    double mu_days = 0.0;
    double sigma_days = 1.0;

    friend bool operator==(const SimilarityParams&, const SimilarityParams&) = default;
};

void validate(const SimilarityParams& p);

class WeightVector {
public:
    // Throws InvalidValue when any entry is non-finite or all are zero.
    explicit WeightVector(const std::array<double, kFeatureCount>& w);

    const std::array<double, kFeatureCount>& values() const { return w_; }
    double operator[](std::size_t i) const { return w_[i]; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::array<double, kFeatureCount> w_;
};

}  // namespace newsclust
