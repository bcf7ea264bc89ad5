#include "newsclust/core.hpp"

#include <algorithm>
#include <cmath>

#include "newsclust/errors.hpp"

namespace newsclust {

std::string_view to_string(Section s) {
    switch (s) {
        case Section::Title: return "title";
        case Section::Body: return "body";
        case Section::TitleBody: return "titlebody";
    }
    return "?";
}

std::string_view to_string(Unit u) {
    switch (u) {
        case Unit::Token: return "token";
        case Unit::Lemma: return "lemma";
        case Unit::Entity: return "entity";
    }
    return "?";
}

std::optional<Unit> parse_unit(std::string_view text) {
    for (Unit u : kUnits)
        if (text == to_string(u)) return u;
    return std::nullopt;
}

const std::array<std::string_view, kFeatureCount>& canonical_feature_order() {
    static const std::array<std::string_view, kFeatureCount> order{
        "tok/title", "tok/body", "tok/titlebody", "lem/title", "lem/body",
        "lem/titlebody", "ent/title", "ent/body", "ent/titlebody", "dense",
        "ts_min", "ts_max", "ts_mean"};
    return order;
}

std::optional<std::size_t> feature_index(std::string_view label) {
    const auto& order = canonical_feature_order();
    auto it = std::find(order.begin(), order.end(), label);
    if (it == order.end()) return std::nullopt;
    return static_cast<std::size_t>(it - order.begin());
}

FeatureMask all_features() { return FeatureMask{}.set(); }

FeatureMask parse_feature_set(std::string_view spec) {
    if (spec == "all") return all_features();
    FeatureMask mask;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const auto end = std::min(spec.find('+', start), spec.size());
        const auto part = spec.substr(start, end - start);
        if (part == "tfidf") {
            for (std::size_t i = 0; i < kSparseSlots; ++i) mask.set(i);
        } else if (part == "dense") {
            mask.set(kDenseFeature);
        } else if (part == "time") {
            mask.set(kTsMinFeature).set(kTsMaxFeature).set(kTsMeanFeature);
        } else {
            throw InvalidValue("unknown feature group '" + std::string(part) +
                               "' (expected tfidf, dense, time or all)");
        }
        start = end + 1;
    }
    return mask;
}

std::string format_feature_set(const FeatureMask& mask) {
    if (mask.all()) return "all";
    std::string out;
    const auto add = [&](std::string_view name) {
        if (!out.empty()) out += '+';
        out += name;
    };
    bool sparse = false;
    for (std::size_t i = 0; i < kSparseSlots; ++i) sparse = sparse || mask.test(i);
    if (sparse) add("tfidf");
    if (mask.test(kDenseFeature)) add("dense");
    if (mask.test(kTsMinFeature) || mask.test(kTsMaxFeature) || mask.test(kTsMeanFeature)) add("time");
    return out.empty() ? "none" : out;
}

void apply_mask(SimilarityVector& s, const FeatureMask& mask) {
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (!mask.test(i)) s[i] = 0.0;
}

bool similarity_in_range(const SimilarityVector& s, const FeatureMask& mask) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const double v = s[i];
        if (!std::isfinite(v)) return false;
        if (!mask.test(i)) {
            if (v != 0.0) return false;
            continue;
        }
        if (i < kTsMinFeature) {
            if (v < -1.0 || v > 1.0) return false;
        } else if (v <= 0.0 || v > 1.0) {
            return false;
        }
    }
    return true;
}

const std::vector<std::string>& SectionAnnotations::of(Unit unit) const {
    switch (unit) {
        case Unit::Token: return tokens;
        case Unit::Lemma: return lemmas;
        case Unit::Entity: break;
    }
    return entities;
}

std::vector<std::string>& SectionAnnotations::of(Unit unit) {
    return const_cast<std::vector<std::string>&>(std::as_const(*this).of(unit));
}

SectionAnnotations concat_annotations(const SectionAnnotations& a, const SectionAnnotations& b) {
    SectionAnnotations out = a;
    for (Unit u : kUnits) {
        auto& dst = out.of(u);
        const auto& src = b.of(u);
        dst.insert(dst.end(), src.begin(), src.end());
    }
    return out;
}

bool stream_before(const Document& a, const Document& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.id < b.id;
}

void sort_stream_order(std::vector<Document>& docs) {
    std::stable_sort(docs.begin(), docs.end(), stream_before);
}

// ---------------------------------------------------------------------------

SparseVector SparseVector::from_sorted(std::vector<std::uint32_t> indices, std::vector<double> values) {
    if (indices.size() != values.size()) throw InvalidValue("sparse vector index/value length mismatch");
    SparseVector out;
    out.indices_.reserve(indices.size());
    out.values_.reserve(values.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0 && indices[i] <= indices[i - 1])
            throw InvalidValue("sparse vector indices must be strictly increasing");
        if (!std::isfinite(values[i])) throw InvalidValue("sparse vector value is not finite");
        if (values[i] == 0.0) continue;
        out.indices_.push_back(indices[i]);
        out.values_.push_back(values[i]);
    }
    return out;
}

SparseVector SparseVector::from_pairs(std::vector<std::pair<std::uint32_t, double>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    for (const auto& [i, v] : entries) {
        if (!idx.empty() && idx.back() == i) {
            val.back() += v;
        } else {
            idx.push_back(i);
            val.push_back(v);
        }
    }
    return from_sorted(std::move(idx), std::move(val));
}

double SparseVector::squared_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s;
}

double SparseVector::dot(const SparseVector& other) const {
    const SparseVector* small = this;
    const SparseVector* large = &other;
    if (small->size() > large->size()) std::swap(small, large);
    if (small->empty()) return 0.0;

    double sum = 0.0;
    const auto& li = large->indices_;
    if (small->size() * 16 < large->size()) {
        // Cluster sums grow much larger than single documents: binary search
        // each entry of the short vector instead of walking both.
        auto lo = li.begin();
        for (std::size_t k = 0; k < small->size(); ++k) {
            lo = std::lower_bound(lo, li.end(), small->indices_[k]);
            if (lo == li.end()) break;
            if (*lo == small->indices_[k])
                sum += small->values_[k] * large->values_[static_cast<std::size_t>(lo - li.begin())];
        }
        return sum;
    }
    std::size_t i = 0, j = 0;
    while (i < small->size() && j < large->size()) {
        const auto a = small->indices_[i];
        const auto b = li[j];
        if (a == b) {
            sum += small->values_[i++] * large->values_[j++];
        } else if (a < b) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

SparseVector SparseVector::add_scaled(const SparseVector& other, double scale) const {
    SparseVector out;
    out.indices_.reserve(size() + other.size());
    out.values_.reserve(size() + other.size());
    const auto push = [&](std::uint32_t idx, double v) {
        if (v != 0.0) {
            out.indices_.push_back(idx);
            out.values_.push_back(v);
        }
    };
    std::size_t i = 0, j = 0;
    while (i < size() || j < other.size()) {
        if (j == other.size() || (i < size() && indices_[i] < other.indices_[j])) {
            push(indices_[i], values_[i]);
            ++i;
        } else if (i == size() || other.indices_[j] < indices_[i]) {
            push(other.indices_[j], scale * other.values_[j]);
            ++j;
        } else {
            push(indices_[i], values_[i] + scale * other.values_[j]);
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVector SparseVector::scaled(double factor) const {
    SparseVector out = *this;
    for (double& v : out.values_) v *= factor;
    if (factor == 0.0) return SparseVector{};
    return out;
}

// ---------------------------------------------------------------------------

SparseVector ClusterRep::sparse_mean(std::size_t slot) const {
    return sparse_sum_[slot].scaled(1.0 / static_cast<double>(size()));
}

DenseVector ClusterRep::dense_mean() const {
    DenseVector out = dense_sum_;
    const double inv = 1.0 / static_cast<double>(size());
    for (double& v : out) v *= inv;
    return out;
}

Timestamp ClusterRep::ts_mean() const {
    const auto n = static_cast<std::int64_t>(size());
    // Round half away from zero on the exact integer sum.
    const std::int64_t q = ts_sum_ / n;
    const std::int64_t r = ts_sum_ % n;
    std::int64_t mean = q;
    if (2 * std::abs(r) >= n) mean += (r < 0 ? -1 : 1);
    return Timestamp{mean};
}

void ClusterRep::refresh_norms() {
    for (std::size_t k = 0; k < kSparseSlots; ++k) sparse_norm_[k] = std::sqrt(sparse_sum_[k].squared_norm());
    double s = 0.0;
    for (double v : dense_sum_) s += v * v;
    dense_norm_ = std::sqrt(s);
}

// ---------------------------------------------------------------------------

void validate(const SimilarityParams& p) {
    if (!std::isfinite(p.mu_days)) throw InvalidValue("mu must be finite");
    if (!(p.sigma_days > 0.0) || !std::isfinite(p.sigma_days)) throw InvalidValue("sigma must be positive");
}

WeightVector::WeightVector(const std::array<double, kFeatureCount>& w) : w_(w) {
    bool nonzero = false;
    for (double v : w_) {
        if (!std::isfinite(v)) throw InvalidValue("weight vector entry is not finite");
        nonzero = nonzero || v != 0.0;
    }
    if (!nonzero) throw InvalidValue("weight vector must have at least one nonzero entry");
}

}  // namespace newsclust
