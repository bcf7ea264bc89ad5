#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "newsclust/bundle.hpp"
#include "newsclust/core.hpp"
#include "newsclust/creation_net.hpp"
#include "newsclust/representations.hpp"
#include "newsclust/similarity.hpp"
#include "newsclust/svm.hpp"

namespace newsclust {

// An encoded document with its gold cluster label.
struct LabeledRep {
    DocRepSet rep;
    std::string gold;
};

// Encodes documents in the order given. Throws MissingGoldLabel.
std::vector<LabeledRep> encode_labeled(std::span<const Document> docs, const TfidfModels& models,
                                       const EmbeddingStore* store);

// ---------------------------------------------------------------------------
// Gold-stream simulation
// ---------------------------------------------------------------------------
struct PoolEntry {
    std::int64_t cluster_id = 0;
    RawComparison comparison;
};

// State of the pool when one document arrived, before it was folded into its
// gold cluster. The snapshot is stored as raw comparisons against every pool
// cluster, so samples can be rebuilt for any (mu, sigma) or feature mask.
struct TraceRecord {
    std::string doc_id;
    std::string gold_label;
    std::int64_t gold_cluster_id = 0;  // allocated when the label first appears
    bool gold_present = false;
    std::vector<PoolEntry> pool;
};

struct GoldStreamTrace {
    std::vector<TraceRecord> records;
    std::size_t final_pool_size = 0;
};

// Streams the documents in the given order, assigning each to its true
// cluster. Throws EmptyCorpus on empty input.
GoldStreamTrace simulate_gold_stream(std::span<const LabeledRep> stream);
// Sorts into stream order and encodes first. Throws MissingGoldLabel.
GoldStreamTrace simulate_gold_stream(std::vector<Document> docs, const TfidfModels& models,
                                     const EmbeddingStore* store);

// ---------------------------------------------------------------------------
// Weighted similarity model
// ---------------------------------------------------------------------------
struct SvmTripletSample {
    SimilarityVector x{};  // sim(doc, gold) - sim(doc, negative)
    int y = 1;

    friend bool operator==(const SvmTripletSample&, const SvmTripletSample&) = default;
};

struct TripletOptions {
    std::uint64_t seed = 1;
    FeatureMask features = all_features();
    // Negative = the non-gold cluster with the largest unweighted similarity
    // sum instead of a uniform draw.
    bool hard_negatives = false;
};

// One triplet per record whose pool holds the gold cluster and at least one
// other cluster; all labelled +1 before balancing.
std::vector<SvmTripletSample> build_triplets(const GoldStreamTrace& trace, const SimilarityParams& p,
                                             const TripletOptions& options);
// Negates exactly floor(n/2) samples chosen by a seeded shuffle.
void negate_half(std::vector<SvmTripletSample>& samples, std::uint64_t seed);
// build_triplets followed by negate_half.
std::vector<SvmTripletSample> make_svm_triplets(const GoldStreamTrace& trace, const SimilarityParams& p,
                                                const TripletOptions& options);

struct SvmTripletFit {
    WeightVector weights;
    double bias = 0.0;  // trained, not used by the c-score
    std::size_t iterations = 0;
    bool converged = false;
};

// Throws DegenerateData on a single label or when every learned weight is zero.
SvmTripletFit train_linear_svm(std::span<const SvmTripletSample> samples, double C);

// ---------------------------------------------------------------------------
// Cluster creation model
// ---------------------------------------------------------------------------
// One sample per record with a non-empty pool: similarity to the best
// cluster under w, labelled 1 when the gold cluster was absent.
std::vector<CreationSample> make_creation_samples(const GoldStreamTrace& trace, const WeightVector& w,
                                                  const SimilarityParams& p,
                                                  const FeatureMask& features = all_features());

// ---------------------------------------------------------------------------
// Full pipeline and hyper-parameter search
// ---------------------------------------------------------------------------
struct HyperParams {
    double C = 1.0;
    double mu = 0.0;
    double sigma = 7.0;
    std::size_t smote_k = 5;

    friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

std::string format_hyper_params(const HyperParams& h);

struct HyperGrid {
    std::vector<double> C{0.1, 1.0, 10.0};
    std::vector<double> mu{0.0};
    std::vector<double> sigma{1.0, 3.0, 7.0, 14.0};
    std::vector<std::size_t> smote_k{5};

    // Cartesian product, C-major then mu, sigma, k.
    std::vector<HyperParams> points() const;
};

// "C=0.1,1,10;mu=0;sigma=1,3,7,14;k=5"; omitted keys keep their defaults.
// Throws InvalidValue.
HyperGrid parse_grid(std::string_view spec);

struct TrainOptions {
    FeatureMask features = all_features();
    std::uint64_t seed = 1;
    bool hard_negatives = false;
    CreationTrainOptions creation;
};

struct TrainedPipeline {
    ModelBundle bundle;
    std::size_t triplet_count = 0;
    std::size_t creation_count = 0;      // before oversampling
    std::size_t creation_positives = 0;  // before oversampling
};

// stream must be in stream order. embedding_dim is taken from the encoded
// documents.
TrainedPipeline train_pipeline(std::span<const LabeledRep> stream, const HyperParams& h, const TrainOptions& options);
TrainedPipeline train_pipeline(const GoldStreamTrace& trace, std::uint32_t embedding_dim, const HyperParams& h,
                               const TrainOptions& options);

struct CvScore {
    HyperParams params;
    double mean_f1 = 0.0;
    std::size_t failed_folds = 0;  // training failed on degenerate data; scored 0
};

struct CvResult {
    HyperParams best;
    std::vector<CvScore> scores;  // grid order
};

// Folds partition gold clusters (not documents). For each grid point the
// full pipeline is trained on the other folds and scored by B-Cubed F1 on the
// held-out fold; the highest mean wins, ties going to the earlier point.
// Throws TooFewClusters when there are fewer gold clusters than folds.
CvResult cross_validate(std::span<const LabeledRep> stream, const HyperGrid& grid, std::size_t folds,
                        const TrainOptions& options);

// Line-delimited "f0 ... f12 label" text, one sample per line.
std::string format_samples(std::span<const SvmTripletSample> samples);
std::string format_samples(std::span<const CreationSample> samples);
std::vector<SvmTripletSample> parse_triplet_samples(std::string_view text);
std::vector<CreationSample> parse_creation_samples(std::string_view text);

}  // namespace newsclust
