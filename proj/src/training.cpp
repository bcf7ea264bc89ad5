#include "newsclust/training.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "newsclust/engine.hpp"
#include "newsclust/errors.hpp"
#include "newsclust/metrics.hpp"
#include "newsclust/smote.hpp"

namespace newsclust {
namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
    return std::mt19937_64(seq);
}

enum RngStream : std::uint32_t { kNegatives = 1, kNegation = 2, kSmote = 3, kCreation = 4, kFolds = 5 };

double unweighted_sum(const SimilarityVector& s) { return std::accumulate(s.begin(), s.end(), 0.0); }

}  // namespace

std::vector<LabeledRep> encode_labeled(std::span<const Document> docs, const TfidfModels& models,
                                       const EmbeddingStore* store) {
    std::vector<LabeledRep> out;
    out.reserve(docs.size());
    for (const Document& doc : docs) {
        if (!doc.gold_cluster) throw MissingGoldLabel("document '" + doc.id + "' has no gold cluster");
        out.push_back({encode_document(doc, models, store), *doc.gold_cluster});
    }
    return out;
}

GoldStreamTrace simulate_gold_stream(std::span<const LabeledRep> stream) {
    if (stream.empty()) throw EmptyCorpus("no documents to simulate");
    GoldStreamTrace trace;
    trace.records.reserve(stream.size());
    ClusterPool pool;
    std::unordered_map<std::string, std::int64_t> by_label;
    for (const LabeledRep& doc : stream) {
        TraceRecord rec;
        rec.doc_id = doc.rep.doc_id;
        rec.gold_label = doc.gold;
        rec.pool.reserve(pool.size());
        for (const ClusterRep& c : pool.clusters()) rec.pool.push_back({c.id(), compare(doc.rep, c)});

        auto it = by_label.find(doc.gold);
        rec.gold_present = it != by_label.end();
        if (rec.gold_present) {
            rec.gold_cluster_id = it->second;
            pool.fold(it->second, doc.rep);
        } else {
            rec.gold_cluster_id = pool.create(doc.rep);
            by_label.emplace(doc.gold, rec.gold_cluster_id);
        }
        trace.records.push_back(std::move(rec));
    }
    trace.final_pool_size = pool.size();
    return trace;
}

GoldStreamTrace simulate_gold_stream(std::vector<Document> docs, const TfidfModels& models,
                                     const EmbeddingStore* store) {
    sort_stream_order(docs);
    const auto stream = encode_labeled(docs, models, store);
    return simulate_gold_stream(stream);
}

// ---------------------------------------------------------------------------

std::vector<SvmTripletSample> build_triplets(const GoldStreamTrace& trace, const SimilarityParams& p,
                                             const TripletOptions& options) {
    validate(p);
    auto rng = make_rng(options.seed, kNegatives);
    std::vector<SvmTripletSample> out;
    for (const TraceRecord& rec : trace.records) {
        if (!rec.gold_present || rec.pool.size() < 2) continue;
        const PoolEntry* positive = nullptr;
        for (const auto& e : rec.pool)
            if (e.cluster_id == rec.gold_cluster_id) positive = &e;
        if (positive == nullptr) continue;

        const PoolEntry* negative = nullptr;
        if (options.hard_negatives) {
            double best = 0.0;
            for (const auto& e : rec.pool) {
                if (&e == positive) continue;
                const double s = unweighted_sum(finalize(e.comparison, p, options.features));
                if (negative == nullptr || s > best) {
                    best = s;
                    negative = &e;
                }
            }
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, rec.pool.size() - 2);
            std::size_t k = pick(rng);
            if (&rec.pool[k] >= positive) ++k;
            negative = &rec.pool[k];
        }
        const SimilarityVector sp = finalize(positive->comparison, p, options.features);
        const SimilarityVector sn = finalize(negative->comparison, p, options.features);
        SvmTripletSample s;
        for (std::size_t i = 0; i < kFeatureCount; ++i) s.x[i] = sp[i] - sn[i];
        s.y = 1;
        out.push_back(s);
    }
    return out;
}

void negate_half(std::vector<SvmTripletSample>& samples, std::uint64_t seed) {
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    auto rng = make_rng(seed, kNegation);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < samples.size() / 2; ++k) {
        auto& s = samples[order[k]];
        for (double& v : s.x) v = -v;
        s.y = -s.y;
    }
}

std::vector<SvmTripletSample> make_svm_triplets(const GoldStreamTrace& trace, const SimilarityParams& p,
                                                const TripletOptions& options) {
    auto samples = build_triplets(trace, p, options);
    negate_half(samples, options.seed);
    return samples;
}

SvmTripletFit train_linear_svm(std::span<const SvmTripletSample> samples, double C) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    rows.reserve(samples.size());
    labels.reserve(samples.size());
    for (const auto& s : samples) {
        rows.emplace_back(s.x.begin(), s.x.end());
        labels.push_back(s.y);
    }
    SvmOptions opts;
    opts.C = C;
    const LinearSvm svm = train_svm(rows, labels, opts);
    std::array<double, kFeatureCount> w{};
    std::copy(svm.w.begin(), svm.w.end(), w.begin());
    if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; }))
        throw DegenerateData("svm learned an all-zero weight vector");
    return SvmTripletFit{WeightVector(w), svm.bias, svm.iterations, svm.converged};
}

// ---------------------------------------------------------------------------

std::vector<CreationSample> make_creation_samples(const GoldStreamTrace& trace, const WeightVector& w,
                                                  const SimilarityParams& p, const FeatureMask& features) {
    validate(p);
    std::vector<CreationSample> out;
    for (const TraceRecord& rec : trace.records) {
        if (rec.pool.empty()) continue;
        CreationSample best;
        double best_score = 0.0;
        std::int64_t best_id = 0;
        bool have = false;
        for (const auto& e : rec.pool) {
            const SimilarityVector s = finalize(e.comparison, p, features);
            const double score = c_score(s, w);
            if (!have || score > best_score || (score == best_score && e.cluster_id < best_id)) {
                best.x = s;
                best_score = score;
                best_id = e.cluster_id;
                have = true;
            }
        }
        best.y = rec.gold_present ? 0 : 1;
        out.push_back(best);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string format_hyper_params(const HyperParams& h) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "C=%g mu=%g sigma=%g k=%zu", h.C, h.mu, h.sigma, h.smote_k);
    return buf;
}

std::vector<HyperParams> HyperGrid::points() const {
    std::vector<HyperParams> out;
    for (double c : C)
        for (double m : mu)
            for (double s : sigma)
                for (std::size_t k : smote_k) out.push_back({c, m, s, k});
    return out;
}

HyperGrid parse_grid(std::string_view spec) {
    HyperGrid grid;
    const auto parse_list = [](std::string_view key, std::string_view values) {
        std::vector<double> out;
        std::size_t start = 0;
        while (start <= values.size()) {
            const auto end = std::min(values.find(',', start), values.size());
            const std::string item(values.substr(start, end - start));
            char* stop = nullptr;
            const double v = std::strtod(item.c_str(), &stop);
            if (item.empty() || stop != item.c_str() + item.size())
                throw InvalidValue("grid: bad value '" + item + "' for " + std::string(key));
            out.push_back(v);
            start = end + 1;
        }
        return out;
    };
    std::size_t start = 0;
    while (start < spec.size()) {
        const auto end = std::min(spec.find(';', start), spec.size());
        const auto item = spec.substr(start, end - start);
        start = end + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw InvalidValue("grid: expected key=values in '" + std::string(item) + "'");
        const auto key = item.substr(0, eq);
        const auto values = parse_list(key, item.substr(eq + 1));
        if (key == "C") {
            for (double v : values)
                if (!(v > 0.0)) throw InvalidValue("grid: C must be positive");
            grid.C = values;
        } else if (key == "mu") {
            grid.mu = values;
        } else if (key == "sigma") {
            for (double v : values)
                if (!(v > 0.0)) throw InvalidValue("grid: sigma must be positive");
            grid.sigma = values;
        } else if (key == "k") {
            grid.smote_k.clear();
            for (double v : values) {
                if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
                    throw InvalidValue("grid: k must be a positive integer");
                grid.smote_k.push_back(static_cast<std::size_t>(v));
            }
        } else {
            throw InvalidValue("grid: unknown key '" + std::string(key) + "'");
        }
    }
    return grid;
}

TrainedPipeline train_pipeline(const GoldStreamTrace& trace, std::uint32_t embedding_dim, const HyperParams& h,
                               const TrainOptions& options) {
    const SimilarityParams p{h.mu, h.sigma};
    validate(p);
    TripletOptions topts;
    topts.seed = options.seed;
    topts.features = options.features;
    topts.hard_negatives = options.hard_negatives;
    const auto triplets = make_svm_triplets(trace, p, topts);
    if (triplets.size() < 2) throw DegenerateData("fewer than two svm triplets could be formed");
    const SvmTripletFit fit = train_linear_svm(triplets, h.C);

    const auto creation = make_creation_samples(trace, fit.weights, p, options.features);
    const auto balanced = smote_oversample(creation, h.smote_k, make_rng(options.seed, kSmote)());
    const CreationNet net = train_creation_net(balanced, make_rng(options.seed, kCreation)(), options.creation);

    TrainedPipeline out{ModelBundle{fit.weights, net, p, options.features.test(kDenseFeature) ? embedding_dim : 0,
                                    options.features},
                        triplets.size(), creation.size(), 0};
    for (const auto& s : creation) out.creation_positives += static_cast<std::size_t>(s.y);
    return out;
}

TrainedPipeline train_pipeline(std::span<const LabeledRep> stream, const HyperParams& h,
                               const TrainOptions& options) {
    const GoldStreamTrace trace = simulate_gold_stream(stream);
    const auto dim = static_cast<std::uint32_t>(stream.front().rep.dense.size());
    return train_pipeline(trace, dim, h, options);
}

CvResult cross_validate(std::span<const LabeledRep> stream, const HyperGrid& grid, std::size_t folds,
                        const TrainOptions& options) {
    if (folds < 2) throw InvalidValue("cross-validation needs at least 2 folds");
    const auto points = grid.points();
    if (points.empty()) throw InvalidValue("empty hyper-parameter grid");

    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> fold_of;
    for (const auto& d : stream)
        if (fold_of.emplace(d.gold, 0).second) labels.push_back(d.gold);
    if (labels.size() < folds)
        throw TooFewClusters(std::to_string(labels.size()) + " gold clusters for " + std::to_string(folds) + " folds");
    auto rng = make_rng(options.seed, kFolds);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < labels.size(); ++i) fold_of[labels[i]] = i % folds;

    const auto dim = stream.empty() ? 0u : static_cast<std::uint32_t>(stream.front().rep.dense.size());
    std::vector<CvScore> scores(points.size());
    for (std::size_t g = 0; g < points.size(); ++g) scores[g].params = points[g];

    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<LabeledRep> train;
        std::vector<DocRepSet> test;
        Partition gold;
        for (const auto& d : stream) {
            if (fold_of[d.gold] == f) {
                test.push_back(d.rep);
                gold.emplace(d.rep.doc_id, d.gold);
            } else {
                train.push_back(d);
            }
        }
        const GoldStreamTrace trace = simulate_gold_stream(train);
        for (std::size_t g = 0; g < points.size(); ++g) {
            double f1 = 0.0;
            try {
                const auto trained = train_pipeline(trace, dim, points[g], options);
                const auto result = cluster_encoded(test, trained.bundle);
                Partition pred;
                for (const auto& a : result.assignments) pred.emplace(a.doc_id, std::to_string(a.cluster_id));
                f1 = bcubed(pred, gold).f1;
            } catch (const DataError&) {
                ++scores[g].failed_folds;
            } catch (const LineSearchFailure&) {
                ++scores[g].failed_folds;
            }
            scores[g].mean_f1 += f1 / static_cast<double>(folds);
        }
    }

    CvResult out;
    out.scores = scores;
    std::size_t best = 0;
    for (std::size_t g = 1; g < scores.size(); ++g)
        if (scores[g].mean_f1 > scores[best].mean_f1) best = g;
    out.best = scores[best].params;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class Sample>
std::string format_rows(std::span<const Sample> samples) {
    std::string out;
    char buf[32];
    for (const auto& s : samples) {
        for (double v : s.x) {
            std::snprintf(buf, sizeof buf, "%.17g ", v);
            out += buf;
        }
        out += std::to_string(s.y);
        out += '\n';
    }
    return out;
}

template <class Sample>
std::vector<Sample> parse_rows(std::string_view text, bool (*label_ok)(int)) {
    std::vector<Sample> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        Sample s;
        for (double& v : s.x)
            if (!(fields >> v)) throw ParseError("samples", line_no, "expected 13 features and a label");
        std::string rest;
        if (!(fields >> s.y) || !label_ok(s.y) || (fields >> rest))
            throw ParseError("samples", line_no, "bad label");
        out.push_back(s);
    }
    return out;
}

}  // namespace

std::string format_samples(std::span<const SvmTripletSample> samples) { return format_rows(samples); }
std::string format_samples(std::span<const CreationSample> samples) { return format_rows(samples); }

std::vector<SvmTripletSample> parse_triplet_samples(std::string_view text) {
    return parse_rows<SvmTripletSample>(text, [](int y) { return y == 1 || y == -1; });
}

std::vector<CreationSample> parse_creation_samples(std::string_view text) {
    return parse_rows<CreationSample>(text, [](int y) { return y == 0 || y == 1; });
}

}  // namespace newsclust
