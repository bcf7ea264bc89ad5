#include <doctest.h>

#include <ostream>

#include <map>
#include <random>
#include <set>

#include "newsclust/engine.hpp"
#include "newsclust/errors.hpp"
#include "newsclust/metrics.hpp"
#include "newsclust/training.hpp"
#include "support/planted.hpp"

using namespace newsclust;

namespace {

WeightVector uniform_weights() {
    std::array<double, kFeatureCount> w;
    w.fill(1.0);
    return WeightVector(w);
}

// Output = sigmoid(bias) regardless of input.
CreationNet constant_net(double bias) {
    CreationNet n;
    n.output[2] = bias;
    return n;
}

ModelBundle bundle_with(CreationNet net, std::uint32_t dim) {
    return ModelBundle{uniform_weights(), net, SimilarityParams{0.0, 3.0}, dim};
}

DocRepSet rep(const std::string& id, std::uint32_t term, const char* when) {
    DocRepSet r;
    r.doc_id = id;
    r.sparse[0] = SparseVector::from_sorted({term}, {1.0});
    r.dense = {1.0, double(term)};
    r.timestamp = parse_timestamp(when);
    return r;
}

planted::Corpus small_corpus(std::uint64_t seed, std::size_t events = 6, std::size_t docs = 10) {
    planted::Options o;
    o.events = events;
    o.docs_per_event = docs;
    o.seed = seed;
    o.id_prefix = "s" + std::to_string(seed) + "_";
    return planted::make(o);
}

}  // namespace

TEST_CASE("engine: first document creates a cluster") {
    ClusterPool pool;
    const Assignment a = step(pool, rep("a", 1, "2015-03-01"), bundle_with(constant_net(-5.0), 2));
    CHECK(a.created);
    CHECK(a.cluster_id == 0);
    CHECK(a.creation_prob == 1.0);
    CHECK(pool.size() == 1);
    CHECK(pool.at(0).size() == 1);
}

TEST_CASE("engine: merge when the net says so, create otherwise") {
    ClusterPool pool;
    const auto merge = bundle_with(constant_net(-5.0), 2);
    step(pool, rep("a", 1, "2015-03-01"), merge);
    const Assignment b = step(pool, rep("b", 1, "2015-03-01"), merge);
    CHECK_FALSE(b.created);
    CHECK(b.cluster_id == 0);
    CHECK(b.creation_prob < 0.5);
    CHECK(pool.at(0).size() == 2);

    const auto split = bundle_with(constant_net(5.0), 2);
    const Assignment c = step(pool, rep("c", 1, "2015-03-01"), split);
    CHECK(c.created);
    CHECK(c.cluster_id == 1);

    CHECK_THROWS_AS(step(pool, rep("b", 1, "2015-03-01"), merge), DuplicateDocument);
    DocRepSet bad = rep("z", 1, "2015-03-01");
    bad.dense = {1.0};
    CHECK_THROWS_AS(step(pool, bad, merge), DimensionMismatch);
}

TEST_CASE("engine: empty stream and conservation on random streams") {
    const auto empty = cluster_encoded({}, bundle_with(constant_net(0.0), 2));
    CHECK(empty.pool.empty());
    CHECK(empty.assignments.empty());

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DocRepSet> docs;
        const std::size_t n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
            DocRepSet r = rep("d" + std::to_string(i), static_cast<std::uint32_t>(rng() % 5), "2015-03-01");
            r.timestamp.seconds += static_cast<std::int64_t>(rng() % 1'000'000);
            docs.push_back(r);
        }
        CreationNet net;
        std::normal_distribution<double> g(0.0, 2.0);
        for (auto& row : net.hidden)
            for (double& v : row) v = g(rng);
        for (double& v : net.output) v = g(rng);
        const auto result = cluster_encoded(docs, bundle_with(net, 2));
        CHECK(result.assignments.size() == n);
        std::size_t created = 0, total = 0;
        std::multiset<std::string> members;
        for (const auto& a : result.assignments) created += a.created;
        for (const auto& c : result.pool.clusters()) {
            total += c.size();
            members.insert(c.member_ids().begin(), c.member_ids().end());
        }
        CHECK(created == result.pool.size());
        CHECK(total == n);
        CHECK(members.size() == n);
        for (const auto& d : docs) CHECK(members.count(d.doc_id) == 1);
    }
}

TEST_CASE("gold stream simulation") {
    const std::vector<LabeledRep> stream{{rep("a", 1, "2015-03-01"), "x"},
                                         {rep("b", 1, "2015-03-02"), "x"},
                                         {rep("c", 2, "2015-03-03"), "y"},
                                         {rep("d", 1, "2015-03-04"), "x"}};
    const GoldStreamTrace t = simulate_gold_stream(stream);
    REQUIRE(t.records.size() == 4);
    CHECK_FALSE(t.records[0].gold_present);
    CHECK(t.records[0].pool.empty());
    CHECK(t.records[1].gold_present);
    CHECK(t.records[1].pool.size() == 1);
    CHECK_FALSE(t.records[2].gold_present);
    CHECK(t.records[3].pool.size() == 2);
    CHECK(t.final_pool_size == 2);
    CHECK_THROWS_AS(simulate_gold_stream(std::span<const LabeledRep>{}), EmptyCorpus);

    // Only record d has both its gold cluster and another one in the pool.
    const auto triplets = build_triplets(t, {0.0, 3.0}, {});
    REQUIRE(triplets.size() == 1);
    CHECK(triplets[0].y == 1);

    const auto creation = make_creation_samples(t, uniform_weights(), {0.0, 3.0});
    REQUIRE(creation.size() == 3);
    CHECK(creation[0].y == 0);
    CHECK(creation[1].y == 1);
    CHECK(creation[2].y == 0);
}

TEST_CASE("triplets are balanced, seeded and antisymmetric") {
    const auto corpus = small_corpus(3);
    const TfidfModels models = fit_tfidf_all(corpus.docs);
    const auto stream = encode_labeled(corpus.docs, models, &corpus.store);
    const GoldStreamTrace trace = simulate_gold_stream(stream);
    CHECK(trace.final_pool_size == 6);

    const TripletOptions opts{};
    const auto raw = build_triplets(trace, {0.0, 3.0}, opts);
    const auto balanced = make_svm_triplets(trace, {0.0, 3.0}, opts);
    REQUIRE(raw.size() == balanced.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (balanced[i].y == 1) {
            ++pos;
            CHECK(balanced[i] == raw[i]);
        } else {
            for (std::size_t k = 0; k < kFeatureCount; ++k) CHECK(balanced[i].x[k] == -raw[i].x[k]);
        }
    }
    const std::size_t neg = raw.size() - pos;
    CHECK((pos > neg ? pos - neg : neg - pos) <= 1);
    CHECK(make_svm_triplets(trace, {0.0, 3.0}, opts) == balanced);

    const auto fit = train_linear_svm(balanced, 1.0);
    // Gold clusters dominate on the informative features.
    CHECK(fit.weights[kDenseFeature] > 0.0);
    CHECK(fit.weights[sparse_slot(Unit::Token, Section::TitleBody)] >= 0.0);

    // Text round trip.
    CHECK(parse_triplet_samples(format_samples(std::span<const SvmTripletSample>(balanced))) == balanced);
    const auto creation = make_creation_samples(trace, fit.weights, {0.0, 3.0});
    CHECK(parse_creation_samples(format_samples(std::span<const CreationSample>(creation))) == creation);
}

TEST_CASE("trained pipeline recovers a planted corpus") {
    const auto train = small_corpus(21);
    const auto test = small_corpus(22);
    const TfidfModels train_models = fit_tfidf_all(train.docs);
    const auto stream = encode_labeled(train.docs, train_models, &train.store);
    const TrainedPipeline p = train_pipeline(stream, HyperParams{1.0, 0.0, 3.0, 5}, {});
    CHECK(p.bundle.embedding_dim == 16);
    CHECK(p.creation_positives == 5);

    const TfidfModels test_models = fit_tfidf_all(test.docs);
    const StreamResult r = cluster_stream(test.docs, p.bundle, test_models, &test.store, StreamOrder::Timestamp);
    Partition pred, gold;
    for (const auto& a : r.assignments) pred[a.doc_id] = std::to_string(a.cluster_id);
    for (const auto& d : test.docs) gold[d.id] = *d.gold_cluster;
    // Sixty documents leave the creation net with five positives, so a
    // borderline second document may open a spare cluster.
    CHECK(bcubed(pred, gold).f1 >= 0.95);
    std::set<std::string> labels;
    for (const auto& [id, label] : pred) labels.insert(label);
    CHECK(labels.size() >= 6);
    CHECK(labels.size() <= 7);

    // The same bundle without embeddings is refused.
    CHECK_THROWS_AS(cluster_stream(test.docs, p.bundle, test_models, nullptr, StreamOrder::Timestamp), MissingEmbedding);
}

TEST_CASE("feature masks propagate into the bundle") {
    const auto train = small_corpus(5);
    const TfidfModels models = fit_tfidf_all(train.docs);
    const auto stream = encode_labeled(train.docs, models, &train.store);
    TrainOptions o;
    o.features = parse_feature_set("tfidf+time");
    const TrainedPipeline p = train_pipeline(stream, HyperParams{}, o);
    CHECK(p.bundle.weights[kDenseFeature] == 0.0);
    CHECK(p.bundle.embedding_dim == 0);
    CHECK_FALSE(p.bundle.uses_dense());
    const auto r = cluster_stream(train.docs, p.bundle, models, nullptr, StreamOrder::Timestamp);
    CHECK(r.assignments.size() == train.docs.size());
}

TEST_CASE("grid parsing") {
    const HyperGrid g = parse_grid("C=0.5,2;sigma=1;k=3");
    CHECK(g.C == std::vector<double>{0.5, 2.0});
    CHECK(g.mu == std::vector<double>{0.0});
    CHECK(g.smote_k == std::vector<std::size_t>{3});
    CHECK(g.points().size() == 2);
    CHECK(HyperGrid{}.points().size() == 12);
    CHECK_THROWS_AS(parse_grid("C=-1"), InvalidValue);
    CHECK_THROWS_AS(parse_grid("gamma=1"), InvalidValue);
    CHECK_THROWS_AS(parse_grid("k=1.5"), InvalidValue);
}

TEST_CASE("cross validation") {
    const auto corpus = small_corpus(31, 8, 8);
    const TfidfModels models = fit_tfidf_all(corpus.docs);
    const auto stream = encode_labeled(corpus.docs, models, &corpus.store);

    HyperGrid single;
    single.C = {1.0};
    single.sigma = {3.0};
    CHECK(cross_validate(stream, single, 2, {}).best == HyperParams{1.0, 0.0, 3.0, 5});

    // Events differ only in time; a vanishing sigma flattens every temporal
    // feature to the floor.
    planted::Options o;
    o.events = 8;
    o.docs_per_event = 8;
    o.seed = 32;
    o.shared_content = true;
    o.event_spacing_days = 6.0;
    const auto timed = planted::make(o);
    const TfidfModels timed_models = fit_tfidf_all(timed.docs);
    const auto timed_stream = encode_labeled(timed.docs, timed_models, &timed.store);
    HyperGrid two;
    two.C = {1.0};
    two.sigma = {1e-9, 3.0};
    const CvResult a = cross_validate(timed_stream, two, 2, {});
    const CvResult b = cross_validate(timed_stream, two, 2, {});
    CHECK(a.best.sigma == 3.0);
    CHECK(a.scores[1].mean_f1 > a.scores[0].mean_f1);
    CHECK(a.best == b.best);
    CHECK(a.scores[1].mean_f1 == b.scores[1].mean_f1);

    CHECK_THROWS_AS(cross_validate(stream, single, 9, {}), TooFewClusters);
    CHECK_THROWS_AS(cross_validate(stream, single, 1, {}), InvalidValue);
}
