#include <doctest.h>

#include <ostream>

#include <cmath>
#include <random>

#include "newsclust/errors.hpp"
#include "newsclust/representations.hpp"
#include "newsclust/similarity.hpp"

using namespace newsclust;

TEST_CASE("cosine examples") {
    const auto a = SparseVector::from_sorted({0, 1}, {1.0, 1.0});
    const auto b = SparseVector::from_sorted({1, 2}, {1.0, 1.0});
    CHECK(cosine_sparse(a, b) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cosine_sparse(a, a) == doctest::Approx(1.0));
    CHECK(cosine_sparse(a, SparseVector::from_sorted({5}, {2.0})) == 0.0);
    CHECK(cosine_sparse(a, SparseVector{}) == 0.0);

    const std::vector<double> x{1.0, 0.0}, y{0.0, 1.0}, z{3.0, 4.0}, w{1.0, 1.0};
    CHECK(cosine_dense(x, y) == 0.0);
    CHECK(cosine_dense(z, z) == doctest::Approx(1.0));
    CHECK(cosine_dense(w, x) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(cosine_dense(w, x) == doctest::Approx(0.7071).epsilon(1e-4));
    CHECK_THROWS_AS(cosine_dense(x, std::vector<double>{1.0}), DimensionMismatch);
}

TEST_CASE("temporal similarity") {
    const Timestamp t0 = parse_timestamp("2015-03-01");
    const Timestamp t1 = parse_timestamp("2015-03-02");
    const Timestamp t_minus3 = parse_timestamp("2015-02-26");
    CHECK(temporal_sim(t0, t0, {0.0, 1.0}) == 1.0);
    CHECK(temporal_sim(t1, t0, {0.0, 1.0}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(temporal_sim(t_minus3, t0, {0.0, 3.0}) == doctest::Approx(0.6065).epsilon(1e-4));
    CHECK(temporal_sim(t1, t0, {1.0, 2.0}) == 1.0);
    // Far-apart timestamps stay strictly positive.
    CHECK(temporal_sim(parse_timestamp("2030-01-01"), t0, {0.0, 0.01}) > 0.0);
}

namespace {

DocRepSet rep_of(const std::string& id, std::uint32_t term, std::vector<double> dense, const char* when) {
    DocRepSet r;
    r.doc_id = id;
    for (std::size_t k = 0; k < 6; ++k) r.sparse[k] = SparseVector::from_sorted({term}, {1.0});
    r.dense = std::move(dense);
    r.timestamp = parse_timestamp(when);
    return r;
}

WeightVector ones() {
    std::array<double, kFeatureCount> w;
    w.fill(1.0);
    return WeightVector(w);
}

}  // namespace

TEST_CASE("self comparison") {
    const DocRepSet d = rep_of("a", 3, {0.5, 0.5}, "2015-03-01 10:00");
    const ClusterRep c = cluster_from_doc(d, 0);
    const SimilarityVector s = similarity_vector(d, c, {0.0, 1.0});
    for (std::size_t k = 0; k < 6; ++k) CHECK(s[k] == doctest::Approx(1.0));
    for (std::size_t k = 6; k < 9; ++k) CHECK(s[k] == 0.0);  // empty entity bags
    CHECK(s[kDenseFeature] == doctest::Approx(1.0));
    CHECK(s[kTsMinFeature] == 1.0);
    CHECK(s[kTsMaxFeature] == 1.0);
    CHECK(s[kTsMeanFeature] == 1.0);
    CHECK(similarity_in_range(s));

    const SimilarityVector masked = similarity_vector(d, c, {0.0, 1.0}, parse_feature_set("tfidf+time"));
    CHECK(masked[kDenseFeature] == 0.0);
    CHECK_THROWS_AS(similarity_vector(d, c, {0.0, -1.0}), InvalidValue);
}

TEST_CASE("c-score") {
    SimilarityVector s{};
    s[kDenseFeature] = 0.7;
    std::array<double, kFeatureCount> one_hot{};
    one_hot[kDenseFeature] = 1.0;
    CHECK(c_score(s, WeightVector(one_hot)) == doctest::Approx(0.7));
    for (std::size_t k = 0; k < kFeatureCount; ++k) s[k] = 0.01 * double(k);
    CHECK(c_score(s, ones()) == doctest::Approx(0.78));
}

TEST_CASE("best cluster is the exhaustive argmax") {
    const DocRepSet d = rep_of("q", 1, {1.0, 0.0}, "2015-03-05");
    std::vector<ClusterRep> pool;
    CHECK_THROWS_AS(best_cluster(d, pool, ones(), {0.0, 3.0}), EmptyPool);

    pool.push_back(cluster_from_doc(rep_of("a", 2, {0.0, 1.0}, "2015-03-01"), 0));
    BestMatch only = best_cluster(d, pool, ones(), {0.0, 3.0});
    CHECK(only.cluster_id == 0);

    pool.push_back(cluster_from_doc(rep_of("b", 1, {1.0, 0.0}, "2015-03-05"), 1));
    pool.push_back(cluster_from_doc(rep_of("c", 1, {1.0, 0.1}, "2015-03-03"), 2));
    pool.push_back(cluster_from_doc(rep_of("d", 7, {0.3, 0.3}, "2015-03-04"), 3));
    pool.push_back(cluster_from_doc(rep_of("e", 1, {1.0, 0.0}, "2015-03-05"), 4));  // ties with 1
    const BestMatch best = best_cluster(d, pool, ones(), {0.0, 3.0});
    std::size_t arg = 0;
    double top = -1e300;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double v = c_score(similarity_vector(d, pool[i], {0.0, 3.0}), ones());
        if (v > top) {
            top = v;
            arg = i;
        }
    }
    CHECK(best.cluster_id == pool[arg].id());
    CHECK(best.cluster_id == 1);
    CHECK(best.score == top);
}

TEST_CASE("cosine is symmetric and scale invariant on random vectors") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(-2.0, 2.0), scale(0.01, 100.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> a(8), b(8);
        for (double& v : a) v = val(rng);
        for (double& v : b) v = val(rng);
        const double c = cosine_dense(a, b);
        CHECK(c == doctest::Approx(cosine_dense(b, a)).epsilon(1e-14));
        const double k = scale(rng);
        std::vector<double> ak = a;
        for (double& v : ak) v *= k;
        CHECK(cosine_dense(ak, b) == doctest::Approx(c).epsilon(1e-12));
        CHECK(std::abs(c) <= 1.0);
    }
}
