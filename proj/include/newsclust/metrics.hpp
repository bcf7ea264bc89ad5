#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace newsclust {

// doc id -> cluster label.
using Partition = std::map<std::string, std::string>;

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    // f1 is the harmonic mean, 0 when both inputs are 0.
    static PRF from(double precision, double recall);
};

// Contingency table of two partitions over the same document set. Rows are
// predicted clusters, columns gold clusters, both in label order.
struct Contingency {
    std::vector<std::string> pred_labels;
    std::vector<std::string> gold_labels;
    std::vector<std::size_t> pred_sizes;
    std::vector<std::size_t> gold_sizes;
    // Nonzero cells only: (pred row, gold column) -> count.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> cells;
    std::size_t n = 0;
};

// Throws IdSetMismatch unless both partitions cover exactly the same ids.
Contingency contingency(const Partition& pred, const Partition& gold);

// Document-averaged cluster co-membership precision and recall.
PRF bcubed(const Partition& pred, const Partition& gold);

enum class CeafMode {
    Entity,         // phi = 2|G n O| / (|G| + |O|)
    Mention,        // phi = |G n O|
    EntityJaccard,  // phi = |G n O| / |G u O|
};

// Optimal one-to-one alignment of predicted and gold clusters (Kuhn-Munkres);
// P = sum phi* / sum_O phi(O, O), R = sum phi* / sum_G phi(G, G).
PRF ceaf(const Partition& pred, const Partition& gold, CeafMode mode);

struct HungarianResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), sorted by row
    double total = 0.0;
};

// Maximum-profit one-to-one assignment. For rectangular input every row (or
// column, whichever dimension is smaller) is matched.
HungarianResult hungarian(const std::vector<std::vector<double>>& profit);

struct PairCounts {
    std::uint64_t tp = 0;  // same cluster in both
    std::uint64_t fp = 0;  // same in pred only
    std::uint64_t fn = 0;  // same in gold only
    std::uint64_t tn = 0;  // different in both
};

PairCounts pair_counts(const Partition& pred, const Partition& gold);

struct PairwiseScores {
    PairCounts counts;
    double rand_index = 0.0;
    double adjusted_rand = 0.0;
    double fowlkes_mallows = 0.0;
    PRF blanc;
};

// Throws InvalidValue for fewer than two documents.
PairwiseScores pairwise_metrics(const Partition& pred, const Partition& gold);

struct InfoScores {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v_measure = 0.0;
    double mutual_information = 0.0;  // nats
    double adjusted_mutual_information = 0.0;
    PRF muc;
};

InfoScores info_metrics(const Partition& pred, const Partition& gold);

// Expected mutual information of two partitions with the given marginals
// under the permutation (hypergeometric) model, in nats.
double expected_mutual_information(const std::vector<std::size_t>& a_sizes, const std::vector<std::size_t>& b_sizes);

struct FragmentationReport {
    std::size_t pred_count = 0;
    std::size_t gold_count = 0;
    std::int64_t excess = 0;
    // 1 - excess / baseline_excess; absent without a baseline or when the
    // baseline has no excess.
    std::optional<double> excess_reduction;
};

FragmentationReport fragmentation_report(std::size_t pred_count, std::size_t gold_count,
                                         std::optional<std::size_t> baseline_count = std::nullopt);
FragmentationReport fragmentation_report(const Partition& pred, const Partition& gold,
                                         std::optional<std::size_t> baseline_count = std::nullopt);

std::size_t cluster_count(const Partition& p);

// One line of a metrics report: either a P/R/F triple or a single value.
struct MetricLine {
    std::string name;
    std::optional<PRF> prf;
    double value = 0.0;
};

const std::vector<std::string>& metric_names();
// Runs the named metrics (all of metric_names() when empty). Throws
// InvalidValue for unknown names.
std::vector<MetricLine> evaluate_metrics(const Partition& pred, const Partition& gold,
                                         const std::vector<std::string>& names = {});
// "name<TAB>precision<TAB>recall<TAB>f1" or "name<TAB>value" per line.
std::string format_report(const std::vector<MetricLine>& lines);

// Paired bootstrap over documents: the fraction of resamples in which
// score(a) <= score(b). Small values support "a is better than b".
double bootstrap_p_value(const Partition& a, const Partition& b, const Partition& gold,
                         const std::function<double(const Partition&, const Partition&)>& score,
                         std::size_t resamples, std::uint64_t seed);

}  // namespace newsclust
