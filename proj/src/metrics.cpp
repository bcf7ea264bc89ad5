#include "newsclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <unordered_map>

#include "newsclust/errors.hpp"

namespace newsclust {
namespace {

double ratio_or_one(double num, double den) { return den == 0.0 ? 1.0 : num / den; }

std::uint64_t choose2(std::uint64_t k) { return k * (k - std::min<std::uint64_t>(k, 1)) / 2; }

double entropy(const std::vector<std::size_t>& sizes, std::size_t n) {
    double h = 0.0;
    for (std::size_t s : sizes) {
        if (s == 0) continue;
        const double p = static_cast<double>(s) / static_cast<double>(n);
        h -= p * std::log(p);
    }
    return h;
}

// Each predicted cluster meets exactly one gold cluster and vice versa.
bool same_up_to_relabeling(const Contingency& c) {
    return c.cells.size() == c.pred_sizes.size() && c.cells.size() == c.gold_sizes.size();
}

}  // namespace

PRF PRF::from(double precision, double recall) {
    PRF out{precision, recall, 0.0};
    if (precision + recall > 0.0) out.f1 = 2.0 * precision * recall / (precision + recall);
    return out;
}

Contingency contingency(const Partition& pred, const Partition& gold) {
    if (pred.size() != gold.size())
        throw IdSetMismatch("prediction covers " + std::to_string(pred.size()) + " documents, gold " +
                            std::to_string(gold.size()));
    Contingency c;
    std::set<std::string> pl, gl;
    for (auto p = pred.begin(), g = gold.begin(); p != pred.end(); ++p, ++g) {
        if (p->first != g->first)
            throw IdSetMismatch("document '" + p->first + "' vs '" + g->first + "' at the same rank");
        pl.insert(p->second);
        gl.insert(g->second);
    }
    c.pred_labels.assign(pl.begin(), pl.end());
    c.gold_labels.assign(gl.begin(), gl.end());
    std::unordered_map<std::string, std::size_t> pidx, gidx;
    for (std::size_t i = 0; i < c.pred_labels.size(); ++i) pidx[c.pred_labels[i]] = i;
    for (std::size_t j = 0; j < c.gold_labels.size(); ++j) gidx[c.gold_labels[j]] = j;
    c.pred_sizes.assign(c.pred_labels.size(), 0);
    c.gold_sizes.assign(c.gold_labels.size(), 0);
    for (auto p = pred.begin(), g = gold.begin(); p != pred.end(); ++p, ++g) {
        const std::size_t i = pidx[p->second], j = gidx[g->second];
        ++c.cells[{i, j}];
        ++c.pred_sizes[i];
        ++c.gold_sizes[j];
    }
    c.n = pred.size();
    return c;
}

PRF bcubed(const Partition& pred, const Partition& gold) {
    const Contingency c = contingency(pred, gold);
    if (c.n == 0) return PRF::from(1.0, 1.0);
    double p = 0.0, r = 0.0;
    for (const auto& [key, count] : c.cells) {
        const double sq = static_cast<double>(count) * static_cast<double>(count);
        p += sq / static_cast<double>(c.pred_sizes[key.first]);
        r += sq / static_cast<double>(c.gold_sizes[key.second]);
    }
    const double n = static_cast<double>(c.n);
    return PRF::from(p / n, r / n);
}

// ---------------------------------------------------------------------------

HungarianResult hungarian(const std::vector<std::vector<double>>& profit) {
    HungarianResult out;
    const std::size_t rows = profit.size();
    const std::size_t cols = rows ? profit[0].size() : 0;
    for (const auto& r : profit)
        if (r.size() != cols) throw InvalidValue("hungarian: ragged profit matrix");
    if (rows == 0 || cols == 0) return out;

    // Shortest augmenting path with potentials, minimizing cost = -profit over
    // an n <= m orientation.
    const bool transposed = rows > cols;
    const std::size_t n = transposed ? cols : rows;
    const std::size_t m = transposed ? rows : cols;
    const auto cost = [&](std::size_t i, std::size_t j) {
        return transposed ? -profit[j - 1][i - 1] : -profit[i - 1][j - 1];
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (std::size_t j = 1; j <= m; ++j) {
        if (match[j] == 0) continue;
        const std::size_t r = transposed ? j - 1 : match[j] - 1;
        const std::size_t c = transposed ? match[j] - 1 : j - 1;
        out.pairs.emplace_back(r, c);
        out.total += profit[r][c];
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

PRF ceaf(const Partition& pred, const Partition& gold, CeafMode mode) {
    const Contingency c = contingency(pred, gold);
    if (c.n == 0) return PRF::from(1.0, 1.0);
    const auto phi = [&](double overlap, double g, double o) {
        switch (mode) {
            case CeafMode::Entity: return 2.0 * overlap / (g + o);
            case CeafMode::Mention: return overlap;
            case CeafMode::EntityJaccard: return overlap / (g + o - overlap);
        }
        return 0.0;
    };
    std::vector<std::vector<double>> profit(c.pred_sizes.size(), std::vector<double>(c.gold_sizes.size(), 0.0));
    for (const auto& [key, count] : c.cells)
        profit[key.first][key.second] = phi(static_cast<double>(count), static_cast<double>(c.gold_sizes[key.second]),
                                            static_cast<double>(c.pred_sizes[key.first]));
    const double aligned = hungarian(profit).total;
    double self_pred = 0.0, self_gold = 0.0;
    for (std::size_t s : c.pred_sizes) self_pred += phi(double(s), double(s), double(s));
    for (std::size_t s : c.gold_sizes) self_gold += phi(double(s), double(s), double(s));
    return PRF::from(aligned / self_pred, aligned / self_gold);
}

// ---------------------------------------------------------------------------

PairCounts pair_counts(const Partition& pred, const Partition& gold) {
    const Contingency c = contingency(pred, gold);
    std::uint64_t tp = 0, pred_pairs = 0, gold_pairs = 0;
    for (const auto& [key, count] : c.cells) tp += choose2(count);
    for (std::size_t s : c.pred_sizes) pred_pairs += choose2(s);
    for (std::size_t s : c.gold_sizes) gold_pairs += choose2(s);
    PairCounts out;
    out.tp = tp;
    out.fp = pred_pairs - tp;
    out.fn = gold_pairs - tp;
    out.tn = choose2(c.n) - tp - out.fp - out.fn;
    return out;
}

PairwiseScores pairwise_metrics(const Partition& pred, const Partition& gold) {
    if (pred.size() < 2 || gold.size() < 2) throw InvalidValue("pairwise metrics need at least two documents");
    PairwiseScores s;
    s.counts = pair_counts(pred, gold);
    const double tp = static_cast<double>(s.counts.tp), fp = static_cast<double>(s.counts.fp);
    const double fn = static_cast<double>(s.counts.fn), tn = static_cast<double>(s.counts.tn);
    const double total = tp + fp + fn + tn;

    s.rand_index = (tp + tn) / total;

    const double pred_pairs = tp + fp, gold_pairs = tp + fn;
    const double expected = pred_pairs * gold_pairs / total;
    const double max_index = 0.5 * (pred_pairs + gold_pairs);
    // Zero denominator only when both sides have no pairs or all pairs.
    s.adjusted_rand = max_index == expected ? 1.0 : (tp - expected) / (max_index - expected);

    if (s.counts.tp == 0) {
        s.fowlkes_mallows = (s.counts.fp == 0 && s.counts.fn == 0) ? 1.0 : 0.0;
    } else {
        s.fowlkes_mallows = tp / std::sqrt(pred_pairs * gold_pairs);
    }

    // A link class absent from both sides counts as perfectly reproduced.
    const auto class_prf = [](double hit, double predicted, double actual) {
        if (predicted == 0.0 && actual == 0.0) return PRF::from(1.0, 1.0);
        return PRF::from(predicted == 0.0 ? 0.0 : hit / predicted, actual == 0.0 ? 0.0 : hit / actual);
    };
    const PRF coref = class_prf(tp, tp + fp, tp + fn);
    const PRF non_coref = class_prf(tn, tn + fn, tn + fp);
    s.blanc.precision = 0.5 * (coref.precision + non_coref.precision);
    s.blanc.recall = 0.5 * (coref.recall + non_coref.recall);
    s.blanc.f1 = 0.5 * (coref.f1 + non_coref.f1);
    return s;
}

// ---------------------------------------------------------------------------

double expected_mutual_information(const std::vector<std::size_t>& a_sizes, const std::vector<std::size_t>& b_sizes) {
    std::size_t n = 0;
    for (std::size_t s : a_sizes) n += s;
    const double N = static_cast<double>(n);
    const double lg_n = std::lgamma(N + 1.0);
    double emi = 0.0;
    for (std::size_t a : a_sizes) {
        for (std::size_t b : b_sizes) {
            const double A = double(a), B = double(b);
            const double fixed = std::lgamma(A + 1) + std::lgamma(B + 1) + std::lgamma(N - A + 1) +
                                 std::lgamma(N - B + 1) - lg_n;
            const std::size_t lo = std::max<std::size_t>(1, a + b > n ? a + b - n : 0);
            const std::size_t hi = std::min(a, b);
            for (std::size_t k = lo; k <= hi; ++k) {
                const double K = double(k);
                const double log_p = fixed - std::lgamma(K + 1) - std::lgamma(A - K + 1) - std::lgamma(B - K + 1) -
                                     std::lgamma(N - A - B + K + 1);
                emi += (K / N) * std::log(N * K / (A * B)) * std::exp(log_p);
            }
        }
    }
    return emi;
}

InfoScores info_metrics(const Partition& pred, const Partition& gold) {
    const Contingency c = contingency(pred, gold);
    InfoScores s;
    if (c.n == 0) {
        s.homogeneity = s.completeness = s.v_measure = s.adjusted_mutual_information = 1.0;
        s.muc = PRF::from(1.0, 1.0);
        return s;
    }
    const double n = static_cast<double>(c.n);
    const double h_pred = entropy(c.pred_sizes, c.n);
    const double h_gold = entropy(c.gold_sizes, c.n);
    double mi = 0.0;
    for (const auto& [key, count] : c.cells) {
        const double nij = static_cast<double>(count);
        mi += (nij / n) * std::log(n * nij / (double(c.pred_sizes[key.first]) * double(c.gold_sizes[key.second])));
    }
    mi = std::max(0.0, mi);
    s.mutual_information = mi;
    s.homogeneity = h_gold == 0.0 ? 1.0 : mi / h_gold;
    s.completeness = h_pred == 0.0 ? 1.0 : mi / h_pred;
    const double hc = s.homogeneity + s.completeness;
    s.v_measure = hc == 0.0 ? 0.0 : 2.0 * s.homogeneity * s.completeness / hc;

    if (same_up_to_relabeling(c)) {
        s.adjusted_mutual_information = 1.0;
    } else {
        const double emi = expected_mutual_information(c.pred_sizes, c.gold_sizes);
        const double den = std::max(h_pred, h_gold) - emi;
        s.adjusted_mutual_information = den == 0.0 ? 0.0 : (mi - emi) / den;
    }

    // MUC: links needed to connect each cluster, minus those cut by the
    // other partition.
    std::vector<std::size_t> pred_parts(c.pred_sizes.size(), 0), gold_parts(c.gold_sizes.size(), 0);
    for (const auto& [key, count] : c.cells) {
        ++pred_parts[key.first];
        ++gold_parts[key.second];
    }
    double p_num = 0.0, p_den = 0.0, r_num = 0.0, r_den = 0.0;
    for (std::size_t i = 0; i < c.pred_sizes.size(); ++i) {
        p_num += double(c.pred_sizes[i] - pred_parts[i]);
        p_den += double(c.pred_sizes[i] - 1);
    }
    for (std::size_t j = 0; j < c.gold_sizes.size(); ++j) {
        r_num += double(c.gold_sizes[j] - gold_parts[j]);
        r_den += double(c.gold_sizes[j] - 1);
    }
    s.muc = PRF::from(ratio_or_one(p_num, p_den), ratio_or_one(r_num, r_den));
    return s;
}

// ---------------------------------------------------------------------------

std::size_t cluster_count(const Partition& p) {
    std::set<std::string_view> labels;
    for (const auto& [id, label] : p) labels.insert(label);
    return labels.size();
}

FragmentationReport fragmentation_report(std::size_t pred_count, std::size_t gold_count,
                                         std::optional<std::size_t> baseline_count) {
    FragmentationReport r;
    r.pred_count = pred_count;
    r.gold_count = gold_count;
    r.excess = static_cast<std::int64_t>(pred_count) - static_cast<std::int64_t>(gold_count);
    if (baseline_count) {
        const auto baseline_excess = static_cast<std::int64_t>(*baseline_count) - static_cast<std::int64_t>(gold_count);
        if (baseline_excess != 0)
            r.excess_reduction = 1.0 - static_cast<double>(r.excess) / static_cast<double>(baseline_excess);
    }
    return r;
}

FragmentationReport fragmentation_report(const Partition& pred, const Partition& gold,
                                         std::optional<std::size_t> baseline_count) {
    return fragmentation_report(cluster_count(pred), cluster_count(gold), baseline_count);
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names{
        "bcubed",          "ceaf_e",       "ceaf_m",       "muc",
        "blanc",           "v_measure",    "homogeneity",  "completeness",
        "adjusted_rand",   "rand_index",   "adjusted_mutual_info",
        "fowlkes_mallows", "pred_clusters", "gold_clusters"};
    return names;
}

std::vector<MetricLine> evaluate_metrics(const Partition& pred, const Partition& gold,
                                         const std::vector<std::string>& names) {
    const auto& wanted = names.empty() ? metric_names() : names;
    for (const auto& name : wanted)
        if (std::find(metric_names().begin(), metric_names().end(), name) == metric_names().end())
            throw InvalidValue("unknown metric '" + name + "'");

    std::optional<PairwiseScores> pairwise;
    std::optional<InfoScores> info;
    const auto need_pairwise = [&]() -> const PairwiseScores& {
        if (!pairwise) pairwise = pairwise_metrics(pred, gold);
        return *pairwise;
    };
    const auto need_info = [&]() -> const InfoScores& {
        if (!info) info = info_metrics(pred, gold);
        return *info;
    };

    std::vector<MetricLine> out;
    for (const auto& name : wanted) {
        MetricLine line{name, std::nullopt, 0.0};
        if (name == "bcubed") line.prf = bcubed(pred, gold);
        else if (name == "ceaf_e") line.prf = ceaf(pred, gold, CeafMode::Entity);
        else if (name == "ceaf_m") line.prf = ceaf(pred, gold, CeafMode::Mention);
        else if (name == "muc") line.prf = need_info().muc;
        else if (name == "blanc") line.prf = need_pairwise().blanc;
        else if (name == "v_measure") line.value = need_info().v_measure;
        else if (name == "homogeneity") line.value = need_info().homogeneity;
        else if (name == "completeness") line.value = need_info().completeness;
        else if (name == "adjusted_rand") line.value = need_pairwise().adjusted_rand;
        else if (name == "rand_index") line.value = need_pairwise().rand_index;
        else if (name == "adjusted_mutual_info") line.value = need_info().adjusted_mutual_information;
        else if (name == "fowlkes_mallows") line.value = need_pairwise().fowlkes_mallows;
        else if (name == "pred_clusters") line.value = static_cast<double>(cluster_count(pred));
        else if (name == "gold_clusters") line.value = static_cast<double>(cluster_count(gold));
        out.push_back(std::move(line));
    }
    return out;
}

std::string format_report(const std::vector<MetricLine>& lines) {
    std::string out;
    char buf[160];
    for (const auto& line : lines) {
        if (line.prf) {
            std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\t%.6f\n", line.prf->precision, line.prf->recall, line.prf->f1);
        } else {
            std::snprintf(buf, sizeof buf, "\t%.6f\n", line.value);
        }
        out += line.name;
        out += buf;
    }
    return out;
}

double bootstrap_p_value(const Partition& a, const Partition& b, const Partition& gold,
                         const std::function<double(const Partition&, const Partition&)>& score,
                         std::size_t resamples, std::uint64_t seed) {
    contingency(a, gold);
    contingency(b, gold);
    if (gold.empty() || resamples == 0) throw InvalidValue("bootstrap needs documents and resamples");
    std::vector<const std::pair<const std::string, std::string>*> ga, aa, ba;
    for (const auto& e : gold) ga.push_back(&e);
    for (const auto& e : a) aa.push_back(&e);
    for (const auto& e : b) ba.push_back(&e);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, gold.size() - 1);
    std::size_t not_better = 0;
    for (std::size_t r = 0; r < resamples; ++r) {
        Partition ra, rb, rg;
        for (std::size_t k = 0; k < gold.size(); ++k) {
            const std::size_t i = pick(rng);
            const std::string id = std::to_string(k);
            rg.emplace(id, ga[i]->second);
            ra.emplace(id, aa[i]->second);
            rb.emplace(id, ba[i]->second);
        }
        if (score(ra, rg) <= score(rb, rg)) ++not_better;
    }
    return static_cast<double>(not_better) / static_cast<double>(resamples);
}

}  // namespace newsclust
