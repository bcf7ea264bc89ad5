#pragma once

// Slow, direct reimplementations used to cross-check the library. Each one
// works from documents or pairs of documents rather than from the
// contingency table the library uses.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "newsclust/metrics.hpp"

namespace oracle {

using newsclust::Partition;

struct Prf {
    double p = 0.0, r = 0.0, f = 0.0;
};

inline Prf make_prf(double p, double r) { return {p, r, p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r)}; }

inline std::vector<std::string> ids_of(const Partition& p) {
    std::vector<std::string> ids;
    for (const auto& [id, label] : p) ids.push_back(id);
    return ids;
}

inline std::map<std::string, std::set<std::string>> clusters_of(const Partition& p) {
    std::map<std::string, std::set<std::string>> out;
    for (const auto& [id, label] : p) out[label].insert(id);
    return out;
}

inline Prf bcubed(const Partition& pred, const Partition& gold) {
    const auto ids = ids_of(gold);
    double p = 0.0, r = 0.0;
    for (const auto& i : ids) {
        double both = 0.0, same_pred = 0.0, same_gold = 0.0;
        for (const auto& j : ids) {
            const bool sp = pred.at(i) == pred.at(j), sg = gold.at(i) == gold.at(j);
            both += sp && sg;
            same_pred += sp;
            same_gold += sg;
        }
        p += both / same_pred;
        r += both / same_gold;
    }
    return make_prf(p / double(ids.size()), r / double(ids.size()));
}

inline double overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
    double n = 0.0;
    for (const auto& x : a) n += b.contains(x);
    return n;
}

// Every injection of the smaller side into the larger, by permutation.
inline double best_alignment(const std::vector<std::vector<double>>& score) {
    const std::size_t rows = score.size(), cols = rows ? score[0].size() : 0;
    if (rows == 0 || cols == 0) return 0.0;
    const bool flip = rows > cols;
    const std::size_t small = flip ? cols : rows, large = flip ? rows : cols;
    std::vector<std::size_t> perm(large);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t k = 0; k < small; ++k) total += flip ? score[perm[k]][k] : score[k][perm[k]];
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline Prf ceaf(const Partition& pred, const Partition& gold, newsclust::CeafMode mode) {
    const auto P = clusters_of(pred), G = clusters_of(gold);
    const auto phi = [mode](const std::set<std::string>& g, const std::set<std::string>& o) {
        const double k = overlap(g, o);
        switch (mode) {
            case newsclust::CeafMode::Entity: return 2.0 * k / double(g.size() + o.size());
            case newsclust::CeafMode::Mention: return k;
            case newsclust::CeafMode::EntityJaccard: {
                std::set<std::string> u = g;
                u.insert(o.begin(), o.end());
                return k / double(u.size());
            }
        }
        return 0.0;
    };
    std::vector<std::vector<double>> score;
    double self_p = 0.0, self_g = 0.0;
    for (const auto& [pl, ps] : P) {
        score.emplace_back();
        for (const auto& [gl, gs] : G) score.back().push_back(phi(gs, ps));
        self_p += phi(ps, ps);
    }
    for (const auto& [gl, gs] : G) self_g += phi(gs, gs);
    const double aligned = best_alignment(score);
    return make_prf(aligned / self_p, aligned / self_g);
}

struct Pairs {
    double tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Pairs pairs(const Partition& pred, const Partition& gold) {
    const auto ids = ids_of(gold);
    Pairs c;
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const bool sp = pred.at(ids[i]) == pred.at(ids[j]), sg = gold.at(ids[i]) == gold.at(ids[j]);
            if (sp && sg) ++c.tp;
            else if (sp) ++c.fp;
            else if (sg) ++c.fn;
            else ++c.tn;
        }
    return c;
}

inline double rand_index(const Pairs& c) { return (c.tp + c.tn) / (c.tp + c.fp + c.fn + c.tn); }

// Hubert-Arabie ARI written in pair-count form; 1 when both sides agree on
// a degenerate (all-pairs or no-pairs) structure.
inline double adjusted_rand(const Pairs& c) {
    const double den = (c.tp + c.fn) * (c.fn + c.tn) + (c.tp + c.fp) * (c.fp + c.tn);
    if (den == 0.0) return 1.0;
    return 2.0 * (c.tp * c.tn - c.fn * c.fp) / den;
}

inline double fowlkes_mallows(const Pairs& c) {
    if (c.tp == 0.0) return c.fp == 0.0 && c.fn == 0.0 ? 1.0 : 0.0;
    return std::sqrt(c.tp / (c.tp + c.fp) * (c.tp / (c.tp + c.fn)));
}

inline Prf blanc(const Pairs& c) {
    const auto link = [](double hit, double predicted, double actual) {
        if (predicted == 0.0 && actual == 0.0) return make_prf(1.0, 1.0);
        return make_prf(predicted ? hit / predicted : 0.0, actual ? hit / actual : 0.0);
    };
    const Prf a = link(c.tp, c.tp + c.fp, c.tp + c.fn), b = link(c.tn, c.tn + c.fn, c.tn + c.fp);
    return {(a.p + b.p) / 2, (a.r + b.r) / 2, (a.f + b.f) / 2};
}

inline double entropy_of(const Partition& p) {
    std::map<std::string, double> counts;
    for (const auto& [id, l] : p) counts[l] += 1.0;
    const double n = double(p.size());
    double h = 0.0;
    for (const auto& [l, c] : counts) h -= c / n * std::log(c / n);
    return h;
}

// H(a | b)
inline double conditional_entropy(const Partition& a, const Partition& b) {
    std::map<std::pair<std::string, std::string>, double> joint;
    std::map<std::string, double> marginal;
    for (const auto& [id, l] : b) {
        joint[{l, a.at(id)}] += 1.0;
        marginal[l] += 1.0;
    }
    const double n = double(a.size());
    double h = 0.0;
    for (const auto& [key, c] : joint) h -= c / n * std::log(c / marginal[key.first]);
    return h;
}

struct Vmeasure {
    double h = 0, c = 0, v = 0;
};

inline Vmeasure vmeasure(const Partition& pred, const Partition& gold) {
    const double hg = entropy_of(gold), hp = entropy_of(pred);
    Vmeasure m;
    m.h = hg == 0.0 ? 1.0 : 1.0 - conditional_entropy(gold, pred) / hg;
    m.c = hp == 0.0 ? 1.0 : 1.0 - conditional_entropy(pred, gold) / hp;
    m.v = m.h + m.c == 0.0 ? 0.0 : 2.0 * m.h * m.c / (m.h + m.c);
    return m;
}

inline double log_choose(int n, int k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += std::log(double(n - k + i)) - std::log(double(i));
    return s;
}

// Expected MI under the hypergeometric model, summing the pmf directly.
inline double expected_mi(const std::vector<int>& a, const std::vector<int>& b, int n) {
    double emi = 0.0;
    for (int ai : a)
        for (int bj : b)
            for (int k = std::max(1, ai + bj - n); k <= std::min(ai, bj); ++k) {
                const double pmf = std::exp(log_choose(ai, k) + log_choose(n - ai, bj - k) - log_choose(n, bj));
                emi += pmf * (double(k) / n) * std::log(double(n) * k / (double(ai) * bj));
            }
    return emi;
}

inline double mutual_information(const Partition& pred, const Partition& gold) {
    return entropy_of(gold) - conditional_entropy(gold, pred);
}

inline bool same_up_to_relabeling(const Partition& a, const Partition& b) {
    std::map<std::string, std::string> fwd, back;
    for (const auto& [id, la] : a) {
        const auto& lb = b.at(id);
        if (auto [it, fresh] = fwd.emplace(la, lb); !fresh && it->second != lb) return false;
        if (auto [it, fresh] = back.emplace(lb, la); !fresh && it->second != la) return false;
    }
    return true;
}

inline double ami(const Partition& pred, const Partition& gold) {
    if (same_up_to_relabeling(pred, gold)) return 1.0;
    std::vector<int> a, b;
    for (const auto& [l, s] : clusters_of(pred)) a.push_back(int(s.size()));
    for (const auto& [l, s] : clusters_of(gold)) b.push_back(int(s.size()));
    const int n = int(gold.size());
    const double emi = expected_mi(a, b, n);
    const double den = std::max(entropy_of(pred), entropy_of(gold)) - emi;
    return den == 0.0 ? 0.0 : (mutual_information(pred, gold) - emi) / den;
}

// Link-based MUC: each key cluster S needs |S| - |partitions of S| links.
inline Prf muc(const Partition& pred, const Partition& gold) {
    const auto score = [](const Partition& key, const Partition& response) {
        double num = 0.0, den = 0.0;
        for (const auto& [l, members] : clusters_of(key)) {
            std::set<std::string> parts;
            for (const auto& id : members) parts.insert(response.at(id));
            num += double(members.size() - parts.size());
            den += double(members.size() - 1);
        }
        return den == 0.0 ? 1.0 : num / den;
    };
    return make_prf(score(pred, gold), score(gold, pred));
}

// Random partitions over n ids with at most k labels each.
inline std::pair<Partition, Partition> random_partitions(std::mt19937_64& rng, std::size_t min_docs,
                                                         std::size_t max_docs, std::size_t max_clusters) {
    const std::size_t n = min_docs + rng() % (max_docs - min_docs + 1);
    const std::size_t kp = 1 + rng() % max_clusters, kg = 1 + rng() % max_clusters;
    Partition pred, gold;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = "doc" + std::to_string(i);
        pred[id] = "p" + std::to_string(rng() % kp);
        gold[id] = "g" + std::to_string(rng() % kg);
    }
    return {pred, gold};
}

// Hinge objective minimized over the bias exactly: the objective is convex
// and piecewise linear in b with kinks at b = y_i - w.x_i.
inline double best_bias_objective(const std::vector<double>& w, const std::vector<std::vector<double>>& rows,
                                  const std::vector<int>& labels, double C) {
    std::vector<double> margin(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        margin[i] = std::inner_product(w.begin(), w.end(), rows[i].begin(), 0.0);
    const auto value = [&](double b) {
        double loss = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) loss += std::max(0.0, 1.0 - labels[i] * (margin[i] + b));
        return C * loss;
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) best = std::min(best, value(labels[i] - margin[i]));
    return 0.5 * std::inner_product(w.begin(), w.end(), w.begin(), 0.0) + best;
}

// Zooming grid search over w in [-range, range]^d.
inline double svm_grid_minimum(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels, double C,
                               double range = 3.0) {
    const std::size_t d = rows.at(0).size();
    const int half = d <= 2 ? 20 : 8;
    std::vector<double> center(d, 0.0);
    double step = range / half;
    double best = best_bias_objective(center, rows, labels, C);
    while (step > 1e-9) {
        std::vector<double> best_w = center;
        std::vector<int> idx(d, -half);
        while (true) {
            std::vector<double> w(d);
            for (std::size_t k = 0; k < d; ++k) w[k] = center[k] + idx[k] * step;
            const double v = best_bias_objective(w, rows, labels, C);
            if (v < best) {
                best = v;
                best_w = w;
            }
            std::size_t k = 0;
            while (k < d && ++idx[k] > half) idx[k++] = -half;
            if (k == d) break;
        }
        center = best_w;
        step *= 0.25;
    }
    return best;
}

// Maximum assignment by permutation; rectangular inputs match the smaller side.
inline double hungarian_brute(const std::vector<std::vector<double>>& profit) { return best_alignment(profit); }

}  // namespace oracle
