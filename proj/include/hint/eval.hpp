#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "hint/errors.hpp"
#include "hint/matrix.hpp"
#include "hint/mutual.hpp"
#include "hint/simmat.hpp"

namespace hint {

namespace detail {

inline std::map<int, int> label_counts(const std::vector<int>& labels) {
    std::map<int, int> counts;
    for (int l : labels) ++counts[l];
    return counts;
}

inline double entropy(const std::map<int, int>& counts, double n) {
    double h = 0.0;
    for (const auto& [l, c] : counts) {
        const double p = c / n;
        h -= p * std::log(p);
    }
    return h;
}

} // namespace detail

/// Normalized mutual information I(L;T)/sqrt(H(L) H(T)), natural log. When
/// both partitions are single clusters the value is 1 (identical partitions);
/// when exactly one is, it is 0.
inline double nmi(const std::vector<int>& labels, const std::vector<int>& truth, bool arithmetic_mean = false) {
    if (labels.size() != truth.size()) throw ValidationError("nmi: label vectors differ in length");
    if (labels.empty()) throw ValidationError("nmi: empty label vectors");
    const double n = static_cast<double>(labels.size());
    const auto ca = detail::label_counts(labels);
    const auto cb = detail::label_counts(truth);
    std::map<std::pair<int, int>, int> joint;
    for (std::size_t i = 0; i < labels.size(); ++i) ++joint[{labels[i], truth[i]}];

    const double ha = detail::entropy(ca, n);
    const double hb = detail::entropy(cb, n);
    if (ha == 0.0 && hb == 0.0) return 1.0;  // both single-cluster, hence identical
    if (ha == 0.0 || hb == 0.0) return 0.0;
    // a bijective contingency table means the partitions are identical
    if (joint.size() == ca.size() && joint.size() == cb.size()) return 1.0;

    double mi = 0.0;
    for (const auto& [lt, c] : joint) {
        const double pxy = c / n;
        const double px = ca.at(lt.first) / n;
        const double py = cb.at(lt.second) / n;
        mi += pxy * std::log(pxy / (px * py));
    }
    if (mi < 0.0) mi = 0.0;  // guard tiny negative rounding
    const double denom = arithmetic_mean ? 0.5 * (ha + hb) : std::sqrt(ha * hb);
    return std::min(mi / denom, 1.0);
}

/// Pairwise F1 over same-cluster document pairs. Degenerate conventions:
/// 1 when neither partition has a same-cluster pair, 0 when precision or
/// recall is undefined on one side only.
inline double pairwise_f1(const std::vector<int>& labels, const std::vector<int>& truth) {
    if (labels.size() != truth.size()) throw ValidationError("pairwise_f1: label vectors differ in length");
    if (labels.empty()) throw ValidationError("pairwise_f1: empty label vectors");
    long long tp = 0, fp = 0, fn = 0;
    const std::size_t n = labels.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same_l = labels[i] == labels[j];
            const bool same_t = truth[i] == truth[j];
            if (same_l && same_t)
                ++tp;
            else if (same_l)
                ++fp;
            else if (same_t)
                ++fn;
        }
    if (tp + fp == 0 && tp + fn == 0) return 1.0;  // no same-cluster pairs anywhere
    if (tp + fp == 0 || tp + fn == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

struct ConditionalEntropyReport {
    double plain = 0.0;        // H(Y|X) from the empirical joint over anchored tweets
    double max_aligned = 0.0;  // the per-column max reading of the same joint
};

/// Conditional entropy H(Y|X) where X is the tweet clustering and Y the news
/// clustering transferred to each anchored tweet through its anchor partner:
///   H(Y|X) = sum_{x,y} p(x,y) log(p(x)/p(x,y)).
/// The max_aligned variant keeps only the largest joint cell for each
/// transferred label y.
inline ConditionalEntropyReport conditional_entropy(const Matrix& h1, const Matrix& h2, const TransitionMatrix& t) {
    if (t.anchor_count < 1) throw ValidationError("conditional_entropy: no anchored documents");
    const std::vector<int> labels1 = harden(h1);
    const std::vector<int> labels2 = harden(h2);
    std::map<std::pair<int, int>, int> joint;
    std::map<int, int> marginal_x;
    int total = 0;
    for (int i = 0; i < t.n1; ++i) {
        const int j = t.partner_of_tweet[i];
        if (j < 0) continue;
        ++joint[{labels1[i], labels2[j]}];
        ++marginal_x[labels1[i]];
        ++total;
    }
    ConditionalEntropyReport rep;
    const double n = static_cast<double>(total);
    for (const auto& [xy, c] : joint) {
        const double pxy = c / n;
        const double px = marginal_x.at(xy.first) / n;
        rep.plain += pxy * std::log(px / pxy);
    }
    if (rep.plain < 0.0) rep.plain = 0.0;

    std::map<int, std::pair<int, int>> best_per_y;  // y -> (count, x)
    for (const auto& [xy, c] : joint) {
        auto it = best_per_y.find(xy.second);
        if (it == best_per_y.end() || c > it->second.first) best_per_y[xy.second] = {c, xy.first};
    }
    for (const auto& [y, cx] : best_per_y) {
        const double pxy = cx.first / n;
        const double px = marginal_x.at(cx.second) / n;
        rep.max_aligned += pxy * std::log(px / pxy);
    }
    if (rep.max_aligned < 0.0) rep.max_aligned = 0.0;
    return rep;
}

/// Clustering quality report for one run against ground truth.
struct MetricReport {
    double nmi1 = 0.0;
    double nmi2 = 0.0;
    double f1_1 = 0.0;
    double f1_2 = 0.0;
    double cond_entropy = 0.0;
    double cond_entropy_max_aligned = 0.0;
    double d = 0.0;
    double nd = 0.0;
};

} // namespace hint
