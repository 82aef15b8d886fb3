#pragma once

#include <cmath>
#include <cstdlib>
#include <future>
#include <vector>

#include "hint/corpus.hpp"
#include "hint/errors.hpp"
#include "hint/hin.hpp"
#include "hint/matrix.hpp"

namespace hint {

/// Combined meta-path similarity matrix for one collection. Entries live in
/// [0,1]; S is exactly symmetric.
struct SimMatrix {
    Matrix S;
    std::vector<double> weights;
    int n() const { return S.rows(); }
};

/// Binary anchor transition matrix T^(1,2) (its transpose is T^(2,1)), kept
/// sparse: each tweet has at most one partner, each news any number of tweets.
struct TransitionMatrix {
    int n1 = 0;
    int n2 = 0;
    std::vector<int> partner_of_tweet;            // -1 when not anchored
    std::vector<std::vector<int>> tweets_of_news;  // ascending tweet indices
    int anchor_count = 0;

    std::vector<std::pair<int, int>> pairs() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(anchor_count);
        for (int i = 0; i < n1; ++i)
            if (partner_of_tweet[i] >= 0) out.emplace_back(i, partner_of_tweet[i]);
        return out;
    }
};

inline void check_weights(const std::vector<CountMatrix>& counts, const std::vector<double>& w) {
    if (counts.size() != w.size()) throw ConfigError("weight vector length does not match meta-path count");
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw ConfigError("meta-path weights must be non-negative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("meta-path weights must sum to 1 (got " + std::to_string(sum) + ")");
}

/// Meta-path similarity of documents x and y:
///   Sim(x,y) = sum_i w_i * (A_i(x,y) + A_i(y,x)) / (|P_i(x~>.)| + |P_i(y~>.)|)
/// A path under which both documents are isolated contributes 0.
inline double hint_similarity(int x, int y, const std::vector<CountMatrix>& counts, const std::vector<double>& w) {
    check_weights(counts, w);
    if (counts.empty()) throw ConfigError("hint_similarity: no count matrices");
    if (x < 0 || y < 0 || x >= counts.front().n || y >= counts.front().n)
        throw ValidationError("hint_similarity: document index out of range");
    double sim = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double denom = counts[i].row_totals[x] + counts[i].row_totals[y];
        if (denom <= 0.0) continue;
        sim += w[i] * (counts[i].at(x, y) + counts[i].at(y, x)) / denom;
    }
    return sim;
}

/// Assembles the full similarity matrix. Equals hint_similarity entrywise
/// (same expression, same accumulation order) but walks the sparse rows.
inline SimMatrix build_similarity(const std::vector<CountMatrix>& counts, const std::vector<double>& w, int threads = 1) {
    check_weights(counts, w);
    if (counts.empty()) throw ConfigError("build_similarity: no count matrices");
    const int n = counts.front().n;
    for (const auto& c : counts)
        if (c.n != n) throw ValidationError("build_similarity: count matrices disagree on collection size");

    SimMatrix out;
    out.S = Matrix(n, n);
    out.weights = w;

    auto fill_rows = [&](int row_begin, int row_end) {
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const auto& cm = counts[i];
            const double wi = w[i];
            if (wi == 0.0) continue;
            for (int x = row_begin; x < row_end; ++x) {
                double* srow = out.S.row(x);
                const double rtx = cm.row_totals[x];
                for (const auto& [y, axy] : cm.rows[x]) {
                    const double denom = rtx + cm.row_totals[y];
                    if (denom <= 0.0) continue;
                    srow[y] += wi * (axy + axy) / denom;  // A symmetric: A(y,x) == A(x,y)
                }
            }
        }
    };

    if (threads <= 1 || n < 64) {
        fill_rows(0, n);
    } else {
        const int nblocks = std::min(threads, n);
        std::vector<std::future<void>> futures;
        for (int b = 0; b < nblocks; ++b) {
            const int begin = static_cast<int>(static_cast<long long>(n) * b / nblocks);
            const int end = static_cast<int>(static_cast<long long>(n) * (b + 1) / nblocks);
            futures.push_back(std::async(std::launch::async, fill_rows, begin, end));
        }
        for (auto& f : futures) f.get();
    }
    return out;
}

/// Materializes the anchor set as a transition matrix.
inline TransitionMatrix build_transition(const AnchorSet& anchors, int n1, int n2) {
    TransitionMatrix t;
    t.n1 = n1;
    t.n2 = n2;
    t.partner_of_tweet.assign(n1, -1);
    t.tweets_of_news.assign(n2, {});
    for (const auto& [i, j] : anchors.pairs) {
        if (i < 0 || i >= n1 || j < 0 || j >= n2)
            throw ValidationError("build_transition: anchor pair (" + std::to_string(i) + "," + std::to_string(j) + ") out of bounds");
        if (t.partner_of_tweet[i] != -1)
            throw ValidationError("build_transition: tweet index " + std::to_string(i) + " appears in more than one anchor pair");
        t.partner_of_tweet[i] = j;
        t.tweets_of_news[j].push_back(i);
        ++t.anchor_count;
    }
    return t;
}

} // namespace hint
