#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hint/corpus.hpp"
#include "hint/errors.hpp"
#include "hint/hin.hpp"
#include "hint/matrix.hpp"
#include "hint/rng.hpp"
#include "hint/simmat.hpp"
#include "hint/spectral.hpp"
#include "hint/stiefel.hpp"

namespace hint {

/// Soft cluster memberships: row i gives document i's confidence over the k
/// clusters. Recovered from the optimizer as H = D^{-1/2} X.
struct ConfidenceMatrix {
    Matrix H;
    int k = 0;
};

/// Hard labels by row argmax of |H| (columns carry an eigenvector-style sign
/// ambiguity); ties go to the lowest column.
inline std::vector<int> harden(const Matrix& h) {
    if (h.cols() < 1) throw ValidationError("harden: confidence matrix has no columns");
    if (!all_finite(h)) throw ValidationError("harden: confidence matrix has non-finite entries");
    std::vector<int> labels(h.rows(), 0);
    for (int i = 0; i < h.rows(); ++i) {
        int best = 0;
        double best_v = std::abs(h(i, 0));
        for (int j = 1; j < h.cols(); ++j) {
            const double v = std::abs(h(i, j));
            if (v > best_v) {
                best_v = v;
                best = j;
            }
        }
        labels[i] = best;
    }
    return labels;
}

struct InconsistencyReport {
    double d = 0.0;   // raw inconsistency
    double nd = 0.0;  // d / (|R|(|R|-1))
};

/// Mutual clustering inconsistency between the two confidence matrices,
/// pruned to the anchored-news space: H~1 = T12^T H1 aggregates each news'
/// anchored tweets, H~2 = (T12^T T12) H2 carries the matching multiplicities,
/// and d counts each unordered anchored-news pair once,
///   d = 1/2 ||H~1 H~1^T - H~2 H~2^T||_F^2,
/// which is 0 exactly when the two clusterings agree on every anchored pair.
inline InconsistencyReport inconsistency(const Matrix& h1, const Matrix& h2, const TransitionMatrix& t) {
    if (t.anchor_count < 2) throw ConfigError("inconsistency: normalization undefined with fewer than 2 anchor pairs");
    if (h1.rows() != t.n1 || h2.rows() != t.n2) throw ValidationError("inconsistency: confidence matrix sizes do not match anchors");
    PenaltyOperator p1, p2;
    build_penalty_operators(t, {}, {}, p1, p2);
    InconsistencyReport rep;
    rep.d = penalty_numerator(p1.apply(h1), p2.apply(h2));
    rep.nd = rep.d / (static_cast<double>(t.anchor_count) * (t.anchor_count - 1));
    return rep;
}

/// The per-pair form of the inconsistency: for every ordered pair of anchored
/// news (i,j), the squared differences between the news co-membership score
/// and each of the c_i * c_j anchored-tweet co-membership scores. This is a
/// genuinely different aggregation from the matrix form above (sum of squares
/// vs square of sums); it is reported alongside, never silently reconciled.
inline double pairwise_inconsistency(const Matrix& h1, const Matrix& h2, const TransitionMatrix& t) {
    if (h1.rows() != t.n1 || h2.rows() != t.n2) throw ValidationError("pairwise_inconsistency: sizes do not match anchors");
    std::vector<int> anchored;
    for (int j = 0; j < t.n2; ++j)
        if (!t.tweets_of_news[j].empty()) anchored.push_back(j);
    auto dot = [](const Matrix& m, int a, int b) {
        double s = 0.0;
        for (int c = 0; c < m.cols(); ++c) s += m(a, c) * m(b, c);
        return s;
    };
    double total = 0.0;
    for (int i : anchored) {
        for (int j : anchored) {
            const double news_score = dot(h2, i, j);
            for (int p : t.tweets_of_news[i])
                for (int q : t.tweets_of_news[j]) {
                    const double diff = news_score - dot(h1, p, q);
                    total += diff * diff;
                }
        }
    }
    return total;
}

struct ClusterLink {
    int cluster1 = 0;
    int cluster2 = 0;
    double anchored_fraction = 0.0;
};

/// For each tweet cluster, the fraction of its anchored members whose partner
/// lands in the best news cluster; a link is emitted when that fraction
/// reaches the threshold.
inline std::vector<ClusterLink> link_clusters(const std::vector<int>& labels1, const std::vector<int>& labels2,
                                              const TransitionMatrix& t, int k1, int k2, double link_threshold = 0.8) {
    if (!(link_threshold > 0.0 && link_threshold <= 1.0)) throw ConfigError("link_threshold must be in (0,1]");
    std::vector<std::vector<int>> counts(k1, std::vector<int>(k2, 0));
    std::vector<int> anchored_members(k1, 0);
    for (int i = 0; i < t.n1; ++i) {
        const int j = t.partner_of_tweet[i];
        if (j < 0) continue;
        ++counts[labels1[i]][labels2[j]];
        ++anchored_members[labels1[i]];
    }
    std::vector<ClusterLink> links;
    for (int c1 = 0; c1 < k1; ++c1) {
        if (anchored_members[c1] == 0) continue;
        int best_c2 = 0;
        for (int c2 = 1; c2 < k2; ++c2)
            if (counts[c1][c2] > counts[c1][best_c2]) best_c2 = c2;
        const double fraction = static_cast<double>(counts[c1][best_c2]) / anchored_members[c1];
        if (fraction >= link_threshold) links.push_back({c1, best_c2, fraction});
    }
    return links;
}

/// Pipeline configuration. Defaults: theta=1, uniform 1/6 and 1/4 meta-path
/// weights, alpha=beta=1.
struct HintConfig {
    int k1 = 0;
    int k2 = 0;
    double theta = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::vector<double> weights1;  // empty: uniform over the tweet meta-paths
    std::vector<double> weights2;  // empty: uniform over the news meta-paths
    std::uint64_t seed = 0;
    int min_common = 1;
    double link_threshold = 0.8;
    bool split_retweet = false;
    int threads = 1;
    SearchParams search;
};

struct RunMetrics {
    double inconsistency_d = 0.0;
    double normalized_inconsistency = 0.0;
    double pairwise_d = 0.0;
    double objective_initial = 0.0;
    double objective_final = 0.0;
    int rounds = 0;
    bool converged = false;
    int anchor_count = 0;
    int drift_warnings = 0;
};

struct MutualClustering {
    std::vector<int> labels1;
    std::vector<int> labels2;
    ConfidenceMatrix H1;
    ConfidenceMatrix H2;
    std::vector<ClusterLink> links;
    RunMetrics metrics;
    std::vector<double> objective_trace;
};

/// Precomputed matrices shared by run_hint and the inspect tooling.
struct PipelineInputs {
    AnchorSet anchors;
    std::vector<CountMatrix> counts1;
    std::vector<CountMatrix> counts2;
    SimMatrix S1;
    SimMatrix S2;
    TransitionMatrix T;
    std::vector<double> weights1;
    std::vector<double> weights2;
};

inline std::vector<double> uniform_weights(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

inline PipelineInputs build_pipeline_inputs(const CorpusPair& corpus, const HintConfig& cfg) {
    if (corpus.collection1.empty() || corpus.collection2.empty())
        throw ValidationError("both collections must be non-empty before clustering");
    PipelineInputs in;
    in.anchors = extract_anchors(corpus, cfg.min_common);
    const auto paths1 = default_meta_paths(Source::Tweet, cfg.split_retweet);
    const auto paths2 = default_meta_paths(Source::News);
    in.counts1 = build_count_matrices(corpus.collection1, paths1, cfg.threads);
    in.counts2 = build_count_matrices(corpus.collection2, paths2, cfg.threads);
    in.weights1 = cfg.weights1.empty() ? uniform_weights(paths1.size()) : cfg.weights1;
    in.weights2 = cfg.weights2.empty() ? uniform_weights(paths2.size()) : cfg.weights2;
    in.S1 = build_similarity(in.counts1, in.weights1, cfg.threads);
    in.S2 = build_similarity(in.counts2, in.weights2, cfg.threads);
    in.T = build_transition(in.anchors, static_cast<int>(corpus.collection1.size()), static_cast<int>(corpus.collection2.size()));
    return in;
}

/// Confidence matrix from the optimizer's embedding: H = D^{-1/2} X.
inline Matrix confidence_from_embedding(const Matrix& x, const std::vector<double>& d_inv_sqrt) {
    Matrix h(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i) {
        const double s = d_inv_sqrt[i];
        const double* xr = x.row(i);
        double* hr = h.row(i);
        for (int j = 0; j < x.cols(); ++j) hr[j] = s * xr[j];
    }
    return h;
}

struct SingleRunResult {
    std::vector<int> labels;
    ConfidenceMatrix H;
    Matrix X;
    double objective = 0.0;
    bool grad_converged = false;
};

/// Plain normalized-cut pipeline on one similarity matrix (the theta=0
/// reference): k-means init, curvilinear solve of Tr(X^T L~ X), harden.
inline SingleRunResult run_single(const SimMatrix& sim, int k, std::uint64_t seed, const SearchParams& params) {
    if (k < 1 || k > sim.n()) throw ValidationError("run_single: need 1 <= k <= n");
    const LaplacianBundle bundle = build_laplacian(sim);
    Embedding x0 = init_embedding(sim, k, seed);
    SingleVarProblem prob;
    prob.L_tilde = &bundle.L_tilde;
    prob.weight = 1.0;
    prob.pen_scale = 0.0;
    CurvilinearResult res = curvilinear_solve(std::move(x0.X), [&prob](const Matrix& m) { return prob.value(m); },
                                              [&prob](const Matrix& m) { return prob.gradient(m); }, params);
    SingleRunResult out;
    out.X = std::move(res.X);
    out.H.H = confidence_from_embedding(out.X, bundle.d_inv_sqrt);
    out.H.k = k;
    out.labels = harden(out.H.H);
    out.objective = res.objective;
    out.grad_converged = res.grad_converged;
    return out;
}

/// The full mutual-clustering pipeline: anchors, count matrices, similarity
/// and transition matrices, Laplacians, k-means initialization, alternating
/// curvilinear optimization, confidence recovery, hardening, cluster linking.
/// Deterministic for a fixed seed.
inline MutualClustering run_hint(const CorpusPair& corpus, const HintConfig& cfg, const AlternatingObserver& observer = {}) {
    const int n1 = static_cast<int>(corpus.collection1.size());
    const int n2 = static_cast<int>(corpus.collection2.size());
    if (cfg.k1 < 1 || cfg.k1 > n1) throw ConfigError("run_hint: need 1 <= k1 <= " + std::to_string(n1));
    if (cfg.k2 < 1 || cfg.k2 > n2) throw ConfigError("run_hint: need 1 <= k2 <= " + std::to_string(n2));

    PipelineInputs in = build_pipeline_inputs(corpus, cfg);
    if (cfg.theta > 0.0 && in.T.anchor_count < 2)
        throw ConfigError("penalty undefined with fewer than 2 anchor pairs (|R|=" + std::to_string(in.T.anchor_count) +
                          "); set theta=0");

    const LaplacianBundle b1 = build_laplacian(in.S1);
    const LaplacianBundle b2 = build_laplacian(in.S2);
    Embedding x1 = init_embedding(in.S1, cfg.k1, side_seed(cfg.seed, 1));
    Embedding x2 = init_embedding(in.S2, cfg.k2, side_seed(cfg.seed, 2));

    ObjectiveContext ctx = make_objective_context(b1, b2, in.T, cfg.theta, cfg.alpha, cfg.beta);
    AlternatingResult alt = alternating_solve(std::move(x1.X), std::move(x2.X), ctx, cfg.search, observer);

    MutualClustering out;
    out.H1.H = confidence_from_embedding(alt.X1, b1.d_inv_sqrt);
    out.H1.k = cfg.k1;
    out.H2.H = confidence_from_embedding(alt.X2, b2.d_inv_sqrt);
    out.H2.k = cfg.k2;
    out.labels1 = harden(out.H1.H);
    out.labels2 = harden(out.H2.H);
    out.links = link_clusters(out.labels1, out.labels2, in.T, cfg.k1, cfg.k2, cfg.link_threshold);
    out.objective_trace = alt.trace;

    out.metrics.anchor_count = in.T.anchor_count;
    out.metrics.objective_initial = alt.trace.front();
    out.metrics.objective_final = alt.trace.back();
    out.metrics.rounds = alt.rounds;
    out.metrics.converged = alt.converged;
    out.metrics.drift_warnings = alt.drift_warnings;
    if (in.T.anchor_count >= 2) {
        const InconsistencyReport rep = inconsistency(out.H1.H, out.H2.H, in.T);
        out.metrics.inconsistency_d = rep.d;
        out.metrics.normalized_inconsistency = rep.nd;
        out.metrics.pairwise_d = pairwise_inconsistency(out.H1.H, out.H2.H, in.T);
    }
    return out;
}

} // namespace hint
