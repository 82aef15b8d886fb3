#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hint/eval.hpp"
#include "hint/rng.hpp"
#include "hint/synth.hpp"

using hint::Matrix;

namespace {

Matrix binary_h(const std::vector<int>& labels, int k) {
    Matrix h(static_cast<int>(labels.size()), k);
    for (int i = 0; i < h.rows(); ++i) h(i, labels[i]) = 1.0;
    return h;
}

} // namespace

TEST_CASE("nmi is 1 for identical partitions up to relabeling") {
    CHECK(hint::nmi({0, 0, 1, 1, 2}, {0, 0, 1, 1, 2}) == 1.0);
    CHECK(std::abs(hint::nmi({2, 2, 0, 0, 1}, {0, 0, 1, 1, 2}) - 1.0) < 1e-12);
}

TEST_CASE("nmi is 0 for a constant labeling against balanced truth") {
    CHECK(hint::nmi({0, 0, 0, 0}, {0, 0, 1, 1}) == 0.0);
}

TEST_CASE("nmi of the hand-computed independent 2x2 table is 0") {
    CHECK(std::abs(hint::nmi({0, 0, 1, 1}, {0, 1, 0, 1})) < 1e-12);
}

TEST_CASE("nmi handles the single-cluster corner and rejects length mismatch") {
    CHECK(hint::nmi({0, 0, 0}, {5, 5, 5}) == 1.0);
    CHECK_THROWS_AS(hint::nmi({0, 1}, {0, 1, 2}), hint::ValidationError);
}

TEST_CASE("nmi is invariant under relabeling either argument") {
    hint::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> a(30), b(30);
        for (int i = 0; i < 30; ++i) {
            a[i] = rng.uniform_int(4);
            b[i] = rng.uniform_int(3);
        }
        std::vector<int> a_perm(30);
        const int shift = 1 + rng.uniform_int(3);
        for (int i = 0; i < 30; ++i) a_perm[i] = (a[i] + shift) % 4;
        CHECK(std::abs(hint::nmi(a, b) - hint::nmi(a_perm, b)) < 1e-12);
        CHECK(std::abs(hint::nmi(a, b) - hint::nmi(b, a)) < 1e-12);
    }
}

TEST_CASE("pairwise F1 equals 1 on identical partitions") {
    CHECK(hint::pairwise_f1({0, 1, 0, 2}, {5, 3, 5, 7}) == 1.0);
}

TEST_CASE("pairwise F1 degenerate conventions") {
    CHECK(hint::pairwise_f1({0, 1, 2, 3}, {0, 0, 0, 0}) == 0.0);  // singletons vs one cluster
    CHECK(hint::pairwise_f1({0, 1, 2}, {3, 4, 5}) == 1.0);        // no same-cluster pairs anywhere
}

TEST_CASE("pairwise F1 hand-enumerated example: TP=1 FP=1 FN=2 -> 0.4") {
    CHECK(std::abs(hint::pairwise_f1({0, 0, 1, 1}, {0, 0, 0, 1}) - 0.4) < 1e-15);
}

TEST_CASE("conditional entropy is 0 when the transfer is determined") {
    // anchored tweets' news labels mirror the tweet labels exactly
    hint::AnchorSet anchors;
    anchors.pairs = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto t = hint::build_transition(anchors, 4, 4);
    const auto rep = hint::conditional_entropy(binary_h({0, 0, 1, 1}, 2), binary_h({0, 0, 1, 1}, 2), t);
    CHECK(rep.plain == 0.0);
}

TEST_CASE("conditional entropy of the uniform independent 2x2 case is ln 2") {
    hint::AnchorSet anchors;
    anchors.pairs = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto t = hint::build_transition(anchors, 4, 4);
    const auto rep = hint::conditional_entropy(binary_h({0, 0, 1, 1}, 2), binary_h({0, 1, 0, 1}, 2), t);
    CHECK(std::abs(rep.plain - std::log(2.0)) < 1e-12);
}

TEST_CASE("conditional entropy of a single anchored document is 0") {
    hint::AnchorSet anchors;
    anchors.pairs = {{0, 0}};
    const auto t = hint::build_transition(anchors, 3, 2);
    const auto rep = hint::conditional_entropy(binary_h({0, 1, 1}, 2), binary_h({1, 0}, 2), t);
    CHECK(rep.plain == 0.0);
}

TEST_CASE("conditional entropy requires anchored documents") {
    const auto t = hint::build_transition({}, 2, 2);
    CHECK_THROWS_AS(hint::conditional_entropy(binary_h({0, 1}, 2), binary_h({0, 1}, 2), t), hint::ValidationError);
}

TEST_CASE("planted anchor pairing has lower conditional entropy than a random pairing") {
    // the directional claim behind the cluster-correlation study, 20 seeds
    double sum_true = 0.0, sum_random = 0.0;
    for (int s = 0; s < 20; ++s) {
        hint::SynthConfig cfg;
        cfg.k = 4;
        cfg.n1 = 80;
        cfg.n2 = 60;
        cfg.anchor_rate = 0.6;
        cfg.seed = 500 + s;
        const auto synth = hint::generate(cfg);
        const auto anchors = hint::extract_anchors(synth.corpus, 1);
        REQUIRE(anchors.size() > 0);
        const auto t_true = hint::build_transition(anchors, cfg.n1, cfg.n2);
        hint::Rng rng(900 + s);
        hint::AnchorSet shuffled;
        for (const auto& [i, j] : anchors.pairs) shuffled.pairs.emplace_back(i, rng.uniform_int(cfg.n2));
        const auto t_random = hint::build_transition(shuffled, cfg.n1, cfg.n2);
        const auto h1 = binary_h(synth.truth1, cfg.k);
        const auto h2 = binary_h(synth.truth2, cfg.k);
        sum_true += hint::conditional_entropy(h1, h2, t_true).plain;
        sum_random += hint::conditional_entropy(h1, h2, t_random).plain;
    }
    CHECK(sum_true / 20 < sum_random / 20);
}

TEST_CASE("conditional entropy is non-negative on random inputs") {
    hint::Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 10;
        hint::AnchorSet anchors;
        for (int i = 0; i < n; ++i)
            if (rng.uniform() < 0.7) anchors.pairs.emplace_back(i, rng.uniform_int(n));
        if (anchors.pairs.empty()) anchors.pairs = {{0, 0}};
        const auto t = hint::build_transition(anchors, n, n);
        std::vector<int> l1(n), l2(n);
        for (int i = 0; i < n; ++i) {
            l1[i] = rng.uniform_int(3);
            l2[i] = rng.uniform_int(3);
        }
        const auto rep = hint::conditional_entropy(binary_h(l1, 3), binary_h(l2, 3), t);
        CHECK(rep.plain >= 0.0);
        CHECK(rep.max_aligned >= 0.0);
        CHECK(std::isfinite(rep.plain));
    }
}
