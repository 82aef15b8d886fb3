#include <catch2/catch_amalgamated.hpp>

#include "hint/rng.hpp"
#include "hint/simmat.hpp"
#include "hint/spectral.hpp"

#include "oracles.hpp"

using hint::Matrix;

namespace {

hint::SimMatrix sim_from(const std::vector<std::vector<double>>& a) {
    hint::SimMatrix s;
    s.S = Matrix(static_cast<int>(a.size()), static_cast<int>(a.size()));
    for (int i = 0; i < s.S.rows(); ++i)
        for (int j = 0; j < s.S.cols(); ++j) s.S(i, j) = a[i][j];
    return s;
}

hint::SimMatrix random_sim(hint::Rng& rng, int n, double density = 0.5) {
    hint::SimMatrix s;
    s.S = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform() < density ? rng.uniform() : 0.0;
            s.S(i, j) = v;
            s.S(j, i) = v;
        }
    return s;
}

} // namespace

TEST_CASE("two-node Laplacian") {
    const hint::LaplacianBundle b = hint::build_laplacian(sim_from({{0, 1}, {1, 0}}));
    CHECK(b.degree == std::vector<double>{1.0, 1.0});
    CHECK(b.L(0, 0) == 1.0);
    CHECK(b.L(0, 1) == -1.0);
    CHECK(b.L(1, 0) == -1.0);
    CHECK(b.L(1, 1) == 1.0);
    // normalized Laplacian of a single edge has eigenvalues {0, 2}
    const auto eig = oracles::jacobi_eigenvalues(b.L_tilde);
    CHECK(std::abs(eig[0] - 0.0) < 1e-12);
    CHECK(std::abs(eig[1] - 2.0) < 1e-12);
}

TEST_CASE("isolated rows are regularized, not divided by zero") {
    const hint::LaplacianBundle b = hint::build_laplacian(sim_from({{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
    CHECK(b.degree[0] == hint::kIsolatedDegreeEpsilon);
    CHECK(std::isfinite(b.d_inv_sqrt[0]));
    for (int j = 0; j < 3; ++j) CHECK(b.L(0, j) == 0.0);
}

TEST_CASE("asymmetric input is rejected") {
    hint::SimMatrix s = sim_from({{0, 1}, {0, 0}});
    CHECK_THROWS_AS(hint::build_laplacian(s), hint::ValidationError);
}

TEST_CASE("Laplacian invariants on random similarity matrices") {
    hint::Rng rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3 + rng.uniform_int(12);
        const hint::SimMatrix s = random_sim(rng, n);
        const hint::LaplacianBundle b = hint::build_laplacian(s);
        for (int i = 0; i < n; ++i) {
            double row_sum = 0.0;
            for (int j = 0; j < n; ++j) row_sum += b.L(i, j);
            CHECK(std::abs(row_sum) < 1e-10);
        }
        const auto eig = oracles::jacobi_eigenvalues(b.L_tilde);
        CHECK(eig.front() > -1e-8);
        CHECK(eig.back() < 2.0 + 1e-8);
        // PSD check: any orthonormal X has non-negative trace quadratic
        hint::Matrix x = oracles::random_stiefel(rng, n, std::min(3, n));
        CHECK(hint::trace_quadratic(b.L_tilde, x) > -1e-9);
    }
}

TEST_CASE("kmeans recovers well-separated 1-D groups") {
    Matrix pts(6, 1);
    pts(0, 0) = 0.0;
    pts(1, 0) = 0.1;
    pts(2, 0) = -0.1;
    pts(3, 0) = 10.0;
    pts(4, 0) = 10.1;
    pts(5, 0) = 9.9;
    const auto labels = hint::kmeans(pts, 2, 42);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[1] == labels[2]);
    CHECK(labels[3] == labels[4]);
    CHECK(labels[4] == labels[5]);
    CHECK(labels[0] != labels[3]);
}

TEST_CASE("kmeans with k = n separates distinct points; k > n rejected") {
    Matrix pts(4, 2);
    for (int i = 0; i < 4; ++i) {
        pts(i, 0) = i;
        pts(i, 1) = -i;
    }
    const auto labels = hint::kmeans(pts, 4, 1);
    std::set<int> distinct(labels.begin(), labels.end());
    CHECK(distinct.size() == 4);
    CHECK_THROWS_AS(hint::kmeans(pts, 5, 1), hint::ValidationError);
}

TEST_CASE("kmeans handles duplicate points and repopulates empty clusters") {
    // five copies of one point plus one outlier, k = 3: seeding runs out of
    // positive-mass candidates and the empty-cluster reseed must kick in
    Matrix pts(6, 2);
    for (int i = 0; i < 5; ++i) {
        pts(i, 0) = 1.0;
        pts(i, 1) = 2.0;
    }
    pts(5, 0) = 9.0;
    pts(5, 1) = -3.0;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL}) {
        const auto labels = hint::kmeans(pts, 3, seed);
        std::vector<int> counts(3, 0);
        for (int l : labels) ++counts[l];
        for (int c = 0; c < 3; ++c) CHECK(counts[c] > 0);  // no empty cluster survives
        // the outlier never shares a cluster with all five duplicates
        int outlier_cluster = labels[5];
        CHECK(counts[outlier_cluster] <= 2);
    }
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
    hint::Rng rng(7);
    Matrix pts(40, 3);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 3; ++j) pts(i, j) = rng.normal();
    const auto a = hint::kmeans(pts, 5, 1234);
    const auto b = hint::kmeans(pts, 5, 1234);
    CHECK(a == b);
}

TEST_CASE("init_embedding normalizes the indicator") {
    // labels {0,0,1,1} -> columns (1/sqrt2, 1/sqrt2, 0, 0) and (0, 0, 1/sqrt2, 1/sqrt2)
    const Matrix z = hint::indicator_matrix({0, 0, 1, 1}, 2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(z(0, 0) == r);
    CHECK(z(1, 0) == r);
    CHECK(z(2, 0) == 0.0);
    CHECK(z(2, 1) == r);
    CHECK(z(3, 1) == r);
    Matrix x = z;
    hint::orthonormalize_columns(x);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(x(i, j) - z(i, j)) < 1e-15);
}

TEST_CASE("init_embedding output is orthonormal and hardens back to the k-means partition") {
    hint::Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6 + rng.uniform_int(20);
        const hint::SimMatrix s = random_sim(rng, n, 0.7);
        const int k = 2 + rng.uniform_int(3);
        const hint::Embedding e = hint::init_embedding(s, k, 1000 + trial);
        CHECK(hint::orthogonality_drift(e.X) <= 1e-8);
        const auto labels = hint::kmeans(s.S, k, 1000 + trial);
        for (int i = 0; i < n; ++i) {
            int argmax = 0;
            for (int j = 1; j < k; ++j)
                if (std::abs(e.X(i, j)) > std::abs(e.X(i, argmax))) argmax = j;
            CHECK(argmax == labels[i]);
        }
    }
}

TEST_CASE("n = k embedding is a permutation matrix") {
    Matrix pts(3, 3);
    pts(0, 0) = 1.0;
    pts(1, 1) = 1.0;
    pts(2, 2) = 1.0;
    hint::SimMatrix s;
    s.S = pts;
    const hint::Embedding e = hint::init_embedding(s, 3, 9);
    int ones = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (std::abs(e.X(i, j) - 1.0) < 1e-12) ++ones;
            else CHECK(std::abs(e.X(i, j)) < 1e-12);
        }
    CHECK(ones == 3);
}
