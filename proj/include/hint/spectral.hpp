#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hint/errors.hpp"
#include "hint/matrix.hpp"
#include "hint/rng.hpp"
#include "hint/simmat.hpp"

namespace hint {

/// Degree matrix, unnormalized Laplacian L = D - S and its symmetric
/// normalization D^{-1/2} L D^{-1/2}. Rows with zero degree get an epsilon
/// self-similarity before inversion so D^{-1/2} stays finite.
struct LaplacianBundle {
    std::vector<double> degree;
    std::vector<double> d_inv_sqrt;
    Matrix L;
    Matrix L_tilde;
    int n() const { return L.rows(); }
};

inline constexpr double kIsolatedDegreeEpsilon = 1e-8;

inline LaplacianBundle build_laplacian(const SimMatrix& sim) {
    const int n = sim.n();
    const Matrix& s = sim.S;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(s(i, j) - s(j, i)) > 1e-12)
                throw ValidationError("build_laplacian: similarity matrix is not symmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");

    LaplacianBundle b;
    b.degree.assign(n, 0.0);
    b.d_inv_sqrt.assign(n, 0.0);
    b.L = Matrix(n, n);

    std::vector<char> isolated(n, 0);
    for (int i = 0; i < n; ++i) {
        double deg = 0.0;
        const double* row = s.row(i);
        for (int j = 0; j < n; ++j) deg += row[j];
        if (deg <= 0.0) {
            isolated[i] = 1;
            deg = kIsolatedDegreeEpsilon;
        }
        b.degree[i] = deg;
        b.d_inv_sqrt[i] = 1.0 / std::sqrt(deg);
    }
    for (int i = 0; i < n; ++i) {
        const double* row = s.row(i);
        double* lrow = b.L.row(i);
        for (int j = 0; j < n; ++j) lrow[j] = -row[j];
        lrow[i] += b.degree[i];
        if (isolated[i]) lrow[i] -= kIsolatedDegreeEpsilon;  // the epsilon self-loop carries no cut cost
    }
    b.L_tilde = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
        const double di = b.d_inv_sqrt[i];
        for (int j = 0; j < n; ++j) b.L_tilde(i, j) = di * b.L(i, j) * b.d_inv_sqrt[j];
    }
    return b;
}

/// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed seed:
/// ties go to the lowest index, empty clusters are re-seeded from the point
/// farthest from its current center. Runs to an assignment fixpoint or
/// max_iter rounds.
inline std::vector<int> kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter = 300) {
    const int n = points.rows();
    const int d = points.cols();
    if (k < 1) throw ValidationError("kmeans: k must be >= 1");
    if (k > n) throw ValidationError("kmeans: k=" + std::to_string(k) + " exceeds point count " + std::to_string(n));

    auto dist2_to = [&](int p, const double* center) {
        const double* row = points.row(p);
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            const double diff = row[j] - center[j];
            s += diff * diff;
        }
        return s;
    };

    Rng rng(seed);
    Matrix centers(k, d);
    std::vector<double> min_dist2(n, std::numeric_limits<double>::infinity());
    {
        int first = rng.uniform_int(n);
        for (int j = 0; j < d; ++j) centers(0, j) = points(first, j);
        for (int p = 0; p < n; ++p) min_dist2[p] = dist2_to(p, centers.row(0));
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (int p = 0; p < n; ++p) total += min_dist2[p];
            int chosen = -1;
            if (total > 0.0) {
                const double target = rng.uniform() * total;
                double cum = 0.0;
                for (int p = 0; p < n; ++p) {
                    cum += min_dist2[p];
                    if (cum >= target) {
                        chosen = p;
                        break;
                    }
                }
                if (chosen < 0) chosen = n - 1;
            } else {
                // only duplicate points remain; take the first index not yet a center
                std::vector<char> used(n, 0);
                for (int cc = 0; cc < c; ++cc)
                    for (int p = 0; p < n; ++p)
                        if (!used[p] && dist2_to(p, centers.row(cc)) == 0.0) used[p] = 1;
                chosen = 0;
                for (int p = 0; p < n; ++p)
                    if (!used[p]) {
                        chosen = p;
                        break;
                    }
            }
            for (int j = 0; j < d; ++j) centers(c, j) = points(chosen, j);
            for (int p = 0; p < n; ++p) {
                const double d2 = dist2_to(p, centers.row(c));
                if (d2 < min_dist2[p]) min_dist2[p] = d2;
            }
        }
    }

    std::vector<int> labels(n, 0);
    std::vector<int> counts(k, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = iter == 0;
        for (int p = 0; p < n; ++p) {
            int best = 0;
            double best_d2 = dist2_to(p, centers.row(0));
            for (int c = 1; c < k; ++c) {
                const double d2 = dist2_to(p, centers.row(c));
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = c;
                }
            }
            if (labels[p] != best) {
                labels[p] = best;
                changed = true;
            }
        }
        counts.assign(k, 0);
        for (int p = 0; p < n; ++p) ++counts[labels[p]];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            int farthest = -1;
            double far_d2 = -1.0;
            for (int p = 0; p < n; ++p) {
                if (counts[labels[p]] <= 1) continue;
                const double d2 = dist2_to(p, centers.row(labels[p]));
                if (d2 > far_d2) {
                    far_d2 = d2;
                    farthest = p;
                }
            }
            if (farthest < 0) throw NumericalError("kmeans: cannot repopulate empty cluster");
            --counts[labels[farthest]];
            labels[farthest] = c;
            counts[c] = 1;
            changed = true;
        }
        if (!changed) break;
        centers = Matrix(k, d);
        for (int p = 0; p < n; ++p) {
            double* crow = centers.row(labels[p]);
            const double* prow = points.row(p);
            for (int j = 0; j < d; ++j) crow[j] += prow[j];
        }
        for (int c = 0; c < k; ++c) {
            double* crow = centers.row(c);
            for (int j = 0; j < d; ++j) crow[j] /= counts[c];
        }
    }
    return labels;
}

/// n x k matrix with orthonormal columns (a point on the Stiefel manifold).
struct Embedding {
    Matrix X;
    int k = 0;
};

/// Cluster-indicator matrix from labels, column-normalized.
inline Matrix indicator_matrix(const std::vector<int>& labels, int k) {
    const int n = static_cast<int>(labels.size());
    Matrix z(n, k);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
        if (labels[i] < 0 || labels[i] >= k) throw ValidationError("indicator_matrix: label out of range");
        ++counts[labels[i]];
    }
    for (int i = 0; i < n; ++i) z(i, labels[i]) = 1.0 / std::sqrt(static_cast<double>(counts[labels[i]]));
    return z;
}

/// K-means on the raw similarity rows, hardened into a normalized indicator
/// matrix and orthonormalized. This is the optimizer's starting point.
inline Embedding init_embedding(const SimMatrix& sim, int k, std::uint64_t seed) {
    const std::vector<int> labels = kmeans(sim.S, k, seed);
    Matrix x = indicator_matrix(labels, k);
    orthonormalize_columns(x);  // indicator columns are disjoint, so this only touches rounding
    return Embedding{std::move(x), k};
}

} // namespace hint
