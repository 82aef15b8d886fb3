#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hint/errors.hpp"

namespace hint {

/// Dense row-major matrix of doubles. Sized for the desk scale this library
/// targets (up to a few thousand rows); no expression templates, no views.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    assert(a.same_shape(b));
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] + b.data()[i];
    return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    assert(a.same_shape(b));
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
    return c;
}

inline Matrix operator*(double s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = s * a.data()[i];
    return c;
}

/// C = A * B, accumulated row-wise (i-k-j) for locality.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows());
    Matrix c(a.rows(), b.cols());
    const int n = b.cols();
    for (int i = 0; i < a.rows(); ++i) {
        double* crow = c.row(i);
        for (int l = 0; l < a.cols(); ++l) {
            const double av = a(i, l);
            if (av == 0.0) continue;
            const double* brow = b.row(l);
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

/// C = A^T * B without materializing the transpose.
inline Matrix mul_At_B(const Matrix& a, const Matrix& b) {
    assert(a.rows() == b.rows());
    Matrix c(a.cols(), b.cols());
    const int n = b.cols();
    for (int l = 0; l < a.rows(); ++l) {
        const double* arow = a.row(l);
        const double* brow = b.row(l);
        for (int i = 0; i < a.cols(); ++i) {
            const double av = arow[i];
            if (av == 0.0) continue;
            double* crow = c.row(i);
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

/// C = A * B^T.
inline Matrix mul_A_Bt(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.cols());
    Matrix c(a.rows(), b.rows());
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (int j = 0; j < b.rows(); ++j) {
            const double* brow = b.row(j);
            double s = 0.0;
            for (int l = 0; l < a.cols(); ++l) s += arow[l] * brow[l];
            crow[j] = s;
        }
    }
    return c;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline double frob_inner(const Matrix& a, const Matrix& b) {
    assert(a.same_shape(b));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

inline double frob_norm_sq(const Matrix& a) { return frob_inner(a, a); }

inline double frob_norm(const Matrix& a) { return std::sqrt(frob_norm_sq(a)); }

/// Tr(X^T M X) for symmetric M.
inline double trace_quadratic(const Matrix& m, const Matrix& x) {
    assert(m.rows() == m.cols() && m.cols() == x.rows());
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        const double* mrow = m.row(i);
        const double* xi = x.row(i);
        for (int l = 0; l < m.cols(); ++l) {
            const double mv = mrow[l];
            if (mv == 0.0) continue;
            const double* xl = x.row(l);
            for (int j = 0; j < x.cols(); ++j) s += mv * xi[j] * xl[j];
        }
    }
    return s;
}

inline double trace(const Matrix& a) {
    assert(a.rows() == a.cols());
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

/// ||X^T X - I||_F; zero for matrices with orthonormal columns.
inline double orthogonality_drift(const Matrix& x) {
    Matrix g = mul_At_B(x, x);
    for (int i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return frob_norm(g);
}

/// Solves A * X = B in place of a copy of A (partial pivoting).
/// Throws NumericalError when A is numerically singular.
inline Matrix solve_linear(Matrix a, Matrix b) {
    assert(a.rows() == a.cols() && a.rows() == b.rows());
    const int n = a.rows();
    const int m = b.cols();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) throw NumericalError("solve_linear: singular system");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < m; ++j) std::swap(b(col, j), b(piv, j));
        }
        const double d = a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / d;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
            for (int j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        const double d = a(col, col);
        for (int j = 0; j < m; ++j) b(col, j) /= d;
        for (int r = 0; r < col; ++r) {
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
        }
    }
    return b;
}

/// Orthonormalizes the columns of X in place (modified Gram-Schmidt, two
/// passes, leading-entry sign fixed positive so the result is deterministic).
/// Throws NumericalError when a column is linearly dependent on the others.
inline void orthonormalize_columns(Matrix& x) {
    const int n = x.rows();
    const int k = x.cols();
    for (int j = 0; j < k; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                double dot = 0.0;
                for (int r = 0; r < n; ++r) dot += x(r, i) * x(r, j);
                for (int r = 0; r < n; ++r) x(r, j) -= dot * x(r, i);
            }
        }
        double nrm = 0.0;
        for (int r = 0; r < n; ++r) nrm += x(r, j) * x(r, j);
        nrm = std::sqrt(nrm);
        if (!(nrm > 1e-300)) throw NumericalError("orthonormalize_columns: rank-deficient input");
        double lead = 0.0;
        for (int r = 0; r < n; ++r) {
            if (x(r, j) != 0.0) {
                lead = x(r, j);
                break;
            }
        }
        const double scale = (lead < 0.0 ? -1.0 : 1.0) / nrm;
        for (int r = 0; r < n; ++r) x(r, j) *= scale;
    }
}

inline bool all_finite(const Matrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(a.data()[i])) return false;
    return true;
}

} // namespace hint
