#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hint/errors.hpp"
#include "hint/matrix.hpp"
#include "hint/simmat.hpp"
#include "hint/spectral.hpp"

namespace hint {

/// Curvilinear-search knobs. Defaults are the cited feasible method's usual
/// settings; rho1 is the Armijo constant, eta the nonmonotone averaging
/// weight, tau the curve parameter clamped to [tau_min, tau_max].
struct SearchParams {
    double rho1 = 1e-4;
    double eta = 0.85;
    double tau0 = 1e-3;
    double tau_min = 1e-10;
    double tau_max = 1e3;
    int max_inner = 500;
    double tol_grad = 1e-6;
    double tol_obj = 1e-8;
    int max_outer = 50;

    void validate() const {
        if (!(rho1 > 0.0 && rho1 < 1.0)) throw ConfigError("SearchParams: rho1 must be in (0,1)");
        if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("SearchParams: eta must be in (0,1)");
        if (!(tau_min > 0.0 && tau_min < tau_max)) throw ConfigError("SearchParams: need 0 < tau_min < tau_max");
        if (max_inner < 1 || max_outer < 1) throw ConfigError("SearchParams: iteration caps must be >= 1");
    }
};

/// Sparse row operator for the anchored-news pruning: row r of apply(X) is a
/// weighted sum of rows of X. Only news with at least one anchor get a row,
/// so penalty work scales with the anchor count, not the collection size.
struct PenaltyOperator {
    int n = 0;  // column dimension (size of the collection it applies to)
    std::vector<std::vector<std::pair<int, double>>> rows;

    Matrix apply(const Matrix& x) const {
        Matrix out(static_cast<int>(rows.size()), x.cols());
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            double* orow = out.row(r);
            for (const auto& [i, v] : rows[r]) {
                const double* xrow = x.row(i);
                for (int j = 0; j < x.cols(); ++j) orow[j] += v * xrow[j];
            }
        }
        return out;
    }

    /// Adjoint application: given M (a x k), returns P^T M (n x k).
    Matrix apply_transpose(const Matrix& m) const {
        Matrix out(n, m.cols());
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            const double* mrow = m.row(r);
            for (const auto& [i, v] : rows[r]) {
                double* orow = out.row(i);
                for (int j = 0; j < m.cols(); ++j) orow[j] += v * mrow[j];
            }
        }
        return out;
    }
};

/// Inconsistency numerator between two pruned embeddings: every unordered
/// anchored-news pair counted once, i.e. half the squared Frobenius norm of
/// the co-membership difference.
inline double penalty_numerator(const Matrix& w1, const Matrix& w2) {
    return 0.5 * frob_norm_sq(mul_A_Bt(w1, w1) - mul_A_Bt(w2, w2));
}

/// Same with the frozen side's co-membership matrix B precomputed.
inline double penalty_numerator_vs(const Matrix& w, const Matrix& b) {
    return 0.5 * frob_norm_sq(mul_A_Bt(w, w) - b);
}

/// Everything fixed across the alternation: normalized Laplacians, the
/// anchored-space transition operators, the penalty weight and the pair-count
/// normalization |R|(|R|-1).
struct ObjectiveContext {
    const Matrix* L_tilde1 = nullptr;
    const Matrix* L_tilde2 = nullptr;
    PenaltyOperator T1;  // anchored rows of T12^T D1^{-1/2}
    PenaltyOperator T2;  // anchored rows of T12^T T12 D2^{-1/2}
    double theta = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    double norm_factor = 1.0;
    int anchor_count = 0;

    double penalty_scale() const { return theta / norm_factor; }
};

/// Builds the anchored-space operators from a transition matrix and the two
/// degree normalizations. Passing empty d_inv_sqrt vectors skips the degree
/// scaling (used when operating on confidence matrices directly).
inline void build_penalty_operators(const TransitionMatrix& t, const std::vector<double>& d1_inv_sqrt,
                                    const std::vector<double>& d2_inv_sqrt, PenaltyOperator& t1, PenaltyOperator& t2) {
    t1.n = t.n1;
    t2.n = t.n2;
    t1.rows.clear();
    t2.rows.clear();
    for (int j = 0; j < t.n2; ++j) {
        const auto& tweets = t.tweets_of_news[j];
        if (tweets.empty()) continue;
        std::vector<std::pair<int, double>> row1;
        row1.reserve(tweets.size());
        for (int i : tweets) row1.emplace_back(i, d1_inv_sqrt.empty() ? 1.0 : d1_inv_sqrt[i]);
        t1.rows.push_back(std::move(row1));
        const double count = static_cast<double>(tweets.size());
        t2.rows.push_back({{j, count * (d2_inv_sqrt.empty() ? 1.0 : d2_inv_sqrt[j])}});
    }
}

inline ObjectiveContext make_objective_context(const LaplacianBundle& b1, const LaplacianBundle& b2, const TransitionMatrix& t,
                                               double theta, double alpha = 1.0, double beta = 1.0) {
    if (theta < 0.0) throw ConfigError("theta must be >= 0");
    ObjectiveContext ctx;
    ctx.L_tilde1 = &b1.L_tilde;
    ctx.L_tilde2 = &b2.L_tilde;
    ctx.theta = theta;
    ctx.alpha = alpha;
    ctx.beta = beta;
    ctx.anchor_count = t.anchor_count;
    if (theta > 0.0) {
        if (t.anchor_count < 2) throw ConfigError("penalty undefined with fewer than 2 anchor pairs; set theta=0");
        ctx.norm_factor = static_cast<double>(t.anchor_count) * (t.anchor_count - 1);
        build_penalty_operators(t, b1.d_inv_sqrt, b2.d_inv_sqrt, ctx.T1, ctx.T2);
    } else {
        ctx.norm_factor = 1.0;
        ctx.T1.n = t.n1;
        ctx.T2.n = t.n2;
    }
    return ctx;
}

/// Joint objective of the Stiefel-form problem:
///   alpha Tr(X1^T L~1 X1) + beta Tr(X2^T L~2 X2) + theta pen / (|R|(|R|-1)).
inline double objective(const Matrix& x1, const Matrix& x2, const ObjectiveContext& ctx) {
    if (x1.rows() != ctx.L_tilde1->rows() || x2.rows() != ctx.L_tilde2->rows())
        throw ValidationError("objective: embedding dimensions do not match the context");
    double f = ctx.alpha * trace_quadratic(*ctx.L_tilde1, x1) + ctx.beta * trace_quadratic(*ctx.L_tilde2, x2);
    if (ctx.theta > 0.0) f += ctx.penalty_scale() * penalty_numerator(ctx.T1.apply(x1), ctx.T2.apply(x2));
    return f;
}

/// One half-round's frozen problem: minimize over X
///   weight Tr(X^T L~ X) + (theta/nf) * 0.5 ||T~X (T~X)^T - B||_F^2.
/// The frozen side's weighted trace is stored for reporting but excluded
/// from value(), so the theta=0 problem is bit-for-bit the plain
/// normalized-cut problem.
struct SingleVarProblem {
    const Matrix* L_tilde = nullptr;
    const PenaltyOperator* T = nullptr;
    Matrix B;                // frozen side's co-membership matrix (a x a)
    double weight = 1.0;     // alpha or beta
    double pen_scale = 0.0;  // theta / norm_factor, 0 when theta == 0
    double constant = 0.0;   // frozen side's weighted trace

    double value(const Matrix& x) const {
        double f = weight * trace_quadratic(*L_tilde, x);
        if (pen_scale > 0.0) f += pen_scale * penalty_numerator_vs(T->apply(x), B);
        return f;
    }

    /// Euclidean gradient: 2 weight L~X + 2 (theta/nf) T~^T (T~XX^T T~^T - B) T~X.
    Matrix gradient(const Matrix& x) const {
        Matrix g = 2.0 * weight * matmul(*L_tilde, x);
        if (pen_scale > 0.0) {
            const Matrix w = T->apply(x);
            const Matrix diff = mul_A_Bt(w, w) - B;
            const Matrix add = T->apply_transpose(matmul(diff, w));
            const double s = 2.0 * pen_scale;
            for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += s * add.data()[i];
        }
        return g;
    }
};

/// Builds the frozen problem for one side. side=1 optimizes X1 with X2 frozen.
inline SingleVarProblem make_single_problem(const ObjectiveContext& ctx, int side, const Matrix& frozen_x) {
    SingleVarProblem p;
    if (side == 1) {
        p.L_tilde = ctx.L_tilde1;
        p.T = &ctx.T1;
        p.weight = ctx.alpha;
        p.constant = ctx.beta * trace_quadratic(*ctx.L_tilde2, frozen_x);
        if (ctx.theta > 0.0) p.B = [&] { const Matrix w = ctx.T2.apply(frozen_x); return mul_A_Bt(w, w); }();
    } else {
        p.L_tilde = ctx.L_tilde2;
        p.T = &ctx.T2;
        p.weight = ctx.beta;
        p.constant = ctx.alpha * trace_quadratic(*ctx.L_tilde1, frozen_x);
        if (ctx.theta > 0.0) p.B = [&] { const Matrix w = ctx.T1.apply(frozen_x); return mul_A_Bt(w, w); }();
    }
    p.pen_scale = ctx.theta > 0.0 ? ctx.penalty_scale() : 0.0;
    return p;
}

/// Feasible Cayley update Y(tau) = (I + tau/2 A)^{-1} (I - tau/2 A) X with
/// A = G X^T - X G^T, computed through the 2k x 2k system
///   Y = X - tau U (I + tau/2 V^T U)^{-1} V^T X,  U = [G | X], V = [X | -G],
/// so the n x n inverse is never formed. Throws NumericalError when the small
/// system is singular (caller halves tau).
inline Matrix cayley_step(const Matrix& x, const Matrix& g, double tau) {
    const int n = x.rows();
    const int k = x.cols();
    if (!g.same_shape(x)) throw ValidationError("cayley_step: gradient shape mismatch");
    if (tau < 0.0) throw ValidationError("cayley_step: tau must be >= 0");
    if (tau == 0.0) return x;

    Matrix u(n, 2 * k);
    Matrix v(n, 2 * k);
    for (int i = 0; i < n; ++i) {
        const double* gi = g.row(i);
        const double* xi = x.row(i);
        double* ui = u.row(i);
        double* vi = v.row(i);
        for (int j = 0; j < k; ++j) {
            ui[j] = gi[j];
            ui[k + j] = xi[j];
            vi[j] = xi[j];
            vi[k + j] = -gi[j];
        }
    }
    Matrix w = mul_At_B(v, u);  // 2k x 2k
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] *= 0.5 * tau;
    for (int i = 0; i < 2 * k; ++i) w(i, i) += 1.0;
    Matrix vtx = mul_At_B(v, x);  // 2k x k
    Matrix z;
    try {
        z = solve_linear(std::move(w), std::move(vtx));
    } catch (const NumericalError&) {
        throw NumericalError("cayley_step: step too large (singular system), halve tau");
    }
    Matrix y = matmul(u, z);
    for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] = x.data()[i] - tau * y.data()[i];
    return y;
}

/// Per-iteration view handed to observers: enough to audit the nonmonotone
/// acceptance rule and manifold feasibility from outside.
struct IterationRecord {
    int iter = 0;
    double objective = 0.0;       // accepted F(X_{k+1})
    double grad_norm = 0.0;       // projected gradient norm at X_k
    double tau = 0.0;             // accepted step
    double nonmonotone_ref = 0.0; // C_k the step was tested against
    double deriv0 = 0.0;          // F'(Y(0))
    int halvings = 0;
    double feasibility = 0.0;     // ||X^T X - I||_F after the step
};

using IterationObserver = std::function<void(const IterationRecord&)>;

struct CurvilinearResult {
    Matrix X;
    double objective = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool grad_converged = false;     // projected gradient reached tol_grad
    bool converged_at_entry = false; // already stationary before any step
    int drift_warnings = 0;          // re-orthonormalizations beyond 1e-6 drift
};

inline constexpr double kFeasibilityTol = 1e-8;
inline constexpr double kDriftWarnTol = 1e-6;

/// Minimizes a smooth objective over matrices with orthonormal columns.
/// Alternating Barzilai-Borwein trial steps, halved until the Zhang-Hager
/// nonmonotone condition F(Y(tau)) <= C_k + rho1 tau F'(0) holds; stops when
/// the projected gradient norm reaches tol_grad, the objective stalls below
/// tol_obj, or max_inner iterations.
inline CurvilinearResult curvilinear_solve(Matrix x0, const std::function<double(const Matrix&)>& value,
                                           const std::function<Matrix(const Matrix&)>& grad, const SearchParams& params,
                                           const IterationObserver& observer = {}) {
    params.validate();
    if (orthogonality_drift(x0) > kFeasibilityTol) throw ValidationError("curvilinear_solve: start is not orthonormal");

    CurvilinearResult res;
    Matrix x = std::move(x0);
    double f = value(x);
    if (!std::isfinite(f)) throw NumericalError("curvilinear_solve: objective not finite at start");
    Matrix g = grad(x);

    auto projected_gradient = [](const Matrix& xx, const Matrix& gg) {
        // A X = G - X (G^T X)
        Matrix gtx = mul_At_B(gg, xx);
        Matrix ax = matmul(xx, gtx);
        for (std::size_t i = 0; i < ax.size(); ++i) ax.data()[i] = gg.data()[i] - ax.data()[i];
        return ax;
    };

    double c_ref = f;
    double q_ref = 1.0;
    double tau = params.tau0;
    int stall_count = 0;
    Matrix prev_x;
    Matrix prev_g;

    for (int iter = 0; iter < params.max_inner; ++iter) {
        Matrix ax = projected_gradient(x, g);
        const double grad_norm = frob_norm(ax);
        if (grad_norm <= params.tol_grad) {
            res.grad_converged = true;
            res.converged_at_entry = iter == 0;
            break;
        }

        // F'(Y(0)) = -1/2 ||A||_F^2 = -(||G||^2 - Tr((G^T X)^2))
        const Matrix gtx = mul_At_B(g, x);
        double tr_sq = 0.0;
        for (int i = 0; i < gtx.rows(); ++i)
            for (int j = 0; j < gtx.cols(); ++j) tr_sq += gtx(i, j) * gtx(j, i);
        const double deriv0 = -(frob_norm_sq(g) - tr_sq);

        if (iter > 0) {
            // alternating BB steps from the last accepted move
            Matrix dx = x - prev_x;
            Matrix dg = g - prev_g;
            const double sx = frob_inner(dx, dx);
            const double sg = frob_inner(dx, dg);
            const double gg_ = frob_inner(dg, dg);
            double bb;
            if (iter % 2 == 1)
                bb = sg != 0.0 ? std::abs(sx) / std::abs(sg) : params.tau_max;
            else
                bb = gg_ != 0.0 ? std::abs(sg) / gg_ : params.tau_max;
            if (!std::isfinite(bb) || bb <= 0.0) bb = params.tau0;
            tau = std::min(std::max(bb, params.tau_min), params.tau_max);
        }

        Matrix y;
        double fy = 0.0;
        int halvings = 0;
        bool accepted = false;
        double step = tau;
        for (; halvings < 60; ++halvings) {
            bool ok = true;
            try {
                y = cayley_step(x, g, step);
            } catch (const NumericalError&) {
                ok = false;
            }
            if (ok) {
                fy = value(y);
                if (!std::isfinite(fy))
                    throw NumericalError("curvilinear_solve: objective not finite at iteration " + std::to_string(iter));
                if (fy <= c_ref + params.rho1 * step * deriv0) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step underflow: treat as stalled

        double drift = orthogonality_drift(y);
        if (drift > kFeasibilityTol) {
            if (drift > kDriftWarnTol) ++res.drift_warnings;
            orthonormalize_columns(y);
            fy = value(y);
        }

        prev_x = std::move(x);
        prev_g = std::move(g);
        x = std::move(y);
        g = grad(x);
        const double f_prev = f;
        const double c_before = c_ref;
        f = fy;
        ++res.iterations;

        // Zhang-Hager averages: Q_{k+1} = eta Q_k + 1, C_{k+1} = (eta Q_k C_k + F)/Q_{k+1}
        q_ref = params.eta * q_ref + 1.0;
        c_ref = ((q_ref - 1.0) * c_ref + f) / q_ref;

        if (observer) {
            IterationRecord rec;
            rec.iter = res.iterations;
            rec.objective = f;
            rec.grad_norm = grad_norm;
            rec.tau = step;
            rec.nonmonotone_ref = c_before;
            rec.deriv0 = deriv0;
            rec.halvings = halvings;
            rec.feasibility = orthogonality_drift(x);
            observer(rec);
        }

        if (std::abs(f - f_prev) <= params.tol_obj * (std::abs(f_prev) + 1.0)) {
            if (++stall_count >= 3) {
                Matrix ax2 = projected_gradient(x, g);
                res.grad_converged = frob_norm(ax2) <= params.tol_grad;
                break;
            }
        } else {
            stall_count = 0;
        }
    }

    res.grad_norm = frob_norm(projected_gradient(x, g));
    if (res.grad_norm <= params.tol_grad) res.grad_converged = true;
    res.objective = f;
    res.X = std::move(x);
    return res;
}

/// Observer for the alternation: round (1-based), half (1 or 2), record. The
/// record's objective is the joint value (single-variable value plus the
/// frozen side's constant).
using AlternatingObserver = std::function<void(int round, int half, const IterationRecord&)>;

struct AlternatingResult {
    Matrix X1;
    Matrix X2;
    std::vector<double> trace;  // joint objective: initial value, then after each half-round
    int rounds = 0;
    bool converged = false;
    int drift_warnings = 0;
};

/// Alternately freezes one variable and runs the curvilinear search on the
/// other. Converged when a full round leaves both variables stationary (both
/// inner solves meet the gradient tolerance with zero accepted steps).
inline AlternatingResult alternating_solve(Matrix x1, Matrix x2, const ObjectiveContext& ctx, const SearchParams& params,
                                           const AlternatingObserver& observer = {}) {
    params.validate();
    AlternatingResult out;
    out.trace.push_back(objective(x1, x2, ctx));

    for (int round = 1; round <= params.max_outer; ++round) {
        bool stationary = true;
        bool both_grad_converged = true;
        for (int half = 1; half <= 2; ++half) {
            Matrix& active = half == 1 ? x1 : x2;
            const Matrix& frozen = half == 1 ? x2 : x1;
            SingleVarProblem prob = make_single_problem(ctx, half, frozen);
            IterationObserver inner_obs;
            if (observer) {
                const double constant = prob.constant;
                inner_obs = [&observer, round, half, constant](const IterationRecord& r) {
                    IterationRecord joint = r;
                    joint.objective += constant;
                    joint.nonmonotone_ref += constant;
                    observer(round, half, joint);
                };
            }
            CurvilinearResult res = curvilinear_solve(std::move(active), [&prob](const Matrix& m) { return prob.value(m); },
                                                      [&prob](const Matrix& m) { return prob.gradient(m); }, params, inner_obs);
            active = std::move(res.X);
            out.drift_warnings += res.drift_warnings;
            if (!(res.grad_converged && res.converged_at_entry)) stationary = false;
            if (!res.grad_converged) both_grad_converged = false;
            out.trace.push_back(objective(x1, x2, ctx));
        }
        out.rounds = round;
        if (ctx.theta == 0.0) {
            // separable objective: one round is exactly one independent solve per side
            out.converged = both_grad_converged;
            break;
        }
        if (stationary) {
            out.converged = true;
            break;
        }
    }
    out.X1 = std::move(x1);
    out.X2 = std::move(x2);
    return out;
}

} // namespace hint
