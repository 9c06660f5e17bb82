#pragma once

#include <optional>

#include "ttfilter/grid.hpp"
#include "ttfilter/model.hpp"
#include "ttfilter/newton_schulz.hpp"
#include "ttfilter/tensor_train.hpp"

namespace ttfilter {

/// One-dimensional difference matrices with homogeneous Dirichlet boundary.
/// forward is the (N+1) x N edge-difference matrix (so -forward^T forward is
/// the discrete Laplacian); central is tridiag(-1, 0, 1)/(2 dx).
struct Diff1D {
    Mat forward;
    Mat central;
};

inline Diff1D build_diff_matrices(const GridSpec& grid) {
    const Index n = grid.points;
    const double inv_dx = 1.0 / grid.dx();
    Mat fwd = Mat::Zero(n + 1, n);
    for (Index r = 0; r < n; ++r) {
        fwd(r, r) = inv_dx;
        fwd(r + 1, r) = -inv_dx;
    }
    Mat cen = Mat::Zero(n, n);
    for (Index r = 0; r + 1 < n; ++r) {
        cen(r, r + 1) = 0.5 * inv_dx;
        cen(r + 1, r) = -0.5 * inv_dx;
    }
    return {fwd, cen};
}

namespace detail {

inline TtMatrix zero_operator(const GridSpec& grid) {
    std::vector<Mat> factors(grid.dim, Mat::Zero(grid.points, grid.points));
    return tt_rank1_matrix(factors);
}

}  // namespace detail

/// Diagonal operator diag(g(X)). With at_mid_direction >= 0 the samples in
/// that direction are taken at the N+1 mid-edge points instead (the matrix
/// then acts on edge values in that direction). Rank is at most the number
/// of separable terms of g.
inline TtMatrix diag_of_field(const SeparableField& g, const GridSpec& grid,
                              Index at_mid_direction = -1) {
    const Vec pts = grid.interior_points();
    const Vec mids = grid.mid_points();
    TtMatrix sum;
    bool first = true;
    for (const SeparableTerm& term : g.terms()) {
        std::vector<Mat> factors(grid.dim);
        for (Index j = 0; j < grid.dim; ++j) {
            const Vec v = term.axis_values(j, j == at_mid_direction ? mids : pts);
            factors[j] = Mat(v.asDiagonal());
        }
        TtMatrix t = tt_rank1_matrix(factors);
        sum = first ? t : tt_add(sum, t);
        first = false;
    }
    if (first) {
        // zero field sampled at mid-edge points: sizes differ in one direction
        std::vector<Mat> factors(grid.dim);
        for (Index j = 0; j < grid.dim; ++j) {
            const Index n = (j == at_mid_direction) ? grid.points + 1 : grid.points;
            factors[j] = Mat::Zero(n, n);
        }
        return tt_rank1_matrix(factors);
    }
    return sum;
}

/// Kronecker lift Id^(k-1) x op x Id^(d-k) of a 1-d operator into direction
/// k (0-based). Rank-1 by construction.
inline TtMatrix lift_1d(const Mat& op_1d, Index k, const GridSpec& grid) {
    if (k < 0 || k >= grid.dim) throw std::invalid_argument("lift_1d: direction out of range");
    std::vector<Mat> factors(grid.dim, Mat::Identity(grid.points, grid.points));
    factors[k] = op_1d;
    return tt_rank1_matrix(factors);
}

namespace detail {

/// sum_i -(Cbar_d^(i))^T diag(g_i(mid)) Cbar_d^(i) for a list of per-direction
/// diagonal fields g_i; each separable term contributes a rank-1 operator
/// whose direction-i factor is the 1-d composite -Cbar^T diag Cbar.
inline TtMatrix second_order_sum(const std::vector<SeparableField>& diag_fields,
                                 const GridSpec& grid, const Mat& fwd) {
    const Vec pts = grid.interior_points();
    const Vec mids = grid.mid_points();
    TtMatrix sum = zero_operator(grid);
    for (Index i = 0; i < grid.dim; ++i) {
        for (const SeparableTerm& term : diag_fields[i].terms()) {
            std::vector<Mat> factors(grid.dim);
            for (Index j = 0; j < grid.dim; ++j) {
                const Vec v = term.axis_values(j, j == i ? mids : pts);
                if (j == i)
                    factors[j] = -fwd.transpose() * Mat(v.asDiagonal()) * fwd;
                else
                    factors[j] = Mat(v.asDiagonal());
            }
            sum = tt_add(sum, tt_rank1_matrix(factors));
        }
    }
    return sum;
}

/// sum over terms of phi of diag(phi(X)) C_d^(k): the direction-k factor is
/// diag(phi_k) C_1, every other factor the sampled diagonal.
inline TtMatrix convection_term(const SeparableField& phi, const GridSpec& grid, Index k,
                                const Mat& central) {
    const Vec pts = grid.interior_points();
    TtMatrix sum = zero_operator(grid);
    for (const SeparableTerm& term : phi.terms()) {
        std::vector<Mat> factors(grid.dim);
        for (Index j = 0; j < grid.dim; ++j) {
            const Vec v = term.axis_values(j, pts);
            factors[j] = (j == k) ? Mat(Mat(v.asDiagonal()) * central) : Mat(v.asDiagonal());
        }
        sum = tt_add(sum, tt_rank1_matrix(factors));
    }
    return sum;
}

/// Mixed second-order block C_d^(i) diag(phi) C_d^(j), i != j.
inline TtMatrix mixed_term(const SeparableField& phi, const GridSpec& grid, Index i, Index j,
                           const Mat& central) {
    const Vec pts = grid.interior_points();
    TtMatrix sum = zero_operator(grid);
    for (const SeparableTerm& term : phi.terms()) {
        std::vector<Mat> factors(grid.dim);
        for (Index q = 0; q < grid.dim; ++q) {
            const Vec v = term.axis_values(q, pts);
            if (q == i)
                factors[q] = central * Mat(v.asDiagonal());
            else if (q == j)
                factors[q] = Mat(v.asDiagonal()) * central;
            else
                factors[q] = Mat(v.asDiagonal());
        }
        sum = tt_add(sum, tt_rank1_matrix(factors));
    }
    return sum;
}

}  // namespace detail

struct AssemblyOptions {
    double eps = 1e-6;    ///< prescribed relative TT accuracy
    double delta = 0.01;  ///< time step baked into the update operators
    NewtonSchulzOptions newton_schulz{1e-8, 1e-8, 80, 128};
    double lij_round_eps = -1.0;  ///< relative tolerance for the L_i L_j products;
                                  ///< defaults to eps * dx^(d/2) when negative
};

/// The assembled operators of the semi-discrete scheme, all in TT format.
/// m_left is the precomputed implicit-step inverse, m_right the explicit
/// drift part; the filter online stage consumes m_left, m_right, lk, lij.
struct DiscretizedOperators {
    GridSpec grid;
    double eps = 0.0;
    double delta = 0.0;
    bool mixed = false;

    TtMatrix delta_g;            ///< diffusion part from G
    TtMatrix delta_rho;          ///< diffusion part from rho
    TtMatrix c_d;                ///< drift convection sum_k diag(f_k) C_d^(k)
    TtMatrix m0;                 ///< diag(div f) (plus mixed corrections if enabled)
    TtMatrix l0;                 ///< generator 1/2(delta_g + delta_rho [+ mix]) - c_d - m0
    std::vector<TtMatrix> lk;    ///< observation operators
    std::vector<std::vector<TtMatrix>> lij;  ///< products L_i L_j
    TtMatrix sum_lii;            ///< sum_i L_i L_i (product-mode fast path)
    TtMatrix m_left;             ///< (I - delta/2 (delta_g + delta_rho))^{-1}
    TtMatrix m_right;            ///< I - delta (c_d + m0)  [mixed: + delta/2 mix]
    double ns_residual = 0.0;
    int ns_iterations = 0;

    Index max_operator_rank() const {
        Index r = std::max({l0.max_rank(), m_left.max_rank(), m_right.max_rank()});
        for (const auto& l : lk) r = std::max(r, l.max_rank());
        for (const auto& row : lij)
            for (const auto& l : row) r = std::max(r, l.max_rank());
        return r;
    }
};

namespace detail {

inline DiscretizedOperators assemble_impl(const SignalModel& model, const GridSpec& grid,
                                          const AssemblyOptions& opt, bool mixed) {
    model.validate();
    if (model.dim != grid.dim)
        throw std::invalid_argument("assemble_operators: model/grid dimension mismatch");
    if (opt.eps <= 0.0) throw std::invalid_argument("assemble_operators: eps must be positive");
    if (opt.delta < 0.0) throw std::invalid_argument("assemble_operators: delta must be nonnegative");
    if (!mixed && !model.diagonal_noise)
        throw std::invalid_argument(
            "assemble_operators: non-diagonal noise requires the mixed-derivative path");

    const Index d = grid.dim;
    const double dx = grid.dx();
    const double half_d = 0.5 * static_cast<double>(d);
    // Relative tolerances scaled so the absolute operator error is mesh-free:
    // ||L_0|| ~ dx^-(2+d/2), ||L_k|| ~ dx^-(1+d/2), diagonal parts ~ dx^-(d/2).
    const double tol2 = opt.eps * std::pow(dx, half_d + 2.0);
    const double tol1 = opt.eps * std::pow(dx, half_d + 1.0);
    const double tol0 = opt.eps * std::pow(dx, half_d);
    const double lij_eps = opt.lij_round_eps > 0.0 ? opt.lij_round_eps : tol0;

    const Diff1D diff = build_diff_matrices(grid);

    DiscretizedOperators ops;
    ops.grid = grid;
    ops.eps = opt.eps;
    ops.delta = opt.delta;
    ops.mixed = mixed;

    // Diffusion blocks, exact sums of rank-1 contributions, then compressed.
    TtMatrix delta_g_raw = detail::second_order_sum(model.gg_diag, grid, diff.forward);
    TtMatrix delta_rho_raw = detail::second_order_sum(model.rr_diag, grid, diff.forward);
    ops.delta_g = tt_round(delta_g_raw, tol2 / 8.0);
    ops.delta_rho = tt_round(delta_rho_raw, tol2 / 8.0);

    TtMatrix c_d_raw = detail::zero_operator(grid);
    for (Index k = 0; k < d; ++k)
        c_d_raw = tt_add(c_d_raw, detail::convection_term(model.f[k], grid, k, diff.central));
    ops.c_d = tt_round(c_d_raw, tol1 / 8.0);

    TtMatrix m0_raw = diag_of_field(model.div_f, grid);
    TtMatrix mix_raw = detail::zero_operator(grid);
    if (mixed) {
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j) {
                if (i == j) continue;
                const SeparableField& entry =
                    model.noise_cov_offdiag.empty() ? SeparableField::zero(d)
                                                    : model.noise_cov_offdiag[i][j];
                if (entry.is_zero()) continue;
                mix_raw = tt_add(mix_raw, detail::mixed_term(entry, grid, i, j, diff.central));
            }
        if (!model.noise_cov_div2.is_zero())
            m0_raw = tt_add(m0_raw, tt_scale(diag_of_field(model.noise_cov_div2, grid),
                                             -0.5 * opt.delta));
    }
    ops.m0 = tt_round(m0_raw, tol0 / 8.0);
    TtMatrix mix = tt_round(mix_raw, tol2 / 8.0);

    // L_0 = 1/2 (Delta_G + Delta_rho [+ mix]) - C_d - M_(0), built from the
    // raw sums and compressed once at the prescribed accuracy.
    TtMatrix l0_raw = tt_add(tt_scale(tt_add(delta_g_raw, delta_rho_raw), 0.5),
                             tt_scale(tt_add(c_d_raw, m0_raw), -1.0));
    if (mixed) l0_raw = tt_add(l0_raw, tt_scale(mix_raw, 0.5));
    ops.l0 = tt_round(l0_raw, tol2 / 2.0);

    // L_k = diag(h_k - div rho_.k) - sum_i diag(rho_ik) C_d^(i).
    ops.lk.reserve(d);
    for (Index k = 0; k < d; ++k) {
        TtMatrix raw = diag_of_field(model.h[k] - model.div_rho_col[k], grid);
        for (Index i = 0; i < d; ++i) {
            const SeparableField& rho_ik = model.rho[i][k];
            if (rho_ik.is_zero()) continue;
            raw = tt_add(raw, tt_scale(detail::convection_term(rho_ik, grid, i, diff.central), -1.0));
        }
        ops.lk.push_back(tt_round(raw, tol1 / 2.0));
    }

    // Precomputed second-order products L^(i,j) = L_i L_j.
    ops.lij.assign(d, std::vector<TtMatrix>(d));
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            ops.lij[i][j] = tt_round(tt_matmat(ops.lk[i], ops.lk[j]), lij_eps);
    TtMatrix sum_lii = ops.lij[0][0];
    for (Index i = 1; i < d; ++i) sum_lii = tt_add(sum_lii, ops.lij[i][i]);
    ops.sum_lii = tt_round(sum_lii, lij_eps);

    // Explicit update operator.
    TtMatrix m_right_raw =
        tt_add(tt_identity(grid.mode_sizes()), tt_scale(tt_add(ops.c_d, ops.m0), -opt.delta));
    if (mixed) m_right_raw = tt_add(m_right_raw, tt_scale(mix, 0.5 * opt.delta));
    ops.m_right = tt_round(m_right_raw, tol2 / 2.0);

    // Implicit-step inverse, precomputed once by Newton-Schulz.
    TtMatrix a = tt_round(tt_add(tt_identity(grid.mode_sizes()),
                                 tt_scale(tt_add(ops.delta_g, ops.delta_rho), -0.5 * opt.delta)),
                          1e-14);
    NewtonSchulzResult ns = newton_schulz_inverse(a, opt.newton_schulz);
    ops.m_left = ns.inverse;
    ops.ns_residual = ns.residual;
    ops.ns_iterations = ns.iterations;
    return ops;
}

}  // namespace detail

/// Assemble the TT operators for a model with diagonal G G^T and rho rho^T.
inline DiscretizedOperators assemble_operators(const SignalModel& model, const GridSpec& grid,
                                               const AssemblyOptions& opt) {
    return detail::assemble_impl(model, grid, opt, false);
}

/// Assembly for general (non-diagonal) noise covariance: the generator gains
/// the mixed-derivative block sum_{i!=j} C^(i) diag((GG^T+rr^T)_ij) C^(j) and
/// the zero-order part subtracts delta/2 times its double divergence.
inline DiscretizedOperators assemble_mixed_operators(const SignalModel& model,
                                                     const GridSpec& grid,
                                                     const AssemblyOptions& opt) {
    return detail::assemble_impl(model, grid, opt, true);
}

}  // namespace ttfilter
