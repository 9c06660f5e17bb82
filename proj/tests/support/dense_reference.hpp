#pragma once

#include <vector>

#include "ttfilter/grid.hpp"
#include "ttfilter/model.hpp"

// Dense reference assembly of the discretized operators, built directly from
// Kronecker products and pointwise field evaluation. Deliberately shares no
// code with the TT assembly path: this is the oracle it is checked against.

namespace ttfilter::testing {

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// diag(g(points tensor)) where direction mid_dir (if >= 0) runs over the
/// N+1 mid-edge points. Multi-indices are enumerated in C order to match
/// the TT dense reconstruction convention.
inline Mat dense_diag(const SeparableField& g, const GridSpec& grid, Index mid_dir = -1) {
    std::vector<Vec> axis_pts(grid.dim, grid.interior_points());
    if (mid_dir >= 0) axis_pts[mid_dir] = grid.mid_points();
    Index total = 1;
    for (Index k = 0; k < grid.dim; ++k) total *= axis_pts[k].size();

    Vec diag(total);
    std::vector<Index> idx(grid.dim, 0);
    for (Index flat = 0; flat < total; ++flat) {
        Vec x(grid.dim);
        for (Index k = 0; k < grid.dim; ++k) x(k) = axis_pts[k](idx[k]);
        diag(flat) = g(x);
        for (Index k = grid.dim - 1; k >= 0; --k) {
            if (++idx[k] < axis_pts[k].size()) break;
            idx[k] = 0;
        }
    }
    return Mat(diag.asDiagonal());
}

/// Kronecker lift of a 1-d matrix into direction k, identity elsewhere.
inline Mat dense_lift(const Mat& op, Index k, const GridSpec& grid) {
    Mat out = Mat::Identity(1, 1);
    for (Index j = 0; j < grid.dim; ++j) {
        const Mat factor =
            (j == k) ? op : Mat(Mat::Identity(grid.points, grid.points));
        out = kron(out, factor);
    }
    return out;
}

struct DenseOperators {
    Mat delta_g, delta_rho, c_d, m0, mix;
    Mat l0;
    std::vector<Mat> lk;
    Mat m_right;
    Mat a_implicit;  ///< I - delta/2 (delta_g + delta_rho)
};

inline DenseOperators dense_assemble(const SignalModel& model, const GridSpec& grid, double delta,
                                     bool mixed = false) {
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

    Index total = 1;
    for (Index k = 0; k < grid.dim; ++k) total *= n;

    DenseOperators out;
    out.delta_g = Mat::Zero(total, total);
    out.delta_rho = Mat::Zero(total, total);
    out.c_d = Mat::Zero(total, total);
    out.mix = Mat::Zero(total, total);
    for (Index i = 0; i < grid.dim; ++i) {
        const Mat lifted = dense_lift(fwd, i, grid);  // rectangular edge lift
        out.delta_g -= lifted.transpose() * dense_diag(model.gg_diag[i], grid, i) * lifted;
        out.delta_rho -= lifted.transpose() * dense_diag(model.rr_diag[i], grid, i) * lifted;
        out.c_d += dense_diag(model.f[i], grid) * dense_lift(cen, i, grid);
    }
    out.m0 = dense_diag(model.div_f, grid);
    if (mixed) {
        for (Index i = 0; i < grid.dim; ++i)
            for (Index j = 0; j < grid.dim; ++j) {
                if (i == j || model.noise_cov_offdiag.empty()) continue;
                const SeparableField& entry = model.noise_cov_offdiag[i][j];
                if (entry.is_zero()) continue;
                out.mix += dense_lift(cen, i, grid) * dense_diag(entry, grid) *
                           dense_lift(cen, j, grid);
            }
        if (!model.noise_cov_div2.is_zero())
            out.m0 -= 0.5 * delta * dense_diag(model.noise_cov_div2, grid);
    }
    out.l0 = 0.5 * (out.delta_g + out.delta_rho + out.mix) - out.c_d - out.m0;

    for (Index k = 0; k < grid.dim; ++k) {
        Mat l = dense_diag(model.h[k] - model.div_rho_col[k], grid);
        for (Index i = 0; i < grid.dim; ++i)
            l -= dense_diag(model.rho[i][k], grid) * dense_lift(cen, i, grid);
        out.lk.push_back(l);
    }

    out.m_right = Mat::Identity(total, total) - delta * (out.c_d + out.m0) +
                  (mixed ? Mat(0.5 * delta * out.mix) : Mat(Mat::Zero(total, total)));
    out.a_implicit =
        Mat::Identity(total, total) - 0.5 * delta * (out.delta_g + out.delta_rho);
    return out;
}

}  // namespace ttfilter::testing

#include "ttfilter/operators.hpp"

namespace ttfilter::testing {

/// Dense implementation of the online stage: identical update formula and
/// renormalization, but with plain matrices. Operators may come either from
/// dense reconstructions of the assembled TT operators (isolates the online
/// rounding error) or from dense_assemble plus an exact solve.
struct DenseStepper {
    Mat m_left, m_right;
    std::vector<Mat> lk;
    std::vector<std::vector<Mat>> lij;
    double cell_volume = 1.0;
    double log_normalizer = 0.0;

    static DenseStepper from_tt_operators(const DiscretizedOperators& ops) {
        DenseStepper s;
        s.m_left = tt_matrix_to_dense(ops.m_left);
        s.m_right = tt_matrix_to_dense(ops.m_right);
        for (const auto& l : ops.lk) s.lk.push_back(tt_matrix_to_dense(l));
        s.lij.resize(ops.lk.size());
        for (std::size_t i = 0; i < ops.lij.size(); ++i)
            for (const auto& l : ops.lij[i]) s.lij[i].push_back(tt_matrix_to_dense(l));
        s.cell_volume = ops.grid.cell_volume();
        return s;
    }

    /// Independent route: dense assembly and an exact dense inverse for the
    /// implicit half-step.
    static DenseStepper from_dense_assembly(const SignalModel& model, const GridSpec& grid,
                                            double delta, bool mixed = false) {
        const DenseOperators ops = dense_assemble(model, grid, delta, mixed);
        DenseStepper s;
        s.m_left = ops.a_implicit.inverse();
        s.m_right = ops.m_right;
        s.lk = ops.lk;
        s.lij.resize(ops.lk.size());
        for (std::size_t i = 0; i < ops.lk.size(); ++i)
            for (std::size_t j = 0; j < ops.lk.size(); ++j)
                s.lij[i].push_back(ops.lk[i] * ops.lk[j]);
        s.cell_volume = grid.cell_volume();
        return s;
    }

    Vec normalize(const Vec& u) {
        const double scale = std::sqrt(cell_volume) * u.norm();
        log_normalizer += std::log(scale);
        const double sign = u.sum() < 0.0 ? -1.0 : 1.0;  // positive-mass gauge
        return sign * u / (u.norm() * std::sqrt(cell_volume));
    }

    Vec step(const Vec& u, const Vec& dy, const Mat& iterated) {
        Mat update = m_right;
        for (std::size_t j = 0; j < lk.size(); ++j) update += dy(j) * lk[j];
        for (std::size_t i = 0; i < lk.size(); ++i)
            for (std::size_t j = 0; j < lk.size(); ++j) update += iterated(i, j) * lij[i][j];
        return normalize(m_left * (update * u));
    }
};

}  // namespace ttfilter::testing
