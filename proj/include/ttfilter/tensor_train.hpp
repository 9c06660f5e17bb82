#pragma once

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ttfilter/common.hpp"

namespace ttfilter {

/// Tensor-train representation of a d-dimensional array.
///
/// Core k is stored as an (r_{k-1}*n_k) x r_k matrix whose row index packs
/// (left rank a, mode index i) as a*n_k + i. Reconstruction is the chain of
/// matrix products A(i_1,...,i_d) = G_1[i_1] G_2[i_2] ... G_d[i_d], with
/// G_k[i] the r_{k-1} x r_k slice of core k. Boundary ranks are always 1.
///
/// Values are immutable once built; every operation below returns a fresh
/// train, so instances can be shared freely across threads.
class TtVector {
public:
    TtVector() = default;

    TtVector(std::vector<Index> modes, std::vector<Mat> cores)
            : modes_(std::move(modes)), cores_(std::move(cores)) {
        if (modes_.empty() || modes_.size() != cores_.size())
            throw std::invalid_argument("TtVector: empty or inconsistent core list");
        ranks_.assign(modes_.size() + 1, 1);
        Index r_prev = 1;
        for (std::size_t k = 0; k < cores_.size(); ++k) {
            if (modes_[k] < 1) throw std::invalid_argument("TtVector: mode sizes must be positive");
            if (cores_[k].rows() % modes_[k] != 0 || cores_[k].rows() / modes_[k] != r_prev)
                throw std::invalid_argument("TtVector: core row count does not match rank chain");
            ranks_[k] = r_prev;
            r_prev = cores_[k].cols();
            ranks_[k + 1] = r_prev;
        }
        if (ranks_.front() != 1 || ranks_.back() != 1)
            throw std::invalid_argument("TtVector: boundary ranks must be 1");
    }

    Index dim() const { return static_cast<Index>(modes_.size()); }
    const std::vector<Index>& mode_sizes() const { return modes_; }
    const std::vector<Index>& ranks() const { return ranks_; }
    Index rank(std::size_t k) const { return ranks_[k]; }
    Index max_rank() const {
        Index r = 1;
        for (Index v : ranks_) r = std::max(r, v);
        return r;
    }
    const Mat& core(std::size_t k) const { return cores_[k]; }
    const std::vector<Mat>& cores() const { return cores_; }

    /// Total number of stored entries.
    Index size() const {
        Index s = 0;
        for (const Mat& c : cores_) s += c.size();
        return s;
    }

private:
    std::vector<Index> modes_;
    std::vector<Index> ranks_;
    std::vector<Mat> cores_;
};

/// Tensor-train operator between grids of shape col_sizes and row_sizes.
///
/// Internally the (row, col) mode pair of each core is fused into a single
/// mode of size n_k*m_k with index i*m_k + j, so the operator is carried as a
/// TtVector and shares its rounding/addition/norm machinery.
class TtMatrix {
public:
    TtMatrix() = default;

    TtMatrix(std::vector<Index> row_sizes, std::vector<Index> col_sizes, TtVector train)
            : rows_(std::move(row_sizes)), cols_(std::move(col_sizes)), train_(std::move(train)) {
        if (rows_.size() != cols_.size() || rows_.size() != static_cast<std::size_t>(train_.dim()))
            throw std::invalid_argument("TtMatrix: size lists do not match train");
        for (std::size_t k = 0; k < rows_.size(); ++k)
            if (train_.mode_sizes()[k] != rows_[k] * cols_[k])
                throw std::invalid_argument("TtMatrix: fused mode size mismatch");
    }

    Index dim() const { return train_.dim(); }
    const std::vector<Index>& row_sizes() const { return rows_; }
    const std::vector<Index>& col_sizes() const { return cols_; }
    const std::vector<Index>& ranks() const { return train_.ranks(); }
    Index max_rank() const { return train_.max_rank(); }
    const TtVector& train() const { return train_; }

private:
    std::vector<Index> rows_;
    std::vector<Index> cols_;
    TtVector train_;
};

namespace detail {

/// Slice G[i] (an r0 x r1 matrix) out of a core stored as (r0*n) x r1.
inline Mat core_slice(const Mat& core, Index n, Index i) {
    const Index r0 = core.rows() / n;
    Mat s(r0, core.cols());
    for (Index a = 0; a < r0; ++a) s.row(a) = core.row(a * n + i);
    return s;
}

/// Reshape a core from (r0*n) x r1 to r0 x (n*r1) with column index i + n*b.
inline Mat right_unfold(const Mat& core, Index n) {
    const Index r0 = core.rows() / n;
    const Index r1 = core.cols();
    Mat h(r0, n * r1);
    for (Index b = 0; b < r1; ++b)
        for (Index i = 0; i < n; ++i)
            for (Index a = 0; a < r0; ++a) h(a, i + n * b) = core(a * n + i, b);
    return h;
}

/// Inverse of right_unfold.
inline Mat from_right_unfold(const Mat& h, Index n) {
    const Index r0 = h.rows();
    const Index r1 = h.cols() / n;
    Mat core(r0 * n, r1);
    for (Index b = 0; b < r1; ++b)
        for (Index i = 0; i < n; ++i)
            for (Index a = 0; a < r0; ++a) core(a * n + i, b) = h(a, i + n * b);
    return core;
}

/// Smallest kept rank such that the discarded tail of singular values has
/// Frobenius mass at most delta. Ties keep the earlier-indexed vectors.
inline Index truncation_rank(const Vec& sv, double delta) {
    Index r = sv.size();
    if (delta <= 0.0) {
        while (r > 1 && sv(r - 1) == 0.0) --r;
        return r;
    }
    const double budget = delta * delta;
    double tail = 0.0;
    while (r > 1 && tail + sv(r - 1) * sv(r - 1) <= budget) {
        tail += sv(r - 1) * sv(r - 1);
        --r;
    }
    return r;
}

inline TtVector zero_like(const std::vector<Index>& modes) {
    std::vector<Mat> cores;
    cores.reserve(modes.size());
    for (Index n : modes) cores.push_back(Mat::Zero(n, 1));
    return TtVector(modes, cores);
}

/// Right-to-left QR pass. On return all cores except the first have
/// orthonormal row unfoldings, so the train norm is ||cores[0]||_F.
inline void right_orthogonalize(std::vector<Mat>& cores, const std::vector<Index>& modes) {
    for (Index k = static_cast<Index>(cores.size()) - 1; k >= 1; --k) {
        const Index n = modes[k];
        Mat h = right_unfold(cores[k], n);        // r_{k-1} x (n*r_k)
        Eigen::HouseholderQR<Mat> qr(h.transpose());
        const Index rnew = std::min(h.rows(), h.cols());
        Mat q = qr.householderQ() * Mat::Identity(h.cols(), rnew);
        Mat r = qr.matrixQR().topLeftCorner(rnew, h.rows()).triangularView<Eigen::Upper>();
        cores[k] = from_right_unfold(q.transpose(), n);
        cores[k - 1] = cores[k - 1] * r.transpose();
    }
}

/// Shared rounding pass: right-to-left orthogonalization followed by a
/// left-to-right truncated SVD sweep with per-unfolding threshold delta.
/// Ranks never increase. This is algorithm 2 of Oseledets, SIAM J. Sci.
/// Comput. 33(5), 2011, with the threshold supplied by the caller.
inline TtVector round_with_threshold(const TtVector& v, double relative_eps, double absolute_tol,
                                     bool relative) {
    const Index d = v.dim();
    if (d == 1) return v;

    std::vector<Mat> cores = v.cores();
    const std::vector<Index>& modes = v.mode_sizes();
    right_orthogonalize(cores, modes);

    const double norm = cores[0].norm();
    if (norm == 0.0) return zero_like(modes);
    const double delta =
        (relative ? relative_eps * norm : absolute_tol) / std::sqrt(static_cast<double>(d - 1));

    // Left-to-right truncated SVD sweep.
    for (Index k = 0; k < d - 1; ++k) {
        Eigen::BDCSVD<Mat> svd(cores[k], Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Index r = truncation_rank(svd.singularValues(), delta);
        cores[k] = svd.matrixU().leftCols(r);
        Mat carry = svd.singularValues().head(r).asDiagonal() *
                    svd.matrixV().leftCols(r).transpose();
        cores[k + 1] = from_right_unfold(carry * right_unfold(cores[k + 1], modes[k + 1]),
                                         modes[k + 1]);
    }
    return TtVector(modes, cores);
}

}  // namespace detail

/// TT-SVD of a dense tensor given as a flat array in C order (last index
/// fastest). The result B satisfies ||A - B||_F <= eps * ||A||_F; the budget
/// is split uniformly, eps*||A||_F/sqrt(d-1) per unfolding truncation.
/// Rejects all-zero input (the relative tolerance is undefined there).
inline TtVector tt_svd(const Vec& flat, const std::vector<Index>& modes, double eps) {
    const Index d = static_cast<Index>(modes.size());
    if (d < 1) throw std::invalid_argument("tt_svd: dimension must be at least 1");
    if (eps < 0.0) throw std::invalid_argument("tt_svd: tolerance must be nonnegative");
    Index total = 1;
    for (Index n : modes) {
        if (n < 1) throw std::invalid_argument("tt_svd: mode sizes must be positive");
        total *= n;
    }
    if (flat.size() != total) throw std::invalid_argument("tt_svd: data size does not match modes");
    const double norm = flat.norm();
    if (norm == 0.0) throw std::invalid_argument("tt_svd: all-zero input");
    const double delta = (d > 1) ? eps * norm / std::sqrt(static_cast<double>(d - 1)) : 0.0;

    std::vector<Mat> cores(d);
    Mat cur = flat.transpose();  // 1 x total, columns in C order
    Index r_prev = 1;
    Index rest = total;
    for (Index k = 0; k + 1 < d; ++k) {
        const Index n = modes[k];
        rest /= n;
        Mat m(r_prev * n, rest);
        for (Index a = 0; a < r_prev; ++a)
            for (Index i = 0; i < n; ++i) m.row(a * n + i) = cur.row(a).segment(i * rest, rest);
        Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Index r = detail::truncation_rank(svd.singularValues(), delta);
        cores[k] = svd.matrixU().leftCols(r);
        cur = svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
        r_prev = r;
    }
    Mat last(r_prev * modes[d - 1], 1);
    for (Index a = 0; a < r_prev; ++a)
        for (Index i = 0; i < modes[d - 1]; ++i) last(a * modes[d - 1] + i, 0) = cur(a, i);
    cores[d - 1] = last;
    return TtVector(modes, cores);
}

/// TT rounding: ||result - v||_F <= eps * ||v||_F and no rank increases.
inline TtVector tt_round(const TtVector& v, double eps) {
    if (eps < 0.0) throw std::invalid_argument("tt_round: tolerance must be nonnegative");
    return detail::round_with_threshold(v, eps, 0.0, true);
}

/// TT rounding with an absolute Frobenius budget instead of a relative one.
inline TtVector tt_round_abs(const TtVector& v, double tol) {
    if (tol < 0.0) throw std::invalid_argument("tt_round_abs: tolerance must be nonnegative");
    return detail::round_with_threshold(v, 0.0, tol, false);
}

/// Sum of two trains; ranks concatenate (rank(a+b)_k <= rank(a)_k + rank(b)_k).
inline TtVector tt_add(const TtVector& a, const TtVector& b) {
    if (a.mode_sizes() != b.mode_sizes()) throw std::invalid_argument("tt_add: mode size mismatch");
    const Index d = a.dim();
    const std::vector<Index>& modes = a.mode_sizes();
    if (d == 1) return TtVector(modes, {a.core(0) + b.core(0)});

    std::vector<Mat> cores(d);
    for (Index k = 0; k < d; ++k) {
        const Index n = modes[k];
        const Index ra0 = a.rank(k), ra1 = a.rank(k + 1);
        const Index rb0 = b.rank(k), rb1 = b.rank(k + 1);
        if (k == 0) {
            Mat z(n, ra1 + rb1);
            z.leftCols(ra1) = a.core(0);
            z.rightCols(rb1) = b.core(0);
            cores[k] = z;
        } else if (k == d - 1) {
            Mat z((ra0 + rb0) * n, 1);
            z.topRows(ra0 * n) = a.core(k);
            z.bottomRows(rb0 * n) = b.core(k);
            cores[k] = z;
        } else {
            Mat z = Mat::Zero((ra0 + rb0) * n, ra1 + rb1);
            z.topLeftCorner(ra0 * n, ra1) = a.core(k);
            z.bottomRightCorner(rb0 * n, rb1) = b.core(k);
            cores[k] = z;
        }
    }
    return TtVector(modes, cores);
}

inline TtVector tt_scale(const TtVector& a, double c) {
    std::vector<Mat> cores = a.cores();
    cores[0] *= c;
    return TtVector(a.mode_sizes(), cores);
}

/// Inner product; equals the dot product of the dense reconstructions.
inline double tt_inner(const TtVector& a, const TtVector& b) {
    if (a.mode_sizes() != b.mode_sizes())
        throw std::invalid_argument("tt_inner: mode size mismatch");
    const Index d = a.dim();
    Mat w = Mat::Ones(1, 1);  // rank(b)_k x rank(a)_k transfer matrix
    for (Index k = 0; k < d; ++k) {
        const Index n = a.mode_sizes()[k];
        Mat t = w * detail::right_unfold(a.core(k), n);       // rb0 x (n*ra1)
        Mat tr = detail::from_right_unfold(t, n);             // (rb0*n) x ra1
        w = b.core(k).transpose() * tr;                       // rb1 x ra1
    }
    return w(0, 0);
}

/// Frobenius norm, sqrt(tt_inner(a, a)), computed through an
/// orthogonalization pass so heavily cancelling trains stay accurate.
inline double tt_norm_f(const TtVector& a) {
    if (a.dim() == 1) return a.core(0).norm();
    std::vector<Mat> cores = a.cores();
    detail::right_orthogonalize(cores, a.mode_sizes());
    return cores[0].norm();
}

inline double tt_norm_f(const TtMatrix& m) { return tt_norm_f(m.train()); }

/// Dense reconstruction as a flat array in C order. Guarded by an element
/// cap since the result is exponential in d; intended for small cases only.
inline Vec tt_to_dense(const TtVector& v, Index max_elements = Index(1) << 24) {
    Index total = 1;
    for (Index n : v.mode_sizes()) {
        total *= n;
        if (total > max_elements)
            throw std::invalid_argument("tt_to_dense: element cap exceeded");
    }
    Mat p = Mat::Ones(1, 1);
    for (Index k = 0; k < v.dim(); ++k) {
        const Index n = v.mode_sizes()[k];
        Mat t = p * detail::right_unfold(v.core(k), n);  // rows x (n*r1), col (i + n*b)
        // unfold columns (i + n*b) into rows (I*n + i)
        Mat pn(p.rows() * n, v.rank(k + 1));
        for (Index row = 0; row < p.rows(); ++row)
            for (Index i = 0; i < n; ++i)
                for (Index b = 0; b < pn.cols(); ++b) pn(row * n + i, b) = t(row, i + n * b);
        p = std::move(pn);
    }
    return Vec(p.col(0));
}

/// Matrix-vector product in TT format; result ranks are bounded by the
/// products of the operand ranks.
inline TtVector tt_matvec(const TtMatrix& m, const TtVector& v) {
    if (m.col_sizes() != v.mode_sizes())
        throw std::invalid_argument("tt_matvec: operator/vector size mismatch");
    const Index d = m.dim();
    std::vector<Mat> cores(d);
    for (Index k = 0; k < d; ++k) {
        const Index n = m.row_sizes()[k], mm = m.col_sizes()[k];
        const Index rm0 = m.ranks()[k], rm1 = m.ranks()[k + 1];
        const Index rv0 = v.rank(k), rv1 = v.rank(k + 1);
        const Mat& gm = m.train().core(k);  // (rm0*n*mm) x rm1, row a*(n*mm)+i*mm+j
        const Mat& gv = v.core(k);          // (rv0*mm) x rv1, row c*mm+j

        // Reorder both operands so the contraction over j is one GEMM.
        Mat amat(mm, rm0 * n * rm1);
        for (Index b = 0; b < rm1; ++b)
            for (Index a = 0; a < rm0; ++a)
                for (Index i = 0; i < n; ++i)
                    for (Index j = 0; j < mm; ++j)
                        amat(j, (a * n + i) * rm1 + b) = gm(a * (n * mm) + i * mm + j, b);
        Mat vmat(rv0 * rv1, mm);
        for (Index c = 0; c < rv0; ++c)
            for (Index dd = 0; dd < rv1; ++dd)
                for (Index j = 0; j < mm; ++j) vmat(c * rv1 + dd, j) = gv(c * mm + j, dd);
        Mat p = vmat * amat;  // (c,d) x (a,i,b)

        Mat z(rm0 * rv0 * n, rm1 * rv1);
        for (Index a = 0; a < rm0; ++a)
            for (Index c = 0; c < rv0; ++c)
                for (Index i = 0; i < n; ++i)
                    for (Index b = 0; b < rm1; ++b)
                        for (Index dd = 0; dd < rv1; ++dd)
                            z((a * rv0 + c) * n + i, b * rv1 + dd) =
                                p(c * rv1 + dd, (a * n + i) * rm1 + b);
        cores[k] = std::move(z);
    }
    return TtVector(m.row_sizes(), cores);
}

/// Operator-operator product in TT format.
inline TtMatrix tt_matmat(const TtMatrix& a, const TtMatrix& b) {
    if (a.col_sizes() != b.row_sizes())
        throw std::invalid_argument("tt_matmat: inner size mismatch");
    const Index d = a.dim();
    std::vector<Mat> cores(d);
    std::vector<Index> fused(d);
    for (Index k = 0; k < d; ++k) {
        const Index n = a.row_sizes()[k], mm = a.col_sizes()[k], l = b.col_sizes()[k];
        const Index ra0 = a.ranks()[k], ra1 = a.ranks()[k + 1];
        const Index rb0 = b.ranks()[k], rb1 = b.ranks()[k + 1];
        const Mat& ga = a.train().core(k);
        const Mat& gb = b.train().core(k);

        Mat amat(mm, ra0 * n * ra1);
        for (Index bb = 0; bb < ra1; ++bb)
            for (Index aa = 0; aa < ra0; ++aa)
                for (Index i = 0; i < n; ++i)
                    for (Index j = 0; j < mm; ++j)
                        amat(j, (aa * n + i) * ra1 + bb) = ga(aa * (n * mm) + i * mm + j, bb);
        Mat bmat(rb0 * l * rb1, mm);
        for (Index c = 0; c < rb0; ++c)
            for (Index q = 0; q < l; ++q)
                for (Index dd = 0; dd < rb1; ++dd)
                    for (Index j = 0; j < mm; ++j)
                        bmat((c * l + q) * rb1 + dd, j) = gb(c * (mm * l) + j * l + q, dd);
        Mat p = bmat * amat;  // (c,q,d) x (a,i,b)

        Mat z(ra0 * rb0 * n * l, ra1 * rb1);
        for (Index aa = 0; aa < ra0; ++aa)
            for (Index c = 0; c < rb0; ++c)
                for (Index i = 0; i < n; ++i)
                    for (Index q = 0; q < l; ++q)
                        for (Index bb = 0; bb < ra1; ++bb)
                            for (Index dd = 0; dd < rb1; ++dd)
                                z(((aa * rb0 + c) * n + i) * l + q, bb * rb1 + dd) =
                                    p((c * l + q) * rb1 + dd, (aa * n + i) * ra1 + bb);
        cores[k] = std::move(z);
        fused[k] = n * l;
    }
    return TtMatrix(a.row_sizes(), b.col_sizes(), TtVector(fused, cores));
}

inline TtMatrix tt_add(const TtMatrix& a, const TtMatrix& b) {
    if (a.row_sizes() != b.row_sizes() || a.col_sizes() != b.col_sizes())
        throw std::invalid_argument("tt_add: operator size mismatch");
    return TtMatrix(a.row_sizes(), a.col_sizes(), tt_add(a.train(), b.train()));
}

inline TtMatrix tt_scale(const TtMatrix& a, double c) {
    return TtMatrix(a.row_sizes(), a.col_sizes(), tt_scale(a.train(), c));
}

inline TtMatrix tt_round(const TtMatrix& a, double eps) {
    return TtMatrix(a.row_sizes(), a.col_sizes(), tt_round(a.train(), eps));
}

inline TtMatrix tt_round_abs(const TtMatrix& a, double tol) {
    return TtMatrix(a.row_sizes(), a.col_sizes(), tt_round_abs(a.train(), tol));
}

inline TtMatrix tt_transpose(const TtMatrix& a) {
    const Index d = a.dim();
    std::vector<Mat> cores(d);
    std::vector<Index> fused(d);
    for (Index k = 0; k < d; ++k) {
        const Index n = a.row_sizes()[k], mm = a.col_sizes()[k];
        const Index r0 = a.ranks()[k];
        const Mat& g = a.train().core(k);
        Mat z(g.rows(), g.cols());
        for (Index aa = 0; aa < r0; ++aa)
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < mm; ++j)
                    z.row(aa * (mm * n) + j * n + i) = g.row(aa * (n * mm) + i * mm + j);
        cores[k] = std::move(z);
        fused[k] = mm * n;
    }
    return TtMatrix(a.col_sizes(), a.row_sizes(), TtVector(fused, cores));
}

/// Dense reconstruction of an operator; row/column indices are C ordered.
inline Mat tt_matrix_to_dense(const TtMatrix& m, Index max_elements = Index(1) << 24) {
    Vec flat = tt_to_dense(m.train(), max_elements);
    Index nrows = 1, ncols = 1;
    const Index d = m.dim();
    for (Index k = 0; k < d; ++k) {
        nrows *= m.row_sizes()[k];
        ncols *= m.col_sizes()[k];
    }
    Mat out(nrows, ncols);
    std::vector<Index> iv(d), jv(d);
    for (Index flat_idx = 0; flat_idx < flat.size(); ++flat_idx) {
        Index rem = flat_idx;
        for (Index k = d - 1; k >= 0; --k) {
            const Index q = rem % (m.row_sizes()[k] * m.col_sizes()[k]);
            rem /= m.row_sizes()[k] * m.col_sizes()[k];
            iv[k] = q / m.col_sizes()[k];
            jv[k] = q % m.col_sizes()[k];
        }
        Index row = 0, col = 0;
        for (Index k = 0; k < d; ++k) {
            row = row * m.row_sizes()[k] + iv[k];
            col = col * m.col_sizes()[k] + jv[k];
        }
        out(row, col) = flat(flat_idx);
    }
    return out;
}

/// Rank-1 train from one vector per direction.
inline TtVector tt_rank1_vector(const std::vector<Vec>& factors) {
    std::vector<Index> modes;
    std::vector<Mat> cores;
    for (const Vec& f : factors) {
        modes.push_back(f.size());
        cores.push_back(f);
    }
    return TtVector(modes, cores);
}

/// Rank-1 operator from one (possibly rectangular) matrix per direction;
/// the dense reconstruction is their Kronecker product in direction order.
inline TtMatrix tt_rank1_matrix(const std::vector<Mat>& factors) {
    std::vector<Index> rows, cols, fused;
    std::vector<Mat> cores;
    for (const Mat& f : factors) {
        rows.push_back(f.rows());
        cols.push_back(f.cols());
        fused.push_back(f.rows() * f.cols());
        Mat c(f.rows() * f.cols(), 1);
        for (Index i = 0; i < f.rows(); ++i)
            for (Index j = 0; j < f.cols(); ++j) c(i * f.cols() + j, 0) = f(i, j);
        cores.push_back(std::move(c));
    }
    return TtMatrix(rows, cols, TtVector(fused, cores));
}

inline TtMatrix tt_identity(const std::vector<Index>& modes) {
    std::vector<Mat> factors;
    factors.reserve(modes.size());
    for (Index n : modes) factors.push_back(Mat::Identity(n, n));
    return tt_rank1_matrix(factors);
}

/// All-ones rank-1 train.
inline TtVector tt_ones(const std::vector<Index>& modes) {
    std::vector<Vec> factors;
    factors.reserve(modes.size());
    for (Index n : modes) factors.push_back(Vec::Ones(n));
    return tt_rank1_vector(factors);
}

/// Evaluate the train at one multi-index (cheap: a chain of r0 x r1 slices).
inline double tt_entry(const TtVector& v, const std::vector<Index>& idx) {
    Mat p = Mat::Ones(1, 1);
    for (Index k = 0; k < v.dim(); ++k)
        p = p * detail::core_slice(v.core(k), v.mode_sizes()[k], idx[k]);
    return p(0, 0);
}

}  // namespace ttfilter
