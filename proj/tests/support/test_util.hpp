#pragma once

#include <vector>

#include "ttfilter/rng.hpp"
#include "ttfilter/tensor_train.hpp"

namespace ttfilter::testing {

inline Index flat_size(const std::vector<Index>& modes) {
    Index t = 1;
    for (Index n : modes) t *= n;
    return t;
}

/// C-order flat index (last mode fastest).
inline Index flat_index(const std::vector<Index>& idx, const std::vector<Index>& modes) {
    Index f = 0;
    for (std::size_t k = 0; k < modes.size(); ++k) f = f * modes[k] + idx[k];
    return f;
}

inline bool next_multi_index(std::vector<Index>& idx, const std::vector<Index>& modes) {
    for (Index k = static_cast<Index>(modes.size()) - 1; k >= 0; --k) {
        if (++idx[k] < modes[k]) return true;
        idx[k] = 0;
    }
    return false;
}

/// Naive reconstruction by explicit summation over all rank indices.
/// Intentionally independent of the chain-product code in tt_to_dense.
inline Vec naive_contract(const TtVector& v) {
    const std::vector<Index>& modes = v.mode_sizes();
    Vec out = Vec::Zero(flat_size(modes));
    std::vector<Index> idx(modes.size(), 0);
    do {
        Mat p = Mat::Ones(1, 1);
        for (Index k = 0; k < v.dim(); ++k) {
            const Mat& c = v.core(k);
            const Index r0 = v.rank(k), r1 = v.rank(k + 1);
            Mat slice(r0, r1);
            for (Index a = 0; a < r0; ++a) slice.row(a) = c.row(a * modes[k] + idx[k]);
            p = p * slice;
        }
        out(flat_index(idx, modes)) = p(0, 0);
    } while (next_multi_index(idx, modes));
    return out;
}

inline Vec random_dense(const std::vector<Index>& modes, CounterRng& rng) {
    Vec v(flat_size(modes));
    for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    return v;
}

inline TtVector random_tt(const std::vector<Index>& modes, const std::vector<Index>& ranks,
                          CounterRng& rng) {
    std::vector<Mat> cores;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        Mat c(ranks[k] * modes[k], ranks[k + 1]);
        for (Index i = 0; i < c.rows(); ++i)
            for (Index j = 0; j < c.cols(); ++j) c(i, j) = rng.normal();
        cores.push_back(std::move(c));
    }
    return TtVector(modes, cores);
}

inline TtMatrix random_tt_matrix(const std::vector<Index>& rows, const std::vector<Index>& cols,
                                 const std::vector<Index>& ranks, CounterRng& rng) {
    std::vector<Index> fused(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) fused[k] = rows[k] * cols[k];
    return TtMatrix(rows, cols, random_tt(fused, ranks, rng));
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ttfilter::testing
