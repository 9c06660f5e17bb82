#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "ttfilter/tensor_train.hpp"

namespace ttfilter {

namespace detail {

inline void write_le_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t read_le_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline void write_le_f64(std::ostream& os, double x) {
    std::uint64_t v;
    static_assert(sizeof(double) == 8);
    std::memcpy(&v, &x, 8);
    write_le_u64(os, v);
}

inline double read_le_f64(std::istream& is) {
    const std::uint64_t v = read_le_u64(is);
    double x;
    std::memcpy(&x, &v, 8);
    return x;
}

}  // namespace detail

/// Binary dump of a train: a header of little-endian 64-bit integers
/// (d, mode sizes, ranks) followed by core entries as little-endian 64-bit
/// floats, core by core, with the last rank index fastest.
inline void tt_save(const TtVector& v, std::ostream& os) {
    const Index d = v.dim();
    detail::write_le_u64(os, static_cast<std::uint64_t>(d));
    for (Index n : v.mode_sizes()) detail::write_le_u64(os, static_cast<std::uint64_t>(n));
    for (Index r : v.ranks()) detail::write_le_u64(os, static_cast<std::uint64_t>(r));
    for (Index k = 0; k < d; ++k) {
        const Mat& c = v.core(k);
        const Index n = v.mode_sizes()[k];
        const Index r0 = v.rank(k), r1 = v.rank(k + 1);
        for (Index a = 0; a < r0; ++a)
            for (Index i = 0; i < n; ++i)
                for (Index b = 0; b < r1; ++b) detail::write_le_f64(os, c(a * n + i, b));
    }
}

inline TtVector tt_load(std::istream& is) {
    const Index d = static_cast<Index>(detail::read_le_u64(is));
    if (!is || d < 1 || d > 64) throw std::runtime_error("tt_load: corrupt header");
    std::vector<Index> modes(d);
    for (Index k = 0; k < d; ++k) modes[k] = static_cast<Index>(detail::read_le_u64(is));
    std::vector<Index> ranks(d + 1);
    for (Index k = 0; k <= d; ++k) ranks[k] = static_cast<Index>(detail::read_le_u64(is));
    std::vector<Mat> cores(d);
    for (Index k = 0; k < d; ++k) {
        Mat c(ranks[k] * modes[k], ranks[k + 1]);
        for (Index a = 0; a < ranks[k]; ++a)
            for (Index i = 0; i < modes[k]; ++i)
                for (Index b = 0; b < ranks[k + 1]; ++b)
                    c(a * modes[k] + i, b) = detail::read_le_f64(is);
        cores[k] = std::move(c);
    }
    if (!is) throw std::runtime_error("tt_load: truncated stream");
    return TtVector(modes, cores);
}

inline void tt_save_file(const TtVector& v, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("tt_save_file: cannot open " + path);
    tt_save(v, os);
}

inline TtVector tt_load_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("tt_load_file: cannot open " + path);
    return tt_load(is);
}

/// Operators are stored as their fused-mode train plus explicit row sizes;
/// column sizes are recovered from the fused mode sizes.
inline void tt_save_matrix_file(const TtMatrix& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("tt_save_matrix_file: cannot open " + path);
    detail::write_le_u64(os, static_cast<std::uint64_t>(m.dim()));
    for (Index n : m.row_sizes()) detail::write_le_u64(os, static_cast<std::uint64_t>(n));
    tt_save(m.train(), os);
}

inline TtMatrix tt_load_matrix_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("tt_load_matrix_file: cannot open " + path);
    const Index d = static_cast<Index>(detail::read_le_u64(is));
    if (!is || d < 1 || d > 64) throw std::runtime_error("tt_load_matrix_file: corrupt header");
    std::vector<Index> rows(d);
    for (Index k = 0; k < d; ++k) rows[k] = static_cast<Index>(detail::read_le_u64(is));
    TtVector train = tt_load(is);
    std::vector<Index> cols(d);
    for (Index k = 0; k < d; ++k) {
        if (rows[k] <= 0 || train.mode_sizes()[k] % rows[k] != 0)
            throw std::runtime_error("tt_load_matrix_file: inconsistent sizes");
        cols[k] = train.mode_sizes()[k] / rows[k];
    }
    return TtMatrix(rows, cols, train);
}

}  // namespace ttfilter
