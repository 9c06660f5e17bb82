#pragma once

#include <cmath>
#include <vector>

#include "ttfilter/common.hpp"

namespace ttfilter {

/// Uniform tensor grid on the cube [-L, L]^d with homogeneous Dirichlet
/// boundary: N interior points per direction, spacing dx = 2L/(N+1), and
/// N+1 mid-edge points at the half-integer positions.
struct GridSpec {
    double half_width = 1.0;  ///< L
    Index points = 8;         ///< N, interior points per direction
    Index dim = 1;            ///< d

    GridSpec() = default;
    GridSpec(double L, Index N, Index d) : half_width(L), points(N), dim(d) {
        if (L <= 0.0 || N < 2 || d < 1)
            throw std::invalid_argument("GridSpec: need L > 0, N >= 2, d >= 1");
    }

    double dx() const { return 2.0 * half_width / static_cast<double>(points + 1); }

    /// Interior grid points -L + r*dx, r = 1..N.
    Vec interior_points() const {
        Vec x(points);
        for (Index r = 0; r < points; ++r) x(r) = -half_width + (r + 1) * dx();
        return x;
    }

    /// Mid-edge points -L + (r + 1/2)*dx, r = 0..N.
    Vec mid_points() const {
        Vec x(points + 1);
        for (Index r = 0; r <= points; ++r) x(r) = -half_width + (r + 0.5) * dx();
        return x;
    }

    std::vector<Index> mode_sizes() const { return std::vector<Index>(dim, points); }

    double cell_volume() const {
        double v = 1.0;
        for (Index k = 0; k < dim; ++k) v *= dx();
        return v;
    }

    /// Scaled discrete L2 norm, the grid analogue of the continuous L2 norm.
    double scaled_norm(double frobenius_norm) const {
        return std::sqrt(cell_volume()) * frobenius_norm;
    }
};

}  // namespace ttfilter
