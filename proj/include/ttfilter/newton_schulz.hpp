#pragma once

#include <limits>
#include <sstream>

#include "ttfilter/rng.hpp"
#include "ttfilter/tensor_train.hpp"

namespace ttfilter {

struct NewtonSchulzOptions {
    double tol = 5e-5;        ///< stop when ||X A - I||_F / ||I||_F < tol
    double eps_round = 1e-8;  ///< TT rounding tolerance applied after every multiply
    int max_iter = 60;
    Index rank_cap = 96;      ///< abort if the iterate rank explodes past this
};

struct NewtonSchulzResult {
    TtMatrix inverse;
    double residual = 0.0;  ///< final ||X A - I||_F / ||I||_F
    int iterations = 0;
};

/// Estimate of the dominant eigenvalue magnitude of a symmetric TT operator
/// by power iteration with per-step rounding. Deterministic (fixed seed).
inline double tt_spectral_estimate(const TtMatrix& a, int iters = 25) {
    CounterRng rng(0x9e37UL);
    std::vector<Vec> factors;
    for (Index n : a.col_sizes()) {
        Vec f(n);
        for (Index i = 0; i < n; ++i) f(i) = rng.normal();
        factors.push_back(f);
    }
    TtVector x = tt_rank1_vector(factors);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        TtVector y = tt_round(tt_matvec(a, x), 1e-6);
        const double ny = tt_norm_f(y);
        if (ny == 0.0) return 0.0;
        lambda = ny / tt_norm_f(x);
        x = tt_scale(y, 1.0 / ny);
    }
    return lambda;
}

/// Inverse of a symmetric positive definite TT operator by the Newton-Schulz
/// iteration X <- X(2I - AX) with TT rounding after every multiply.
///
/// The initial iterate is X_0 = A^T / s^2 with s an upper estimate of
/// ||A||_2 from power iteration, which gives ||I - X_0 A||_2 < 1 for any
/// nonsingular A. The update is carried as X <- X - E X with E = X A - I, so
/// the residual operator E can be rounded at an absolute threshold tied to
/// ||I||_F; its rank collapses as the iteration converges, which keeps the
/// expensive late multiplies cheap.
inline NewtonSchulzResult newton_schulz_inverse(const TtMatrix& a,
                                                const NewtonSchulzOptions& opt = {}) {
    if (a.row_sizes() != a.col_sizes())
        throw std::invalid_argument("newton_schulz_inverse: operator must be square");
    const TtMatrix id = tt_identity(a.row_sizes());
    const double norm_id = tt_norm_f(id);

    // Power iteration approaches ||A||_2 from below; X_0 = A^T/s^2 tolerates
    // underestimates down to ||A||_2 / sqrt(2), so no safety factor is needed.
    const double sigma = tt_spectral_estimate(a);
    if (sigma <= 0.0) throw NumericalError("newton_schulz_inverse: zero operator");
    TtMatrix x = tt_scale(tt_transpose(a), 1.0 / (sigma * sigma));

    double residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= opt.max_iter; ++it) {
        TtMatrix p = tt_round_abs(tt_matmat(x, a), opt.eps_round * norm_id);
        TtMatrix e = tt_round_abs(tt_add(p, tt_scale(id, -1.0)), opt.eps_round * norm_id);
        const double res = tt_norm_f(e) / norm_id;
        if (res < opt.tol) return {x, res, it};
        if (res > 2.0 * residual && residual < 0.5) {
            std::ostringstream msg;
            msg << "newton_schulz_inverse: residual diverged (" << residual << " -> " << res
                << ") after " << it << " iterations";
            throw NumericalError(msg.str());
        }
        residual = std::min(residual, res);
        x = tt_round(tt_add(x, tt_scale(tt_matmat(e, x), -1.0)), opt.eps_round);
        if (x.max_rank() > opt.rank_cap) {
            std::ostringstream msg;
            msg << "newton_schulz_inverse: rank cap " << opt.rank_cap << " exceeded (rank "
                << x.max_rank() << ") at iteration " << it;
            throw NumericalError(msg.str());
        }
    }
    std::ostringstream msg;
    msg << "newton_schulz_inverse: no convergence in " << opt.max_iter
        << " iterations, final residual " << residual;
    throw NumericalError(msg.str());
}

}  // namespace ttfilter
