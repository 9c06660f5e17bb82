#pragma once

#include <cmath>

#include "ttfilter/model.hpp"

namespace ttfilter {
namespace models {

namespace detail_m {

inline std::vector<std::vector<SeparableField>> zero_matrix(Index d) {
    return std::vector<std::vector<SeparableField>>(
        d, std::vector<SeparableField>(d, SeparableField::zero(d)));
}

inline std::vector<std::vector<SeparableField>> constant_diag_matrix(Index d, double c) {
    auto m = zero_matrix(d);
    for (Index k = 0; k < d; ++k) m[k][k] = SeparableField::constant(d, c);
    return m;
}

}  // namespace detail_m

/// Cubic sensor: dx = (A x + sin(1.5 x)) dt + (1/sqrt(5)) dv + (sqrt(2)/5) dw,
/// dy_k = x_k^3 dt + dw_k, with A lower bidiagonal (-0.8 on the diagonal,
/// -0.1 on the first subdiagonal).
inline SignalModel cubic_sensor(Index d) {
    SignalModel m;
    m.dim = d;
    const double g = 1.0 / std::sqrt(5.0);
    const double r = std::sqrt(2.0) / 5.0;
    for (Index k = 0; k < d; ++k) {
        SeparableField fk(d);
        fk.add_term(-0.8, {{k, Univariate::monomial(1)}});
        if (k > 0) fk.add_term(-0.1, {{k - 1, Univariate::monomial(1)}});
        fk.add_term(1.0, {{k, Univariate::sine(1.5)}});
        m.f.push_back(fk);

        SeparableField hk(d);
        hk.add_term(1.0, {{k, Univariate::monomial(3)}});
        m.h.push_back(hk);

        m.gg_diag.push_back(SeparableField::constant(d, g * g));
        m.rr_diag.push_back(SeparableField::constant(d, r * r));
        m.div_rho_col.push_back(SeparableField::zero(d));
    }
    m.G = detail_m::constant_diag_matrix(d, g);
    m.rho = detail_m::constant_diag_matrix(d, r);
    SeparableField divf(d);
    divf.add_term(-0.8 * static_cast<double>(d), {});
    for (Index k = 0; k < d; ++k) divf.add_term(1.5, {{k, Univariate::cosine(1.5)}});
    m.div_f = divf;
    m.validate();
    return m;
}

/// Four-dimensional multi-modal benchmark: sinusoidal drift chain, even
/// observation function h_k = 0.2 x_k^2 + cos(0.6 x_k), and state-dependent
/// correlation rho = diag(x_k / (5 sqrt(10))). The posterior marginals are
/// bimodal and symmetric.
inline SignalModel multimode() {
    const Index d = 4;
    SignalModel m;
    m.dim = d;
    const double g = std::sqrt(30.0) / 10.0;
    const double rc = 1.0 / (5.0 * std::sqrt(10.0));
    const double drift[4] = {0.5, 0.6, 0.8, 0.5};
    for (Index k = 0; k < d; ++k) {
        SeparableField fk(d);
        fk.add_term(drift[k], {{k, Univariate::sine(1.0)}});
        if (k + 1 < d) fk.add_term(0.2, {{k + 1, Univariate::sine(1.0)}});
        m.f.push_back(fk);

        SeparableField hk(d);
        hk.add_term(0.2, {{k, Univariate::monomial(2)}});
        hk.add_term(1.0, {{k, Univariate::cosine(0.6)}});
        m.h.push_back(hk);

        m.gg_diag.push_back(SeparableField::constant(d, g * g));
        SeparableField rr(d);
        rr.add_term(rc * rc, {{k, Univariate::monomial(2)}});
        m.rr_diag.push_back(rr);
        m.div_rho_col.push_back(SeparableField::constant(d, rc));
    }
    m.G = detail_m::constant_diag_matrix(d, g);
    m.rho = detail_m::zero_matrix(d);
    for (Index k = 0; k < d; ++k) {
        SeparableField rk(d);
        rk.add_term(rc, {{k, Univariate::monomial(1)}});
        m.rho[k][k] = rk;
    }
    SeparableField divf(d);
    for (Index k = 0; k < d; ++k) divf.add_term(drift[k], {{k, Univariate::cosine(1.0)}});
    m.div_f = divf;
    m.validate();
    return m;
}

/// Model behind the rank study of the implicit-step inverse: orthogonal G
/// (so G G^T = I) and rho(x) = diag(x). Drift and observation are zero;
/// only the diffusion operators matter there.
inline SignalModel orthogonal_diffusion(Index d) {
    SignalModel m;
    m.dim = d;
    for (Index k = 0; k < d; ++k) {
        m.f.push_back(SeparableField::zero(d));
        m.h.push_back(SeparableField::zero(d));
        m.gg_diag.push_back(SeparableField::constant(d, 1.0));
        SeparableField rr(d);
        rr.add_term(1.0, {{k, Univariate::monomial(2)}});
        m.rr_diag.push_back(rr);
        m.div_rho_col.push_back(SeparableField::constant(d, 1.0));
    }
    m.G = detail_m::constant_diag_matrix(d, 1.0);
    m.rho = detail_m::zero_matrix(d);
    for (Index k = 0; k < d; ++k) {
        SeparableField rk(d);
        rk.add_term(1.0, {{k, Univariate::monomial(1)}});
        m.rho[k][k] = rk;
    }
    m.div_f = SeparableField::zero(d);
    m.validate();
    return m;
}

/// Scalar linear-Gaussian model dx = a x dt + g dv + r dw, dy = c x dt + dw.
/// Closed-form Kalman-Bucy reference exists, so it anchors several oracles.
inline SignalModel linear_gaussian_1d(double a, double g, double r, double c) {
    SignalModel m;
    m.dim = 1;
    SeparableField f(1), h(1);
    f.add_term(a, {{0, Univariate::monomial(1)}});
    h.add_term(c, {{0, Univariate::monomial(1)}});
    m.f = {f};
    m.h = {h};
    m.G = {{SeparableField::constant(1, g)}};
    m.rho = {{SeparableField::constant(1, r)}};
    m.gg_diag = {SeparableField::constant(1, g * g)};
    m.rr_diag = {SeparableField::constant(1, r * r)};
    m.div_f = SeparableField::constant(1, a);
    m.div_rho_col = {SeparableField::zero(1)};
    m.validate();
    return m;
}

/// Smooth bounded-observation scalar model used by the convergence studies.
inline SignalModel smooth_1d() {
    SignalModel m;
    m.dim = 1;
    SeparableField f(1), h(1);
    f.add_term(-0.5, {{0, Univariate::monomial(1)}});
    f.add_term(0.4, {{0, Univariate::sine(1.0)}});
    h.add_term(0.8, {{0, Univariate::sine(1.0)}});
    m.f = {f};
    m.h = {h};
    m.G = {{SeparableField::constant(1, 0.7)}};
    m.rho = {{SeparableField::constant(1, 0.25)}};
    m.gg_diag = {SeparableField::constant(1, 0.49)};
    m.rr_diag = {SeparableField::constant(1, 0.0625)};
    SeparableField divf(1);
    divf.add_term(-0.5, {});
    divf.add_term(0.4, {{0, Univariate::cosine(1.0)}});
    m.div_f = divf;
    m.div_rho_col = {SeparableField::zero(1)};
    m.validate();
    return m;
}

/// Two-dimensional companion of smooth_1d with weak drift coupling; used
/// where a genuine low-rank structure is needed (TT accuracy study).
inline SignalModel smooth_2d() {
    const Index d = 2;
    SignalModel m;
    m.dim = d;
    for (Index k = 0; k < d; ++k) {
        SeparableField fk(d);
        fk.add_term(-0.5, {{k, Univariate::monomial(1)}});
        fk.add_term(0.2, {{1 - k, Univariate::sine(1.0)}});
        m.f.push_back(fk);
        SeparableField hk(d);
        hk.add_term(0.7, {{k, Univariate::sine(1.0)}});
        m.h.push_back(hk);
        m.gg_diag.push_back(SeparableField::constant(d, 0.49));
        m.rr_diag.push_back(SeparableField::constant(d, 0.0625));
        m.div_rho_col.push_back(SeparableField::zero(d));
    }
    m.G = detail_m::constant_diag_matrix(d, 0.7);
    m.rho = detail_m::constant_diag_matrix(d, 0.25);
    m.div_f = SeparableField::constant(d, -1.0);
    m.validate();
    return m;
}

}  // namespace models
}  // namespace ttfilter
