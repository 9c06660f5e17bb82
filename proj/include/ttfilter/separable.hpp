#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "ttfilter/common.hpp"

namespace ttfilter {

/// One univariate factor of a separable term. The small closed set of shapes
/// keeps evaluation branch-cheap and makes fields hashable for caching.
class Univariate {
public:
    enum class Kind { monomial, sine, cosine, gaussian };

    static Univariate monomial(int power) { return {Kind::monomial, static_cast<double>(power), 0.0}; }
    static Univariate sine(double freq) { return {Kind::sine, freq, 0.0}; }
    static Univariate cosine(double freq) { return {Kind::cosine, freq, 0.0}; }
    static Univariate gaussian(double mean, double sigma) { return {Kind::gaussian, mean, sigma}; }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::monomial: {
                double p = 1.0;
                for (int i = 0; i < static_cast<int>(a_); ++i) p *= x;
                return p;
            }
            case Kind::sine: return std::sin(a_ * x);
            case Kind::cosine: return std::cos(a_ * x);
            case Kind::gaussian: {
                const double z = (x - a_) / b_;
                return std::exp(-0.5 * z * z);
            }
        }
        return 0.0;
    }

    void describe(std::ostream& os) const {
        switch (kind_) {
            case Kind::monomial: os << "x^" << static_cast<int>(a_); break;
            case Kind::sine: os << "sin(" << a_ << "x)"; break;
            case Kind::cosine: os << "cos(" << a_ << "x)"; break;
            case Kind::gaussian: os << "gauss(" << a_ << "," << b_ << ")"; break;
        }
    }

private:
    Univariate(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    Kind kind_;
    double a_, b_;
};

/// One product term: coeff * prod_k u_k(x_{axis_k}). Directions without a
/// factor contribute 1, so only the nontrivial axes are stored.
struct SeparableTerm {
    double coeff = 1.0;
    std::vector<std::pair<Index, Univariate>> factors;  // strictly increasing axes

    double eval(const Vec& x) const {
        double p = coeff;
        for (const auto& [axis, u] : factors) p *= u(x(axis));
        return p;
    }

    /// Values of this term's factor along one axis at the given 1-d points.
    /// The term coefficient is folded into axis 0 exactly once.
    Vec axis_values(Index axis, const Vec& points) const {
        Vec v = Vec::Ones(points.size());
        for (const auto& [ax, u] : factors)
            if (ax == axis)
                for (Index i = 0; i < points.size(); ++i) v(i) = u(points(i));
        if (axis == 0) v *= coeff;
        return v;
    }
};

/// Scalar function of x in R^d written as a sum of products of univariate
/// functions. Sampling one term on a tensor grid gives an exact rank-1
/// train, so diagonal operators built from these fields have known rank.
class SeparableField {
public:
    SeparableField() = default;
    explicit SeparableField(Index dim) : dim_(dim) {}

    static SeparableField zero(Index dim) { return SeparableField(dim); }

    static SeparableField constant(Index dim, double c) {
        SeparableField f(dim);
        if (c != 0.0) f.add_term(c, {});
        return f;
    }

    SeparableField& add_term(double coeff, std::vector<std::pair<Index, Univariate>> factors) {
        if (coeff != 0.0) terms_.push_back({coeff, std::move(factors)});
        return *this;
    }

    Index dim() const { return dim_; }
    const std::vector<SeparableTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double operator()(const Vec& x) const {
        double s = 0.0;
        for (const SeparableTerm& t : terms_) s += t.eval(x);
        return s;
    }

    /// Sum of two fields (term lists concatenate).
    friend SeparableField operator+(const SeparableField& a, const SeparableField& b) {
        SeparableField out = a;
        for (const SeparableTerm& t : b.terms_) out.terms_.push_back(t);
        return out;
    }

    friend SeparableField operator-(const SeparableField& a, const SeparableField& b) {
        SeparableField out = a;
        for (SeparableTerm t : b.terms_) {
            t.coeff = -t.coeff;
            out.terms_.push_back(std::move(t));
        }
        return out;
    }

    friend SeparableField operator*(double c, const SeparableField& a) {
        SeparableField out = a;
        if (c == 0.0) {
            out.terms_.clear();
            return out;
        }
        for (SeparableTerm& t : out.terms_) t.coeff *= c;
        return out;
    }

    void describe(std::ostream& os) const {
        os << "[";
        for (const SeparableTerm& t : terms_) {
            os << t.coeff << "*";
            for (const auto& [axis, u] : t.factors) {
                os << "@" << axis << ":";
                u.describe(os);
            }
            os << ";";
        }
        os << "]";
    }

private:
    Index dim_ = 0;
    std::vector<SeparableTerm> terms_;
};

namespace detail {

/// FNV-1a, used to fingerprint model descriptions for operator caching.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

}  // namespace ttfilter
