#pragma once

#include <cmath>
#include <utility>

#include "schottky/common.hpp"

namespace schottky {

/// Element of PSL(2,R) stored as a unit-determinant matrix. The +/- ambiguity
/// is resolved by the convention c > 0, or c == 0 and a > 0, so identical
/// group elements compare bit-stable after normalization.
struct Mobius {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Mobius() = default;

    Mobius(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        normalize();
    }

    void normalize() {
        const double det = a * d - b * c;
        if (!(det > 0.0))
            throw Error("Mobius: determinant must be positive, got " + std::to_string(det));
        const double s = std::sqrt(det);
        a /= s;
        b /= s;
        c /= s;
        d /= s;
        canonicalize_sign();
    }

    void canonicalize_sign() {
        if (c < 0.0 || (c == 0.0 && a < 0.0)) {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
    }

    // already-unit-determinant entries; skips the det division. Recomputing
    // ad - bc cancels catastrophically once entries are large, so products
    // of normalized matrices must come through here.
    static Mobius unit(double a, double b, double c, double d) {
        Mobius g;
        g.a = a;
        g.b = b;
        g.c = c;
        g.d = d;
        g.canonicalize_sign();
        return g;
    }

    double trace() const { return a + d; }

    Mobius inverse() const { return Mobius::unit(d, -b, -c, a); }

    friend Mobius operator*(const Mobius& g, const Mobius& h) {
        return Mobius::unit(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                            g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
    }

    // identity in PSL(2,R), i.e. +I or -I
    bool is_identity(double tol = 1e-12) const {
        const double dplus = std::max({std::abs(a - 1), std::abs(b), std::abs(c), std::abs(d - 1)});
        const double dminus = std::max({std::abs(a + 1), std::abs(b), std::abs(c), std::abs(d + 1)});
        return std::min(dplus, dminus) < tol;
    }
};

inline bool is_inf(const Complex& z) {
    return std::isinf(z.real()) || std::isinf(z.imag());
}

inline Complex inf_point() { return Complex(kInf, 0.0); }

/// Mobius action on the extended complex plane. Total: z = infinity maps to
/// a/c (or infinity when c == 0) and the pole -d/c maps to infinity.
inline Complex mobius_apply(const Mobius& g, const Complex& z) {
    if (is_inf(z)) return g.c == 0.0 ? inf_point() : Complex(g.a / g.c, 0.0);
    const Complex den = g.c * z + g.d;
    if (std::abs(den) < 1e-300) return inf_point();
    return (g.a * z + g.b) / den;
}

/// gamma'(z) = 1/(cz+d)^2.
inline Complex mobius_derivative(const Mobius& g, const Complex& z) {
    const Complex den = g.c * z + g.d;
    if (std::abs(den) < 1e-14)
        throw PoleError("mobius_derivative: evaluation at pole");
    return 1.0 / (den * den);
}

inline bool is_hyperbolic(const Mobius& g, double tol = 1e-12) {
    return std::abs(g.trace()) > 2.0 + tol;
}

struct FixedPoints {
    double attracting = 0.0;  // kInf encodes the point at infinity
    double repelling = 0.0;
};

/// Real fixed points of a hyperbolic element, labeled so |g'| < 1 at the
/// attracting one.
inline FixedPoints fixed_points(const Mobius& g) {
    if (!is_hyperbolic(g))
        throw NotHyperbolicError("fixed_points: |trace| <= 2");
    if (g.c == 0.0) {
        // affine map z -> (a/d) z + b/d with multiplier a^2
        const double x = g.b / (g.d - g.a);
        return (g.a * g.a > 1.0) ? FixedPoints{kInf, x} : FixedPoints{x, kInf};
    }
    const double tr = g.trace();
    const double disc = std::sqrt(tr * tr - 4.0);
    // roots of c x^2 + (d - a) x - b = 0, written to avoid cancellation
    const double q = 0.5 * ((g.a - g.d) + ((g.a - g.d) >= 0 ? disc : -disc));
    const double x1 = q / g.c;
    const double x2 = -g.b / q;
    const double d1 = std::abs(g.c * x1 + g.d);
    return d1 > 1.0 ? FixedPoints{x1, x2} : FixedPoints{x2, x1};
}

/// Geodesic length of the conjugacy class: 2 arccosh(|tr|/2). Satisfies
/// |g'(attracting fixed point)| = exp(-length).
inline double translation_length(const Mobius& g) {
    if (!is_hyperbolic(g))
        throw NotHyperbolicError("translation_length: |trace| <= 2");
    return 2.0 * std::acosh(0.5 * std::abs(g.trace()));
}

}  // namespace schottky
