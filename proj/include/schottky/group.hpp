#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "schottky/common.hpp"
#include "schottky/mobius.hpp"

namespace schottky {

struct Disk {
    double center = 0.0;
    double radius = 1.0;

    bool contains(const Complex& z, double margin = 0.0) const {
        return std::abs(z - Complex(center, 0.0)) < radius - margin;
    }
    Interval interval() const { return {center - radius, center + radius}; }
    double diameter() const { return 2.0 * radius; }
};

/// Image of a disk centered on the real line under a real Mobius map. Exact:
/// the images of the two real diameter endpoints are the real diameter
/// endpoints of the image disk. Requires the pole to lie outside the closure.
inline Disk disk_image(const Mobius& g, const Disk& disk) {
    if (g.c != 0.0) {
        const double pole = -g.d / g.c;
        if (std::abs(pole - disk.center) <= disk.radius)
            throw GeometryError("disk_image: pole inside disk, image is unbounded");
    }
    const Complex w1 = mobius_apply(g, Complex(disk.center - disk.radius, 0.0));
    const Complex w2 = mobius_apply(g, Complex(disk.center + disk.radius, 0.0));
    const double x1 = w1.real(), x2 = w2.real();
    return Disk{0.5 * (x1 + x2), 0.5 * std::abs(x2 - x1)};
}

/// Hyperbolic map sending the exterior of the closure of D(c2,r2) onto
/// D(c1,r1): z -> c1 - r1 r2 / (z - c2).
inline Mobius pairing_map(const Disk& dst, const Disk& src) {
    return Mobius(dst.center, -dst.center * src.center - dst.radius * src.radius,
                  1.0, -src.center);
}

/// Schottky data: 2m disks with mutually disjoint closures centered on the
/// real line, generators pairing them (gamma_a maps the exterior of the
/// closure of D_abar onto D_a), and one basepoint per disk (the center).
struct SchottkyGroup {
    int m = 0;
    std::vector<Disk> disks;        // size 2m, 0-based letters
    std::vector<Mobius> gens;       // size 2m
    std::vector<Complex> basepoints;

    SchottkyGroup() = default;
    SchottkyGroup(int m_, std::vector<Disk> disks_, std::vector<Mobius> gens_)
        : m(m_), disks(std::move(disks_)), gens(std::move(gens_)) {
        if (m <= 0 || disks.size() != static_cast<std::size_t>(2 * m) ||
            gens.size() != static_cast<std::size_t>(2 * m))
            throw InputError("SchottkyGroup: need exactly 2m disks and 2m generators");
        basepoints.reserve(disks.size());
        for (const Disk& disk : disks) basepoints.emplace_back(disk.center, 0.0);
    }

    int alphabet_size() const { return 2 * m; }
    int bar(int a) const { return (a + m) % (2 * m); }

    // smallest letter b admissible after `a` (b != bar(a))
    int first_admissible_after(int a) const { return bar(a) == 0 ? 1 : 0; }

    double min_interval_length() const {
        double v = kInf;
        for (const Disk& disk : disks) v = std::min(v, disk.diameter());
        return v;
    }
    double max_interval_length() const {
        double v = 0.0;
        for (const Disk& disk : disks) v = std::max(v, disk.diameter());
        return v;
    }
    Interval span() const {
        double lo = kInf, hi = -kInf;
        for (const Disk& disk : disks) {
            lo = std::min(lo, disk.center - disk.radius);
            hi = std::max(hi, disk.center + disk.radius);
        }
        return {lo, hi};
    }
    // smallest gap between two disk closures
    double min_gap() const {
        double g = kInf;
        for (std::size_t i = 0; i < disks.size(); ++i)
            for (std::size_t j = i + 1; j < disks.size(); ++j)
                g = std::min(g, std::abs(disks[i].center - disks[j].center) -
                                    disks[i].radius - disks[j].radius);
        return g;
    }
};

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;  // positive distance to failure
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const CheckResult* find(const std::string& name) const {
        for (const CheckResult& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

/// Checks the Schottky axioms on concrete data. The disk-mapping axiom is
/// tested on `boundary_samples` points per boundary circle plus one exterior
/// probe per letter.
inline ValidationReport validate_schottky(const SchottkyGroup& G,
                                          int boundary_samples = 256) {
    ValidationReport rep;
    const int n = G.alphabet_size();

    {
        CheckResult c{"disks-disjoint", false, 0.0, {}};
        c.margin = G.min_gap();
        c.pass = c.margin > 0.0;
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"determinant-normalized", false, 0.0, {}};
        double worst = 0.0;
        for (const Mobius& g : G.gens)
            worst = std::max(worst, std::abs(g.a * g.d - g.b * g.c - 1.0));
        c.margin = (1e-12 - worst) / 1e-12;  // relative headroom
        c.pass = worst <= 1e-12;
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"generator-inverse", false, 0.0, {}};
        double worst = 0.0;
        for (int a = 0; a < n; ++a) {
            const Mobius p = G.gens[static_cast<std::size_t>(a)] *
                             G.gens[static_cast<std::size_t>(G.bar(a))];
            const double dev = std::max({std::abs(p.a - 1.0), std::abs(p.b),
                                         std::abs(p.c), std::abs(p.d - 1.0)});
            worst = std::max(worst, dev);
        }
        c.margin = (1e-12 - worst) / 1e-12;
        c.pass = worst <= 1e-12;
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"boundary-mapping", false, 0.0, {}};
        double worst = 0.0;
        for (int a = 0; a < n; ++a) {
            const Disk& src = G.disks[static_cast<std::size_t>(G.bar(a))];
            const Disk& dst = G.disks[static_cast<std::size_t>(a)];
            for (int k = 0; k < boundary_samples; ++k) {
                const double th = 2.0 * M_PI * k / boundary_samples;
                const Complex z(src.center + src.radius * std::cos(th),
                                src.radius * std::sin(th));
                const Complex w = mobius_apply(G.gens[static_cast<std::size_t>(a)], z);
                const double dev =
                    std::abs(std::abs(w - Complex(dst.center, 0.0)) - dst.radius);
                worst = std::max(worst, dev / std::max(1.0, dst.radius));
            }
        }
        c.margin = (1e-9 - worst) / 1e-9;
        c.pass = worst <= 1e-9;
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"exterior-probe", false, 0.0, {}};
        double worst = kInf;
        for (int a = 0; a < n; ++a) {
            const Disk& src = G.disks[static_cast<std::size_t>(G.bar(a))];
            const Disk& dst = G.disks[static_cast<std::size_t>(a)];
            const Complex probe(src.center + 2.5 * src.radius, 0.0);
            const Complex w = mobius_apply(G.gens[static_cast<std::size_t>(a)], probe);
            worst = std::min(worst, dst.radius - std::abs(w - Complex(dst.center, 0.0)));
        }
        c.margin = worst;
        c.pass = worst > 0.0;
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"basepoint-in-disk", false, 0.0, {}};
        double worst = kInf;
        for (int a = 0; a < n; ++a) {
            const Disk& disk = G.disks[static_cast<std::size_t>(a)];
            worst = std::min(worst, disk.radius -
                                        std::abs(G.basepoints[static_cast<std::size_t>(a)] -
                                                 Complex(disk.center, 0.0)));
        }
        c.margin = worst;
        c.pass = worst > 0.0;
        rep.checks.push_back(c);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

namespace detail {
// reject configurations whose closures come closer than this fraction of the span
inline constexpr double kMinRelativeGap = 1e-5;

inline void require_feasible(const SchottkyGroup& G, const std::string& what) {
    const Interval sp = G.span();
    const double gap = G.min_gap();
    if (!(gap > kMinRelativeGap * sp.length()))
        throw GeometryError(what + ": disk closures intersect or are too close (gap " +
                            std::to_string(gap) + ")");
}
}  // namespace detail

/// m = 1 elementary group: one hyperbolic generator of translation length l
/// pairing two symmetric disks. The quotient is a hyperbolic cylinder.
inline SchottkyGroup build_cylinder(double l) {
    if (!(l > 0)) throw InputError("cylinder: length must be positive");
    const double d0 = std::cosh(0.5 * l);
    const Disk d1{d0, 1.0}, d2{-d0, 1.0};
    const Mobius g1 = pairing_map(d1, d2);
    SchottkyGroup G(1, {d1, d2}, {g1, g1.inverse()});
    detail::require_feasible(G, "cylinder");
    return G;
}

/// m = 2 three-funnel surface: the primitive classes of gamma_1, gamma_2 and
/// gamma_1 gamma_2^{-1} get translation lengths l1, l2, l3. Construction:
/// outer disk pair D(-P,1), D(P,1) and inner pair D(-p,rho), D(p,rho), where
/// P = cosh(l1/2), p = rho cosh(l2/2) and rho solves
///   rho^2 sinh^2(l2/2) - 2 rho (cosh(l1/2) cosh(l2/2) + cosh(l3/2)) + sinh^2(l1/2) = 0
/// (smaller root), which makes tr(gamma_1 gamma_2^{-1}) = +-2 cosh(l3/2).
inline SchottkyGroup build_funnel3(double l1, double l2, double l3) {
    if (!(l1 > 0 && l2 > 0 && l3 > 0))
        throw InputError("funnel3: lengths must be positive");
    const double c1 = std::cosh(0.5 * l1), c2 = std::cosh(0.5 * l2), c3 = std::cosh(0.5 * l3);
    const double s1 = std::sinh(0.5 * l1), s2 = std::sinh(0.5 * l2);
    const double B = c1 * c2 + c3;
    const double disc = c1 * c1 + c2 * c2 + c3 * c3 + 2.0 * c1 * c2 * c3 - 1.0;
    const double rho = (B - std::sqrt(disc)) / (s2 * s2);
    const double P = c1;
    const double p = rho * c2;

    // letters (0-based): 0 <-> 2 and 1 <-> 3 under bar
    const Disk D0{-P, 1.0}, D1{-p, rho}, D2{P, 1.0}, D3{p, rho};
    const Mobius g0 = pairing_map(D0, D2);
    const Mobius g1 = pairing_map(D1, D3);
    SchottkyGroup G(2, {D0, D1, D2, D3}, {g0, g1, g0.inverse(), g1.inverse()});
    detail::require_feasible(G, "funnel3");

    const double e1 = std::abs(translation_length(G.gens[0]) - l1);
    const double e2 = std::abs(translation_length(G.gens[1]) - l2);
    const double e3 = std::abs(translation_length(G.gens[0] * G.gens[1].inverse()) - l3);
    if (std::max({e1, e2, e3}) > 1e-9)
        throw GeometryError("funnel3: constructed lengths deviate from request");
    return G;
}

}  // namespace schottky
