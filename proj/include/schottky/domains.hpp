#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "schottky/common.hpp"
#include "schottky/group.hpp"
#include "schottky/words.hpp"

namespace schottky {

/// Depth-n cover of the limit set: the intervals I_a over all words of
/// length n, sorted by left endpoint.
inline std::vector<Interval> limit_set_cover(const SchottkyGroup& G, int n,
                                             std::size_t cap = 10'000'000) {
    if (n < 1) throw InputError("limit_set_cover: depth must be >= 1");
    std::vector<Interval> out;
    for (const Word& w : enumerate_words(G, n, cap)) out.push_back(word_interval(G, w));
    std::sort(out.begin(), out.end(),
              [](const Interval& a, const Interval& b) { return a.left < b.left; });
    return out;
}

namespace detail {
// leaves of the adaptive word tree with |I_w| below the threshold; descending
// only while intervals stay large keeps the cost proportional to the cover size
inline void leaf_cover_descend(const SchottkyGroup& G, const Word& w, const Mobius& parent_mat,
                               double threshold, std::size_t cap, std::vector<Interval>& out) {
    const Disk dw = disk_image(parent_mat, G.disks[static_cast<std::size_t>(w.back())]);
    if (dw.diameter() < threshold) {
        if (out.size() >= cap) throw ResourceCapError("leaf_cover: cap exceeded");
        out.push_back(dw.interval());
        return;
    }
    const Mobius mat = parent_mat * G.gens[static_cast<std::size_t>(w.back())];
    for (int a = 0; a < G.alphabet_size(); ++a) {
        if (!arrow(G, w, a)) continue;
        Word child = w;
        child.letters.push_back(static_cast<std::uint8_t>(a));
        leaf_cover_descend(G, child, mat, threshold, cap, out);
    }
}

inline std::vector<Interval> leaf_cover(const SchottkyGroup& G, double threshold,
                                        std::size_t cap) {
    std::vector<Interval> out;
    for (int a = 0; a < G.alphabet_size(); ++a)
        detail::leaf_cover_descend(G, Word::single(a), Mobius(), threshold, cap, out);
    std::sort(out.begin(), out.end(),
              [](const Interval& x, const Interval& y) { return x.left < y.left; });
    return out;
}
}  // namespace detail

/// Connected components of the real h-neighbourhood of the limit set.
struct IntervalCover {
    double h = 0.0;
    std::vector<Interval> components;  // pairwise disjoint, sorted
    std::size_t count() const { return components.size(); }
    double total_length() const {
        double s = 0.0;
        for (const Interval& c : components) s += c.length();
        return s;
    }
};

/// Lambda + [-h, h], computed from a word-interval cover refined until every
/// leaf is shorter than h/10 (rules out spurious merging), then fattened by
/// h and merged.
inline IntervalCover lambda_neighbourhood(const SchottkyGroup& G, double h,
                                          std::size_t cap = 1'000'000) {
    if (!(h > 0)) throw InputError("lambda_neighbourhood: h must be positive");
    const std::vector<Interval> leaves = detail::leaf_cover(G, h / 10.0, cap);
    IntervalCover cover;
    cover.h = h;
    Interval cur{leaves.front().left - h, leaves.front().right + h};
    for (std::size_t i = 1; i < leaves.size(); ++i) {
        const Interval fat{leaves[i].left - h, leaves[i].right + h};
        if (fat.left <= cur.right) {
            cur.right = std::max(cur.right, fat.right);
        } else {
            cover.components.push_back(cur);
            cur = fat;
        }
    }
    cover.components.push_back(cur);
    return cover;
}

/// Disk-union surrogate for the complex h-neighbourhood Omega(h): one disk
/// per component of the real neighbourhood, centered on its midpoint, with
/// radius |I_l|/2 + pad. The padding is h per disk (so the disk contains the
/// rectangle I_l + i[-h, h]) except where adjacent components sit closer
/// than 2.5 h, where it shrinks to keep the closures disjoint. The spectral
/// data computed on the union is h-independent, so the padding only has to
/// exceed the contraction depth of the word maps, which assembly validates.
struct DiskUnionDomain {
    double h = 0.0;
    double kappa = 1.0;       // smallest per-disk padding used, as a fraction of h
    std::vector<Disk> disks;  // disjoint closures, sorted by center

    // index of the disk containing z, or -1
    int locate(const Complex& z) const {
        for (std::size_t i = 0; i < disks.size(); ++i)
            if (disks[i].contains(z)) return static_cast<int>(i);
        return -1;
    }
    double total_volume() const {
        double v = 0.0;
        for (const Disk& d : disks) v += M_PI * d.radius * d.radius;
        return v;
    }
    // strictly positive when valid; the smallest gap between closures
    double disjointness_margin() const {
        double m = kInf;
        for (std::size_t i = 0; i + 1 < disks.size(); ++i)
            m = std::min(m, disks[i + 1].center - disks[i].center - disks[i].radius -
                                disks[i + 1].radius);
        return m;
    }
};

inline DiskUnionDomain omega_surrogate(const SchottkyGroup& G, double h,
                                       std::size_t cap = 1'000'000) {
    const IntervalCover cover = lambda_neighbourhood(G, h, cap);
    const std::size_t n = cover.components.size();
    DiskUnionDomain dom;
    dom.h = h;
    for (std::size_t i = 0; i < n; ++i) {
        double gap = kInf;
        if (i > 0)
            gap = std::min(gap, cover.components[i].left - cover.components[i - 1].right);
        if (i + 1 < n)
            gap = std::min(gap, cover.components[i + 1].left - cover.components[i].right);
        const double pad = std::min(h, 0.4 * gap);
        if (!(pad > 1e-3 * h))
            throw GeometryError("omega_surrogate: component disks overlap (h too large)");
        dom.kappa = std::min(dom.kappa, pad / h);
        const Interval& c = cover.components[i];
        dom.disks.push_back(Disk{0.5 * (c.left + c.right), 0.5 * c.length() + pad});
    }
    if (dom.disks.size() > 1 && dom.disjointness_margin() <= 0.0)
        throw GeometryError("omega_surrogate: component disks overlap (h too large)");
    return dom;
}

// ---------------------------------------------------------------------------
// Bergman kernels
// ---------------------------------------------------------------------------

/// Reproducing kernel of the Bergman space of a disk:
///   B(z,w) = r^2 / (pi (r^2 - (z-c)(conj(w)-c))^2),
/// the normalization fixed by the orthonormal basis
/// phi_n = sqrt((n+1)/(pi r^2)) ((z-c)/r)^n.
inline Complex bergman_kernel_disk(const Disk& disk, const Complex& z, const Complex& w) {
    const Complex c(disk.center, 0.0);
    if (!disk.contains(z) || !disk.contains(w))
        throw DomainError("bergman_kernel_disk: point outside disk");
    const double r2 = disk.radius * disk.radius;
    const Complex q = r2 - (z - c) * (std::conj(w) - c);
    return r2 / (M_PI * q * q);
}

/// Block-diagonal kernel of a disjoint disk union: zero across components.
inline Complex bergman_kernel_union(const DiskUnionDomain& dom, const Complex& z,
                                    const Complex& w) {
    const int iz = dom.locate(z);
    const int iw = dom.locate(w);
    if (iz < 0 || iw < 0) throw DomainError("bergman_kernel_union: point outside domain");
    if (iz != iw) return Complex(0.0, 0.0);
    return bergman_kernel_disk(dom.disks[static_cast<std::size_t>(iz)], z, w);
}

}  // namespace schottky
