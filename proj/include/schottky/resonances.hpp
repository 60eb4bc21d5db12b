#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "schottky/transfer.hpp"

namespace schottky {

struct Box {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    bool contains(const Complex& s, double slack = 0.0) const {
        return s.real() >= re_lo - slack && s.real() <= re_hi + slack &&
               s.imag() >= im_lo - slack && s.imag() <= im_hi + slack;
    }
    Box expanded(double d) const { return {re_lo - d, re_hi + d, im_lo - d, im_hi + d}; }
};

struct Resonance {
    Complex s;
    int multiplicity = 1;
    double residual = 0.0;
};

struct ResonanceSet {
    std::vector<Resonance> zeros;
    Box box;            // effective search box (after on-contour expansion)
    Box requested_box;
    BasisSpec basis;
};

using DetFunction = std::function<DetResult(const Complex&)>;

/// Memoizing wrapper; keys are the exact bit patterns of s, so shared cell
/// edges in the subdivision reuse evaluations bit-for-bit.
class CachedDet {
public:
    explicit CachedDet(DetFunction f) : f_(std::move(f)) {}

    const DetResult& operator()(const Complex& s) const {
        const Key k{std::bit_cast<std::uint64_t>(s.real()),
                    std::bit_cast<std::uint64_t>(s.imag())};
        auto it = cache_.find(k);
        if (it == cache_.end()) it = cache_.emplace(k, f_(s)).first;
        return it->second;
    }
    std::size_t evaluations() const { return cache_.size(); }

private:
    struct Key {
        std::uint64_t re, im;
        bool operator==(const Key& o) const { return re == o.re && im == o.im; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = k.re * 0x9e3779b97f4a7c15ull;
            h ^= k.im + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            return static_cast<std::size_t>(h);
        }
    };
    DetFunction f_;
    mutable std::unordered_map<Key, DetResult, KeyHash> cache_;
};

namespace detail {

struct OnContour : Error {
    using Error::Error;
};

// continuous phase increment along [a, b]: uniform sampling no coarser than
// max_seg, then bisection until adjacent samples differ by less than pi/2.
// Pointwise phase tracking cannot rule out aliasing by itself; the winding
// conservation check across subdivisions is the safety net, and it re-enters
// here with a smaller max_seg on mismatch.
inline double phase_delta(const CachedDet& F, const Complex& a, const Complex& b,
                          double max_seg, int max_depth = 48) {
    struct Seg {
        Complex a, b;
        Complex pa, pb;  // (log_abs, phase) at the endpoints
        int depth;
    };
    auto probe = [&](const Complex& s) {
        const DetResult& d = F(s);
        if (d.log_abs < -60.0) throw OnContour("determinant vanishes on contour");
        return Complex(d.log_abs, d.phase);
    };
    // accept a segment only when both the phase step and the magnitude step
    // are small: a zero just off the contour announces itself by a dip in
    // log|f| well before the phase samples can alias by 2 pi
    auto smooth = [](const Complex& la, const Complex& lb) {
        return std::abs(std::remainder(lb.imag() - la.imag(), 2.0 * M_PI)) < 0.5 * M_PI &&
               std::abs(lb.real() - la.real()) < 1.2;
    };
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / max_seg)));
    double total = 0.0;
    std::vector<Seg> stack;
    Complex prev = probe(a);
    for (int i = 1; i <= pieces; ++i) {
        const Complex p = a + (b - a) * (static_cast<double>(i - 1) / pieces);
        const Complex q = i == pieces ? b : a + (b - a) * (static_cast<double>(i) / pieces);
        const Complex lq = probe(q);
        stack.push_back({p, q, prev, lq, 0});
        prev = lq;
    }
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        if (smooth(s.pa, s.pb)) {
            total += std::remainder(s.pb.imag() - s.pa.imag(), 2.0 * M_PI);
            continue;
        }
        if (s.depth >= max_depth) throw OnContour("phase tracking did not converge");
        const Complex mid = 0.5 * (s.a + s.b);
        const Complex pm = probe(mid);
        stack.push_back({s.a, mid, s.pa, pm, s.depth + 1});
        stack.push_back({mid, s.b, pm, s.pb, s.depth + 1});
    }
    return total;
}

inline int winding_number(const CachedDet& F, const Box& cell, double max_seg) {
    const Complex c1(cell.re_lo, cell.im_lo), c2(cell.re_hi, cell.im_lo);
    const Complex c3(cell.re_hi, cell.im_hi), c4(cell.re_lo, cell.im_hi);
    const double total =
        phase_delta(F, c1, c2, max_seg) + phase_delta(F, c2, c3, max_seg) +
        phase_delta(F, c3, c4, max_seg) + phase_delta(F, c4, c1, max_seg);
    const double w = total / (2.0 * M_PI);
    const int wi = static_cast<int>(std::lround(w));
    if (std::abs(w - wi) > 0.25)
        throw Error("winding_number: non-integer winding " + std::to_string(w));
    return wi;
}


}  // namespace detail

/// Multiplicity-aware Newton refinement of a zero of f from s0; converges
/// quadratically when mult matches the winding of the enclosing cell.
inline Resonance refine_zero(const DetFunction& f, Complex s0, int mult,
                             double tol = 1e-8, int max_iter = 80) {
    Complex s = s0;
    for (int it = 0; it < max_iter; ++it) {
        const double e = 1e-7 * std::max(1.0, std::abs(s));
        const Complex fs = f(s).value;
        const Complex fp = (f(s + Complex(e, 0)).value - f(s - Complex(e, 0)).value) /
                           (2.0 * e);
        if (std::abs(fp) == 0.0) break;
        const Complex step = static_cast<double>(mult) * fs / fp;
        s -= step;
        if (std::abs(step) < 1e-11 * std::max(1.0, std::abs(s))) break;
    }
    const double residual = std::abs(f(s).value);
    if (!(residual < tol))
        throw NonConvergenceError("refine_zero: residual " + std::to_string(residual));
    return {s, mult, residual};
}

struct FindOptions {
    double cell_size = 1e-3;     // subdivision floor before Newton refinement
    double residual_tol = 1e-8;
    double contour_step = 0.25;  // coarsest contour sampling spacing
    double merge_radius = 1e-8;  // refined zeros closer than this are one zero
    int max_contour_retries = 5;
};

/// Zero localization by recursive rectangle subdivision with argument
/// principle winding numbers, then multiplicity-aware Newton refinement.
/// The returned set's `box` reflects any outward perturbation applied when a
/// zero sat on the requested contour.
inline ResonanceSet find_resonances(const DetFunction& det, const Box& requested,
                                    const FindOptions& opts = {}) {
    // split fractions tried when an interior edge hits a zero
    static const double kFractions[] = {0.5, 0.53, 0.471, 0.56, 0.442, 0.583};

    for (int attempt = 0;; ++attempt) {
        CachedDet F(det);
        ResonanceSet out;
        out.requested_box = requested;
        const double diag = std::hypot(requested.width(), requested.height());
        const Box box = attempt == 0 ? requested : requested.expanded(1e-3 * attempt * diag);
        out.box = box;
        auto cell_step = [&](const Box& cell) {
            return std::min(opts.contour_step, 0.5 * std::max(cell.width(), cell.height()));
        };
        // zeros dodged by an expansion sit about this far inside the new
        // contour; the boundary walk must sample at that scale to see them
        const double top_step =
            attempt == 0 ? cell_step(box)
                         : std::min(cell_step(box), 0.5e-3 * attempt * diag);
        try {
            std::function<void(const Box&, int)> descend = [&](const Box& cell, int w) {
                if (w == 0) return;
                if (std::max(cell.width(), cell.height()) <= opts.cell_size) {
                    const Complex center(0.5 * (cell.re_lo + cell.re_hi),
                                         0.5 * (cell.im_lo + cell.im_hi));
                    Resonance r = refine_zero(det, center, w, opts.residual_tol);
                    if (!cell.contains(r.s, 2.0 * opts.cell_size))
                        throw NonConvergenceError("find_resonances: refinement left its cell");
                    out.zeros.push_back(r);
                    return;
                }
                const bool vertical = cell.height() > cell.width();
                for (const double frac : kFractions) {
                    Box a = cell, b = cell;
                    if (vertical) {
                        const double m = cell.im_lo + frac * cell.height();
                        a.im_hi = m;
                        b.im_lo = m;
                    } else {
                        const double m = cell.re_lo + frac * cell.width();
                        a.re_hi = m;
                        b.re_lo = m;
                    }
                    try {
                        // conservation doubles as the aliasing guard: walk
                        // parent and children at a common step, densifying
                        // until the triple is consistent, and trust it (the
                        // caller's w may have been a coarser-scale alias)
                        int wa = 0, wb = 0;
                        bool conserved = false;
                        double step = std::min(cell_step(a), cell_step(b));
                        for (int tries = 0; tries < 4; ++tries, step *= 0.25) {
                            wa = detail::winding_number(F, a, step);
                            wb = detail::winding_number(F, b, step);
                            const int wp = detail::winding_number(F, cell, step);
                            if (wa + wb == wp) {
                                conserved = true;
                                break;
                            }
                        }
                        if (!conserved)
                            throw Error("find_resonances: winding not conserved (" +
                                        std::to_string(wa) + "+" + std::to_string(wb) +
                                        " != parent)");
                        descend(a, wa);
                        descend(b, wb);
                        return;
                    } catch (const detail::OnContour&) {
                        if (frac == kFractions[5]) throw;  // give up, perturb outer box
                    }
                }
            };
            int top_winding = detail::winding_number(F, box, top_step);
            descend(box, top_winding);

            std::sort(out.zeros.begin(), out.zeros.end(),
                      [](const Resonance& a, const Resonance& b) {
                          return a.s.imag() != b.s.imag() ? a.s.imag() < b.s.imag()
                                                          : a.s.real() < b.s.real();
                      });
            // a phase slip on a shared cell edge moves one unit of winding
            // between siblings; both leaves then refine to the same point.
            // Coincident refined zeros are one zero, multiplicities summed.
            std::vector<Resonance> merged;
            for (const Resonance& r : out.zeros) {
                if (!merged.empty() &&
                    std::abs(merged.back().s - r.s) < opts.merge_radius) {
                    merged.back().multiplicity += r.multiplicity;
                    merged.back().residual = std::min(merged.back().residual, r.residual);
                } else {
                    merged.push_back(r);
                }
            }
            out.zeros = std::move(merged);

            int total_mult = 0;
            for (const Resonance& r : out.zeros) total_mult += r.multiplicity;
            // every reported zero was verified by its residual, so a lower
            // boundary count means the outer walk aliased; re-derive it denser
            double st = top_step;
            while (top_winding < total_mult && st > 0.5 * opts.cell_size) {
                st *= 0.25;
                top_winding = detail::winding_number(F, box, st);
            }
            if (total_mult != top_winding)
                throw NonConvergenceError(
                    "find_resonances: multiplicity total " + std::to_string(total_mult) +
                    " disagrees with the boundary winding " + std::to_string(top_winding));
            return out;
        } catch (const detail::OnContour&) {
            if (attempt >= opts.max_contour_retries)
                throw NonConvergenceError(
                    "find_resonances: zero on contour after max retries");
        }
    }
}

/// Basis-adequacy guard: bumps the degree until the determinant is stable
/// under M -> M + 8 at the box corners and center.
inline BasisSpec converged_basis(const SchottkyGroup& G, const Box& box, BasisSpec basis,
                                 double tol = 1e-6, int max_degree = 120) {
    const OperatorDomain dom = OperatorDomain::base(G);
    std::vector<Word> letters;
    for (int a = 0; a < G.alphabet_size(); ++a) letters.push_back(Word::single(a));
    const Complex probes[5] = {{box.re_lo, box.im_lo},
                               {box.re_hi, box.im_lo},
                               {box.re_lo, box.im_hi},
                               {box.re_hi, box.im_hi},
                               {0.5 * (box.re_lo + box.re_hi), 0.5 * (box.im_lo + box.im_hi)}};
    for (;; basis = basis.with_degree(basis.degree + 8)) {
        if (basis.degree > max_degree)
            throw NonConvergenceError("converged_basis: degree cap reached");
        TransferAssembler a0(G, letters, basis, dom);
        TransferAssembler a1(G, letters, basis.with_degree(basis.degree + 8), dom);
        bool ok = true;
        for (const Complex& s : probes) {
            const Complex d0 = fredholm_det(a0.assemble(s)).value;
            const Complex d1 = fredholm_det(a1.assemble(s)).value;
            if (std::abs(d0 - d1) > tol * (1.0 + std::abs(d1))) ok = false;
        }
        if (ok) return basis;
    }
}

/// Convenience: localize zeros of det(1 - L_s) for the standard operator.
inline ResonanceSet find_resonances(const SchottkyGroup& G, const Box& box, BasisSpec basis,
                                    const FindOptions& opts = {}) {
    basis = converged_basis(G, box, basis);
    std::vector<Word> letters;
    for (int a = 0; a < G.alphabet_size(); ++a) letters.push_back(Word::single(a));
    auto assembler = std::make_shared<TransferAssembler>(G, letters, basis,
                                                         OperatorDomain::base(G));
    ResonanceSet rs = find_resonances(
        [assembler](const Complex& s) { return fredholm_det(assembler->assemble(s)); }, box,
        opts);
    rs.basis = basis;
    return rs;
}

// ---------------------------------------------------------------------------
// delta
// ---------------------------------------------------------------------------

struct DeltaResult {
    double delta = 0.0;      // the adopted value (largest real determinant zero)
    double delta_eig = 0.0;  // Bowen bisection: leading eigenvalue equals 1
    double delta_det = 0.0;
};

/// Limit-set dimension: bisection on sigma for spectral radius
/// lambda(L_sigma) = 1, cross-checked against the largest real zero of
/// det(1 - L_sigma). Elementary groups (m = 1) return 0.
inline DeltaResult delta_bowen(const SchottkyGroup& G, double tol = 1e-10,
                               BasisSpec basis = {24, 0.7, 0}) {
    if (G.m == 1) return {0.0, 0.0, 0.0};
    std::vector<Word> letters;
    for (int a = 0; a < G.alphabet_size(); ++a) letters.push_back(Word::single(a));
    TransferAssembler asmr(G, letters, basis, OperatorDomain::base(G));

    auto lambda = [&](double sigma) {
        const Eigen::MatrixXcd A = asmr.assemble(Complex(sigma, 0.0));
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
        if (es.info() != Eigen::Success)
            throw NonConvergenceError("delta_bowen: eigensolver failed");
        double r = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            r = std::max(r, std::abs(es.eigenvalues()[i]));
        return r;
    };

    double lo = 1e-3, hi = 0.999;
    if (!(lambda(lo) > 1.0 && lambda(hi) < 1.0))
        throw NonConvergenceError("delta_bowen: bracket failed");
    for (int it = 0; it < 64 && hi - lo > tol * 1e-3; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lambda(mid) > 1.0 ? lo : hi) = mid;
    }
    DeltaResult r;
    r.delta_eig = 0.5 * (lo + hi);

    // largest real zero of det(1 - L_sigma): sign change across delta
    auto f = [&](double sigma) {
        return fredholm_det(asmr.assemble(Complex(sigma, 0.0))).value.real();
    };
    double a = r.delta_eig - 0.02, b = r.delta_eig + 0.02;
    double fa = f(a), fb = f(b);
    if (!(fa < 0.0 && fb > 0.0))
        throw NonConvergenceError("delta_bowen: determinant sign bracket failed");
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
        const double mid = 0.5 * (a + b);
        (f(mid) < 0.0 ? a : b) = mid;
    }
    r.delta_det = 0.5 * (a + b);
    r.delta = r.delta_det;
    return r;
}

// ---------------------------------------------------------------------------
// counting
// ---------------------------------------------------------------------------

enum class CountMode { N, M };

/// Multiplicity-weighted zero count: mode N over Re >= sigma, 0 <= Im <= T;
/// mode M over Re >= sigma, |Im - center| <= T (the window center defaults
/// to 1 but is exposed, the convention being unusual).
inline int count(const ResonanceSet& rs, CountMode mode, double sigma, double T,
                 double m_center = 1.0) {
    const bool covered =
        sigma >= rs.box.re_lo &&
        (mode == CountMode::N
             ? (rs.box.im_lo <= 0.0 && T <= rs.box.im_hi)
             : (m_center - T >= rs.box.im_lo - 1e-12 && m_center + T <= rs.box.im_hi + 1e-12));
    if (!covered) throw InputError("count: requested window not covered by the search box");
    int n = 0;
    for (const Resonance& r : rs.zeros) {
        if (r.s.real() < sigma) continue;
        const double t = r.s.imag();
        const bool in = mode == CountMode::N ? (t >= 0.0 && t <= T)
                                             : (std::abs(t - m_center) <= T);
        if (in) n += r.multiplicity;
    }
    return n;
}

struct WeylFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double theoretical = 0.0;
};

/// Improved fractal Weyl exponent 1 + delta - (3 delta + 2)/(2 delta + 2) (2 sigma - delta).
inline double weyl_exponent(double delta, double sigma) {
    return 1.0 + delta - (3.0 * delta + 2.0) / (2.0 * delta + 2.0) * (2.0 * sigma - delta);
}

/// Least-squares slope of log N(sigma, T) against log T over the grid.
inline WeylFit fit_weyl_exponent(const ResonanceSet& rs, double sigma,
                                 const std::vector<double>& T_grid, double delta) {
    std::vector<double> lx, ly;
    for (double T : T_grid) {
        const int n = count(rs, CountMode::N, sigma, T);
        if (n <= 0) continue;
        lx.push_back(std::log(T));
        ly.push_back(std::log(static_cast<double>(n)));
    }
    if (lx.size() < 4)
        throw Error("fit_weyl_exponent: fewer than 4 grid points with nonzero counts");
    const LinearFit f = fit_line(lx, ly);
    return {f.slope, f.intercept, f.r2, weyl_exponent(delta, sigma)};
}

struct FreeBox {
    int n = 0;
    Box box;
    bool empty = false;
};

struct FreeBoxReport {
    std::vector<FreeBox> boxes;
    double empty_density = 0.0;
};

/// Scans the boxes [sigma_lo, sigma_hi] + i[n, n + n^lambda] over the integer
/// range covered by the set (lambda = 0 gives unit height).
inline FreeBoxReport resonance_free_boxes(const ResonanceSet& rs, double sigma_lo,
                                          double sigma_hi, double lambda) {
    if (sigma_lo < rs.box.re_lo)
        throw InputError("resonance_free_boxes: strip not covered by the search box");
    FreeBoxReport rep;
    int empties = 0;
    for (int n = std::max(1, static_cast<int>(std::ceil(rs.box.im_lo)));; ++n) {
        const double height = std::pow(static_cast<double>(n), lambda);
        if (n + height > rs.box.im_hi) break;
        FreeBox fb;
        fb.n = n;
        fb.box = {sigma_lo, sigma_hi, static_cast<double>(n), n + height};
        fb.empty = true;
        for (const Resonance& r : rs.zeros)
            if (fb.box.contains(r.s)) fb.empty = false;
        empties += fb.empty ? 1 : 0;
        rep.boxes.push_back(fb);
    }
    if (!rep.boxes.empty())
        rep.empty_density = static_cast<double>(empties) / static_cast<double>(rep.boxes.size());
    return rep;
}

}  // namespace schottky
