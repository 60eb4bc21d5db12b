#pragma once

#include <Eigen/Dense>
#include <functional>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "schottky/common.hpp"
#include "schottky/domains.hpp"
#include "schottky/group.hpp"
#include "schottky/words.hpp"

namespace schottky {

/// Principal-branch complex power exp(s L(w)), L(w) = log|w| + i arg(w),
/// arg in (-pi, pi). The derivatives gamma_a' stay off the cut on the disks.
inline Complex complex_power(const Complex& w, const Complex& s) {
    if (w == Complex(0.0, 0.0) || (w.imag() == 0.0 && w.real() < 0.0))
        throw BranchCutError("complex_power: argument on the branch cut");
    return std::exp(s * std::log(w));
}

/// Discretization parameters: monomial degree per panel, sampling-circle
/// ratio, and circle point count.
struct BasisSpec {
    int degree = 24;
    double rho = 0.7;
    int quad_points = 0;  // 0 means 4 * degree

    int K() const { return quad_points > 0 ? quad_points : 4 * degree; }
    void validate() const {
        if (degree < 1) throw InputError("BasisSpec: degree must be positive");
        if (rho < 0.3 || rho > 0.9) throw InputError("BasisSpec: rho outside [0.3, 0.9]");
        if (K() < 4 * degree) throw InputError("BasisSpec: quad_points < 4 * degree");
    }
    BasisSpec with_degree(int M) const {
        BasisSpec b = *this;
        b.degree = M;
        b.quad_points = 0;
        return b;
    }
};

/// One connected piece of the operator's domain: a disk plus the Schottky
/// letter whose disk hosts it.
struct Panel {
    Disk disk;
    int letter = 0;
};

struct OperatorDomain {
    std::vector<Panel> panels;
    bool is_base = true;
    double h = 0.0;

    static OperatorDomain base(const SchottkyGroup& G) {
        OperatorDomain d;
        d.is_base = true;
        for (int a = 0; a < G.alphabet_size(); ++a)
            d.panels.push_back({G.disks[static_cast<std::size_t>(a)], a});
        return d;
    }

    static OperatorDomain surrogate(const SchottkyGroup& G, const DiskUnionDomain& dom) {
        OperatorDomain d;
        d.is_base = false;
        d.h = dom.h;
        for (const Disk& piece : dom.disks) {
            int host = -1;
            for (int b = 0; b < G.alphabet_size(); ++b) {
                const Disk& D = G.disks[static_cast<std::size_t>(b)];
                if (std::abs(piece.center - D.center) + piece.radius <= D.radius) {
                    host = b;
                    break;
                }
            }
            if (host < 0)
                throw DomainError("OperatorDomain: surrogate piece not inside a Schottky disk");
            d.panels.push_back({piece, host});
        }
        return d;
    }
};

/// Finite-rank representation of a transfer operator in per-panel
/// orthonormal monomial bases, sampled once per (geometry, word set) and
/// assembled per spectral parameter s. Entries are Taylor coefficients of
/// the word images extracted by the trapezoid Cauchy rule on circles of
/// radius rho * r about each destination center.
class TransferAssembler {
public:
    TransferAssembler(const SchottkyGroup& G, std::vector<Word> words, BasisSpec basis,
                      OperatorDomain domain)
        : basis_(basis), domain_(std::move(domain)), words_(std::move(words)) {
        basis_.validate();
        const int M = basis_.degree;
        const int K = basis_.K();
        const int P = static_cast<int>(domain_.panels.size());

        // destination circle points
        std::vector<std::vector<Complex>> circle(static_cast<std::size_t>(P));
        for (int p = 0; p < P; ++p) {
            const Disk& D = domain_.panels[static_cast<std::size_t>(p)].disk;
            auto& pts = circle[static_cast<std::size_t>(p)];
            pts.reserve(static_cast<std::size_t>(K));
            for (int j = 0; j < K; ++j) {
                const double th = 2.0 * M_PI * j / K;
                pts.emplace_back(D.center + basis_.rho * D.radius * std::cos(th),
                                 basis_.rho * D.radius * std::sin(th));
            }
        }

        for (const Word& w : words_) {
            const Mobius g = word_matrix(G, w);
            for (int p = 0; p < P; ++p) {
                const Panel& dst = domain_.panels[static_cast<std::size_t>(p)];
                if (!arrow(G, w, dst.letter)) continue;

                const Disk img = disk_image(g, dst.disk);
                int q = -1;
                for (int r = 0; r < P; ++r) {
                    const Disk& S = domain_.panels[static_cast<std::size_t>(r)].disk;
                    if (std::abs(img.center - S.center) + img.radius < S.radius) {
                        q = r;
                        break;
                    }
                }
                if (q < 0)
                    throw DomainError(
                        "TransferAssembler: word " + w.str() +
                        " does not map a panel strictly into a single panel "
                        "(shrink h or tau)");

                Entry e;
                e.dst = p;
                e.src = q;
                e.u.reserve(static_cast<std::size_t>(K));
                e.logd.reserve(static_cast<std::size_t>(K));
                const Disk& S = domain_.panels[static_cast<std::size_t>(q)].disk;
                for (int j = 0; j < K; ++j) {
                    const Complex z = circle[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)];
                    e.u.push_back((mobius_apply(g, z) - Complex(S.center, 0.0)) / S.radius);
                    e.logd.push_back(std::log(mobius_derivative(g, z)));
                }
                entries_.push_back(std::move(e));
            }
        }

        std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
            return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
        });

        // extraction matrix: E(k, j) = exp(-2 pi i jk/K) rho^{-k} / (K sqrt(k+1))
        E_ = Eigen::MatrixXcd(M, K);
        for (int k = 0; k < M; ++k) {
            const double rowscale = std::pow(basis_.rho, -k) / (K * std::sqrt(k + 1.0));
            for (int j = 0; j < K; ++j) {
                const double th = -2.0 * M_PI * j * k / K;
                E_(k, j) = rowscale * Complex(std::cos(th), std::sin(th));
            }
        }
    }

    int panel_count() const { return static_cast<int>(domain_.panels.size()); }
    int dim() const { return panel_count() * basis_.degree; }
    const OperatorDomain& domain() const { return domain_; }
    const BasisSpec& basis() const { return basis_; }
    const std::vector<Word>& word_set() const { return words_; }

    Eigen::MatrixXcd assemble(const Complex& s) const {
        const int M = basis_.degree;
        const int K = basis_.K();
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim(), dim());
        // group contributions by (dst, src) block
        Eigen::MatrixXcd F(K, M);
        for (std::size_t start = 0; start < entries_.size();) {
            const int p = entries_[start].dst;
            const int q = entries_[start].src;
            F.setZero();
            std::size_t end = start;
            while (end < entries_.size() && entries_[end].dst == p && entries_[end].src == q) {
                const Entry& e = entries_[end];
                for (int j = 0; j < K; ++j) {
                    Complex pw = std::exp(s * e.logd[static_cast<std::size_t>(j)]);
                    const Complex u = e.u[static_cast<std::size_t>(j)];
                    for (int n = 0; n < M; ++n) {
                        F(j, n) += pw;
                        pw *= u;
                    }
                }
                ++end;
            }
            Eigen::MatrixXcd B = E_ * F;  // (M x K)(K x M)
            const double rp = domain_.panels[static_cast<std::size_t>(p)].disk.radius;
            const double rq = domain_.panels[static_cast<std::size_t>(q)].disk.radius;
            for (int n = 0; n < M; ++n)
                B.col(n) *= std::sqrt(n + 1.0) * rp / rq;
            A.block(p * M, q * M, M, M) += B;
            start = end;
        }
        return A;
    }

private:
    struct Entry {
        int dst = 0;
        int src = 0;
        std::vector<Complex> u;     // (gamma_w(z_j) - c_src)/r_src
        std::vector<Complex> logd;  // log gamma_w'(z_j)
    };

    BasisSpec basis_;
    OperatorDomain domain_;
    std::vector<Word> words_;
    std::vector<Entry> entries_;
    Eigen::MatrixXcd E_;
};

// ---------------------------------------------------------------------------
// operator kinds
// ---------------------------------------------------------------------------

struct TransferOp {
    enum Kind { Standard, Refined, Composed } kind = Standard;
    double tau0 = 0.0;
    double tau1 = 0.0;

    static TransferOp standard() { return {Standard, 0.0, 0.0}; }
    static TransferOp refined(double tau) { return {Refined, tau, 0.0}; }
    static TransferOp composed(double t0, double t1) { return {Composed, t0, t1}; }
};

/// User-facing operator: one assembler, or two for the composed kind.
class TransferOperator {
public:
    TransferOperator(const SchottkyGroup& G, TransferOp op, BasisSpec basis,
                     OperatorDomain domain) {
        switch (op.kind) {
            case TransferOp::Standard: {
                std::vector<Word> letters;
                for (int a = 0; a < G.alphabet_size(); ++a) letters.push_back(Word::single(a));
                parts_.emplace_back(G, letters, basis, domain);
                break;
            }
            case TransferOp::Refined: {
                parts_.emplace_back(G, build_partition_Y(G, op.tau0).words, basis, domain);
                break;
            }
            case TransferOp::Composed: {
                // the composed operator's expansion runs over composite words
                // a0 a1 with the leading part a0 from Y(tau0) (the set the
                // separation argument pins to tau0 = c h); as a matrix that
                // is M(tau1) * M(tau0)
                parts_.emplace_back(G, build_partition_Y(G, op.tau1).words, basis, domain);
                parts_.emplace_back(G, build_partition_Y(G, op.tau0).words, basis, domain);
                break;
            }
        }
    }

    int dim() const { return parts_.front().dim(); }
    const TransferAssembler& part(std::size_t i) const { return parts_[i]; }

    Eigen::MatrixXcd matrix(const Complex& s) const {
        Eigen::MatrixXcd A = parts_[0].assemble(s);
        if (parts_.size() == 2) A = A * parts_[1].assemble(s);
        return A;
    }

private:
    std::vector<TransferAssembler> parts_;
};

// ---------------------------------------------------------------------------
// determinants
// ---------------------------------------------------------------------------

/// det(1 - A) with an overflow-proof log form: value = exp(log_abs + i phase).
struct DetResult {
    Complex value;
    double log_abs = 0.0;
    double phase = 0.0;  // in (-pi, pi]
};

inline DetResult fredholm_det(const Eigen::MatrixXcd& A, bool square = false) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(n, n);
    if (square)
        B -= A * A;
    else
        B -= A;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B);
    double log_abs = 0.0;
    double phase = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex d = lu.matrixLU()(i, i);
        log_abs += std::log(std::abs(d));
        phase += std::arg(d);
    }
    if (lu.permutationP().determinant() < 0) phase += M_PI;
    phase = std::remainder(phase, 2.0 * M_PI);
    DetResult r;
    r.log_abs = log_abs;
    r.phase = phase;
    const double mag = log_abs > 700.0 ? 700.0 : (log_abs < -745.0 ? -745.0 : log_abs);
    r.value = std::exp(Complex(mag, phase));
    return r;
}

// ---------------------------------------------------------------------------
// Lefschetz trace
// ---------------------------------------------------------------------------

/// tr(L^n) by the fixed-point formula: the sum over cyclically admissible
/// n-tuples from the operator's word set of gamma'(x)^s / (1 - gamma'(x))
/// at the attracting fixed point x of the cycle word.
inline Complex trace_power_lefschetz(const SchottkyGroup& G, const std::vector<Word>& words,
                                     const Complex& s, int n,
                                     std::size_t cap = 10'000'000) {
    if (n < 1) throw InputError("trace_power_lefschetz: n must be >= 1");
    std::vector<Mobius> mats;
    mats.reserve(words.size());
    for (const Word& w : words) mats.push_back(word_matrix(G, w));

    Complex total(0.0, 0.0);
    std::size_t count = 0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);

    std::function<void(int, const Mobius&)> rec = [&](int depth, const Mobius& prefix) {
        if (depth == n) {
            if (!arrow(G, words[idx[static_cast<std::size_t>(n - 1)]],
                       words[idx[0]]))
                return;
            if (++count > cap) throw ResourceCapError("trace_power_lefschetz: cap exceeded");
            const FixedPoints fp = fixed_points(prefix);
            const Complex x(fp.attracting, 0.0);
            const Complex der = mobius_derivative(prefix, x);
            total += complex_power(der, s) / (1.0 - der);
            return;
        }
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (depth > 0 &&
                !arrow(G, words[idx[static_cast<std::size_t>(depth - 1)]], words[i]))
                continue;
            idx[static_cast<std::size_t>(depth)] = i;
            rec(depth + 1, depth == 0 ? mats[i] : prefix * mats[i]);
        }
    };
    rec(0, Mobius());
    return total;
}

inline Complex trace_power_lefschetz(const SchottkyGroup& G, const TransferOp& op,
                                     const Complex& s, int n,
                                     std::size_t cap = 10'000'000) {
    std::vector<Word> words;
    if (op.kind == TransferOp::Standard) {
        for (int a = 0; a < G.alphabet_size(); ++a) words.push_back(Word::single(a));
    } else if (op.kind == TransferOp::Refined) {
        words = build_partition_Y(G, op.tau0).words;
    } else {
        // composed: cycles alternate between the two word sets; fold pairs
        const auto y0 = build_partition_Y(G, op.tau0).words;
        const auto y1 = build_partition_Y(G, op.tau1).words;
        for (const Word& a : y0)
            for (const Word& b : y1)
                if (arrow(G, a, b)) words.push_back(concat(G, a, b));
    }
    return trace_power_lefschetz(G, words, s, n, cap);
}

// ---------------------------------------------------------------------------
// Selberg zeta product
// ---------------------------------------------------------------------------

struct PrimitiveClass {
    Word rep;       // canonical (lexicographically minimal rotation)
    double length;  // translation length
};

/// Primitive conjugacy classes with translation length at most L: primitive
/// cyclically-reduced words modulo rotation. Enumeration stops at the word
/// length where the shortest class already exceeds L.
inline std::vector<PrimitiveClass> primitive_classes(const SchottkyGroup& G, double L,
                                                     int max_word_len = 24,
                                                     std::size_t cap = 10'000'000) {
    std::vector<PrimitiveClass> out;
    for (int n = 1; n <= max_word_len; ++n) {
        double min_len = kInf;
        bool any = false;
        std::size_t seen = 0;
        for (const Word& w : enumerate_words(G, n, cap)) {
            if (!arrow(G, w, w.front())) continue;  // not cyclically reduced
            // canonical representative: lexicographically smallest rotation
            bool canonical = true;
            for (std::size_t r = 1; r < w.size(); ++r) {
                Word rot;
                rot.letters.insert(rot.letters.end(), w.letters.begin() + static_cast<std::ptrdiff_t>(r), w.letters.end());
                rot.letters.insert(rot.letters.end(), w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(r));
                if (rot < w) {
                    canonical = false;
                    break;
                }
            }
            if (!canonical) continue;
            // primitive: not a repetition of a shorter period
            bool primitive = true;
            for (std::size_t p = 1; p <= w.size() / 2; ++p) {
                if (w.size() % p != 0) continue;
                bool repeats = true;
                for (std::size_t i = p; i < w.size(); ++i)
                    if (w.letters[i] != w.letters[i - p]) repeats = false;
                if (repeats) {
                    primitive = false;
                    break;
                }
            }
            const double len = translation_length(word_matrix(G, w));
            min_len = std::min(min_len, len);
            any = true;
            if (!primitive || len > L) continue;
            if (++seen > cap) throw ResourceCapError("primitive_classes: cap exceeded");
            out.push_back({w, len});
        }
        if (any && min_len > L) break;
        if (n == max_word_len)
            throw ResourceCapError("primitive_classes: word length cap reached");
    }
    return out;
}

struct ZetaResult {
    Complex value;
    double log_abs = 0.0;
    double trunc_error = 0.0;   // heuristic bound on the dropped classes
    std::size_t classes = 0;
};

/// Truncated Selberg zeta product over primitive classes of length <= L and
/// k <= k_cut. Valid in the product half-plane Re(s) > delta (enforced with
/// a caller-supplied delta and margin).
inline ZetaResult selberg_zeta_product(const SchottkyGroup& G, const Complex& s,
                                       double length_cut, int k_cut, double delta,
                                       double margin = 0.3) {
    if (s.real() <= delta + margin)
        throw DomainError("selberg_zeta_product: Re(s) too close to delta");
    const auto classes = primitive_classes(G, length_cut);
    Complex log_prod(0.0, 0.0);
    for (const PrimitiveClass& pc : classes)
        for (int k = 0; k <= k_cut; ++k)
            log_prod += std::log(1.0 - std::exp(-(s + static_cast<double>(k)) * pc.length));
    ZetaResult r;
    r.value = std::exp(log_prod);
    r.log_abs = log_prod.real();
    r.classes = classes.size();
    r.trunc_error = std::exp(-(s.real() - delta) * length_cut) *
                    static_cast<double>(classes.size() + 1);
    return r;
}

}  // namespace schottky
