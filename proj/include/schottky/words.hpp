#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "schottky/common.hpp"
#include "schottky/group.hpp"
#include "schottky/mobius.hpp"

namespace schottky {

/// Reduced word over the alphabet {0..2m-1}; indexes group elements, disks
/// D_a, intervals I_a and the weights Upsilon_a.
struct Word {
    std::vector<std::uint8_t> letters;

    Word() = default;
    explicit Word(std::vector<std::uint8_t> ls) : letters(std::move(ls)) {}
    static Word single(int a) { return Word({static_cast<std::uint8_t>(a)}); }

    bool empty() const { return letters.empty(); }
    std::size_t size() const { return letters.size(); }
    int front() const { return letters.front(); }
    int back() const { return letters.back(); }
    int operator[](std::size_t i) const { return letters[i]; }

    bool operator==(const Word& o) const { return letters == o.letters; }
    bool operator!=(const Word& o) const { return letters != o.letters; }
    bool operator<(const Word& o) const { return letters < o.letters; }

    // 1-based dash-separated rendering used by CSV dumps ("1-3-2")
    std::string str() const {
        if (letters.empty()) return "-";
        std::string out;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (i) out += '-';
            out += std::to_string(static_cast<int>(letters[i]) + 1);
        }
        return out;
    }
};

inline bool is_reduced(const SchottkyGroup& G, const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i + 1] == G.bar(w[i])) return false;
    return true;
}

/// a -> b: a empty, or b empty, or the juxtaposition stays reduced.
inline bool arrow(const SchottkyGroup& G, const Word& a, const Word& b) {
    if (a.empty() || b.empty()) return true;
    return b.front() != G.bar(a.back());
}

inline bool arrow(const SchottkyGroup& G, const Word& a, int letter) {
    if (a.empty()) return true;
    return letter != G.bar(a.back());
}

inline Word concat(const SchottkyGroup& G, const Word& a, const Word& b) {
    if (!arrow(G, a, b))
        throw Error("concat: words are not composable (" + a.str() + " -/-> " + b.str() + ")");
    Word out = a;
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

/// Free-group product with cancellation at the junction; the result is the
/// reduced word representing gamma_a gamma_b.
inline Word concat_reduce(const SchottkyGroup& G, const Word& a, const Word& b) {
    Word out = a;
    std::size_t i = 0;
    while (!out.letters.empty() && i < b.size() && b[i] == G.bar(out.back())) {
        out.letters.pop_back();
        ++i;
    }
    out.letters.insert(out.letters.end(), b.letters.begin() + static_cast<std::ptrdiff_t>(i),
                       b.letters.end());
    return out;
}

/// Mirror word: bar the letters and reverse their order, so that
/// gamma_mirror(w) = gamma_w^{-1}.
inline Word mirror(const SchottkyGroup& G, const Word& w) {
    Word out;
    out.letters.reserve(w.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        out.letters.push_back(static_cast<std::uint8_t>(G.bar(*it)));
    return out;
}

inline Word parent(const Word& w) {
    if (w.empty()) throw Error("parent: empty word has no parent");
    Word out = w;
    out.letters.pop_back();
    return out;
}

inline bool is_prefix(const Word& a, const Word& b) {
    if (a.size() > b.size()) return false;
    return std::equal(a.letters.begin(), a.letters.end(), b.letters.begin());
}

/// gamma_a = gamma_{a_1} ... gamma_{a_n}.
inline Mobius word_matrix(const SchottkyGroup& G, const Word& w) {
    Mobius g;
    for (std::uint8_t l : w.letters) g = g * G.gens[l];
    return g;
}

/// All reduced words of length n, lexicographic. |W_0| = 1 and
/// |W_n| = 2m (2m-1)^(n-1).
inline std::vector<Word> enumerate_words(const SchottkyGroup& G, int n,
                                         std::size_t cap = 10'000'000) {
    if (n < 0) throw InputError("enumerate_words: negative length");
    const int A = G.alphabet_size();
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
        count *= static_cast<std::size_t>(i == 0 ? A : A - 1);
        if (count > cap) throw ResourceCapError("enumerate_words: cap exceeded");
    }
    std::vector<Word> out;
    out.reserve(count);
    Word cur;
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == n) {
            out.push_back(cur);
            return;
        }
        for (int a = 0; a < A; ++a) {
            if (!arrow(G, cur, a)) continue;
            cur.letters.push_back(static_cast<std::uint8_t>(a));
            rec();
            cur.letters.pop_back();
        }
    };
    rec();
    return out;
}

// ---------------------------------------------------------------------------
// word-indexed geometry
// ---------------------------------------------------------------------------

/// D_a = gamma_{a'}(D_{a_n}), computed analytically; I_a = D_a intersect R
/// has length equal to the diameter.
inline Disk word_disk(const SchottkyGroup& G, const Word& w) {
    if (w.empty()) throw Error("word_disk: empty word");
    return disk_image(word_matrix(G, parent(w)), G.disks[static_cast<std::size_t>(w.back())]);
}

inline Interval word_interval(const SchottkyGroup& G, const Word& w) {
    return word_disk(G, w).interval();
}

/// Basepoint o_a for a word: the basepoint of the admissible next letter
/// whose disk center lies farthest from the pole of gamma_a (ties broken by
/// letter index). Keeping the evaluation point away from the pole makes
/// Upsilon track 1/c_a^2 uniformly across a partition.
inline Complex word_basepoint(const SchottkyGroup& G, const Mobius& g, const Word& w) {
    if (w.empty()) throw Error("word_basepoint: empty word");
    const double pole = g.c != 0.0 ? -g.d / g.c : kInf;
    int best = -1;
    double best_dist = -1.0;
    for (int b = 0; b < G.alphabet_size(); ++b) {
        if (!arrow(G, w, b)) continue;
        const double dist = std::isinf(pole) ? 0.0 : std::abs(G.disks[static_cast<std::size_t>(b)].center - pole);
        if (dist > best_dist) {
            best_dist = dist;
            best = b;
        }
    }
    return G.basepoints[static_cast<std::size_t>(best)];
}

inline Complex word_basepoint(const SchottkyGroup& G, const Word& w) {
    return word_basepoint(G, word_matrix(G, w), w);
}

/// Upsilon_a = |gamma_a'(o_a)|.
inline double upsilon(const SchottkyGroup& G, const Mobius& g, const Word& w) {
    return std::abs(mobius_derivative(g, word_basepoint(G, g, w)));
}

inline double upsilon(const SchottkyGroup& G, const Word& w) {
    const Mobius g = word_matrix(G, w);
    return upsilon(G, g, w);
}

// ---------------------------------------------------------------------------
// partitions
// ---------------------------------------------------------------------------

struct Partition {
    double tau = 0.0;
    char kind = 'Z';
    std::vector<Word> words;  // lexicographically sorted

    std::size_t size() const { return words.size(); }
};

namespace detail {
// depth-first descent emitting words at the first time |I_a| <= tau
inline void partition_descend(const SchottkyGroup& G, const Word& w, const Mobius& parent_mat,
                              double tau, std::size_t cap, std::vector<Word>& out) {
    // parent_mat = gamma_{w'}; the disk of w is parent_mat(D_{last letter})
    const Disk dw = disk_image(parent_mat, G.disks[static_cast<std::size_t>(w.back())]);
    if (dw.diameter() <= tau) {
        if (out.size() >= cap) throw ResourceCapError("build_partition: member cap exceeded");
        out.push_back(w);
        return;
    }
    const Mobius mat = parent_mat * G.gens[static_cast<std::size_t>(w.back())];
    for (int a = 0; a < G.alphabet_size(); ++a) {
        if (!arrow(G, w, a)) continue;
        Word child = w;
        child.letters.push_back(static_cast<std::uint8_t>(a));
        partition_descend(G, child, mat, tau, cap, out);
        }
}
}  // namespace detail

/// Z(tau) = { a : |I_a| <= tau < |I_a'| }. Requires tau below the smallest
/// single-letter interval so that Z(tau) lies in words of length >= 2.
inline Partition build_partition_Z(const SchottkyGroup& G, double tau,
                                   std::size_t cap = 1'000'000) {
    if (!(tau > 0)) throw InputError("build_partition_Z: tau must be positive");
    if (tau >= G.min_interval_length())
        throw TauTooLargeError("build_partition_Z: tau >= min single-letter interval");
    Partition P;
    P.tau = tau;
    P.kind = 'Z';
    for (int a = 0; a < G.alphabet_size(); ++a)
        detail::partition_descend(G, Word::single(a), Mobius(), tau, cap, P.words);
    std::sort(P.words.begin(), P.words.end());
    return P;
}

/// Y(tau) = { mirror(b)' : b in Z(tau) }, deduplicated, all members nonempty.
inline Partition build_partition_Y(const SchottkyGroup& G, double tau,
                                   std::size_t cap = 1'000'000) {
    const Partition Z = build_partition_Z(G, tau, cap);
    Partition Y;
    Y.tau = tau;
    Y.kind = 'Y';
    Y.words.reserve(Z.words.size());
    for (const Word& b : Z.words) Y.words.push_back(parent(mirror(G, b)));
    std::sort(Y.words.begin(), Y.words.end());
    Y.words.erase(std::unique(Y.words.begin(), Y.words.end()), Y.words.end());
    for (const Word& w : Y.words)
        if (w.empty()) throw Error("build_partition_Y: empty member");
    return Y;
}

}  // namespace schottky
