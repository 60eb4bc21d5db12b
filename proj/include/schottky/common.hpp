#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace schottky {

using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// error hierarchy; the CLI maps these onto exit codes
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad user input (config files, malformed JSON, invalid flag combinations)
struct InputError : Error {
    using Error::Error;
};

// infeasible geometry (overlapping disks, surrogate overlap, pole inside disk)
struct GeometryError : Error {
    using Error::Error;
};

// point outside a domain, or a word fails to map a component into a component
struct DomainError : Error {
    using Error::Error;
};

struct BranchCutError : Error {
    using Error::Error;
};

struct NotHyperbolicError : Error {
    using Error::Error;
};

struct PoleError : Error {
    using Error::Error;
};

struct TauTooLargeError : Error {
    using Error::Error;
};

// configured word/member caps exceeded
struct ResourceCapError : Error {
    using Error::Error;
};

struct NonConvergenceError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// small shared utilities
// ---------------------------------------------------------------------------

struct Interval {
    double left = 0.0;
    double right = 0.0;

    double length() const { return right - left; }
    bool contains(double x) const { return left <= x && x <= right; }
    bool contains(const Interval& other) const {
        return left <= other.left && other.right <= right;
    }
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// least-squares line through (x_i, y_i)
inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw Error("fit_line: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
    }
    f.r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// FNV-1a, used to key run manifests and cache entries
inline std::uint64_t fnv1a(const std::string& data, std::uint64_t seed = 1469598103934665603ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace schottky
