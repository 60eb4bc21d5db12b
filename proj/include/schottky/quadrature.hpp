#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "schottky/common.hpp"
#include "schottky/group.hpp"

namespace schottky {

struct QuadNode {
    Complex z;
    double w = 0.0;
};

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

/// Tensor polar rule on a disk: Gauss-Legendre radially, trapezoid in angle.
/// Exact for holomorphic-smooth integrands to spectral accuracy.
inline std::vector<QuadNode> disk_quadrature(const Disk& disk, int n_radial = 32,
                                             int n_angular = 64) {
    std::vector<double> rn, rw;
    gauss_legendre(n_radial, rn, rw);
    std::vector<QuadNode> nodes;
    nodes.reserve(static_cast<std::size_t>(n_radial * n_angular));
    const double dth = 2.0 * M_PI / n_angular;
    for (int i = 0; i < n_radial; ++i) {
        const double r = 0.5 * disk.radius * (rn[static_cast<std::size_t>(i)] + 1.0);
        const double wr = 0.5 * disk.radius * rw[static_cast<std::size_t>(i)] * r * dth;
        for (int j = 0; j < n_angular; ++j) {
            const double th = dth * j;
            nodes.push_back(
                {Complex(disk.center + r * std::cos(th), r * std::sin(th)), wr});
        }
    }
    return nodes;
}

/// Uniform trapezoid rule over [a,b] with n+1 points.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    double s = 0.5 * (f(a) + f(b));
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i) s += f(a + h * i);
    return s * h;
}

}  // namespace schottky
