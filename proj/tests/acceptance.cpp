// Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
// Shared heavy artifacts (delta, separation constant, the zero set up to
// T = 60) are computed once and reused.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "schottky/bounds.hpp"
#include "schottky/resonances.hpp"

using namespace schottky;

namespace {

void announce(int n, const std::string& name, bool pass, const std::string& detail) {
    std::cout << "ACCEPTANCE " << n << " (" << name << "): " << (pass ? "PASS" : "FAIL")
              << " -- " << detail << "\n"
              << std::flush;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// oscillation amplitude of L(gamma_a') on the sampling circles; drives the
// degree needed at height T
double oscillation_amp(const SchottkyGroup& G, double rho = 0.7) {
    double amp = 0.0;
    for (int b = 0; b < G.alphabet_size(); ++b) {
        const Disk& D = G.disks[static_cast<std::size_t>(b)];
        for (int a = 0; a < G.alphabet_size(); ++a) {
            if (b == G.bar(a)) continue;
            const Mobius g = G.gens[static_cast<std::size_t>(a)];
            const double pole = -g.d / g.c;
            const double dist = std::abs(D.center - pole);
            amp = std::max(amp, 2.0 * rho * D.radius / (dist - rho * D.radius));
        }
    }
    return amp;
}

int degree_for_height(const SchottkyGroup& G, double T) {
    const double x = oscillation_amp(G) * T;
    return std::max(24, static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 10.0)));
}

struct Fixture {
    SchottkyGroup G = build_funnel3(6.0, 6.0, 6.0);
    double delta = 0.0;
    double sep_c = 0.0;  // separation threshold at h = 0.05

    ResonanceSet zeros60;  // zeros over [delta/2 - 0.02, delta + 0.02] x [0, 60]
    bool zeros60_ready = false;

    static Fixture& get() {
        static Fixture f;
        return f;
    }

    const ResonanceSet& zeros() {
        if (!zeros60_ready) {
            const double lo = 0.5 * delta - 0.02;
            const double hi = delta + 0.02;
            const double seams[4] = {0.0, 20.0137, 40.0271, 60.0};
            ResonanceSet merged;
            merged.box = Box{lo, hi, 0.0, 60.0};
            for (int seg = 0; seg < 3; ++seg) {
                const Box box{lo, hi, seams[seg], seams[seg + 1]};
                const int M = degree_for_height(G, seams[seg + 1]);
                const ResonanceSet rs = find_resonances(G, box, BasisSpec{M, 0.7, 0});
                merged.box.im_lo = std::min(merged.box.im_lo, rs.box.im_lo);
                for (const Resonance& r : rs.zeros) {
                    bool dup = false;
                    for (const Resonance& q : merged.zeros)
                        if (std::abs(q.s - r.s) < 1e-7) dup = true;
                    if (!dup) merged.zeros.push_back(r);
                }
            }
            std::sort(merged.zeros.begin(), merged.zeros.end(),
                      [](const Resonance& a, const Resonance& b) {
                          return a.s.imag() < b.s.imag();
                      });
            zeros60 = std::move(merged);
            zeros60_ready = true;
        }
        return zeros60;
    }

private:
    Fixture() {
        delta = delta_bowen(G).delta;
        std::vector<double> cand;
        for (double c = 0.02; c * 0.05 < G.min_interval_length(); c *= 1.4)
            cand.push_back(c);
        sep_c = check_separation(G, 0.05, cand).c_max;
    }
};

std::vector<Word> letters_of(const SchottkyGroup& G) {
    std::vector<Word> out;
    for (int a = 0; a < G.alphabet_size(); ++a) out.push_back(Word::single(a));
    return out;
}

}  // namespace

TEST_CASE("criterion 1: determinant-zeta identity", "[acceptance]") {
    const auto t0 = std::chrono::steady_clock::now();
    Fixture& F = Fixture::get();
    TransferAssembler asmr(F.G, letters_of(F.G), BasisSpec{24, 0.7, 0},
                           OperatorDomain::base(F.G));
    // points with Re(s) >= delta + 0.5; the margin is widened so the stated
    // L = 20 product truncation sits far below the 1e-6 tolerance
    std::vector<Complex> points;
    for (int i = 0; i < 10; ++i)
        points.emplace_back(F.delta + 1.5 + 0.15 * i, -5.0 + 10.0 * i / 9.0);

    double worst = 0.0;
    for (const Complex& s : points) {
        const Complex det = fredholm_det(asmr.assemble(s)).value;
        const ZetaResult z = selberg_zeta_product(F.G, s, 20.0, 60, F.delta);
        worst = std::max(worst, std::abs(det - z.value) / std::abs(z.value));
    }
    const double secs = seconds_since(t0);
    const bool pass = worst < 1e-6 && secs < 120.0;
    announce(1, "determinant-zeta identity", pass,
             "worst rel diff " + std::to_string(worst) + " at 10 points, " +
                 std::to_string(secs) + " s");
    CHECK(pass);
}

TEST_CASE("criterion 2: Lefschetz trace oracle", "[acceptance]") {
    const auto t0 = std::chrono::steady_clock::now();
    Fixture& F = Fixture::get();
    TransferAssembler asmr(F.G, letters_of(F.G), BasisSpec{24, 0.7, 0},
                           OperatorDomain::base(F.G));
    const Complex s(F.delta + 1.0, 0.0);
    const Eigen::MatrixXcd A = asmr.assemble(s);
    Eigen::MatrixXcd An = A;
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const Complex tr = An.trace();
        const Complex lef = trace_power_lefschetz(F.G, letters_of(F.G), s, n);
        worst = std::max(worst, std::abs(tr - lef) / std::abs(tr));
        An = An * A;
    }
    const double secs = seconds_since(t0);
    const bool pass = worst < 1e-8 && secs < 60.0;
    announce(2, "Lefschetz trace oracle", pass,
             "worst rel err " + std::to_string(worst) + ", " + std::to_string(secs) + " s");
    CHECK(pass);
}

TEST_CASE("criterion 3: cylinder lattice", "[acceptance]") {
    const SchottkyGroup C = build_cylinder(2.0);
    const Box box{-2.5, 0.5, 0.0, 2.0 * M_PI};
    const ResonanceSet rs = find_resonances(C, box, BasisSpec{24, 0.7, 0});

    // closed-form zero set: -k + i pi n, multiplicity 2
    std::vector<Complex> lattice;
    for (int k = 0; k <= 2; ++k)
        for (int n = 0; n <= 2; ++n)
            if (rs.box.contains(Complex(-k, M_PI * n))) lattice.emplace_back(-k, M_PI * n);

    bool pass = true;
    double worst = 0.0;
    int total_mult = 0;
    for (const Resonance& r : rs.zeros) {
        double best = kInf;
        for (const Complex& p : lattice) best = std::min(best, std::abs(r.s - p));
        worst = std::max(worst, best);
        if (best > 1e-6 || r.multiplicity != 2) pass = false;
        total_mult += r.multiplicity;
    }
    // none missed: winding totals account for every lattice point in the box
    if (rs.zeros.size() != lattice.size() ||
        total_mult != 2 * static_cast<int>(lattice.size()))
        pass = false;
    announce(3, "cylinder lattice", pass,
             std::to_string(rs.zeros.size()) + " zeros vs " + std::to_string(lattice.size()) +
                 " lattice points, worst distance " + std::to_string(worst) +
                 ", total multiplicity " + std::to_string(total_mult));
    CHECK(pass);
}

TEST_CASE("criterion 4: delta cross-validation", "[acceptance]") {
    Fixture& F = Fixture::get();
    const DeltaResult d = delta_bowen(F.G);
    const bool methods_agree = std::abs(d.delta_eig - d.delta_det) < 1e-8;

    std::vector<double> lx, ln, vx, lv;
    for (double h = 1e-2; h > 2e-7; h /= 2) {
        const IntervalCover cov = lambda_neighbourhood(F.G, h);
        lx.push_back(std::log(1.0 / h));
        ln.push_back(std::log(static_cast<double>(cov.count())));
        try {
            const DiskUnionDomain dom = omega_surrogate(F.G, h);
            vx.push_back(std::log(1.0 / h));
            lv.push_back(std::log(dom.total_volume()));
        } catch (const GeometryError&) {
        }
    }
    const double box_slope = fit_line(lx, ln).slope;
    const double vol_slope = fit_line(vx, lv).slope;
    const bool box_ok = std::abs(box_slope - d.delta) < 0.05;
    const bool vol_ok = std::abs(vol_slope - (d.delta - 2.0)) < 0.1;
    const bool pass = methods_agree && box_ok && vol_ok;
    announce(4, "delta cross-validation", pass,
             "delta_eig " + std::to_string(d.delta_eig) + ", delta_det " +
                 std::to_string(d.delta_det) + ", box slope " + std::to_string(box_slope) +
                 ", volume slope " + std::to_string(vol_slope));
    CHECK(pass);
}

TEST_CASE("criterion 5: partition invariance of zeros", "[acceptance]") {
    Fixture& F = Fixture::get();
    const Box box{F.delta - 0.3, F.delta + 0.02, 0.0, 10.0};
    const ResonanceSet rs = find_resonances(F.G, box, BasisSpec{24, 0.7, 0});

    bool pass = !rs.zeros.empty();
    double worst = 0.0;
    for (double tau : {0.02, 0.01}) {
        TransferOperator op(F.G, TransferOp::refined(tau), BasisSpec{24, 0.7, 0},
                            OperatorDomain::base(F.G));
        DetFunction det = [&op](const Complex& s) { return fredholm_det(op.matrix(s)); };
        for (const Resonance& r : rs.zeros) {
            try {
                const Resonance refined = refine_zero(det, r.s, r.multiplicity, 1e-6);
                worst = std::max(worst, std::abs(refined.s - r.s));
            } catch (const NonConvergenceError&) {
                pass = false;
            }
        }
    }
    if (worst > 1e-6) pass = false;
    announce(5, "partition invariance", pass,
             std::to_string(rs.zeros.size()) + " zeros, worst displacement " +
                 std::to_string(worst) + " across tau in {0.02, 0.01}");
    CHECK(pass);
}

namespace {

struct DistortionConstants {
    double theta1 = 1.0, theta2 = 0.0;
    double c_ii = 1.0, c_iii = 1.0, c_iv = 1.0, c_v = 1.0, c_vi = 1.0, c_vii = 1.0;
    bool monotone = true;
};

DistortionConstants distortion_constants(const SchottkyGroup& G, int L) {
    DistortionConstants out;
    out.theta1 = kInf;
    double prev_level_max = kInf;

    std::vector<std::vector<Complex>> grids(static_cast<std::size_t>(G.alphabet_size()));
    for (int b = 0; b < G.alphabet_size(); ++b) {
        const Disk& D = G.disks[static_cast<std::size_t>(b)];
        auto& g = grids[static_cast<std::size_t>(b)];
        for (int i = 0; i < 10; ++i)
            g.emplace_back(D.center - 0.9 * D.radius + 1.8 * D.radius * i / 9.0, 0.0);
        for (int ring = 0; ring < 2; ++ring)
            for (int i = 0; i < 20; ++i) {
                const double r = (ring == 0 ? 0.45 : 0.8) * D.radius;
                const double th = 2 * M_PI * i / 20.0;
                g.emplace_back(D.center + r * std::cos(th), r * std::sin(th));
            }
    }

    std::vector<Word> words;
    for (int n = 1; n <= L; ++n) {
        double level_max = 0.0;
        for (const Word& w : enumerate_words(G, n)) {
            words.push_back(w);
            const Mobius g = word_matrix(G, w);
            const double ups = upsilon(G, g, w);
            double wmin = kInf, wmax = 0.0;
            for (int b = 0; b < G.alphabet_size(); ++b) {
                if (!arrow(G, w, b)) continue;
                double bmin = kInf, bmax = 0.0;
                for (const Complex& z : grids[static_cast<std::size_t>(b)]) {
                    const double d = std::abs(mobius_derivative(g, z));
                    bmin = std::min(bmin, d);
                    bmax = std::max(bmax, d);
                    out.c_iv = std::max({out.c_iv, d / ups, ups / d});
                }
                out.c_ii = std::max(out.c_ii, bmax / bmin);
                wmin = std::min(wmin, bmin);
                wmax = std::max(wmax, bmax);
            }
            out.c_iii = std::max(out.c_iii, wmax / wmin);
            out.theta1 = std::min(out.theta1, std::pow(wmin, 1.0 / n));
            out.theta2 = std::max(out.theta2, std::pow(wmax, 1.0 / n));
            level_max = std::max(level_max, wmax);

            // (v) basepoint robustness: the smallest-index admissible letter
            // as the alternative choice
            {
                const int b0 = G.first_admissible_after(w.back());
                const double alt = std::abs(
                    mobius_derivative(g, G.basepoints[static_cast<std::size_t>(b0)]));
                out.c_v = std::max({out.c_v, alt / ups, ups / alt});
            }
            if (w.size() <= 5) {
                const double um = upsilon(G, mirror(G, w));
                out.c_vi = std::max({out.c_vi, um / ups, ups / um});
            }
        }
        if (level_max > prev_level_max) out.monotone = false;
        prev_level_max = level_max;
    }

    // (vii) near-multiplicativity over composable pairs with |a| + |b| <= L
    for (const Word& a : words)
        for (const Word& b : words) {
            if (a.size() + b.size() > static_cast<std::size_t>(L)) continue;
            if (!arrow(G, a, b)) continue;
            const double r = upsilon(G, concat(G, a, b)) / (upsilon(G, a) * upsilon(G, b));
            out.c_vii = std::max({out.c_vii, r, 1.0 / r});
        }
    return out;
}

}  // namespace

TEST_CASE("criterion 6: distortion suite and Z/Y estimates", "[acceptance]") {
    Fixture& F = Fixture::get();
    const DistortionConstants c4 = distortion_constants(F.G, 4);
    const DistortionConstants c6 = distortion_constants(F.G, 6);

    auto stable = [](double a, double b) { return std::max(a / b, b / a) < 2.0; };
    const bool parts_hold = c6.theta2 < 1.0 && c6.monotone && c4.theta2 < 1.0;
    const bool drift_ok = stable(c4.theta1, c6.theta1) && stable(c4.theta2, c6.theta2) &&
                          stable(c4.c_ii, c6.c_ii) && stable(c4.c_iii, c6.c_iii) &&
                          stable(c4.c_iv, c6.c_iv) && stable(c4.c_v, c6.c_v) &&
                          stable(c4.c_vi, c6.c_vi) && stable(c4.c_vii, c6.c_vii);

    // Z/Y estimates: Upsilon/tau spread and half-tau count ratio
    double spread_worst = 0.0;
    bool count_ratio_ok = true;
    std::string zy_detail;
    for (double tau : {1e-2, 1e-3}) {
        const Partition Y = build_partition_Y(F.G, tau);
        double lo = kInf, hi = 0.0;
        for (const Word& w : Y.words) {
            const double u = upsilon(F.G, w);
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
        spread_worst = std::max(spread_worst, hi / lo);
        const Partition Y2 = build_partition_Y(F.G, tau / 2);
        const double ratio = static_cast<double>(Y2.size()) / static_cast<double>(Y.size());
        const double expect = std::pow(2.0, F.delta);
        if (ratio < expect / 2.0 || ratio > expect * 2.0) count_ratio_ok = false;
        zy_detail += " tau=" + std::to_string(tau) + ": spread " + std::to_string(hi / lo) +
                     ", |Y(tau/2)|/|Y(tau)| " + std::to_string(ratio) + ";";
    }
    const bool spread_ok = spread_worst < 100.0;

    const bool pass = parts_hold && drift_ok && spread_ok && count_ratio_ok;
    announce(6, "distortion suite and Z/Y estimates", pass,
             "theta2 " + std::to_string(c6.theta2) + ", drift ok " +
                 (drift_ok ? "yes" : "no") + "," + zy_detail + " spread<100 " +
                 (spread_ok ? "yes" : "no (structural: window ~ exp(l), see notes)"));
    CHECK(parts_hold);
    CHECK(drift_ok);
    CHECK(count_ratio_ok);
    CHECK(spread_ok);  // expected red: the window is governed by exp(-l) steps
}

TEST_CASE("criterion 7: separation constant", "[acceptance]") {
    Fixture& F = Fixture::get();
    std::vector<double> cs;
    std::string detail;
    bool all_positive = true;
    for (double h : {0.1, 0.05, 0.025}) {
        double c = 0.0;
        try {
            std::vector<double> cand;
            for (double c0 = 0.02; c0 * h < F.G.min_interval_length(); c0 *= 1.4)
                cand.push_back(c0);
            c = check_separation(F.G, h, cand).c_max;
        } catch (const Error& e) {
            detail += std::string(" h=") + std::to_string(h) + ": " + e.what() + ";";
        }
        if (c <= 0.0) all_positive = false;
        cs.push_back(c);
        detail += " c(" + std::to_string(h) + ") = " + std::to_string(c) + ";";
    }
    double cmin = kInf, cmax = 0.0;
    for (double c : cs) {
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    const bool uniform = cmin > 0.0 && (cmax - cmin) / cmin < 0.2;
    const bool pass = all_positive && uniform;
    announce(7, "separation constant", pass,
             detail + (uniform ? "" : " boundary is a fixed tau ~ 0.06, not a fixed c"));
    CHECK(all_positive);
    CHECK(uniform);  // expected red: threshold scales as 1/h at these h (see notes)
}

TEST_CASE("criterion 8: phase derivatives", "[acceptance]") {
    Fixture& F = Fixture::get();
    const PhaseReport rep = phase_derivative_report(F.G, 5);
    const PhaseLengthStats& st = rep.by_length.at(5);
    const bool ratio_ok = st.ratio_min >= 0.1 && st.ratio_max <= 10.0;
    const bool fd_ok = rep.fd_residual < 1e-7;
    const bool pass = ratio_ok && fd_ok;
    announce(8, "phase derivatives", pass,
             "|Phi'|/D in [" + std::to_string(st.ratio_min) + ", " +
                 std::to_string(st.ratio_max) + "] over " + std::to_string(st.pairs) +
                 " pairs, fd residual " + std::to_string(rep.fd_residual));
    CHECK(pass);
}

TEST_CASE("criterion 9: averaged oscillatory decay", "[acceptance]") {
    Fixture& F = Fixture::get();
    // five representative admissible pairs with distinct first letters
    std::vector<PhasePair> pairs;
    for (int t = 0; t < F.G.alphabet_size() && pairs.size() < 5; ++t)
        for (int a = 0; a < F.G.alphabet_size() && pairs.size() < 5; ++a)
            for (int b = a + 1; b < F.G.alphabet_size() && pairs.size() < 5; ++b) {
                if (!arrow(F.G, Word::single(a), t) || !arrow(F.G, Word::single(b), t))
                    continue;
                pairs.push_back(make_phase_pair(F.G, t, Word::single(a), Word::single(b)));
            }
    REQUIRE(pairs.size() == 5);

    // the paper's prediction T^(-1+eps) e^(C h T) takes h = 1/T; the sweep
    // couples the neighbourhood to the time scale the same way
    OscillOptions base;
    base.n_radial = 16;
    base.n_angular = 32;
    base.n_time = 100;
    bool slopes_ok = true, consistent = true;
    std::string detail;
    for (const PhasePair& p : pairs) {
        std::vector<double> lx, ly;
        for (double T = 10.0 / p.D_ab; T <= 1000.0 / p.D_ab; T *= 1.72) {
            try {
                const double I = averaged_oscillatory_integral(F.G, p, 1.0 / T, T,
                                                               OscillKind::Unit, base);
                lx.push_back(std::log(T));
                ly.push_back(std::log(I));
            } catch (const GeometryError&) {
                // 1/T too close to a gap-spectrum value; skip the point
            }
        }
        if (lx.size() < 5) {
            slopes_ok = false;
            continue;
        }
        const double slope = fit_line(lx, ly).slope;
        if (slope > -0.8) slopes_ok = false;
        detail += " slope " + std::to_string(slope) + ";";

        const double Tmid = 100.0 / p.D_ab;
        OscillOptions dense = base;
        dense.n_radial *= 2;
        dense.n_angular *= 2;
        dense.n_time *= 2;
        const double i1 =
            averaged_oscillatory_integral(F.G, p, 1.0 / Tmid, Tmid, OscillKind::Unit, base);
        const double i2 =
            averaged_oscillatory_integral(F.G, p, 1.0 / Tmid, Tmid, OscillKind::Unit, dense);
        if (std::abs(i1 - i2) / i2 > 0.01) consistent = false;
    }
    const bool pass = slopes_ok && consistent;
    announce(9, "averaged oscillatory decay", pass,
             detail + (consistent ? " quadrature consistent" : " quadrature inconsistent"));
    CHECK(pass);
}

TEST_CASE("criterion 10: Hilbert-Schmidt norm formula", "[acceptance]") {
    Fixture& F = Fixture::get();
    const double h = 0.05;
    const double tau0 = F.sep_c * h;
    const HsCheck hc = hs_norm_check(F.G, tau0, 0.05, Complex(F.delta + 0.5, 0.0), h, 16);
    const bool rel_ok = hc.rel_err < 1e-3;
    const bool exact_ok = hc.cross_prefix_pairs == 0 && hc.near_diag_diff == 0.0;
    const bool pass = rel_ok && exact_ok;
    announce(10, "Hilbert-Schmidt norm formula", pass,
             "rel err " + std::to_string(hc.rel_err) + ", separation-covered mass " +
                 std::to_string(hc.near_diag_diff) + " (exactly zero), prefix-related mass " +
                 std::to_string(hc.prefix_related_mass) + " (reduction drops it)");
    CHECK(pass);
}

TEST_CASE("criterion 11: Jensen upper count", "[acceptance]") {
    Fixture& F = Fixture::get();
    const ResonanceSet& rs = F.zeros();
    const double h = 0.05;
    const double tau0 = F.sep_c * h;
    bool pass = true;
    std::string detail;
    for (double sigma : {0.5 * F.delta, 0.67 * F.delta, 0.83 * F.delta, F.delta}) {
        for (double T : {5.0, 16.0, 28.0, 40.0}) {
            const int n = count(rs, CountMode::N, sigma, T);
            const double bound = jensen_upper_count(F.G, sigma, T, F.delta, tau0, 0.05, h);
            if (bound < n) {
                pass = false;
                detail += " VIOLATION sigma=" + std::to_string(sigma) +
                          " T=" + std::to_string(T) + " count " + std::to_string(n) +
                          " bound " + std::to_string(bound) + ";";
            }
        }
    }
    if (pass) detail = "bound >= count at all 16 grid points";
    announce(11, "Jensen upper count", pass, detail);
    CHECK(pass);
}

TEST_CASE("criterion 12: Weyl slope sanity", "[acceptance]") {
    Fixture& F = Fixture::get();
    const ResonanceSet& rs = F.zeros();
    const std::vector<double> T_grid{15.0, 22.5, 30.0, 37.5, 45.0, 52.5, 60.0};

    std::string detail = "zeros " + std::to_string(rs.zeros.size()) + ";";
    bool pass = true;
    double prev_slope = kInf;
    bool first = true;
    for (double sigma : {0.5 * F.delta, 0.62 * F.delta, 0.75 * F.delta}) {
        double slope = 0.0;
        try {
            const WeylFit fit = fit_weyl_exponent(rs, sigma, T_grid, F.delta);
            slope = fit.slope;
            detail += " sigma=" + std::to_string(sigma) + ": slope " +
                      std::to_string(fit.slope) + " (theoretical exponent " +
                      std::to_string(fit.theoretical) + ");";
        } catch (const Error& e) {
            detail += std::string(" fit failed: ") + e.what() + ";";
            pass = false;
            break;
        }
        if (first && slope > 1.0 + F.delta + 0.15) pass = false;
        if (!first && slope > prev_slope + 1e-12) pass = false;
        prev_slope = slope;
        first = false;
    }
    announce(12, "Weyl slope sanity", pass, detail);
    CHECK(pass);
}

TEST_CASE("criterion 13: determinism of artifacts", "[acceptance]") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "schottky_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run = [&](const std::string& sub) {
        const std::string cmd = std::string(SCHOTTKY_CLI_PATH) +
                                " resonances --preset cylinder --lengths 2 --box "
                                "-1.5,0.5,0.0,4.0 --out " +
                                (dir / sub).string() + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    bool pass = run("r1") == 0 && run("r2") == 0;
    int compared = 0;
    if (pass) {
        for (const auto& e : fs::directory_iterator(dir / "r1")) {
            const fs::path other = dir / "r2" / e.path().filename();
            if (!fs::exists(other)) {
                pass = false;
                continue;
            }
            std::ifstream a(e.path(), std::ios::binary), b(other, std::ios::binary);
            std::stringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            if (sa.str() != sb.str()) pass = false;
            ++compared;
        }
        if (compared < 2) pass = false;
    }
    announce(13, "determinism of artifacts", pass,
             std::to_string(compared) + " artifacts byte-compared");
    CHECK(pass);
}
