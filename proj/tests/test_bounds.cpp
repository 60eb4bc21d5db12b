#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "schottky/bounds.hpp"

using namespace schottky;
using Catch::Approx;

namespace {
const SchottkyGroup& funnel() {
    static const SchottkyGroup G = build_funnel3(6.0, 6.0, 6.0);
    return G;
}

double funnel_delta() {
    static const double d = delta_bowen(funnel()).delta;
    return d;
}

double funnel_sep_c() {
    static const double c = [] {
        std::vector<double> cand;
        for (double c0 = 0.02; c0 < 25.0; c0 *= 1.4) cand.push_back(c0);
        return check_separation(funnel(), 0.05, cand).c_max;
    }();
    return c;
}
}  // namespace

TEST_CASE("phase basics", "[bounds]") {
    const SchottkyGroup& G = funnel();
    const Word a({0, 1}), b({3, 0});
    REQUIRE(arrow(G, a, 1));
    REQUIRE(arrow(G, b, 1));
    const PhasePair diag = make_phase_pair(G, 1, a, a);
    CHECK(phase(diag, Complex(-6.3, 0.1)) == Complex(0, 0));

    const PhasePair p = make_phase_pair(G, 1, a, b);
    CHECK(p.D_ab > 0.0);

    // real on the real diameter
    const Disk& D = G.disks[1];
    for (int i = 0; i <= 10; ++i) {
        const Complex z(D.center - 0.9 * D.radius + 1.8 * D.radius * i / 10.0, 0.0);
        CHECK(std::abs(phase(p, z).imag()) < 1e-14);
    }

    // analytic derivative vs central differences
    for (const Complex z : {Complex(-6.3, 0.0), Complex(-6.1, 0.2), Complex(-6.5, -0.3)}) {
        const double e = 1e-6;
        const Complex fd = (phase(p, z + e) - phase(p, z - e)) / (2 * e);
        CHECK(std::abs(fd - phase_derivative(p, z, 1)) < 1e-7);
        // second derivative against differences of the first
        const Complex fd2 =
            (phase_derivative(p, z + e, 1) - phase_derivative(p, z - e, 1)) / (2 * e);
        CHECK(std::abs(fd2 - phase_derivative(p, z, 2)) < 1e-6);
    }
}

TEST_CASE("phase derivative report", "[bounds]") {
    const SchottkyGroup& G = funnel();
    const PhaseReport rep = phase_derivative_report(G, 5);

    REQUIRE(rep.by_length.count(3));
    REQUIRE(rep.by_length.count(5));
    for (const auto& [len, st] : rep.by_length) {
        INFO("len " << len << ": |Phi'|/D in [" << st.ratio_min << ", " << st.ratio_max
                    << "], |c_a| sqrt(Y_a) in [" << st.c_entry_min << ", "
                    << st.c_entry_max << "], pairs " << st.pairs);
        CHECK(st.pairs > 10);
        CHECK(st.ratio_min > 0.0);
        CHECK(st.ratio_max < kInf);
        CHECK(st.c_entry_min > 0.0);
    }
    // stability of the recorded bounds between lengths 3 and 5
    const PhaseLengthStats& s3 = rep.by_length.at(3);
    const PhaseLengthStats& s5 = rep.by_length.at(5);
    CHECK(s5.ratio_max / s3.ratio_max < 2.0);
    CHECK(s3.ratio_min / s5.ratio_min < 2.0);
    CHECK(rep.fd_residual < 1e-7);
    CHECK(rep.deriv_constant > 0.0);
    CHECK(rep.lower_c > 0.0);
}

TEST_CASE("oscillatory integral diagnostics", "[bounds]") {
    const SchottkyGroup& G = funnel();
    const double h = 0.01;
    const DiskUnionDomain dom = omega_surrogate(G, h);

    const Word a({0}), b({2});
    REQUIRE(arrow(G, a, 1));
    REQUIRE(arrow(G, b, 1));

    // diagnostic pair: the integral is the volume, independent of T
    const PhasePair diag = make_phase_pair(G, 1, a, a);
    double vol = 0.0;
    const Disk& target = G.disks[1];
    for (const Disk& piece : dom.disks)
        if (std::abs(piece.center - target.center) + piece.radius <= target.radius)
            vol += M_PI * piece.radius * piece.radius;
    OscillOptions light;
    light.n_radial = 16;
    light.n_angular = 32;
    light.n_time = 50;
    for (double T : {3.0, 30.0}) {
        const double I = averaged_oscillatory_integral(G, diag, h, T, OscillKind::Unit, light);
        CHECK(I == Approx(vol).epsilon(1e-10));
    }

    // off-diagonal pair decays once D T is large
    const PhasePair p = make_phase_pair(G, 1, a, b);
    const double T0 = 20.0 / p.D_ab;
    const double i1 = averaged_oscillatory_integral(G, p, h, T0, OscillKind::Unit, light);
    const double i2 =
        averaged_oscillatory_integral(G, p, h, 2 * T0, OscillKind::Unit, light);
    CHECK(i2 <= i1 * 1.05);
}

TEST_CASE("separation constant", "[bounds]") {
    const SchottkyGroup& G = funnel();
    std::vector<double> cand;
    for (double c = 0.02; c < 30.0; c *= 1.4) cand.push_back(c);
    const SeparationReport rep = check_separation(G, 0.05, cand);
    INFO("c threshold " << rep.c_max);
    CHECK(rep.c_max > 0.0);

    // words with deep common prefixes collide when tau is small relative to h
    bool small_c_violates = false;
    for (const SeparationEntry& e : rep.entries)
        if (e.feasible && e.c < rep.c_max && e.violations > 0) small_c_violates = true;
    CHECK(small_c_violates);

    // the boundary sits at a fixed tau = c h rather than a fixed c at these
    // scales: the colliding pair family leaves Y(tau) at a tau cutoff
    std::vector<double> cand2;
    for (double c = 0.02; c < 60.0; c *= 1.4) cand2.push_back(c);
    const SeparationReport rep2 = check_separation(G, 0.025, cand2);
    INFO("tau* at h=0.05: " << rep.c_max * 0.05 << ", at h=0.025: " << rep2.c_max * 0.025);
    CHECK(rep.c_max * 0.05 == Approx(rep2.c_max * 0.025).epsilon(0.1));
}

TEST_CASE("hs norm formula against the assembled matrix", "[bounds]") {
    const SchottkyGroup& G = funnel();
    const double delta = funnel_delta();
    const double h = 0.05;
    const double tau0 = funnel_sep_c() * h;
    const double tau1 = 0.05;
    const HsCheck hc = hs_norm_check(G, tau0, tau1, Complex(delta + 0.5, 0.0), h, 16);
    INFO("formula " << hc.formula_value << " direct " << hc.direct_value << " rel "
                    << hc.rel_err << " prefix-related mass " << hc.prefix_related_mass);
    CHECK(hc.formula_value > 0.0);
    CHECK(hc.rel_err < 1e-3);
    // the pairs covered by the separation lemma contribute exactly nothing
    CHECK(hc.cross_prefix_pairs == 0);
    CHECK(hc.near_diag_diff == 0.0);
    // pairs whose Y(tau0) parts extend one another carry real kernel mass at
    // every scale (images coincide near the fixed point of the extension)
    CHECK(hc.prefix_related_pairs > 0);
    CHECK(hc.prefix_related_mass < 0.1 * hc.formula_value);
}

TEST_CASE("jensen bound dominates the direct count", "[bounds]") {
    const SchottkyGroup& G = funnel();
    const double delta = funnel_delta();
    const double h = 0.05;
    const double tau0 = funnel_sep_c() * h;
    const double tau1 = 0.05;

    const double T = 5.0;
    const Box box{0.5 * delta, delta + 0.05, 0.0, T};
    const ResonanceSet rs = find_resonances(G, box, BasisSpec{24, 0.7, 0});
    const int n = count(rs, CountMode::N, 0.5 * delta, T);

    const double bound =
        jensen_upper_count(G, 0.5 * delta, T, delta, tau0, tau1, h);
    INFO("count " << n << " bound " << bound);
    CHECK(bound >= n);

    // nonincreasing in sigma on a two-point grid
    const double bound2 = jensen_upper_count(G, delta, T, delta, tau0, tau1, h);
    CHECK(bound2 <= bound * 1.001);

    // pointwise estimate direction: -log|f(delta+K)| decays as tau0 tau1 shrink
    const double g1 = jensen_center_neglog(G, delta, tau0, tau1, h);
    const double g2 = jensen_center_neglog(G, delta, 0.5 * tau0, 0.5 * tau1, h);
    CHECK(std::abs(g2) <= std::abs(g1) + 1e-12);
}

TEST_CASE("main estimate scan smoke", "[bounds]") {
    const SchottkyGroup& G = funnel();
    const double delta = funnel_delta();
    const ScanResult res = main_estimate_scan(G, delta, funnel_sep_c(),
                                              {0.5 * delta, delta}, {20.0, 28.0, 40.0}, 6, 8);
    int feasible = 0;
    for (const ScanRow& r : res.rows) {
        if (!r.feasible) continue;
        ++feasible;
        CHECK(r.value > 0.0);
    }
    CHECK(feasible >= 4);
    for (const auto& [sigma, ex] : res.theoretical_exponent)
        CHECK(ex == Approx(delta - (3 * delta + 2) / (2 * delta + 2) * (2 * sigma - delta)));
}
