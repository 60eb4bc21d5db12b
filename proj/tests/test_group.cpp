#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "schottky/group.hpp"
#include "schottky/words.hpp"

using namespace schottky;
using Catch::Approx;

TEST_CASE("cylinder preset", "[group]") {
    const SchottkyGroup G = build_cylinder(2.0);
    CHECK(G.m == 1);
    CHECK(translation_length(G.gens[0]) == Approx(2.0).margin(1e-12));
    CHECK(validate_schottky(G).all_pass());
}

TEST_CASE("funnel3 preset lengths", "[group]") {
    const SchottkyGroup G = build_funnel3(6.0, 6.0, 6.0);
    CHECK(translation_length(G.gens[0]) == Approx(6.0).margin(1e-9));
    CHECK(translation_length(G.gens[1]) == Approx(6.0).margin(1e-9));
    CHECK(translation_length(G.gens[0] * G.gens[1].inverse()) == Approx(6.0).margin(1e-9));
    CHECK(validate_schottky(G).all_pass());

    const SchottkyGroup H = build_funnel3(5.0, 6.0, 7.0);
    CHECK(translation_length(H.gens[0]) == Approx(5.0).margin(1e-9));
    CHECK(translation_length(H.gens[1]) == Approx(6.0).margin(1e-9));
    CHECK(translation_length(H.gens[0] * H.gens[1].inverse()) == Approx(7.0).margin(1e-9));
    CHECK(validate_schottky(H).all_pass());
}

TEST_CASE("presets validate with healthy margins", "[group]") {
    for (const SchottkyGroup& G :
         {build_cylinder(2.0), build_funnel3(6.0, 6.0, 6.0), build_funnel3(8.0, 8.0, 8.0)}) {
        const ValidationReport rep = validate_schottky(G);
        REQUIRE(rep.all_pass());
        for (const CheckResult& c : rep.checks) CHECK(c.margin > 1e-9);
    }
}

TEST_CASE("infeasible funnel3 rejected", "[group]") {
    CHECK_THROWS_AS(build_funnel3(0.1, 0.1, 0.1), GeometryError);
    CHECK_THROWS_AS(build_funnel3(-1.0, 6.0, 6.0), InputError);
}

TEST_CASE("forced violations are detected", "[group]") {
    SchottkyGroup G = build_funnel3(6.0, 6.0, 6.0);

    SECTION("overlapping disks") {
        SchottkyGroup bad = G;
        bad.disks[1].radius = 10.0;  // swallows its neighbours
        const ValidationReport rep = validate_schottky(bad);
        CHECK_FALSE(rep.all_pass());
        CHECK_FALSE(rep.find("disks-disjoint")->pass);
    }

    SECTION("generator not inverse of its mirror") {
        SchottkyGroup bad = G;
        bad.gens[2] = bad.gens[0];  // gamma_bar(0) should be gamma_0^{-1}
        const ValidationReport rep = validate_schottky(bad);
        CHECK_FALSE(rep.all_pass());
        CHECK_FALSE(rep.find("generator-inverse")->pass);
    }

    SECTION("miscentered disk breaks boundary mapping") {
        SchottkyGroup bad = G;
        bad.disks[0].center += 0.05;
        const ValidationReport rep = validate_schottky(bad);
        CHECK_FALSE(rep.find("boundary-mapping")->pass);
    }
}

TEST_CASE("disk_image is the exact circle image", "[group]") {
    const SchottkyGroup G = build_funnel3(6.0, 6.0, 6.0);
    // off-axis boundary points of an admissible source land on the image circle
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (b == G.bar(a)) continue;  // pole of gamma_a lives in D_bar(a)
            const Disk& src = G.disks[static_cast<std::size_t>(b)];
            const Disk img = disk_image(G.gens[static_cast<std::size_t>(a)], src);
            for (double th : {0.3, 1.1, 2.0, 4.4}) {
                const Complex z(src.center + src.radius * std::cos(th),
                                src.radius * std::sin(th));
                const Complex w = mobius_apply(G.gens[static_cast<std::size_t>(a)], z);
                CHECK(std::abs(w - Complex(img.center, 0.0)) ==
                      Approx(img.radius).epsilon(1e-10));
            }
        }
    }
    // pole inside the disk is rejected
    const Mobius g(1.0, 1.0, 1.0, 2.0);  // pole at -2
    CHECK_THROWS_AS(disk_image(g, Disk{-2.0, 0.5}), GeometryError);
}

TEST_CASE("attracting fixed point of closed words lies in first-letter disk", "[group]") {
    const SchottkyGroup G = build_funnel3(6.0, 6.0, 6.0);
    for (int n = 1; n <= 4; ++n) {
        for (const Word& w : enumerate_words(G, n)) {
            if (!arrow(G, w, w.front())) continue;  // cyclically reduced only
            const Mobius g = word_matrix(G, w);
            const FixedPoints fp = fixed_points(g);
            REQUIRE(!std::isinf(fp.attracting));
            CHECK(G.disks[static_cast<std::size_t>(w.front())].contains(
                Complex(fp.attracting, 0.0)));
        }
    }
}
