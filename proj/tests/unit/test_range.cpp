#include "doctest.h"
#include "helpers.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/range.hpp"

using namespace dyncolor;

TEST_CASE("default range examples") {
    const auto r = default_range();
    // Lch(60, 60, 200) passes the box and the disliked-zone test but lies
    // outside sRGB, and membership also requires the gamut.
    const LchColor cyan{60, 60, 200};
    const auto& box = r.box();
    CHECK((cyan.L >= box.l_lo && cyan.L <= box.l_hi && cyan.C >= box.c_lo && cyan.C <= box.c_hi));
    CHECK_FALSE(r.exclusion()->excludes(cyan));
    CHECK_FALSE(in_gamut(cyan));
    CHECK_FALSE(r.contains(cyan));
    CHECK(r.contains(LchColor{60, 45, 200 - 50}));
    CHECK_FALSE(r.contains(LchColor{60, 60, 100}));
    CHECK(r.contains(LchColor{80, 60, 100}));
    CHECK_FALSE(r.contains(LchColor{30, 60, 200}));
    CHECK_FALSE(r.contains(LchColor{60, 90, 200}));
    CHECK(contains(r, LchColor{60, 45, 150}));
}

TEST_CASE("out of gamut colors are never contained") {
    const auto r = FeasibleRange::make_box(LcBox{0, 100, 0, 200}, std::nullopt);
    CHECK_FALSE(r.contains(LchColor{50, 150, 30}));
    CHECK(r.contains(LchColor{50, 20, 30}));
}

TEST_CASE("hue intervals") {
    const HueInterval wrap{350, 20};
    CHECK(wrap.contains(5));
    CHECK(wrap.contains(335));
    CHECK_FALSE(wrap.contains(320));
    CHECK(wrap.lo() == doctest::Approx(330));
    CHECK(wrap.hi() == doctest::Approx(10));
    CHECK(wrap.length() == 40);
    const HueInterval full{};
    CHECK(full.contains(123));
    CHECK(full.length() == 360);
}

TEST_CASE("sphere containment") {
    const LchColor c{65, 40, 250};
    const auto s = FeasibleRange::make_sphere(to_lab(c), 8.0, HueInterval{250, 40});
    CHECK(s.contains(c));
    CHECK_THROWS_AS(FeasibleRange::make_sphere(to_lab(c), -1.0, HueInterval{}), ArgumentError);

    // A point radius + 1 away along L.
    double lo = 0.0, hi = 30.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ciede2000(c, LchColor{c.L + mid, c.C, c.h}) < 9.0 ? lo : hi) = mid;
    }
    CHECK_FALSE(s.contains(LchColor{c.L + hi, c.C, c.h}));

    Rng rng(9);
    const auto box = default_range();
    for (int k = 0; k < 20000; ++k) {
        const LchColor x{rng.uniform(30, 95), rng.uniform(20, 100), rng.uniform(0, 360)};
        const bool naive = in_gamut(x) && box.contains(x) && ciede2000(to_lab(c), to_lab(x)) <= 8.0 &&
                           hue_distance(x.h, 250) <= 40;
        REQUIRE(s.contains(x) == naive);
    }
}

TEST_CASE("range sampling stays inside") {
    Rng rng(4);
    const auto s = FeasibleRange::make_sphere(to_lab(LchColor{65, 40, 250}), 12.0, HueInterval{250, 30});
    const auto box = default_range();
    for (int k = 0; k < 500; ++k) {
        const auto x = s.sample(rng);
        REQUIRE(x);
        CHECK(s.contains(*x));
        const auto y = box.sample(rng);
        REQUIRE(y);
        CHECK(box.contains(*y));
    }
    const auto empty = FeasibleRange::make_sphere(to_lab(LchColor{20, 5, 0}), 0.0, HueInterval{});
    CHECK_FALSE(empty.sample(rng, 10));
}

TEST_CASE("range JSON round trip") {
    const auto s = FeasibleRange::make_sphere(to_lab(LchColor{65, 40, 250}), 12.0, HueInterval{250, 30});
    CHECK(FeasibleRange::from_json(s.to_json()) == s);
    const auto b = default_range();
    CHECK(FeasibleRange::from_json(b.to_json()) == b);
    const auto n = narrowed_range();
    CHECK(n.box().l_lo == 45.0);
    CHECK(n.box().c_hi == 80.0);
}

TEST_CASE("range sets") {
    const auto set = FeasibleRangeSet::uniform({"a", "b"}, default_range());
    CHECK(set.size() == 2);
    CHECK(set.of("b") == default_range());
    CHECK_THROWS_AS(set.of("c"), NotFoundError);
}
