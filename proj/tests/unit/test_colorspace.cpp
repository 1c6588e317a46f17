#include "doctest.h"
#include "helpers.hpp"

#include "dyncolor/colorspace.hpp"
#include "dyncolor/errors.hpp"

#include <array>
#include <cmath>

using namespace dyncolor;

namespace {

struct ReferencePair {
    LabColor x, y;
    double expected;
};

// The 34 published CIEDE2000 test pairs (kL = kC = kH = 1).
const std::array<ReferencePair, 34> kPairs = {{
    {{50, 2.6772, -79.7751}, {50, 0, -82.7485}, 2.0425},
    {{50, 3.1571, -77.2803}, {50, 0, -82.7485}, 2.8615},
    {{50, 2.8361, -74.0200}, {50, 0, -82.7485}, 3.4412},
    {{50, -1.3802, -84.2814}, {50, 0, -82.7485}, 1.0000},
    {{50, -1.1848, -84.8006}, {50, 0, -82.7485}, 1.0000},
    {{50, -0.9009, -85.5211}, {50, 0, -82.7485}, 1.0000},
    {{50, 0, 0}, {50, -1, 2}, 2.3669},
    {{50, -1, 2}, {50, 0, 0}, 2.3669},
    {{50, 2.4900, -0.0010}, {50, -2.4900, 0.0009}, 7.1792},
    {{50, 2.4900, -0.0010}, {50, -2.4900, 0.0010}, 7.1792},
    {{50, 2.4900, -0.0010}, {50, -2.4900, 0.0011}, 7.2195},
    {{50, 2.4900, -0.0010}, {50, -2.4900, 0.0012}, 7.2195},
    {{50, -0.0010, 2.4900}, {50, 0.0009, -2.4900}, 4.8045},
    {{50, -0.0010, 2.4900}, {50, 0.0010, -2.4900}, 4.8045},
    {{50, -0.0010, 2.4900}, {50, 0.0011, -2.4900}, 4.7461},
    {{50, 2.5000, 0}, {50, 0, -2.5}, 4.3065},
    {{50, 2.5000, 0}, {73, 25, -18}, 27.1492},
    {{50, 2.5000, 0}, {61, -5, 29}, 22.8977},
    {{50, 2.5000, 0}, {56, -27, -3}, 31.9030},
    {{50, 2.5000, 0}, {58, 24, 15}, 19.4535},
    {{50, 2.5000, 0}, {50, 3.1736, 0.5854}, 1.0000},
    {{50, 2.5000, 0}, {50, 3.2972, 0}, 1.0000},
    {{50, 2.5000, 0}, {50, 1.8634, 0.5757}, 1.0000},
    {{50, 2.5000, 0}, {50, 3.2592, 0.3350}, 1.0000},
    {{60.2574, -34.0099, 36.2677}, {60.4626, -34.1751, 39.4387}, 1.2644},
    {{63.0109, -31.0961, -5.8663}, {62.8187, -29.7946, -4.0864}, 1.2630},
    {{61.2901, 3.7196, -5.3901}, {61.4294, 2.2480, -4.9620}, 1.8731},
    {{35.0831, -44.1164, 3.7933}, {35.0232, -40.0716, 1.5901}, 1.8645},
    {{22.7233, 20.0904, -46.6940}, {23.0331, 14.9730, -42.5619}, 2.0373},
    {{36.4612, 47.8580, 18.3852}, {36.2715, 50.5065, 21.2231}, 1.4146},
    {{90.8027, -2.0831, 1.4410}, {91.1528, -1.6435, 0.0447}, 1.4441},
    {{90.9257, -0.5406, -0.9208}, {88.6381, -0.8985, -0.7239}, 1.5381},
    {{6.7747, -0.2908, -2.4247}, {5.8714, -0.0985, -2.2286}, 0.6377},
    {{2.0776, 0.0795, -1.1350}, {0.9033, -0.0636, -0.5514}, 0.9082},
}};

} // namespace

TEST_CASE("ciede2000 matches the published reference pairs") {
    for (std::size_t i = 0; i < kPairs.size(); ++i) {
        CAPTURE(i);
        CHECK(std::abs(ciede2000(kPairs[i].x, kPairs[i].y) - kPairs[i].expected) < 1e-4);
    }
}

TEST_CASE("ciede2000 is symmetric and zero only on identical inputs") {
    Rng rng(11);
    for (int k = 0; k < 2000; ++k) {
        const LabColor x = to_lab(testing::random_color(rng));
        const LabColor y = to_lab(testing::random_color(rng));
        CHECK(ciede2000(x, y) == ciede2000(y, x));
        CHECK(ciede2000(x, x) == 0.0);
        if (!(x == y)) CHECK(ciede2000(x, y) > 0.0);
    }
}

TEST_CASE("conversion examples") {
    const auto lch = to_lch(LabColor{50, 0, 0});
    CHECK(lch.L == 50.0);
    CHECK(lch.C == 0.0);
    CHECK(lch.h == 0.0);

    const auto white = to_lab(RgbColor{1, 1, 1});
    CHECK(std::abs(white.L - 100.0) < 1e-3);
    CHECK(std::abs(white.a) < 1e-3);
    CHECK(std::abs(white.b) < 1e-3);

    const auto lab = to_lab(LchColor{50, 40, 90});
    CHECK(std::abs(lab.L - 50.0) < 1e-9);
    CHECK(std::abs(lab.a) < 1e-9);
    CHECK(std::abs(lab.b - 40.0) < 1e-9);

    const auto any = convert(AnyColor{LabColor{50, 0, 0}}, Space::lch);
    CHECK(std::get<LchColor>(any).L == 50.0);
}

TEST_CASE("gamut examples") {
    CHECK(in_gamut(LabColor{100, 0, 0}));
    CHECK(in_gamut(LabColor{0, 0, 0}));
    CHECK_FALSE(in_gamut(LabColor{50, 200, 0}));
    const auto rgb = to_rgb(LabColor{50, 200, 0});
    CHECK(std::max({rgb.r, rgb.g, rgb.b}) > 1.0);
}

TEST_CASE("round trips stay below 1e-6 per channel") {
    Rng rng(5);
    double worst_lab = 0.0, worst_rgb = 0.0, worst_hsv = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const RgbColor rgb{rng.uniform(), rng.uniform(), rng.uniform()};
        const LabColor lab = to_lab(rgb);
        const RgbColor back = to_rgb(lab);
        worst_rgb = std::max({worst_rgb, std::abs(back.r - rgb.r), std::abs(back.g - rgb.g), std::abs(back.b - rgb.b)});
        const LabColor lab2 = to_lab(to_lch(lab));
        worst_lab = std::max({worst_lab, std::abs(lab2.L - lab.L), std::abs(lab2.a - lab.a), std::abs(lab2.b - lab.b)});
        const RgbColor via_hsv = to_rgb(to_hsv(rgb));
        worst_hsv = std::max(
            {worst_hsv, std::abs(via_hsv.r - rgb.r), std::abs(via_hsv.g - rgb.g), std::abs(via_hsv.b - rgb.b)});
    }
    CHECK(worst_rgb < 1e-6);
    CHECK(worst_lab < 1e-6);
    CHECK(worst_hsv < 1e-6);
}

TEST_CASE("hue helpers") {
    CHECK(normalize_hue(-30.0) == doctest::Approx(330.0));
    CHECK(normalize_hue(720.0) == 0.0);
    CHECK(hue_distance(350.0, 10.0) == doctest::Approx(20.0));
    CHECK(hue_distance(0.0, 180.0) == doctest::Approx(180.0));
}

TEST_CASE("hex encoding") {
    CHECK(to_hex(RgbColor{1, 0, 0}) == "#FF0000");
    CHECK(to_hex(RgbColor{0, 0, 0}) == "#000000");
    const auto rgb = from_hex("#336699");
    CHECK(to_hex(rgb) == "#336699");
    CHECK_THROWS(from_hex("336699x"));
}

TEST_CASE("gamut projection keeps L and h") {
    const LchColor out{60, 150, 200};
    const auto p = project_to_gamut(out);
    CHECK(in_gamut(p, 1e-6));
    CHECK(p.L == doctest::Approx(60));
    CHECK(p.h == doctest::Approx(200));
    CHECK(p.C < 150);
    const LchColor inside{60, 20, 200};
    CHECK(project_to_gamut(inside) == inside);
}

TEST_CASE("hsv hue of primaries") {
    CHECK(hsv_hue(to_lch(to_lab(RgbColor{1, 0, 0}))) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(hsv_hue(to_lch(to_lab(RgbColor{0, 1, 0}))) == doctest::Approx(120.0).epsilon(1e-6));
    CHECK(hsv_hue(to_lch(to_lab(RgbColor{0, 0, 1}))) == doctest::Approx(240.0).epsilon(1e-6));
}
