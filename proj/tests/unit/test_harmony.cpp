#include "doctest.h"
#include "helpers.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/harmony.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

using namespace dyncolor;

namespace {

const HueTemplate kNarrow{"narrow", {{0.0, 18.0}}, false};

double grid_difference(std::span<const double> hues, const HueTemplate& t, double step = 0.1) {
    double best = INFINITY;
    for (int k = 0; k * step < 360.0; ++k) {
        double s = 0.0;
        for (double h : hues) s += sector_distance(h, t, k * step);
        best = std::min(best, s);
    }
    return best;
}

} // namespace

TEST_CASE("hue difference examples") {
    const std::vector<double> inside{2.0, -5.0 + 360.0, 8.0};
    CHECK(hue_difference(inside, kNarrow).difference == 0.0);
    const std::vector<double> single{123.4};
    CHECK(hue_difference(single, kNarrow).difference == 0.0);
    const std::vector<double> opposite{0.0, 180.0};
    CHECK(hue_difference(opposite, kNarrow).difference == doctest::Approx(162.0));
    const std::vector<double> none{};
    CHECK(hue_difference(none, kNarrow).difference == 0.0);
}

TEST_CASE("the reported rotation attains the reported difference") {
    Rng rng(17);
    for (const auto& t : matsuda_templates()) {
        if (t.achromatic) continue;
        for (int k = 0; k < 50; ++k) {
            std::vector<double> hues;
            for (int i = 0; i < 7; ++i) hues.push_back(rng.uniform(0, 360));
            const auto fit = hue_difference(hues, t);
            double s = 0.0;
            for (double h : hues) s += sector_distance(h, t, fit.rotation);
            CHECK(s == doctest::Approx(fit.difference).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("exact hue difference never exceeds a fine rotation grid") {
    Rng rng(23);
    for (const auto& t : matsuda_templates()) {
        if (t.achromatic) continue;
        for (int k = 0; k < 10; ++k) {
            const std::size_t m = 2 + rng.below(8);
            std::vector<double> hues;
            for (std::size_t i = 0; i < m; ++i) hues.push_back(rng.uniform(0, 360));
            const double exact = hue_difference(hues, t).difference;
            const double grid = grid_difference(hues, t);
            CHECK(exact <= grid + 1e-9);
            CHECK(grid - exact < 0.1 * static_cast<double>(m));
        }
    }
}

TEST_CASE("hue harmony of a palette fitting a template is 1") {
    const std::vector<double> hues{40.0, 220.0, 45.0};
    const std::vector<double> chromas{50.0, 50.0, 50.0};
    CHECK(hue_harmony(hues, chromas, matsuda_templates()) == 1.0);
    const std::vector<double> spread{0.0, 60.0, 120.0, 180.0, 240.0, 300.0};
    const std::vector<double> c6(6, 50.0);
    CHECK(hue_harmony(spread, c6, matsuda_templates()) < 1.0);
    const std::vector<double> grey{0.0, 90.0, 180.0, 270.0};
    const std::vector<double> low(4, 2.0);
    CHECK(hue_harmony(grey, low, matsuda_templates()) == 1.0);
}

TEST_CASE("hue harmony stays in [0, 1]") {
    Rng rng(2);
    for (int k = 0; k < 200; ++k) {
        const auto p = testing::random_palette(rng, 2 + rng.below(12));
        const double h = hue_harmony(p, matsuda_templates());
        CHECK(h >= 0.0);
        CHECK(h <= 1.0);
    }
}

TEST_CASE("containment pruning keeps the template minimum") {
    const auto& all = matsuda_templates();
    auto find = [&](const std::string& n) {
        return *std::find_if(all.begin(), all.end(), [&](const HueTemplate& t) { return t.name == n; });
    };
    CHECK(template_contains(find("V"), find("i")));
    CHECK(template_contains(find("T"), find("V")));
    CHECK(template_contains(find("X"), find("I")));
    CHECK_FALSE(template_contains(find("i"), find("V")));

    Rng rng(31);
    for (int k = 0; k < 300; ++k) {
        const std::size_t m = 1 + rng.below(10);
        std::vector<double> hues, chromas;
        for (std::size_t i = 0; i < m; ++i) {
            hues.push_back(rng.uniform(0, 360));
            chromas.push_back(rng.uniform(0, 80));
        }
        double best = INFINITY;
        bool grey = std::all_of(chromas.begin(), chromas.end(), [](double c) { return c < kAchromaticChroma; });
        for (const auto& t : all) {
            if (t.achromatic) {
                if (grey) best = 0.0;
                continue;
            }
            best = std::min(best, hue_difference(hues, t).difference);
        }
        const double expected = std::clamp(1.0 - best / (static_cast<double>(m) * 90.0), 0.0, 1.0);
        CHECK(hue_harmony(hues, chromas, all) == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("incremental tracker matches the direct harmony bit for bit") {
    Rng rng(41);
    for (int run = 0; run < 20; ++run) {
        const std::size_t m = 2 + rng.below(20);
        std::vector<double> hues, chromas;
        for (std::size_t i = 0; i < m; ++i) {
            hues.push_back(rng.uniform(0, 360));
            chromas.push_back(rng.uniform(0, 80));
        }
        HueHarmonyTracker tracker(matsuda_templates(), hues);
        for (int step = 0; step < 200; ++step) {
            const std::size_t i = rng.below(m);
            const double h = rng.below(10) == 0 ? hues[rng.below(m)] : rng.uniform(0, 360);
            tracker.replace(hues[i], h);
            hues[i] = h;
            REQUIRE(tracker.harmony(hues, chromas) == hue_harmony(hues, chromas, matsuda_templates()));
        }
        HueHarmonyTracker copy = tracker;
        CHECK(copy.harmony(hues, chromas) == tracker.harmony(hues, chromas));
    }
}

TEST_CASE("CL harmony examples") {
    const std::vector<LchColor> line{{40, 20, 10}, {50, 40, 200}, {60, 60, 300}, {70, 80, 30}};
    CHECK(cl_harmony(line).e_lc == doctest::Approx(1.0));
    const std::vector<LchColor> two{{20, 10, 0}, {90, 80, 0}};
    CHECK(cl_harmony(two).e_lc == 1.0);

    // (C, L) points: four on L = 55 and one at (55, 80). The fitted line is
    // L = 60, so the deviations are 5, 5, 5, 5, 20 and only the last exceeds 15.
    const std::vector<LchColor> pts{{55, 30, 0}, {55, 45, 0}, {55, 65, 0}, {55, 80, 0}, {80, 55, 0}};
    const auto h = cl_harmony(pts);
    CHECK(h.line.center_l == doctest::Approx(60.0));
    CHECK(h.line.slope() == doctest::Approx(0.0).scale(1.0));
    CHECK(h.line.deviations[4] == doctest::Approx(20.0));
    const double penalty = (1.0 - h.e_lc) * 5.0 * kClFloorPerColor;
    CHECK(penalty == doctest::Approx(5.0));
}

TEST_CASE("vertical CL lines need no special case") {
    const std::vector<LchColor> v{{30, 50, 0}, {50, 50, 0}, {70, 50, 0}};
    const auto line = fit_cl_line(v);
    CHECK(line.vertical());
    for (double d : line.deviations) CHECK(d == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("TLS deviations agree with an eigen decomposition") {
    Rng rng(53);
    for (int run = 0; run < 100; ++run) {
        const std::size_t m = 3 + rng.below(10);
        std::vector<LchColor> colors;
        for (std::size_t i = 0; i < m; ++i) colors.push_back({rng.uniform(20, 95), rng.uniform(0, 100), 0});
        Eigen::MatrixXd pts(static_cast<Eigen::Index>(m), 2);
        for (std::size_t i = 0; i < m; ++i) {
            pts(static_cast<Eigen::Index>(i), 0) = colors[i].C;
            pts(static_cast<Eigen::Index>(i), 1) = colors[i].L;
        }
        const Eigen::RowVector2d mean = pts.colwise().mean();
        const Eigen::MatrixXd centered = pts.rowwise() - mean;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(centered.transpose() * centered);
        const Eigen::Vector2d normal = es.eigenvectors().col(0); // smallest eigenvalue
        const auto line = fit_cl_line(colors);
        for (std::size_t i = 0; i < m; ++i) {
            const double dev = std::abs(centered.row(static_cast<Eigen::Index>(i)).dot(normal));
            CHECK(line.deviations[i] == doctest::Approx(dev).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("pair harmony scorers") {
    const OuPairHarmony ou;
    const NullPairHarmony null;
    Rng rng(61);
    for (int k = 0; k < 500; ++k) {
        const auto x = testing::random_color(rng);
        const auto y = testing::random_color(rng);
        CHECK(ou.score(x, y) == doctest::Approx(ou.score(y, x)).epsilon(1e-12));
        CHECK(null.score(x, y) == 0.0);
        CHECK(pair_harmony(x, y, null) == 0.0);
    }
    const LchColor a{55, 30, 40};
    const LchColor b{60, 35, 220};
    const LchColor b_extreme{60, 130, 220};
    CHECK(ou.score(a, b) >= ou.score(a, b_extreme));
}

TEST_CASE("pair harmony configuration") {
    CHECK(pair_harmony_from_json({{"scorer", "null"}})->name() == "null");
    const auto ou = pair_harmony_from_json({{"scorer", "ou"}});
    CHECK(ou->name() == "ou");
    CHECK_THROWS_AS(pair_harmony_from_json({{"scorer", "nope"}}), ConfigError);
    const auto loaded = load_pair_harmony(testing::data("harmony/ou_two_color.json"));
    const LchColor x{50, 40, 10}, y{70, 20, 150};
    CHECK(loaded->score(x, y) == ou->score(x, y));
    const auto k = OuHarmonyCoefficients::from_json(OuHarmonyCoefficients{}.to_json());
    CHECK(k.hc_gain == OuHarmonyCoefficients{}.hc_gain);
}
