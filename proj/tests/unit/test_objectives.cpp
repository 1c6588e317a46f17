#include "doctest.h"
#include "helpers.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/objectives.hpp"

#include <algorithm>
#include <cmath>

using namespace dyncolor;

namespace {

/// Gray partner of Lab(50, 0, 0) at exactly `target` CIEDE2000 (bisection on L).
LchColor gray_at(double target) {
    double lo = 0.0, hi = 50.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ciede2000(LabColor{50, 0, 0}, LabColor{50 + mid, 0, 0}) < target ? lo : hi) = mid;
    }
    return {50 + 0.5 * (lo + hi), 0, 0};
}

Sample at(double x, double y, const std::string& label, std::vector<double> features = {}) {
    return Sample{"", {x, y}, label, std::move(features)};
}

double naive_spatial(const Palette& p, const SpatialLayout& l, SpatialMode mode, const PairHarmonyScorer& scorer,
                     const ClassSimilarity* sim) {
    const double n = static_cast<double>(l.samples.size());
    double total = 0.0;
    for (std::size_t i = 0; i < l.samples.size(); ++i) {
        const auto& nb = l.neighbors[i];
        for (const auto& e : nb) {
            const std::size_t a = p.index_of(l.samples[i].label), b = p.index_of(l.samples[e.index].label);
            const LchColor& x = p.color(a);
            const LchColor& y = p.color(b);
            const double d = ciede2000(x, y);
            double f = 0.0;
            if (mode == SpatialMode::difference) {
                f = d + scorer.score(x, y);
            } else {
                const std::size_t sa = static_cast<std::size_t>(
                    std::find(sim->classes.begin(), sim->classes.end(), p.class_id(a)) - sim->classes.begin());
                const std::size_t sb = static_cast<std::size_t>(
                    std::find(sim->classes.begin(), sim->classes.end(), p.class_id(b)) - sim->classes.begin());
                f = -sim->at(sa, sb) * d + scorer.score(x, y);
            }
            total += f / (n * static_cast<double>(nb.size()) * e.distance);
        }
    }
    return total;
}

SpatialLayout random_layout(Rng& rng, std::size_t n, std::size_t classes, bool features) {
    SpatialLayout l;
    l.kind = LayoutKind::scatter;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> f;
        if (features)
            for (int k = 0; k < 4; ++k) f.push_back(rng.uniform());
        l.samples.push_back(at(rng.uniform(0, 20), rng.uniform(0, 20), "c" + std::to_string(rng.below(classes)), f));
    }
    // make sure every class has at least one sample
    for (std::size_t c = 0; c < classes; ++c) l.samples[c].label = "c" + std::to_string(c);
    return build_neighbor_graph(l);
}

} // namespace

TEST_CASE("perceptual difference score") {
    const LchColor x{60, 40, 30};
    const std::vector<LchColor> same{x, x};
    CHECK(perceptual_difference_score(same) == -10.0);
    const std::vector<LchColor> far{{50, 0, 0}, gray_at(25.0)};
    CHECK(perceptual_difference_score(far) == doctest::Approx(25.0));
    const std::vector<LchColor> near{{50, 0, 0}, gray_at(4.0)};
    CHECK(perceptual_difference_score(near) == doctest::Approx(-2.0));

    Rng rng(12);
    const auto p = testing::random_palette(rng, 4);
    double lo = INFINITY;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) lo = std::min(lo, ciede2000(p.color(i), p.color(j)));
    CHECK(perceptual_difference_score(p) == (lo >= 10 ? lo : 2 * lo - 10));
    const std::vector<LchColor> one{x};
    CHECK_THROWS_AS(perceptual_difference_score(one), ArgumentError);
}

TEST_CASE("discriminability combines the two terms") {
    // Two bins on the gray axis 20 units apart; their name vectors have cosine 0.1.
    const LchColor x{50, 0, 0};
    const LchColor y = gray_at(20.0);
    const NameModel m({"a", "b"}, {to_lab(x), to_lab(y)}, {1.0, 0.0, 0.1, std::sqrt(0.99)});
    const Palette p({"x", "y"}, {x, y});
    CHECK(discriminability(p, m) == doctest::Approx(3.8));
    const Palette same({"x", "y"}, {x, x});
    CHECK(discriminability(same, m) == doctest::Approx(-1.0));
}

TEST_CASE("spatial score examples") {
    const NullPairHarmony null;
    SpatialLayout one_class;
    for (int i = 0; i < 5; ++i) one_class.samples.push_back(at(i, 0, "a"));
    one_class = build_neighbor_graph(one_class);
    const Palette single({"a"}, {LchColor{60, 40, 10}});
    CHECK(spatial_score(single, one_class, SpatialMode::difference, null) == 0.0);

    SpatialLayout pair;
    pair.samples.push_back(at(0, 0, "a"));
    pair.samples.push_back(at(2, 0, "b"));
    pair = build_neighbor_graph(pair);
    const Palette two({"a", "b"}, {LchColor{50, 0, 0}, gray_at(10.0)});
    CHECK(spatial_score(two, pair, SpatialMode::difference, null) == doctest::Approx(5.0));

    pair.samples[0].features = {1, 0};
    pair.samples[1].features = {0, 1};
    const auto sim = class_similarity(pair, {"a", "b"});
    CHECK(spatial_score(two, pair, SpatialMode::similarity, null, &sim) == 0.0);
    CHECK_THROWS_AS(spatial_score(two, pair, SpatialMode::similarity, null), ConfigError);
}

TEST_CASE("spatial score agrees with a per-sample loop") {
    Rng rng(77);
    const OuPairHarmony ou;
    const NullPairHarmony null;
    for (int run = 0; run < 20; ++run) {
        const std::size_t classes = 2 + rng.below(6);
        const auto l = random_layout(rng, 40, classes, true);
        const auto p = testing::random_palette(rng, classes);
        const auto sim = class_similarity(l, p.classes());
        for (const PairHarmonyScorer* s : {static_cast<const PairHarmonyScorer*>(&ou), static_cast<const PairHarmonyScorer*>(&null)}) {
            CHECK(std::abs(spatial_score(p, l, SpatialMode::difference, *s) -
                           naive_spatial(p, l, SpatialMode::difference, *s, nullptr)) < 1e-9);
            CHECK(std::abs(spatial_score(p, l, SpatialMode::similarity, *s, &sim) -
                           naive_spatial(p, l, SpatialMode::similarity, *s, &sim)) < 1e-9);
        }
    }
}

TEST_CASE("total objective") {
    Rng rng(5);
    ObjectiveContext ctx;
    ctx.names = testing::names();
    const auto p = testing::random_palette(rng, 5);
    const auto zero = total_objective(p, ctx, 0.0, 0.0);
    CHECK(zero.value == zero.breakdown.e_d);
    CHECK(zero.breakdown.e_d == doctest::Approx(0.1 * zero.breakdown.e_pd + 2.0 * zero.breakdown.e_nd));
    CHECK(zero.breakdown.e_h == zero.breakdown.e_hue + zero.breakdown.e_lc);
    CHECK(zero.breakdown.e_sd == 0.0);

    ctx.layout = std::make_shared<const SpatialLayout>(random_layout(rng, 30, 5, false));
    const auto full = total_objective(p, ctx, 1.0, 1.0);
    const auto& b = full.breakdown;
    CHECK(full.value == doctest::Approx(b.e_d + b.e_h + b.e_sd));
    CHECK(b.e_sd > 0.0);
    const auto weighted = total_objective(p, ctx, 0.5, 2.0);
    CHECK(weighted.value == doctest::Approx(b.e_d + 0.5 * b.e_h + 2.0 * b.e_sd));

    const Palette one({"c0"}, {LchColor{60, 50, 20}});
    ObjectiveContext flat;
    flat.names = testing::names();
    const auto v1 = total_objective(one, flat, 1.0, 1.0);
    CHECK(v1.breakdown.e_pd == 0.0);
    CHECK(v1.breakdown.e_nd == 0.0);

    ObjectiveContext no_names;
    CHECK_THROWS_AS(total_objective(p, no_names, 1, 1), ConfigError);
}

TEST_CASE("normalization and the priority chain") {
    ObjectiveBreakdown b;
    b.e_d = 6.0;
    b.e_h = 1.0;
    b.e_sd = 3.0;
    NormalizationBounds n;
    n.has_sd = true;
    n.sd_hi = 10.0;
    normalize(b, n);
    CHECK(b.normalized_d == doctest::Approx(0.5));
    CHECK(b.normalized_h == doctest::Approx(0.5));
    CHECK(b.normalized_sd == doctest::Approx(0.3));
    CHECK(priority_holds(b));
    b.e_sd = 8.0;
    normalize(b, n);
    CHECK_FALSE(priority_holds(b));
    n.has_sd = false;
    normalize(b, n);
    CHECK(b.normalized_sd == 0.0);
    CHECK(NormalizationBounds::progress(3.0, 3.0, 3.0) == 1.0);
    CHECK(NormalizationBounds::from_json(n.to_json()).d_hi == n.d_hi);
    CHECK(ObjectiveBreakdown::from_json(b.to_json()).e_sd == b.e_sd);
}

TEST_CASE("incremental objective tracks the direct evaluation") {
    Rng rng(99);
    for (int run = 0; run < 12; ++run) {
        const std::size_t m = 2 + rng.below(9);
        ObjectiveContext ctx;
        ctx.names = testing::names();
        ctx.pair_harmony = std::make_shared<OuPairHarmony>();
        if (run % 3 != 0) {
            auto layout = random_layout(rng, 60, m, true);
            ctx.similarity = std::make_shared<const ClassSimilarity>(class_similarity(layout, testing::ids(m)));
            ctx.layout = std::make_shared<const SpatialLayout>(std::move(layout));
            ctx.mode = run % 3 == 1 ? SpatialMode::difference : SpatialMode::similarity;
        }
        auto p = testing::random_palette(rng, m);
        IncrementalObjective inc(ctx, p);
        for (int step = 0; step < 150; ++step) {
            const auto kind = rng.below(3);
            if (kind == 0 && m >= 2) {
                const std::size_t i = rng.below(m), j = rng.below(m);
                inc.swap(i, j);
                p.swap_colors(i, j);
            } else {
                const std::size_t i = rng.below(m);
                const auto c = testing::random_color(rng);
                inc.set_color(i, c);
                p.set_color(i, c);
            }
            if (rng.below(4) == 0) {
                inc.undo();
                p = inc.palette();
            }
            REQUIRE(inc.palette() == p);
            const auto direct = total_objective(p, ctx, 1.0, 1.0).breakdown;
            const auto fast = inc.terms();
            CHECK(std::abs(fast.e_pd - direct.e_pd) < 1e-9);
            CHECK(std::abs(fast.e_nd - direct.e_nd) < 1e-9);
            CHECK(std::abs(fast.e_hue - direct.e_hue) < 1e-9);
            CHECK(std::abs(fast.e_lc - direct.e_lc) < 1e-9);
            CHECK(std::abs(fast.e_sd - direct.e_sd) < 1e-9);
        }
    }
}

TEST_CASE("spatial mode names") {
    CHECK(spatial_mode_from_string("similarity") == SpatialMode::similarity);
    CHECK(to_string(SpatialMode::difference) == "difference");
    CHECK_THROWS_AS(spatial_mode_from_string("both"), ArgumentError);
}
