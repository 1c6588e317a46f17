#include "doctest.h"
#include "helpers.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>

using namespace dyncolor;

namespace {

double textbook_silhouette(const std::vector<LchColor>& x, const std::vector<int>& g) {
    const std::size_t n = x.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double own_sum = 0.0;
        int own_n = 0;
        std::map<int, std::pair<double, int>> other;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = ciede2000(to_lab(x[i]), to_lab(x[j]));
            if (g[j] == g[i]) {
                own_sum += d;
                ++own_n;
            } else {
                other[g[j]].first += d;
                other[g[j]].second += 1;
            }
        }
        if (own_n == 0) continue;
        const double a = own_sum / own_n;
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [k, v] : other) b = std::min(b, v.first / v.second);
        if (std::max(a, b) > 0) total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

} // namespace

TEST_CASE("bhdi") {
    CHECK(bhdi(0, 0, 0, 0) == 0.0);
    CHECK(bhdi(10, 0.5, 0.5, 0.5) == doctest::Approx(3.0));
    CHECK(bhdi(23.194, 0.921, 0.876, 0.955) == doctest::Approx(5.992).epsilon(1e-3));
}

TEST_CASE("silhouette") {
    const Palette tight({"a1", "a2", "b1", "b2"},
                        {LchColor{40, 50, 30}, LchColor{41, 50, 31}, LchColor{80, 50, 220}, LchColor{81, 50, 221}});
    const ParentMap pm{{"a1", "A"}, {"a2", "A"}, {"b1", "B"}, {"b2", "B"}};
    CHECK(silhouette(tight, pm) > 0.8);

    const LchColor same{60, 40, 100};
    const Palette flat({"a1", "a2", "b1", "b2"}, {same, same, same, same});
    CHECK(silhouette(flat, pm) == 0.0);

    const ParentMap one_group{{"a1", "A"}, {"a2", "A"}, {"b1", "A"}, {"b2", "A"}};
    CHECK_THROWS_AS(silhouette(tight, one_group), ArgumentError);
    const ParentMap missing{{"a1", "A"}};
    CHECK_THROWS_AS(silhouette(tight, missing), ArgumentError);

    Rng rng(13);
    for (int run = 0; run < 50; ++run) {
        const std::size_t n = 3 + rng.below(12);
        std::vector<LchColor> colors;
        std::vector<int> groups;
        ParentMap map;
        for (std::size_t i = 0; i < n; ++i) {
            colors.push_back(testing::random_color(rng));
            groups.push_back(i < 2 ? static_cast<int>(i) : static_cast<int>(rng.below(4)));
            map["c" + std::to_string(i)] = "g" + std::to_string(groups.back());
        }
        const Palette p(testing::ids(n), colors);
        CHECK(std::abs(silhouette(p, map) - textbook_silhouette(colors, groups)) < 1e-9);
    }
}

TEST_CASE("distance ratio") {
    const Palette parents({"A", "B"}, {LchColor{40, 50, 30}, LchColor{80, 50, 220}});
    const Palette kids({"a", "b"}, {LchColor{42, 50, 32}, LchColor{78, 48, 218}});
    const ParentMap pm{{"a", "A"}, {"b", "B"}};
    CHECK(distance_ratio(kids, parents, pm) == 1.0);

    // The child sits twice as far from its own parent as from the foreign one.
    const LabColor child{50, 0, 0};
    const LabColor own{50, 0, 30};
    const double d_own = ciede2000(child, own);
    double lo = 0.0, hi = 60.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ciede2000(child, LabColor{50, -mid, 0}) < 0.5 * d_own ? lo : hi) = mid;
    }
    const Palette two_parents({"A", "B"}, {to_lch(own), to_lch(LabColor{50, -0.5 * (lo + hi), 0})});
    const Palette lone({"x"}, {to_lch(child)});
    const ParentMap to_a{{"x", "A"}};
    CHECK(distance_ratio(lone, two_parents, to_a) == doctest::Approx(0.5));

    const Palette on_parent({"x"}, {parents.color(0)});
    CHECK(distance_ratio(on_parent, parents, ParentMap{{"x", "A"}}) == 1.0);
    CHECK_THROWS_AS(distance_ratio(on_parent, parents, ParentMap{{"x", "Z"}}), ArgumentError);
}

TEST_CASE("evaluate") {
    ObjectiveContext ctx;
    ctx.names = testing::names();
    const Palette parents({"A", "B"}, {LchColor{45, 50, 30}, LchColor{75, 50, 220}});
    const Palette kids({"a1", "a2", "b1"}, {LchColor{42, 55, 20}, LchColor{50, 45, 45}, LchColor{78, 48, 218}});

    const auto flat = evaluate(kids, ctx);
    CHECK_FALSE(flat.ss);
    CHECK_FALSE(flat.dr);
    CHECK(flat.bhdi == doctest::Approx(bhdi(flat.pd, flat.nd, flat.hue, flat.cl)));
    CHECK(flat.pd == perceptual_difference_score(kids));

    const HierarchyInfo info{parents, {{"a1", "A"}, {"a2", "A"}, {"b1", "B"}}};
    const auto full = evaluate(kids, ctx, &info);
    REQUIRE(full.ss);
    REQUIRE(full.dr);
    CHECK(*full.dr == distance_ratio(kids, parents, info.parent_of));

    CHECK(EvaluationReport::from_json(full.to_json()) == full);
    CHECK(EvaluationReport::from_json(flat.to_json()) == flat);
    CHECK(full.table().find("BHDI") != std::string::npos);
    CHECK(flat.table().find(" -") != std::string::npos);
}
