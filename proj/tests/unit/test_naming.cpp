#include "doctest.h"
#include "helpers.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/naming.hpp"

#include <cmath>
#include <sstream>

using namespace dyncolor;

namespace {

NameModel load_text(const std::string& text) {
    std::istringstream in(text);
    return load_name_model(in);
}

std::size_t brute_nearest(const NameModel& m, const LabColor& c) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < m.bin_count(); ++i) {
        const auto& b = m.bins()[i];
        const double d = (b.L - c.L) * (b.L - c.L) + (b.a - c.a) * (b.a - c.a) + (b.b - c.b) * (b.b - c.b);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace

TEST_CASE("loading a two-bin, three-term model") {
    const auto m = load_text(R"({"terms": ["red", "green", "blue"],
        "bins": [[50, 60, 40], [60, -50, 40]],
        "counts": [[0, 0, 10], [0, 2, 1], [1, 1, 7]]})");
    CHECK(m.term_count() == 3);
    CHECK(m.bin_count() == 2);
    const auto r0 = m.row(0);
    CHECK(r0.weights[0] == 10.0);
    CHECK(r0.weights[1] == 0.0);
    CHECK(r0.weights[2] == 1.0);
    CHECK(r0.norm == doctest::Approx(std::sqrt(101.0)));
}

TEST_CASE("malformed name models are rejected") {
    CHECK_THROWS_AS(load_text(R"({"terms": ["a"], "bins": [[50, 0, 0]], "counts": [[0, 0, -1]]})"), ValidationError);
    CHECK_THROWS_AS(load_text(R"({"terms": ["a"], "bins": [[50, 0, 0]], "counts": [[3, 0, 1]]})"), ValidationError);
    CHECK_THROWS_AS(load_text(R"({"terms": ["a", "b"], "bins": [[50, 0, 0], [60, 0, 0]], "counts": [[0, 0, 1]]})"),
                    ValidationError);
    CHECK_THROWS_AS(load_text(R"({"terms": ["a"], "bins": )"), ParseError);
    CHECK_THROWS_AS(load_text(R"({"terms": ["a"], "bins": [[50, 0]], "counts": [[0, 0, 1]]})"), ParseError);
}

TEST_CASE("name_vector at a bin center returns that bin's row") {
    const auto& m = *testing::names();
    for (std::size_t i = 0; i < m.bin_count(); i += 37) {
        const auto v = name_vector(m, m.bins()[i]);
        const auto r = m.row(i);
        CHECK(v.weights.data() == r.weights.data());
    }
}

TEST_CASE("equidistant bins resolve to the lower index") {
    std::vector<LabColor> bins;
    for (int i = 0; i < 10; ++i) bins.push_back({10.0 + 8.0 * i, 60, 0});
    // bins 4 and 9 sit symmetrically around the query on the b axis
    bins[4] = {50, 0, 20};
    bins[9] = {50, 0, -20};
    std::vector<double> counts(10, 1.0);
    const NameModel m({"x"}, bins, counts);
    CHECK(m.nearest_bin({50, 0, 0}) == 4);
    CHECK(m.nearest_bin({50, 0, 0.001}) == 4);
    CHECK(m.nearest_bin({50, 0, -0.001}) == 9);
}

TEST_CASE("nearest_bin agrees with a brute-force scan") {
    const auto& m = *testing::names();
    Rng rng(3);
    for (int k = 0; k < 20000; ++k) {
        const LabColor c{rng.uniform(-10, 110), rng.uniform(-140, 140), rng.uniform(-140, 140)};
        REQUIRE(m.nearest_bin(c) == brute_nearest(m, c));
    }
}

TEST_CASE("name_difference examples") {
    const NameModel m({"a", "b"}, {{30, 0, 0}, {70, 0, 0}, {50, 40, 0}}, {1, 0, 0, 1, 1, 1});
    const LchColor x = to_lch(LabColor{30, 0, 0});
    const LchColor y = to_lch(LabColor{70, 0, 0});
    const LchColor z = to_lch(LabColor{50, 40, 0});
    const std::vector<LchColor> same{x, x};
    CHECK(name_difference(m, same) == 0.0);
    const std::vector<LchColor> ortho{x, y};
    CHECK(name_difference(m, ortho) == doctest::Approx(1.0));

    const std::vector<LchColor> three{x, y, z};
    const double dxy = name_cosine_distance(name_vector(m, x), name_vector(m, y));
    const double dxz = name_cosine_distance(name_vector(m, x), name_vector(m, z));
    const double dyz = name_cosine_distance(name_vector(m, y), name_vector(m, z));
    CHECK(name_difference(m, three) == doctest::Approx((dxy + dxz + dyz) / 3.0));
    CHECK(dxz == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));

    const std::vector<LchColor> one{x};
    CHECK_THROWS_AS(name_difference(m, one), ArgumentError);
}

TEST_CASE("c3 layout import") {
    const nlohmann::json doc = {{"color", {50, 0, 0, 60, 10, 10}}, {"terms", {"grey", "pink"}},
                                {"T", {0, 4, 3, 2, 1, 1}}};
    const auto m = import_c3_name_data(doc);
    CHECK(m.bin_count() == 2);
    CHECK(m.term_count() == 2);
    CHECK(m.row(0).weights[0] == 4.0);
    CHECK(m.row(1).weights[1] == 2.0);
    CHECK(m.row(0).weights[1] == 1.0);
    CHECK(m.row(1).weights[0] == 0.0);
}

TEST_CASE("model JSON round trip") {
    const auto& m = *testing::names();
    const auto again = name_model_from_json(m.to_json());
    CHECK(again.bins() == m.bins());
    CHECK(again.terms() == m.terms());
    for (std::size_t i = 0; i < m.bin_count(); i += 50) CHECK(again.row(i).norm == m.row(i).norm);
}
