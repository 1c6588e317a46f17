#include "dyncolor/range.hpp"

#include "dyncolor/errors.hpp"

#include <cmath>

namespace dyncolor {

using nlohmann::json;

bool HueExclusion::excludes(const LchColor& c) const noexcept {
    return c.L >= l_lo && c.L <= l_hi && c.h >= h_lo && c.h <= h_hi;
}

bool HueInterval::contains(double h) const noexcept {
    return half_width >= 180.0 || hue_distance(h, center) <= half_width + 1e-12;
}

double HueInterval::lo() const noexcept { return half_width >= 180.0 ? 0.0 : normalize_hue(center - half_width); }

double HueInterval::hi() const noexcept { return half_width >= 180.0 ? 360.0 : normalize_hue(center + half_width); }

FeasibleRange FeasibleRange::make_box(LcBox box, std::optional<HueExclusion> exclusion) {
    if (box.l_lo > box.l_hi || box.c_lo > box.c_hi) throw ArgumentError("range: box bounds out of order");
    FeasibleRange r;
    r.kind_ = Kind::box;
    r.box_ = box;
    r.exclusion_ = exclusion;
    return r;
}

FeasibleRange FeasibleRange::make_sphere(const LabColor& center, double radius, HueInterval hue, LcBox box,
                                         std::optional<HueExclusion> exclusion) {
    if (!(radius >= 0.0)) throw ArgumentError("range: sphere radius must be >= 0");
    FeasibleRange r = make_box(box, exclusion);
    r.kind_ = Kind::sphere;
    r.center_ = center;
    r.radius_ = radius;
    r.hue_ = hue;
    return r;
}

bool FeasibleRange::contains(const LchColor& c) const noexcept {
    if (c.L < box_.l_lo || c.L > box_.l_hi || c.C < box_.c_lo || c.C > box_.c_hi) return false;
    if (exclusion_ && exclusion_->excludes(c)) return false;
    if (kind_ == Kind::sphere) {
        if (!hue_.contains(c.h)) return false;
        if (ciede2000(to_lab(c), center_) > radius_) return false;
    }
    return in_gamut(c);
}

LchColor FeasibleRange::propose(Rng& rng) const {
    if (kind_ == Kind::box)
        return {rng.uniform(box_.l_lo, box_.l_hi), rng.uniform(box_.c_lo, box_.c_hi), rng.uniform(0.0, 360.0)};
    const LchColor c = to_lch(center_);
    if (radius_ == 0.0) return c;
    // Bounding block of the ball: CIEDE2000 weights lightness by at most ~1.7
    // and chroma by up to ~4.8 over this box, so these spans cover it.
    const double l_lo = std::max(box_.l_lo, c.L - 2.0 * radius_), l_hi = std::min(box_.l_hi, c.L + 2.0 * radius_);
    const double c_lo = std::max(box_.c_lo, c.C - 7.0 * radius_), c_hi = std::min(box_.c_hi, c.C + 7.0 * radius_);
    const double hw = std::min(hue_.half_width, 180.0);
    const double l = l_lo <= l_hi ? rng.uniform(l_lo, l_hi) : c.L;
    const double ch = c_lo <= c_hi ? rng.uniform(c_lo, c_hi) : c.C;
    return {l, ch, normalize_hue(hue_.center + rng.uniform(-hw, hw))};
}

std::optional<LchColor> FeasibleRange::sample(Rng& rng, int max_attempts) const {
    for (int i = 0; i < max_attempts; ++i) {
        const LchColor c = propose(rng);
        if (contains(c)) return c;
        if (kind_ == Kind::sphere && radius_ == 0.0) return std::nullopt;
    }
    return std::nullopt;
}

json FeasibleRange::to_json() const {
    json j{{"kind", kind_ == Kind::box ? "box" : "sphere"},
           {"box", {{"L", {box_.l_lo, box_.l_hi}}, {"C", {box_.c_lo, box_.c_hi}}}}};
    if (exclusion_)
        j["exclusion"] = {{"L", {exclusion_->l_lo, exclusion_->l_hi}}, {"h", {exclusion_->h_lo, exclusion_->h_hi}}};
    else
        j["exclusion"] = nullptr;
    if (kind_ == Kind::sphere) {
        j["center"] = {{"L", center_.L}, {"a", center_.a}, {"b", center_.b}};
        j["radius"] = radius_;
        j["hue_interval"] = {hue_.lo(), hue_.hi()};
        j["hue_center"] = hue_.center;
        j["hue_half_width"] = hue_.half_width;
    }
    return j;
}

FeasibleRange FeasibleRange::from_json(const json& j) {
    try {
        LcBox box;
        box.l_lo = j.at("box").at("L").at(0).get<double>();
        box.l_hi = j.at("box").at("L").at(1).get<double>();
        box.c_lo = j.at("box").at("C").at(0).get<double>();
        box.c_hi = j.at("box").at("C").at(1).get<double>();
        std::optional<HueExclusion> ex;
        if (j.contains("exclusion") && !j["exclusion"].is_null()) {
            const auto& e = j["exclusion"];
            ex = HueExclusion{e.at("L").at(0).get<double>(), e.at("L").at(1).get<double>(),
                              e.at("h").at(0).get<double>(), e.at("h").at(1).get<double>()};
        }
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "box") return make_box(box, ex);
        if (kind != "sphere") throw ParseError("range: unknown kind '" + kind + "'");
        const auto& c = j.at("center");
        HueInterval hue;
        if (j.contains("hue_center")) {
            hue = {j["hue_center"].get<double>(), j.at("hue_half_width").get<double>()};
        } else {
            const double lo = j.at("hue_interval").at(0).get<double>();
            const double hi = j.at("hue_interval").at(1).get<double>();
            if (hi - lo >= 360.0) {
                hue = {};
            } else {
                const double hw = normalize_hue(hi - lo) / 2.0;
                hue = {normalize_hue(lo + hw), hw};
            }
        }
        return make_sphere({c.at("L").get<double>(), c.at("a").get<double>(), c.at("b").get<double>()},
                           j.at("radius").get<double>(), hue, box, ex);
    } catch (const json::exception& e) {
        throw ParseError(std::string("range: ") + e.what());
    }
}

FeasibleRange default_range() { return FeasibleRange::make_box(); }

FeasibleRange narrowed_range() { return FeasibleRange::make_box({45.0, 80.0, 45.0, 80.0}); }

bool contains(const FeasibleRange& range, const LchColor& c) noexcept { return range.contains(c); }

FeasibleRangeSet FeasibleRangeSet::uniform(std::vector<std::string> classes, const FeasibleRange& range) {
    FeasibleRangeSet s;
    const auto shared = std::make_shared<const FeasibleRange>(range);
    s.ranges.assign(classes.size(), shared);
    s.classes = std::move(classes);
    return s;
}

const FeasibleRange& FeasibleRangeSet::of(const std::string& class_id) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == class_id) return *ranges[i];
    throw NotFoundError("range set: no range for class '" + class_id + "'");
}

} // namespace dyncolor
