#pragma once

#include "dyncolor/colorspace.hpp"
#include "dyncolor/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dyncolor {

struct LcBox {
    double l_lo = 40.0, l_hi = 85.0;
    double c_lo = 40.0, c_hi = 85.0;

    friend bool operator==(const LcBox&, const LcBox&) = default;
};

/// Colors with L in [l_lo, l_hi] and hue in [h_lo, h_hi] are excluded.
struct HueExclusion {
    double l_lo = 40.0, l_hi = 75.0;
    double h_lo = 85.0, h_hi = 114.0;

    bool excludes(const LchColor& c) const noexcept;
    friend bool operator==(const HueExclusion&, const HueExclusion&) = default;
};

/// Hue arc center +- half_width (degrees); half_width >= 180 is the full circle.
struct HueInterval {
    double center = 0.0;
    double half_width = 180.0;

    bool contains(double h) const noexcept;
    double length() const noexcept { return 2.0 * std::min(half_width, 180.0); }
    double lo() const noexcept;
    double hi() const noexcept;
    friend bool operator==(const HueInterval&, const HueInterval&) = default;
};

/// A feasible color region: an L/C box minus the disliked-hue zone, in gamut,
/// optionally intersected with a CIEDE2000 ball and a hue arc.
class FeasibleRange {
public:
    enum class Kind { box, sphere };

    FeasibleRange() = default;

    static FeasibleRange make_box(LcBox box = {}, std::optional<HueExclusion> exclusion = HueExclusion{});
    /// Throws ArgumentError for a negative radius.
    static FeasibleRange make_sphere(const LabColor& center, double radius, HueInterval hue, LcBox box = {},
                                     std::optional<HueExclusion> exclusion = HueExclusion{});

    Kind kind() const noexcept { return kind_; }
    const LcBox& box() const noexcept { return box_; }
    const std::optional<HueExclusion>& exclusion() const noexcept { return exclusion_; }
    const LabColor& center() const noexcept { return center_; }
    LchColor center_lch() const noexcept { return to_lch(center_); }
    double radius() const noexcept { return radius_; }
    const HueInterval& hue_interval() const noexcept { return hue_; }

    bool contains(const LchColor& c) const noexcept;

    /// One uniform draw from the proposal region (the L/C box, or for spheres
    /// a bounding L/C/h block around the center). May fall outside the range.
    LchColor propose(Rng& rng) const;

    /// Rejection-samples an in-range color; nullopt after max_attempts misses.
    std::optional<LchColor> sample(Rng& rng, int max_attempts = 100000) const;

    nlohmann::json to_json() const;
    static FeasibleRange from_json(const nlohmann::json& j);

    friend bool operator==(const FeasibleRange&, const FeasibleRange&) = default;

private:
    Kind kind_ = Kind::box;
    LcBox box_;
    std::optional<HueExclusion> exclusion_ = HueExclusion{};
    LabColor center_;
    double radius_ = 0.0;
    HueInterval hue_;
};

/// C, L in [40, 85] without the disliked-hue zone.
FeasibleRange default_range();

/// The box used when re-optimizing sphere centers: C, L in [45, 80].
FeasibleRange narrowed_range();

bool contains(const FeasibleRange& range, const LchColor& c) noexcept;

/// One range per class, aligned with a class list.
struct FeasibleRangeSet {
    std::vector<std::string> classes;
    std::vector<std::shared_ptr<const FeasibleRange>> ranges;

    static FeasibleRangeSet uniform(std::vector<std::string> classes, const FeasibleRange& range);

    std::size_t size() const noexcept { return classes.size(); }
    const FeasibleRange& at(std::size_t i) const { return *ranges.at(i); }
    /// Throws NotFoundError.
    const FeasibleRange& of(const std::string& class_id) const;
};

} // namespace dyncolor
