#pragma once

#include "dyncolor/objectives.hpp"
#include "dyncolor/optimizer.hpp"
#include "dyncolor/palette.hpp"
#include "dyncolor/range.hpp"
#include "dyncolor/sampling.hpp"

#include "json.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dyncolor {

struct RadiiConfig {
    double gap_coefficient = 1.0; // d - r_i - r_j >= k * max(r_i, r_j)
    double slack = 1e-6;          // subtracted from the maximal scale
    bool hue_constraint = true;
};

struct RadiiResult {
    double scale = 0.0;               // r_i = sqrt(n_i) * scale for two or more centers
    std::vector<double> radii;
    std::vector<HueInterval> hue;     // center hue +- asin(min(1, r / C))
};

/// Largest radii proportional to sqrt(child count) such that every pair of
/// spheres keeps a gap of at least k * max radius and every pair of hue arcs
/// a gap of at least the longer arc. A single center gets the largest
/// CIEDE2000 distance to the default range. Throws ValidationError for
/// coincident centers and ArgumentError for bad counts.
RadiiResult determine_radii(const Palette& centers, std::span<const std::size_t> child_counts,
                            const RadiiConfig& cfg = {});

/// True when every adjusted color is strictly nearer (CIEDE2000) to its own
/// initial color than to any other initial color.
bool nearest_initial_holds(const Palette& adjusted, const Palette& initial);

/// Re-optimizes parent colors as sphere centers (D then D+H stages) inside
/// the narrowed box, rejecting moves that break nearest_initial_holds.
/// Throws ValidationError when two parent colors coincide.
Palette adjust_centers(const Palette& parents, const ObjectiveContext& ctx, const OptimizerConfig& cfg);

struct ChildRangeConfig {
    RadiiConfig radii;
    int capacity_trials = 3; // 0 skips the capacity check
    int capacity_rejections = 1000;
};

struct ChildRanges {
    Palette initial;
    Palette centers;
    std::vector<double> center_deltas; // CIEDE2000(initial, adjusted) per parent
    RadiiResult radii;
    FeasibleRangeSet ranges;           // keyed by parent class id
    std::vector<std::string> warnings;

    /// [{"class", "center", "radius", "hue_interval", "center_delta"}...]
    nlohmann::json to_json() const;
};

/// adjust_centers followed by determine_radii; each parent's sphere (within
/// the default box) is the range for its children.
ChildRanges make_child_ranges(const Palette& parents, std::span<const std::size_t> child_counts,
                              const ObjectiveContext& ctx, const OptimizerConfig& cfg,
                              const ChildRangeConfig& range_cfg = {});

} // namespace dyncolor
