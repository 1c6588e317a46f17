#pragma once

#include "dyncolor/colorspace.hpp"
#include "dyncolor/range.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dyncolor {

struct SamplerConfig {
    double min_distance = 10.0;              // CIEDE2000
    int max_consecutive_rejections = 5000;
    std::uint64_t seed = 0;
};

inline constexpr std::size_t kSaturate = std::numeric_limits<std::size_t>::max();

/// Dart throwing: uniform in-range candidates, accepted when at least
/// min_distance from every accepted color. Stops at k accepted or after
/// max_consecutive_rejections rejections in a row. Throws ArgumentError
/// when the range yields no in-range candidate at all.
std::vector<LchColor> dart_throw(const FeasibleRange& range, std::size_t k, const SamplerConfig& cfg);

/// Median accepted count over `trials` saturated runs (trial t uses the
/// seed derived from cfg.seed and t).
double capacity(const FeasibleRange& range, const SamplerConfig& cfg, int trials = 20);

struct RadiusLaw {
    double exponent = 0.0;
    double scale = 0.0;
    double r_squared = 0.0;
};

struct RadiusSample {
    double radius;
    double capacity;
};

/// capacity ~ scale * radius^exponent by least squares in log-log space.
/// Needs at least 3 distinct radii and positive values (ArgumentError).
RadiusLaw fit_radius_law(std::span<const RadiusSample> samples);

} // namespace dyncolor
