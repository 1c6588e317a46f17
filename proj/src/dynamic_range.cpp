#include "dyncolor/dynamic_range.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dyncolor {

using nlohmann::json;

namespace {

constexpr double kRad = 180.0 / std::numbers::pi;

double half_width(double radius, double chroma) {
    if (chroma <= 0.0) return 90.0;
    return std::asin(std::min(1.0, radius / chroma)) * kRad;
}

double farthest_in_default_range(const LabColor& center) {
    const auto range = default_range();
    double best = 0.0;
    for (double L = 40.0; L <= 85.0 + 1e-9; L += 2.5)
        for (double C = 40.0; C <= 85.0 + 1e-9; C += 2.5)
            for (double h = 0.0; h < 360.0; h += 5.0) {
                const LchColor c{L, C, h};
                if (range.contains(c)) best = std::max(best, ciede2000(center, to_lab(c)));
            }
    return best;
}

bool nearest_to_own(const LabColor& x, std::size_t own, const std::vector<LabColor>& initial) {
    const double d_own = ciede2000(x, initial[own]);
    for (std::size_t j = 0; j < initial.size(); ++j)
        if (j != own && !(d_own < ciede2000(x, initial[j]))) return false;
    return true;
}

} // namespace

RadiiResult determine_radii(const Palette& centers, std::span<const std::size_t> child_counts,
                            const RadiiConfig& cfg) {
    const std::size_t m = centers.size();
    if (m == 0) throw ArgumentError("determine_radii: no centers");
    if (child_counts.size() != m) throw ArgumentError("determine_radii: one child count per center is required");
    for (auto n : child_counts)
        if (n < 1) throw ArgumentError("determine_radii: child counts must be >= 1");
    if (!(cfg.gap_coefficient >= 0.0)) throw ArgumentError("determine_radii: gap coefficient must be >= 0");

    std::vector<LabColor> lab;
    std::vector<double> root_n;
    for (std::size_t i = 0; i < m; ++i) {
        lab.push_back(to_lab(centers.color(i)));
        root_n.push_back(std::sqrt(static_cast<double>(child_counts[i])));
    }

    RadiiResult out;
    if (m == 1) {
        const double r = farthest_in_default_range(lab[0]);
        out.scale = r / root_n[0];
        out.radii = {r};
        out.hue = {{centers.color(0).h, half_width(r, centers.color(0).C)}};
        return out;
    }

    double t_max = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = ciede2000(lab[i], lab[j]);
            if (d == 0.0)
                throw ValidationError("determine_radii: centers of '" + centers.class_id(i) + "' and '" +
                                      centers.class_id(j) + "' coincide");
            const double denom = root_n[i] + root_n[j] + cfg.gap_coefficient * std::max(root_n[i], root_n[j]);
            t_max = std::min(t_max, d / denom);
        }

    auto hue_ok = [&](double t) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const double hi = half_width(root_n[i] * t, centers.color(i).C);
                const double hj = half_width(root_n[j] * t, centers.color(j).C);
                const double gap = hue_distance(centers.color(i).h, centers.color(j).h) - hi - hj;
                if (gap < 2.0 * std::max(hi, hj) - 1e-12) return false;
            }
        return true;
    };

    double t = t_max;
    if (cfg.hue_constraint && !hue_ok(t)) {
        double lo = 0.0, hi = t_max;
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            (hue_ok(mid) ? lo : hi) = mid;
        }
        t = lo;
    }
    t = std::max(0.0, t - cfg.slack);
    out.scale = t;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = root_n[i] * t;
        out.radii.push_back(r);
        out.hue.push_back({centers.color(i).h, half_width(r, centers.color(i).C)});
    }
    return out;
}

bool nearest_initial_holds(const Palette& adjusted, const Palette& initial) {
    if (adjusted.size() != initial.size()) return false;
    std::vector<LabColor> init;
    for (const auto& c : initial.colors()) init.push_back(to_lab(c));
    for (std::size_t i = 0; i < adjusted.size(); ++i)
        if (!nearest_to_own(to_lab(adjusted.color(i)), i, init)) return false;
    return true;
}

Palette adjust_centers(const Palette& parents, const ObjectiveContext& ctx, const OptimizerConfig& cfg) {
    const std::size_t m = parents.size();
    if (m == 0) throw ArgumentError("adjust_centers: no parents");
    std::vector<LabColor> init;
    for (const auto& c : parents.colors()) init.push_back(to_lab(c));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (ciede2000(init[i], init[j]) == 0.0)
                throw ValidationError("adjust_centers: parents '" + parents.class_id(i) + "' and '" +
                                      parents.class_id(j) + "' share a color");

    const auto range = narrowed_range();
    const auto& box = range.box();

    // Starting point: each parent color moved into the narrowed box. When
    // clamping is not enough (gamut, disliked zone, or another parent's
    // cell), search outward for the nearest admissible color.
    Rng rng(derive_seed(cfg.seed, "adjust-start"));
    std::vector<LchColor> start;
    for (std::size_t i = 0; i < m; ++i) {
        const LchColor p = parents.color(i);
        LchColor c{std::clamp(p.L, box.l_lo, box.l_hi), std::clamp(p.C, box.c_lo, box.c_hi), p.h};
        if (!(range.contains(c) && nearest_to_own(to_lab(c), i, init))) {
            std::optional<LchColor> best;
            double best_d = std::numeric_limits<double>::infinity();
            for (int k = 0; k < 4000; ++k) {
                const double sigma = 1.0 + 0.01 * k;
                LchColor q{std::clamp(c.L + sigma * rng.normal(), box.l_lo, box.l_hi),
                           std::clamp(c.C + sigma * rng.normal(), box.c_lo, box.c_hi),
                           normalize_hue(c.h + sigma * rng.normal())};
                if (!range.contains(q)) continue;
                const LabColor ql = to_lab(q);
                if (!nearest_to_own(ql, i, init)) continue;
                const double d = ciede2000(ql, init[i]);
                if (d < best_d) {
                    best_d = d;
                    best = q;
                }
            }
            if (!best)
                throw ValidationError("adjust_centers: no admissible start for parent '" + parents.class_id(i) + "'");
            c = *best;
        }
        start.push_back(c);
    }

    ObjectiveContext parent_ctx = ctx;
    parent_ctx.layout.reset();
    parent_ctx.similarity.reset();
    parent_ctx.bounds.reset();
    OptimizeOptions options;
    options.initial = Palette(parents.classes(), start);
    options.spatial_stage = false;
    options.constraint = [&init](const Palette& p) {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!nearest_to_own(to_lab(p.color(i)), i, init)) return false;
        return true;
    };
    const auto ranges = FeasibleRangeSet::uniform(parents.classes(), range);
    return optimize(parents.classes(), ranges, parent_ctx, cfg, options).palette;
}

json ChildRanges::to_json() const {
    json arr = json::array();
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const auto& r = ranges.at(i);
        const auto& c = r.center();
        arr.push_back({{"class", ranges.classes[i]},
                       {"center", {c.L, c.a, c.b}},
                       {"radius", r.radius()},
                       {"hue_interval", {r.hue_interval().lo(), r.hue_interval().hi()}},
                       {"center_delta", center_deltas.at(i)}});
    }
    return arr;
}

ChildRanges make_child_ranges(const Palette& parents, std::span<const std::size_t> child_counts,
                              const ObjectiveContext& ctx, const OptimizerConfig& cfg,
                              const ChildRangeConfig& range_cfg) {
    if (child_counts.size() != parents.size())
        throw ArgumentError("make_child_ranges: one child count per parent is required");
    ChildRanges out;
    out.initial = parents;
    out.centers = adjust_centers(parents, ctx, cfg);
    for (std::size_t i = 0; i < parents.size(); ++i)
        out.center_deltas.push_back(ciede2000(parents.color(i), out.centers.color(i)));
    out.radii = determine_radii(out.centers, child_counts, range_cfg.radii);
    out.ranges.classes = parents.classes();
    for (std::size_t i = 0; i < parents.size(); ++i) {
        auto sphere = std::make_shared<const FeasibleRange>(
            FeasibleRange::make_sphere(to_lab(out.centers.color(i)), out.radii.radii[i], out.radii.hue[i]));
        if (range_cfg.capacity_trials > 0 && child_counts[i] > 1) {
            SamplerConfig sc;
            sc.max_consecutive_rejections = range_cfg.capacity_rejections;
            sc.seed = derive_seed(cfg.seed, "capacity-" + parents.class_id(i));
            const double cap = capacity(*sphere, sc, range_cfg.capacity_trials);
            if (cap < static_cast<double>(child_counts[i]))
                out.warnings.push_back("range of '" + parents.class_id(i) + "' holds about " +
                                       std::to_string(static_cast<long>(cap)) + " discernible colors for " +
                                       std::to_string(child_counts[i]) + " children");
        }
        out.ranges.ranges.push_back(std::move(sphere));
    }
    return out;
}

} // namespace dyncolor
