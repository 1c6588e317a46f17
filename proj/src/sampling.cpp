#include "dyncolor/sampling.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace dyncolor {

std::vector<LchColor> dart_throw(const FeasibleRange& range, std::size_t k, const SamplerConfig& cfg) {
    if (k == 0) throw ArgumentError("dart_throw: k must be >= 1");
    if (!(cfg.min_distance > 0.0)) throw ArgumentError("dart_throw: min_distance must be positive");
    if (cfg.max_consecutive_rejections < 1) throw ArgumentError("dart_throw: rejection budget must be >= 1");
    Rng rng(cfg.seed);
    std::vector<LchColor> accepted;
    std::vector<LabColor> lab;
    int rejections = 0;
    while (accepted.size() < k && rejections < cfg.max_consecutive_rejections) {
        const auto c = range.sample(rng);
        if (!c) {
            if (accepted.empty()) throw ArgumentError("dart_throw: range is empty");
            break;
        }
        const LabColor x = to_lab(*c);
        const bool far = std::all_of(lab.begin(), lab.end(),
                                     [&](const LabColor& y) { return ciede2000(x, y) >= cfg.min_distance; });
        if (far) {
            accepted.push_back(*c);
            lab.push_back(x);
            rejections = 0;
        } else {
            ++rejections;
        }
    }
    return accepted;
}

double capacity(const FeasibleRange& range, const SamplerConfig& cfg, int trials) {
    if (trials < 1) throw ArgumentError("capacity: trials must be >= 1");
    std::vector<double> counts;
    for (int t = 0; t < trials; ++t) {
        SamplerConfig c = cfg;
        c.seed = derive_seed(cfg.seed, "trial-" + std::to_string(t));
        counts.push_back(static_cast<double>(dart_throw(range, kSaturate, c).size()));
    }
    std::sort(counts.begin(), counts.end());
    const std::size_t n = counts.size();
    return n % 2 == 1 ? counts[n / 2] : 0.5 * (counts[n / 2 - 1] + counts[n / 2]);
}

RadiusLaw fit_radius_law(std::span<const RadiusSample> samples) {
    std::set<double> radii;
    for (const auto& s : samples) {
        if (!(s.radius > 0.0) || !(s.capacity > 0.0))
            throw ArgumentError("fit_radius_law: radii and capacities must be positive");
        radii.insert(s.radius);
    }
    if (radii.size() < 3) throw ArgumentError("fit_radius_law: need at least 3 distinct radii");
    const double n = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& s : samples) {
        sx += std::log(s.radius);
        sy += std::log(s.capacity);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& s : samples) {
        const double dx = std::log(s.radius) - mx, dy = std::log(s.capacity) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    RadiusLaw law;
    law.exponent = sxy / sxx;
    law.scale = std::exp(my - law.exponent * mx);
    double ss_res = 0.0;
    for (const auto& s : samples) {
        const double r = std::log(s.capacity) - (my + law.exponent * (std::log(s.radius) - mx));
        ss_res += r * r;
    }
    // A flat response has nothing to explain; report a perfect fit.
    law.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return law;
}

} // namespace dyncolor
