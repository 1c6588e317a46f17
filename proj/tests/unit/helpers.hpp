#pragma once

#include "dyncolor/colorspace.hpp"
#include "dyncolor/naming.hpp"
#include "dyncolor/palette.hpp"
#include "dyncolor/rng.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace testing {

inline std::shared_ptr<const dyncolor::NameModel> names() {
    static const auto model = std::make_shared<const dyncolor::NameModel>(
        dyncolor::load_name_model(std::filesystem::path(DYNCOLOR_DATA_DIR "/names/synthetic_10.json")));
    return model;
}

inline std::filesystem::path data(const std::string& rel) { return std::filesystem::path(DYNCOLOR_DATA_DIR) / rel; }

/// Uniform in-gamut Lch color by rejection.
inline dyncolor::LchColor random_color(dyncolor::Rng& rng, double l_lo = 20.0, double l_hi = 90.0,
                                       double c_hi = 100.0) {
    for (;;) {
        const dyncolor::LchColor c{rng.uniform(l_lo, l_hi), rng.uniform(0.0, c_hi), rng.uniform(0.0, 360.0)};
        if (dyncolor::in_gamut(c)) return c;
    }
}

inline std::vector<std::string> ids(std::size_t n, const std::string& prefix = "c") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline dyncolor::Palette random_palette(dyncolor::Rng& rng, std::size_t n) {
    std::vector<dyncolor::LchColor> colors;
    for (std::size_t i = 0; i < n; ++i) colors.push_back(random_color(rng));
    return dyncolor::Palette(ids(n), colors);
}

} // namespace testing
