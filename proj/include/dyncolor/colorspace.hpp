#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace dyncolor {

/// sRGB with D65 white. Channels are nominally in [0,1]; conversions from
/// Lab never clamp, so an out-of-gamut result carries channels outside that
/// interval and reports it through in_gamut().
struct RgbColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    bool in_gamut(double tolerance = 1e-9) const noexcept;
    friend bool operator==(const RgbColor&, const RgbColor&) = default;
};

struct LabColor {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const LabColor&, const LabColor&) = default;
};

/// CIELCh, the optimization space. h is in degrees, [0, 360).
struct LchColor {
    double L = 0.0;
    double C = 0.0;
    double h = 0.0;

    friend bool operator==(const LchColor&, const LchColor&) = default;
};

struct HsvColor {
    double h = 0.0; // degrees, [0, 360)
    double s = 0.0;
    double v = 0.0;

    friend bool operator==(const HsvColor&, const HsvColor&) = default;
};

enum class Space { rgb, lab, lch, hsv };

using AnyColor = std::variant<RgbColor, LabColor, LchColor, HsvColor>;

/// Wraps any angle into [0, 360).
double normalize_hue(double degrees) noexcept;

/// Shortest angular distance between two hues, in [0, 180].
double hue_distance(double a, double b) noexcept;

/// Reference white (XYZ, Y = 100) implied by the sRGB primaries.
struct WhitePoint {
    double X, Y, Z;
};
WhitePoint d65_white() noexcept;

LchColor to_lch(const LabColor& lab) noexcept;
LabColor to_lab(const LchColor& lch) noexcept;
LabColor to_lab(const RgbColor& rgb) noexcept;
RgbColor to_rgb(const LabColor& lab) noexcept;
RgbColor to_rgb(const LchColor& lch) noexcept;
HsvColor to_hsv(const RgbColor& rgb) noexcept;
RgbColor to_rgb(const HsvColor& hsv) noexcept;

/// Generic conversion; routes through Lab for anything crossing between the
/// perceptual and device spaces.
AnyColor convert(const AnyColor& color, Space target);

bool in_gamut(const LabColor& lab, double tolerance = 1e-9) noexcept;
bool in_gamut(const LchColor& lch, double tolerance = 1e-9) noexcept;

/// Moves an Lch color into the sRGB gamut by reducing chroma at fixed L and
/// h (L is first clamped to [0,100]). In-gamut colors are returned as is.
LchColor project_to_gamut(const LchColor& lch) noexcept;

/// HSV hue of an Lch color: CIELCh -> sRGB -> HSV, after project_to_gamut.
double hsv_hue(const LchColor& lch) noexcept;

/// CIEDE2000 with kL = kC = kH = 1.
double ciede2000(const LabColor& x, const LabColor& y) noexcept;
double ciede2000(const LchColor& x, const LchColor& y) noexcept;

/// "#RRGGBB", 8-bit quantized; channels are clamped for display only.
std::string to_hex(const RgbColor& rgb);
std::string to_hex(const LchColor& lch);
RgbColor from_hex(std::string_view hex);

} // namespace dyncolor
