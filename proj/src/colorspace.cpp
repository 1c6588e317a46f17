#include "dyncolor/colorspace.hpp"

#include "dyncolor/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace dyncolor {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

// Linear sRGB -> XYZ (D65), Y scaled to 1.
constexpr Mat3 kRgbToXyz{{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};

constexpr Mat3 invert(const Mat3& m) {
    const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    Mat3 r{};
    r[0][0] = c00 / det;
    r[1][0] = c01 / det;
    r[2][0] = c02 / det;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return r;
}

constexpr Mat3 kXyzToRgb = invert(kRgbToXyz);

// White is the image of RGB (1,1,1) so that white maps to Lab (100,0,0) exactly.
constexpr double kWhiteX = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
constexpr double kWhiteY = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
constexpr double kWhiteZ = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

constexpr double kEpsilon = 216.0 / 24389.0; // (6/29)^3
constexpr double kDelta = 6.0 / 29.0;

double lab_f(double t) {
    return t > kEpsilon ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double f) {
    return f > kDelta ? f * f * f : 3.0 * kDelta * kDelta * (f - 4.0 / 29.0);
}

// Sign-symmetric extension keeps out-of-gamut channels visible instead of NaN.
double srgb_decode(double v) {
    if (v < 0.0) return -srgb_decode(-v);
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double srgb_encode(double l) {
    if (l < 0.0) return -srgb_encode(-l);
    return l <= 0.0031308 ? 12.92 * l : 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
}

} // namespace

bool RgbColor::in_gamut(double tolerance) const noexcept {
    auto ok = [tolerance](double c) { return c >= -tolerance && c <= 1.0 + tolerance; };
    return ok(r) && ok(g) && ok(b);
}

double normalize_hue(double degrees) noexcept {
    double h = std::fmod(degrees, 360.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    return h;
}

double hue_distance(double a, double b) noexcept {
    const double d = std::fabs(normalize_hue(a) - normalize_hue(b));
    return d > 180.0 ? 360.0 - d : d;
}

WhitePoint d65_white() noexcept {
    return {kWhiteX * 100.0, kWhiteY * 100.0, kWhiteZ * 100.0};
}

LchColor to_lch(const LabColor& lab) noexcept {
    const double c = std::hypot(lab.a, lab.b);
    if (c == 0.0) return {lab.L, 0.0, 0.0};
    return {lab.L, c, normalize_hue(std::atan2(lab.b, lab.a) / kDeg)};
}

LabColor to_lab(const LchColor& lch) noexcept {
    const double rad = lch.h * kDeg;
    return {lch.L, lch.C * std::cos(rad), lch.C * std::sin(rad)};
}

LabColor to_lab(const RgbColor& rgb) noexcept {
    const std::array<double, 3> lin{srgb_decode(rgb.r), srgb_decode(rgb.g), srgb_decode(rgb.b)};
    std::array<double, 3> xyz{};
    for (int i = 0; i < 3; ++i)
        xyz[i] = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
    const double fx = lab_f(xyz[0] / kWhiteX);
    const double fy = lab_f(xyz[1] / kWhiteY);
    const double fz = lab_f(xyz[2] / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

RgbColor to_rgb(const LabColor& lab) noexcept {
    const double fy = (lab.L + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const std::array<double, 3> xyz{lab_f_inv(fx) * kWhiteX, lab_f_inv(fy) * kWhiteY,
                                    lab_f_inv(fz) * kWhiteZ};
    std::array<double, 3> lin{};
    for (int i = 0; i < 3; ++i)
        lin[i] = kXyzToRgb[i][0] * xyz[0] + kXyzToRgb[i][1] * xyz[1] + kXyzToRgb[i][2] * xyz[2];
    return {srgb_encode(lin[0]), srgb_encode(lin[1]), srgb_encode(lin[2])};
}

RgbColor to_rgb(const LchColor& lch) noexcept { return to_rgb(to_lab(lch)); }

HsvColor to_hsv(const RgbColor& rgb) noexcept {
    const double mx = std::max({rgb.r, rgb.g, rgb.b});
    const double mn = std::min({rgb.r, rgb.g, rgb.b});
    const double delta = mx - mn;
    HsvColor out{0.0, mx > 0.0 ? delta / mx : 0.0, mx};
    if (delta <= 0.0) return out;
    double h;
    if (mx == rgb.r)
        h = 60.0 * std::fmod((rgb.g - rgb.b) / delta, 6.0);
    else if (mx == rgb.g)
        h = 60.0 * ((rgb.b - rgb.r) / delta + 2.0);
    else
        h = 60.0 * ((rgb.r - rgb.g) / delta + 4.0);
    out.h = normalize_hue(h);
    return out;
}

RgbColor to_rgb(const HsvColor& hsv) noexcept {
    const double c = hsv.v * hsv.s;
    const double hp = normalize_hue(hsv.h) / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
    }
    const double m = hsv.v - c;
    return {r + m, g + m, b + m};
}

AnyColor convert(const AnyColor& color, Space target) {
    if (static_cast<std::size_t>(target) == color.index()) return color;
    const LabColor lab = std::visit(
        [](const auto& c) -> LabColor {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, LabColor>)
                return c;
            else if constexpr (std::is_same_v<T, HsvColor>)
                return to_lab(to_rgb(c));
            else
                return to_lab(c);
        },
        color);
    // Rgb <-> Hsv does not need the Lab detour.
    if (target == Space::hsv && std::holds_alternative<RgbColor>(color))
        return to_hsv(std::get<RgbColor>(color));
    if (target == Space::rgb && std::holds_alternative<HsvColor>(color))
        return to_rgb(std::get<HsvColor>(color));
    switch (target) {
    case Space::lab: return lab;
    case Space::lch: return to_lch(lab);
    case Space::rgb: return to_rgb(lab);
    case Space::hsv: return to_hsv(to_rgb(lab));
    }
    return lab;
}

bool in_gamut(const LabColor& lab, double tolerance) noexcept {
    return to_rgb(lab).in_gamut(tolerance);
}

bool in_gamut(const LchColor& lch, double tolerance) noexcept {
    return in_gamut(to_lab(lch), tolerance);
}

LchColor project_to_gamut(const LchColor& lch) noexcept {
    LchColor c{std::clamp(lch.L, 0.0, 100.0), std::max(lch.C, 0.0), normalize_hue(lch.h)};
    if (in_gamut(c)) return c;
    double lo = 0.0, hi = c.C;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (in_gamut(LchColor{c.L, mid, c.h}))
            lo = mid;
        else
            hi = mid;
    }
    return {c.L, lo, c.h};
}

double hsv_hue(const LchColor& lch) noexcept {
    const RgbColor rgb = to_rgb(project_to_gamut(lch));
    return to_hsv({std::clamp(rgb.r, 0.0, 1.0), std::clamp(rgb.g, 0.0, 1.0),
                   std::clamp(rgb.b, 0.0, 1.0)})
        .h;
}

namespace {
double pow7(double v) noexcept {
    const double v2 = v * v;
    return v2 * v2 * v2 * v;
}
} // namespace

double ciede2000(const LabColor& x, const LabColor& y) noexcept {
    constexpr double kPow25To7 = 6103515625.0;
    const double c1 = std::sqrt(x.a * x.a + x.b * x.b);
    const double c2 = std::sqrt(y.a * y.a + y.b * y.b);
    const double c_bar = 0.5 * (c1 + c2);
    const double c_bar7 = pow7(c_bar);
    const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + kPow25To7)));
    const double a1 = (1.0 + g) * x.a;
    const double a2 = (1.0 + g) * y.a;
    const double cp1 = std::sqrt(a1 * a1 + x.b * x.b);
    const double cp2 = std::sqrt(a2 * a2 + y.b * y.b);

    auto hue_prime = [](double b, double a) {
        if (a == 0.0 && b == 0.0) return 0.0;
        double h = std::atan2(b, a);
        if (h < 0.0) h += 2.0 * kPi;
        return h;
    };
    const double hp1 = hue_prime(x.b, a1);
    const double hp2 = hue_prime(y.b, a2);

    const double dL = y.L - x.L;
    const double dC = cp2 - cp1;
    const double c_prod = cp1 * cp2;
    double dh = 0.0;
    if (c_prod != 0.0) {
        dh = hp2 - hp1;
        if (dh > kPi)
            dh -= 2.0 * kPi;
        else if (dh < -kPi)
            dh += 2.0 * kPi;
    }
    const double dH = 2.0 * std::sqrt(c_prod) * std::sin(0.5 * dh);

    const double l_bar = 0.5 * (x.L + y.L);
    const double cp_bar = 0.5 * (cp1 + cp2);
    double hp_bar = hp1 + hp2;
    if (c_prod != 0.0) {
        if (std::fabs(hp1 - hp2) <= kPi)
            hp_bar *= 0.5;
        else if (hp_bar < 2.0 * kPi)
            hp_bar = 0.5 * (hp_bar + 2.0 * kPi);
        else
            hp_bar = 0.5 * (hp_bar - 2.0 * kPi);
    }

    // cos(k h + phase) for k = 1..4 from one sin/cos pair.
    const double c1h = std::cos(hp_bar), s1h = std::sin(hp_bar);
    const double c2h = c1h * c1h - s1h * s1h, s2h = 2.0 * s1h * c1h;
    const double c3h = c2h * c1h - s2h * s1h, s3h = s2h * c1h + c2h * s1h;
    const double c4h = c2h * c2h - s2h * s2h, s4h = 2.0 * s2h * c2h;
    auto shifted = [](double c, double s, double phase_deg) {
        return c * std::cos(phase_deg * kDeg) - s * std::sin(phase_deg * kDeg);
    };
    const double t = 1.0 - 0.17 * shifted(c1h, s1h, -30.0) + 0.24 * c2h + 0.32 * shifted(c3h, s3h, 6.0) -
                     0.20 * shifted(c4h, s4h, -63.0);
    const double z = (hp_bar - 275.0 * kDeg) / (25.0 * kDeg);
    const double d_theta = 30.0 * kDeg * std::exp(-z * z);
    const double cp_bar7 = pow7(cp_bar);
    const double r_c = 2.0 * std::sqrt(cp_bar7 / (cp_bar7 + kPow25To7));
    const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
    const double s_l = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
    const double s_c = 1.0 + 0.045 * cp_bar;
    const double s_h = 1.0 + 0.015 * cp_bar * t;
    const double r_t = -std::sin(2.0 * d_theta) * r_c;

    const double tl = dL / s_l;
    const double tc = dC / s_c;
    const double th = dH / s_h;
    return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + r_t * tc * th));
}

double ciede2000(const LchColor& x, const LchColor& y) noexcept {
    return ciede2000(to_lab(x), to_lab(y));
}

std::string to_hex(const RgbColor& rgb) {
    auto q = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", q(rgb.r), q(rgb.g), q(rgb.b));
    return buf;
}

std::string to_hex(const LchColor& lch) { return to_hex(to_rgb(lch)); }

RgbColor from_hex(std::string_view hex) {
    if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
    if (hex.size() != 6) throw ParseError("hex color must have 6 digits: '" + std::string(hex) + "'");
    auto nibble = [&](char ch) {
        if (ch >= '0' && ch <= '9') return ch - '0';
        if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
        if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
        throw ParseError("invalid hex digit in '" + std::string(hex) + "'");
    };
    auto channel = [&](int i) { return (nibble(hex[i]) * 16 + nibble(hex[i + 1])) / 255.0; };
    return {channel(0), channel(2), channel(4)};
}

} // namespace dyncolor
