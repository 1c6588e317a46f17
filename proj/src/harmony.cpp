#include "dyncolor/harmony.hpp"

#include "dyncolor/errors.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace dyncolor {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Edges {
    double lo, hi, mid, next_lo; // next_lo may exceed 360
};

// Sector edges in increasing order of lower edge, with the midpoint of the
// gap that follows each sector.
std::vector<Edges> sector_edges(const HueTemplate& t) {
    std::vector<Edges> e;
    for (const auto& s : t.sectors) {
        const double lo = normalize_hue(s.center - s.width / 2.0);
        e.push_back({lo, lo + s.width, 0.0, 0.0});
    }
    std::sort(e.begin(), e.end(), [](const Edges& a, const Edges& b) { return a.lo < b.lo; });
    for (std::size_t k = 0; k < e.size(); ++k) {
        e[k].next_lo = k + 1 < e.size() ? e[k + 1].lo : e[0].lo + 360.0;
        e[k].mid = 0.5 * (e[k].hi + e[k].next_lo);
    }
    return e;
}

// normalize_hue without fmod, for arguments a few turns from [0, 360).
double wrap360(double x) noexcept {
    while (x < 0.0) x += 360.0;
    while (x >= 360.0) x -= 360.0;
    return x;
}

// Distance and right-derivative of the single-hue distance at phi.
std::pair<double, double> distance_and_slope(double phi, const std::vector<Edges>& e) {
    double x = phi;
    while (x < e[0].lo) x += 360.0;
    while (x >= e[0].lo + 360.0) x -= 360.0;
    std::size_t k = e.size() - 1;
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        if (x < e[i + 1].lo) {
            k = i;
            break;
        }
    if (x < e[k].hi) return {0.0, 0.0};
    if (x < e[k].mid) return {x - e[k].hi, 1.0};
    return {e[k].next_lo - x, -1.0};
}

} // namespace

const std::vector<HueTemplate>& matsuda_templates() {
    static const std::vector<HueTemplate> templates = {
        {"i", {{0.0, 18.0}}, false},
        {"V", {{0.0, 93.6}}, false},
        {"L", {{0.0, 18.0}, {90.0, 79.2}}, false},
        {"I", {{0.0, 18.0}, {180.0, 18.0}}, false},
        {"T", {{0.0, 180.0}}, false},
        {"Y", {{0.0, 93.6}, {180.0, 18.0}}, false},
        {"X", {{0.0, 93.6}, {180.0, 93.6}}, false},
        {"N", {}, true},
    };
    return templates;
}

double sector_distance(double hue, const HueTemplate& t, double rotation) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : t.sectors) {
        const double c = normalize_hue(s.center + rotation);
        const double d = hue_distance(hue, c) - s.width / 2.0;
        best = std::min(best, std::max(d, 0.0));
    }
    return best;
}

namespace {

struct Kink {
    double a;
    double delta;
    friend auto operator<=>(const Kink&, const Kink&) = default;
};

// F(a) = sum_i dist(theta_i + a). Kinks of the i-th term sit where
// theta_i + a hits an edge: +1 at hi, -2 at mid, +1 at lo. A kink at a = 0
// is already part of the starting slope.
template <class Out>
void kinks_of(double th, const std::vector<Edges>& edges, Out out) {
    for (const auto& e : edges)
        for (const auto& [edge, delta] : {std::pair{e.hi, 1.0}, std::pair{e.mid, -2.0}, std::pair{e.lo, 1.0}}) {
            const double a = wrap360(edge - th);
            if (a > 0.0) out(Kink{a, delta});
        }
}

// Value and right-slope of F at a = 0, summed over descending hues so every
// caller accumulates in the same order.
std::pair<double, double> start_of(std::span<const double> hues, const std::vector<Edges>& edges) {
    std::vector<double> desc(hues.begin(), hues.end());
    std::sort(desc.begin(), desc.end(), std::greater<>());
    double value = 0.0, slope = 0.0;
    for (double th : desc) {
        const auto [d, s] = distance_and_slope(th, edges);
        value += d;
        slope += s;
    }
    return {value, slope};
}

HueFit sweep(double value, double slope, const std::vector<Kink>& kinks) {
    HueFit best{value, 0.0};
    double at = 0.0;
    for (const auto& k : kinks) {
        value += slope * (k.a - at);
        at = k.a;
        slope += k.delta;
        if (value < best.difference) best = {value, k.a};
    }
    // The difference from one kink to the next is built incrementally; the
    // rounding it accumulates is far below anything that matters for the
    // harmony score. Snap that residue so a perfect fit reports exactly 0.
    if (best.difference < 1e-9) best.difference = 0.0;
    // Rotating the hues by a equals rotating the template by -a.
    best.rotation = normalize_hue(-best.rotation);
    return best;
}

bool covers_circle(const HueTemplate& t) {
    double total = 0.0;
    for (const auto& s : t.sectors) total += s.width;
    return total >= 360.0;
}

// Chromatic templates not contained in another one (first of equals kept).
std::vector<const HueTemplate*> undominated(std::span<const HueTemplate> templates) {
    std::vector<const HueTemplate*> out;
    for (std::size_t i = 0; i < templates.size(); ++i) {
        if (templates[i].achromatic) continue;
        bool dominated = false;
        for (std::size_t j = 0; j < templates.size() && !dominated; ++j) {
            if (j == i || templates[j].achromatic || !template_contains(templates[j], templates[i])) continue;
            dominated = !template_contains(templates[i], templates[j]) || j < i;
        }
        if (!dominated) out.push_back(&templates[i]);
    }
    return out;
}

} // namespace

bool template_contains(const HueTemplate& outer, const HueTemplate& inner) {
    if (outer.achromatic || inner.achromatic || inner.sectors.empty()) return false;
    for (const auto& s : inner.sectors) {
        const bool inside = std::any_of(outer.sectors.begin(), outer.sectors.end(), [&](const HueSector& o) {
            return hue_distance(s.center, o.center) + s.width / 2.0 <= o.width / 2.0 + 1e-12;
        });
        if (!inside) return false;
    }
    return true;
}

HueFit hue_difference(std::span<const double> hues, const HueTemplate& t) {
    if (t.sectors.empty()) throw ArgumentError("hue_difference: template '" + t.name + "' has no sectors");
    if (hues.empty() || covers_circle(t)) return {0.0, 0.0};
    const auto edges = sector_edges(t);
    const auto [value, slope] = start_of(hues, edges);
    std::vector<Kink> kinks;
    kinks.reserve(hues.size() * edges.size() * 3);
    for (double th : hues) kinks_of(th, edges, [&](Kink k) { kinks.push_back(k); });
    std::sort(kinks.begin(), kinks.end());
    return sweep(value, slope, kinks);
}

double hue_difference(const Palette& p, const HueTemplate& t) {
    if (t.achromatic) {
        for (const auto& c : p.colors())
            if (c.C >= kAchromaticChroma) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    std::vector<double> hues;
    hues.reserve(p.size());
    for (const auto& c : p.colors()) hues.push_back(hsv_hue(c));
    return hue_difference(hues, t).difference;
}

namespace {

double harmony_from(double best, std::size_t m) {
    if (!std::isfinite(best)) return 0.0;
    return std::clamp(1.0 - best / (static_cast<double>(m) * 90.0), 0.0, 1.0);
}

bool all_grey(std::span<const double> chromas, std::size_t m) {
    return chromas.size() == m &&
           std::all_of(chromas.begin(), chromas.end(), [](double c) { return c < kAchromaticChroma; });
}

} // namespace

double hue_harmony(std::span<const double> hues, std::span<const double> chromas,
                   std::span<const HueTemplate> templates) {
    if (templates.empty()) throw ArgumentError("hue_harmony: no templates");
    const std::size_t m = hues.size();
    if (m == 0) return 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : templates)
        if (t.achromatic && all_grey(chromas, m)) best = 0.0;
    for (const HueTemplate* t : undominated(templates)) best = std::min(best, hue_difference(hues, *t).difference);
    return harmony_from(best, m);
}

struct HueHarmonyTracker::State {
    const HueTemplate* t;
    bool full;
    std::vector<Edges> edges;
    std::vector<Kink> kinks;
};

HueHarmonyTracker::HueHarmonyTracker(std::span<const HueTemplate> templates, std::span<const double> hues) {
    if (templates.empty()) throw ArgumentError("hue_harmony: no templates");
    for (const auto& t : templates) achromatic_ = achromatic_ || t.achromatic;
    for (const HueTemplate* t : undominated(templates)) {
        if (t->sectors.empty()) throw ArgumentError("hue_difference: template '" + t->name + "' has no sectors");
        State st{t, covers_circle(*t), sector_edges(*t), {}};
        for (double th : hues) kinks_of(th, st.edges, [&](Kink k) { st.kinks.push_back(k); });
        std::sort(st.kinks.begin(), st.kinks.end());
        states_.push_back(std::move(st));
    }
}

HueHarmonyTracker::HueHarmonyTracker(const HueHarmonyTracker&) = default;
HueHarmonyTracker& HueHarmonyTracker::operator=(const HueHarmonyTracker&) = default;
HueHarmonyTracker::~HueHarmonyTracker() = default;

void HueHarmonyTracker::replace(double old_hue, double new_hue) {
    if (old_hue == new_hue) return;
    for (auto& st : states_) {
        kinks_of(old_hue, st.edges, [&](Kink k) {
            const auto it = std::lower_bound(st.kinks.begin(), st.kinks.end(), k);
            if (it == st.kinks.end() || *it != k) throw ArgumentError("HueHarmonyTracker: unknown hue");
            st.kinks.erase(it);
        });
        kinks_of(new_hue, st.edges,
                 [&](Kink k) { st.kinks.insert(std::upper_bound(st.kinks.begin(), st.kinks.end(), k), k); });
    }
}

double HueHarmonyTracker::harmony(std::span<const double> hues, std::span<const double> chromas) const {
    const std::size_t m = hues.size();
    if (m == 0) return 1.0;
    double best = achromatic_ && all_grey(chromas, m) ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& st : states_) {
        if (st.full) {
            best = std::min(best, 0.0);
            continue;
        }
        const auto [value, slope] = start_of(hues, st.edges);
        best = std::min(best, sweep(value, slope, st.kinks).difference);
    }
    return harmony_from(best, m);
}

double hue_harmony(const Palette& p, std::span<const HueTemplate> templates) {
    std::vector<double> hues, chromas;
    for (const auto& c : p.colors()) {
        hues.push_back(hsv_hue(c));
        chromas.push_back(c.C);
    }
    return hue_harmony(hues, chromas, templates);
}

FitLine fit_cl_line(std::span<const LchColor> colors) {
    FitLine line;
    const std::size_t m = colors.size();
    if (m == 0) return line;
    for (const auto& c : colors) {
        line.center_c += c.C;
        line.center_l += c.L;
    }
    line.center_c /= static_cast<double>(m);
    line.center_l /= static_cast<double>(m);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& c : colors) {
        const double dx = c.C - line.center_c, dy = c.L - line.center_l;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    // Principal axis of the 2x2 scatter matrix.
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    line.dir_c = std::cos(theta);
    line.dir_l = std::sin(theta);
    if (std::abs(line.dir_c) < 1e-15) {
        line.dir_c = 0.0;
        line.dir_l = 1.0;
    }
    line.deviations.reserve(m);
    for (const auto& c : colors) {
        const double dx = c.C - line.center_c, dy = c.L - line.center_l;
        line.deviations.push_back(std::abs(dx * line.dir_l - dy * line.dir_c));
    }
    return line;
}

ClHarmony cl_harmony(std::span<const LchColor> colors) {
    ClHarmony out;
    out.line = fit_cl_line(colors);
    const std::size_t m = colors.size();
    if (m <= 2) return out;
    double penalty = 0.0;
    for (double md : out.line.deviations) penalty += std::max(md - kClTolerance, 0.0);
    out.e_lc = std::clamp(1.0 - penalty / (static_cast<double>(m) * kClFloorPerColor), 0.0, 1.0);
    return out;
}

ClHarmony cl_harmony(const Palette& p) { return cl_harmony(std::span<const LchColor>(p.colors())); }

OuHarmonyCoefficients OuHarmonyCoefficients::from_json(const nlohmann::json& j) {
    OuHarmonyCoefficients k;
    if (!j.is_object()) throw ConfigError("pair harmony coefficients must be an object");
    const std::pair<const char*, double*> fields[] = {
        {"hc_offset", &k.hc_offset},   {"hc_gain", &k.hc_gain},     {"hc_bias", &k.hc_bias},
        {"hc_slope", &k.hc_slope},     {"hc_chroma_scale", &k.hc_chroma_scale},
        {"hl_offset", &k.hl_offset},   {"hl_gain", &k.hl_gain},     {"hl_bias", &k.hl_bias},
        {"hl_slope", &k.hl_slope},     {"hdl_offset", &k.hdl_offset}, {"hdl_gain", &k.hdl_gain},
        {"hdl_bias", &k.hdl_bias},     {"hdl_slope", &k.hdl_slope}, {"ec_offset", &k.ec_offset},
        {"ec_gain", &k.ec_gain},       {"ec_bias", &k.ec_bias},     {"ec_slope", &k.ec_slope},
        {"hs_offset", &k.hs_offset},   {"hs_gain1", &k.hs_gain1},   {"hs_gain2", &k.hs_gain2},
        {"ey_l_gain", &k.ey_l_gain},   {"ey_offset", &k.ey_offset},
    };
    for (const auto& [key, dst] : fields) {
        if (!j.contains(key)) continue;
        if (!j[key].is_number()) throw ConfigError(std::string("pair harmony coefficient '") + key + "' is not a number");
        *dst = j[key].get<double>();
    }
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(std::begin(fields), std::end(fields),
                                       [&](const auto& f) { return key == f.first; });
        if (!known) throw ConfigError("unknown pair harmony coefficient '" + key + "'");
    }
    if (k.hc_chroma_scale <= 0.0) throw ConfigError("hc_chroma_scale must be positive");
    return k;
}

nlohmann::json OuHarmonyCoefficients::to_json() const {
    return {{"hc_offset", hc_offset},   {"hc_gain", hc_gain},     {"hc_bias", hc_bias},
            {"hc_slope", hc_slope},     {"hc_chroma_scale", hc_chroma_scale},
            {"hl_offset", hl_offset},   {"hl_gain", hl_gain},     {"hl_bias", hl_bias},
            {"hl_slope", hl_slope},     {"hdl_offset", hdl_offset}, {"hdl_gain", hdl_gain},
            {"hdl_bias", hdl_bias},     {"hdl_slope", hdl_slope}, {"ec_offset", ec_offset},
            {"ec_gain", ec_gain},       {"ec_bias", ec_bias},     {"ec_slope", ec_slope},
            {"hs_offset", hs_offset},   {"hs_gain1", hs_gain1},   {"hs_gain2", hs_gain2},
            {"ey_l_gain", ey_l_gain},   {"ey_offset", ey_offset}};
}

double OuPairHarmony::score(const LchColor& x, const LchColor& y) const {
    const LabColor a = to_lab(x), b = to_lab(y);
    const double d_l = a.L - b.L, d_a = a.a - b.a, d_b = a.b - b.b;
    const double d_c = x.C - y.C;
    // Squared CIELAB hue difference, dH^2 = dE^2 - dL^2 - dC^2.
    const double d_h2 = std::max(d_a * d_a + d_b * d_b - d_c * d_c, 0.0);
    const double chroma_diff = std::sqrt(d_h2 + std::pow(d_c / k_.hc_chroma_scale, 2));
    const double h_c = k_.hc_offset + k_.hc_gain * std::tanh(k_.hc_bias - k_.hc_slope * chroma_diff);

    const double h_lsum = k_.hl_offset + k_.hl_gain * std::tanh(k_.hl_bias + k_.hl_slope * (x.L + y.L));
    const double h_dl = k_.hdl_offset + k_.hdl_gain * std::tanh(k_.hdl_bias + k_.hdl_slope * std::abs(d_l));

    auto h_sy = [&](const LchColor& c) {
        const double e_c = k_.ec_offset + k_.ec_gain * std::tanh(k_.ec_bias + k_.ec_slope * c.C);
        const double h_s = k_.hs_offset + k_.hs_gain1 * std::sin((c.h + 50.0) * kDeg) +
                           k_.hs_gain2 * std::sin((2.0 * c.h + 90.0) * kDeg);
        const double u = (90.0 - c.h) / 10.0;
        const double e_y = ((k_.ey_l_gain * c.L + k_.ey_offset) / 10.0) * std::exp(u - std::exp(u));
        return e_c * (h_s + e_y);
    };
    return h_c + h_lsum + h_dl + h_sy(x) + h_sy(y);
}

std::shared_ptr<const PairHarmonyScorer> default_pair_harmony() {
    static const auto scorer = std::make_shared<const OuPairHarmony>();
    return scorer;
}

std::shared_ptr<const PairHarmonyScorer> pair_harmony_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("scorer") || !j["scorer"].is_string())
        throw ConfigError("pair harmony config needs a string field 'scorer'");
    const auto kind = j["scorer"].get<std::string>();
    if (kind == "null") return std::make_shared<const NullPairHarmony>();
    if (kind == "ou") {
        const auto k = j.contains("coefficients") ? OuHarmonyCoefficients::from_json(j["coefficients"])
                                                  : OuHarmonyCoefficients{};
        return std::make_shared<const OuPairHarmony>(k);
    }
    throw ConfigError("unknown pair harmony scorer '" + kind + "'");
}

std::shared_ptr<const PairHarmonyScorer> load_pair_harmony(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("pair harmony config: cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("pair harmony config: malformed JSON at byte " + std::to_string(e.byte));
    }
    return pair_harmony_from_json(j);
}

double pair_harmony(const LchColor& x, const LchColor& y, const PairHarmonyScorer& scorer) {
    return scorer.score(x, y);
}

} // namespace dyncolor
