#pragma once

#include "dyncolor/colorspace.hpp"
#include "dyncolor/palette.hpp"

#include "json.hpp"

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dyncolor {

struct HueSector {
    double center = 0.0; // degrees, at rotation 0
    double width = 0.0;  // degrees, (0, 360]
};

/// A rotatable hue-wheel pattern. The achromatic template has no sectors and
/// only matches palettes whose colors all have chroma below
/// kAchromaticChroma.
struct HueTemplate {
    std::string name;
    std::vector<HueSector> sectors;
    bool achromatic = false;
};

inline constexpr double kAchromaticChroma = 10.0;

/// i, V, L, I, T, Y, X and N, with the usual widths (18, 93.6, 79.2, 180 degrees).
const std::vector<HueTemplate>& matsuda_templates();

/// Angular distance from a hue to the nearest sector of a template rotated
/// by `rotation` degrees; 0 inside a sector.
double sector_distance(double hue, const HueTemplate& t, double rotation = 0.0);

/// min over rotations of the summed sector distances of `hues` (HSV, degrees).
///
/// The sum is piecewise linear in the rotation, so it is minimized exactly by
/// sweeping its kinks in order; the result carries the optimal rotation.
struct HueFit {
    double difference = 0.0;
    double rotation = 0.0;
};
HueFit hue_difference(std::span<const double> hues, const HueTemplate& t);

/// Palette overload: uses HSV hues; the achromatic template yields 0 when
/// every chroma is below kAchromaticChroma and +infinity otherwise.
double hue_difference(const Palette& p, const HueTemplate& t);

/// 1 - (min template difference) / (m * 90), clamped to [0,1].
/// `chromas` only matters for the achromatic template.
double hue_harmony(std::span<const double> hues, std::span<const double> chromas,
                   std::span<const HueTemplate> templates);
double hue_harmony(const Palette& p, std::span<const HueTemplate> templates);

/// True when every sector of `inner` lies inside a sector of `outer` at the
/// same rotation, so outer's hue difference never exceeds inner's. Such
/// inner templates are skipped when taking the minimum.
bool template_contains(const HueTemplate& outer, const HueTemplate& inner);

/// hue_harmony kept current while single hues change, for the annealer.
/// Holds the sorted kinks of each template and patches them per move
/// instead of re-sorting; results equal hue_harmony exactly.
class HueHarmonyTracker {
public:
    HueHarmonyTracker(std::span<const HueTemplate> templates, std::span<const double> hues);
    HueHarmonyTracker(const HueHarmonyTracker&);
    HueHarmonyTracker& operator=(const HueHarmonyTracker&);
    ~HueHarmonyTracker();

    /// One color's hue moved from old_hue to new_hue. Swaps need no call.
    void replace(double old_hue, double new_hue);
    /// `hues` must be the current multiset of hues.
    double harmony(std::span<const double> hues, std::span<const double> chromas) const;

private:
    struct State;
    std::vector<State> states_;
    bool achromatic_ = false;
};

/// Total-least-squares line through (C, L) points, stored as centroid plus
/// unit direction so that vertical lines need no special case.
struct FitLine {
    double center_c = 0.0;
    double center_l = 0.0;
    double dir_c = 1.0;
    double dir_l = 0.0;
    std::vector<double> deviations; // orthogonal distance of each color

    bool vertical() const noexcept { return dir_c == 0.0; }
    double slope() const noexcept { return dir_l / dir_c; }
    double intercept() const noexcept { return center_l - slope() * center_c; }
};

inline constexpr double kClTolerance = 15.0;
inline constexpr double kClFloorPerColor = 75.0; // sqrt(60^2 + 45^2)

FitLine fit_cl_line(std::span<const LchColor> colors);

struct ClHarmony {
    double e_lc = 1.0;
    FitLine line;
};

/// 1 - sum(max(MD_i - 15, 0)) / (m * 75), clamped; 1 for m <= 2.
ClHarmony cl_harmony(std::span<const LchColor> colors);
ClHarmony cl_harmony(const Palette& p);

/// Two-color harmony score P(x, y). Implementations must be symmetric.
class PairHarmonyScorer {
public:
    virtual ~PairHarmonyScorer() = default;
    virtual double score(const LchColor& x, const LchColor& y) const = 0;
    virtual std::string name() const = 0;
};

class NullPairHarmony final : public PairHarmonyScorer {
public:
    double score(const LchColor&, const LchColor&) const override { return 0.0; }
    std::string name() const override { return "null"; }
};

/// Coefficients of the chromatic-difference / lightness / hue-effect pair
/// harmony model. Defaults are the published two-color model values.
struct OuHarmonyCoefficients {
    // H_C = c0 + c1 * tanh(c2 - c3 * dC), dC = sqrt(dH^2 + (dC*/chroma_scale)^2)
    double hc_offset = 0.04, hc_gain = 0.53, hc_bias = 0.8, hc_slope = 0.045, hc_chroma_scale = 1.46;
    // H_Lsum = l0 + l1 * tanh(l2 + l3 * (L1 + L2))
    double hl_offset = 0.28, hl_gain = 0.54, hl_bias = -3.88, hl_slope = 0.029;
    // H_dL = d0 + d1 * tanh(d2 + d3 * |L1 - L2|)
    double hdl_offset = 0.14, hdl_gain = 0.15, hdl_bias = -2.0, hdl_slope = 0.2;
    // E_C = e0 + e1 * tanh(e2 + e3 * C)
    double ec_offset = 0.5, ec_gain = 0.5, ec_bias = -2.0, ec_slope = 0.5;
    // H_S = s0 + s1 * sin(h + 50) + s2 * sin(2h + 90)
    double hs_offset = -0.08, hs_gain1 = -0.14, hs_gain2 = -0.07;
    // E_Y = ((y0 * L + y1) / 10) * exp((90 - h)/10 - exp((90 - h)/10))
    double ey_l_gain = 0.22, ey_offset = -12.8;

    static OuHarmonyCoefficients from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

class OuPairHarmony final : public PairHarmonyScorer {
public:
    explicit OuPairHarmony(OuHarmonyCoefficients coefficients = {}) : k_(coefficients) {}
    double score(const LchColor& x, const LchColor& y) const override;
    std::string name() const override { return "ou"; }
    const OuHarmonyCoefficients& coefficients() const noexcept { return k_; }

private:
    OuHarmonyCoefficients k_;
};

std::shared_ptr<const PairHarmonyScorer> default_pair_harmony();

/// {"scorer": "null"} or {"scorer": "ou", "coefficients": {...}}. Throws ConfigError.
std::shared_ptr<const PairHarmonyScorer> pair_harmony_from_json(const nlohmann::json& j);
std::shared_ptr<const PairHarmonyScorer> load_pair_harmony(const std::filesystem::path& path);

double pair_harmony(const LchColor& x, const LchColor& y, const PairHarmonyScorer& scorer);

} // namespace dyncolor
