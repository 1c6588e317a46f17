#pragma once

#include "dyncolor/colorspace.hpp"
#include "dyncolor/harmony.hpp"
#include "dyncolor/hierarchy.hpp"
#include "dyncolor/naming.hpp"
#include "dyncolor/palette.hpp"

#include "json.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dyncolor {

inline constexpr double kDiscernibleThreshold = 10.0;

/// min pairwise CIEDE2000 + min(min pairwise - 10, 0). Throws ArgumentError for m < 2.
double perceptual_difference_score(std::span<const LchColor> colors);
double perceptual_difference_score(const Palette& p);

/// gamma1 * E_PD + gamma2 * E_ND.
double discriminability(const Palette& p, const NameModel& model, double gamma1 = 0.1, double gamma2 = 2.0);

enum class SpatialMode { difference, similarity };

std::string to_string(SpatialMode mode);
SpatialMode spatial_mode_from_string(const std::string& s);

/// The spatial score collapsed onto class pairs: E_SD = sum over a <= b of
/// pair[a][b] * f(c_a, c_b), where pair[a][b] sums 1 / (|X| |Omega_i| d_ij)
/// over directed neighbor edges between classes a and b (both directions).
struct SpatialWeights {
    std::size_t classes = 0;
    std::vector<double> pair; // row-major, only a <= b is used
    double cross_total = 0.0; // sum over a < b

    double at(std::size_t a, std::size_t b) const { return a <= b ? pair[a * classes + b] : pair[b * classes + a]; }
};

/// Every sample label must be one of `classes`; throws ArgumentError otherwise.
SpatialWeights spatial_weights(const SpatialLayout& layout, const std::vector<std::string>& classes);

/// Similarity of palette classes a and b, looked up by id in `sim`.
std::vector<double> similarity_matrix(const ClassSimilarity& sim, const std::vector<std::string>& classes);

/// Direct per-sample evaluation. `similarity` must be given in similarity mode.
double spatial_score(const Palette& p, const SpatialLayout& layout, SpatialMode mode,
                     const PairHarmonyScorer& scorer, const ClassSimilarity* similarity = nullptr);

/// Per-term [lo, hi] used to put E_D, E_H and E_SD on a common [0,1] scale
/// for the priority comparison.
struct NormalizationBounds {
    double d_lo = 0.0, d_hi = 12.0;
    double h_lo = 0.0, h_hi = 2.0;
    double sd_lo = 0.0, sd_hi = 0.0;
    bool has_sd = false; // without a spatial term normalized_sd is 0

    /// (x - lo) / (hi - lo), unclamped. A collapsed interval (hi <= lo)
    /// means no progress is possible; values at or above lo then count as 1.
    static double progress(double x, double lo, double hi) noexcept;

    nlohmann::json to_json() const;
    static NormalizationBounds from_json(const nlohmann::json& j);
};

struct ObjectiveBreakdown {
    double e_pd = 0.0, e_nd = 0.0, e_d = 0.0;
    double e_hue = 0.0, e_lc = 0.0, e_h = 0.0;
    double e_sd = 0.0;
    double normalized_d = 0.0, normalized_h = 0.0, normalized_sd = 0.0;

    nlohmann::json to_json() const;
    static ObjectiveBreakdown from_json(const nlohmann::json& j);
};

/// Everything the objective needs besides the palette. Immutable once built
/// and shared between concurrent evaluations.
struct ObjectiveContext {
    std::shared_ptr<const NameModel> names;
    std::vector<HueTemplate> templates = matsuda_templates();
    std::shared_ptr<const PairHarmonyScorer> pair_harmony = default_pair_harmony();
    double gamma1 = 0.1;
    double gamma2 = 2.0;
    /// Neighbor graph built, labels equal to palette class ids. Null disables E_SD.
    std::shared_ptr<const SpatialLayout> layout;
    SpatialMode mode = SpatialMode::difference;
    std::shared_ptr<const ClassSimilarity> similarity; // required in similarity mode
    std::optional<NormalizationBounds> bounds;         // analytic bounds when empty

    bool has_spatial() const noexcept { return layout != nullptr && !layout->samples.empty(); }
};

/// E_D max = gamma1 * 100 + gamma2, E_H max = 2, E_SD from the neighbor
/// graph with every cross-class pair at D = 100.
NormalizationBounds analytic_bounds(const ObjectiveContext& ctx, const Palette& p);

struct ObjectiveValue {
    double value = 0.0;
    ObjectiveBreakdown breakdown;
    bool priority_ok = false;
};

/// E_D + alpha * E_H + beta * E_SD, with normalized terms from ctx.bounds
/// (or analytic_bounds). For m = 1, E_PD = E_ND = 0.
ObjectiveValue total_objective(const Palette& p, const ObjectiveContext& ctx, double alpha, double beta);

/// Fills normalized fields from bounds (clamped to [0,1]).
void normalize(ObjectiveBreakdown& b, const NormalizationBounds& bounds) noexcept;
bool priority_holds(const ObjectiveBreakdown& b) noexcept;

/// Objective state with cached pairwise terms, for move-by-move evaluation.
/// A color change costs O(m) pairwise evaluations; a swap only permutes the
/// caches. Results equal total_objective on the current palette.
class IncrementalObjective {
public:
    IncrementalObjective(const ObjectiveContext& ctx, Palette p);

    const Palette& palette() const noexcept { return palette_; }
    std::size_t size() const noexcept { return palette_.size(); }

    void set_color(std::size_t i, const LchColor& c);
    void swap(std::size_t i, std::size_t j);
    /// Reverts the last set_color or swap (one level).
    void undo();

    /// Raw terms; normalized fields are left at 0. Skipped terms stay 0.
    ObjectiveBreakdown terms(bool with_harmony = true, bool with_spatial = true) const;
    double min_pairwise() const;

private:
    void fill_row(std::size_t i);

    struct Undo {
        enum Kind { none, set, swap } kind = none;
        std::size_t i = 0, j = 0;
        LchColor color;
        LabColor lab;
        double hue = 0.0;
        std::size_t bin = 0;
        std::vector<double> d_row, n_row, p_row;
    };

    const ObjectiveContext* ctx_;
    Palette palette_;
    std::size_t m_;
    std::vector<LabColor> lab_;
    std::vector<double> hue_;
    std::optional<HueHarmonyTracker> hue_tracker_;
    std::vector<std::size_t> bin_;
    std::vector<double> d_, n_, p_; // m x m, symmetric; p_ diagonal holds P(c, c)
    SpatialWeights weights_;
    std::vector<double> factor_; // per class pair: 1 or -s
    Undo undo_;
};

} // namespace dyncolor
