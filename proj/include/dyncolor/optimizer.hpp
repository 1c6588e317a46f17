#pragma once

#include "dyncolor/objectives.hpp"
#include "dyncolor/palette.hpp"
#include "dyncolor/range.hpp"
#include "dyncolor/rng.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dyncolor {

struct OptimizerConfig {
    double gamma1 = 0.1;
    double gamma2 = 2.0;
    /// <= 0 selects the automatic start: the median |delta| of 100 random
    /// moves is accepted with probability 0.8.
    double initial_temperature = 0.0;
    double cooling_rate = 0.98;
    int iterations_per_temperature = 200;
    double min_temperature = 1e-3;
    double move_scale = 5.0;       // sigma of the Gaussian step in L, C and h (degrees)
    double swap_probability = 0.2;
    int convergence_window = 25;   // temperature steps
    double convergence_epsilon = 1e-4;
    double init_min_distance = 10.0;
    int init_max_rejections = 5000;
    std::uint64_t seed = 0;

    /// Throws ConfigError.
    void validate() const;
    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; unknown keys are a ConfigError.
    static OptimizerConfig from_json(const nlohmann::json& j);
};

enum class Stage { d, dh, dhsd };

std::string to_string(Stage s);

struct StageReport {
    Stage stage = Stage::d;
    std::size_t accepted_moves = 0;
    std::size_t rejected_moves = 0;
    std::size_t constraint_rejections = 0; // subset of rejected_moves
    int temperature_steps = 0;
    double initial_temperature = 0.0;
    double weight = 0.0; // alpha for D+H, beta for D+H+SD, 0 for D
    double best_value = 0.0;
    ObjectiveBreakdown breakdown;

    nlohmann::json to_json() const;
};

struct TraceRow {
    Stage stage;
    int step;
    double temperature;
    double best_value;
    double acceptance_rate;
};

/// Writes "stage,step,temperature,best_value,acceptance_rate" rows.
std::string trace_csv(const std::vector<TraceRow>& rows);

/// Extra move-rejection test on candidate palettes (true = allowed).
using PaletteConstraint = std::function<bool(const Palette&)>;

/// One neighbor of p: with probability 1 - swap_probability a random color
/// takes a Gaussian step and is pulled back into its range (up to 8 redraws,
/// else left unchanged); otherwise two colors swap classes when both stay
/// range-feasible.
Palette propose_move(const Palette& p, const FeasibleRangeSet& ranges, Rng& rng, double move_scale,
                     double swap_probability = 0.2);

/// clamp(current / max, 0, 1). Throws ArgumentError for max <= 0.
double weight_for_new_goal(double current_value, double max_value);

/// Stage objective on whole palettes; nullopt marks a rejected candidate.
using StageObjective = std::function<std::optional<double>(const Palette&)>;

struct AnnealResult {
    Palette palette;
    StageReport report;
};

/// Simulated annealing maximizing `objective` from p0, returning the best
/// palette seen. Throws ArgumentError when p0 is out of range or rejected.
AnnealResult anneal_stage(const Palette& p0, const StageObjective& objective, const OptimizerConfig& cfg,
                          const FeasibleRangeSet& ranges, Rng& rng, Stage stage = Stage::d,
                          std::vector<TraceRow>* trace = nullptr);

struct OptimizeOptions {
    PaletteConstraint constraint;     // checked on every candidate
    std::optional<Palette> initial;   // skips dart-throw initialization
    bool harmony_stage = true;
    bool spatial_stage = true;        // only when the context has a layout
    std::vector<TraceRow>* trace = nullptr;
};

struct OptimizeResult {
    Palette palette;
    std::vector<StageReport> reports;
    double alpha = 0.0;
    double beta = 0.0;
    NormalizationBounds bounds;
    ObjectiveBreakdown breakdown; // final palette, normalized with `bounds`
};

/// Three-stage continuation: D, then D + alpha*H, then D + alpha*H + beta*SD,
/// each warm-started from the previous result. From stage 2 on, moves that
/// break the normalized priority chain are rejected. The normalization of
/// each term is anchored at its value when it enters the optimization and at
/// its reachable maximum, so every stage starts inside the chain.
/// Throws RangeTooSmallError when a class's range cannot be sampled.
OptimizeResult optimize(const std::vector<std::string>& classes, const FeasibleRangeSet& ranges,
                        const ObjectiveContext& ctx, const OptimizerConfig& cfg, const OptimizeOptions& options = {});

/// Dart-throw initialization: one color per class inside its range, drawn
/// with the configured minimum distance, halved until every class is placed.
Palette initial_palette(const std::vector<std::string>& classes, const FeasibleRangeSet& ranges,
                        const OptimizerConfig& cfg, Rng& rng);

} // namespace dyncolor
