#include "dyncolor/optimizer.hpp"

#include "dyncolor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dyncolor {

using nlohmann::json;

void OptimizerConfig::validate() const {
    if (!(cooling_rate > 0.0 && cooling_rate < 1.0)) throw ConfigError("cooling_rate must be in (0,1)");
    if (!(min_temperature > 0.0)) throw ConfigError("min_temperature must be positive");
    if (initial_temperature > 0.0 && initial_temperature <= min_temperature)
        throw ConfigError("initial_temperature must exceed min_temperature");
    if (iterations_per_temperature < 1) throw ConfigError("iterations_per_temperature must be >= 1");
    if (!(move_scale > 0.0)) throw ConfigError("move_scale must be positive");
    if (!(swap_probability >= 0.0 && swap_probability <= 1.0)) throw ConfigError("swap_probability must be in [0,1]");
    if (convergence_window < 1) throw ConfigError("convergence_window must be >= 1");
    if (!(convergence_epsilon >= 0.0)) throw ConfigError("convergence_epsilon must be >= 0");
    if (!(init_min_distance > 0.0)) throw ConfigError("init_min_distance must be positive");
    if (init_max_rejections < 1) throw ConfigError("init_max_rejections must be >= 1");
}

json OptimizerConfig::to_json() const {
    return {{"gamma1", gamma1},
            {"gamma2", gamma2},
            {"initial_temperature", initial_temperature},
            {"cooling_rate", cooling_rate},
            {"iterations_per_temperature", iterations_per_temperature},
            {"min_temperature", min_temperature},
            {"move_scale", move_scale},
            {"swap_probability", swap_probability},
            {"convergence_window", convergence_window},
            {"convergence_epsilon", convergence_epsilon},
            {"init_min_distance", init_min_distance},
            {"init_max_rejections", init_max_rejections},
            {"seed", seed}};
}

OptimizerConfig OptimizerConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("optimizer config must be a JSON object");
    OptimizerConfig c;
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "gamma1") c.gamma1 = v.get<double>();
            else if (key == "gamma2") c.gamma2 = v.get<double>();
            else if (key == "initial_temperature") c.initial_temperature = v.get<double>();
            else if (key == "cooling_rate") c.cooling_rate = v.get<double>();
            else if (key == "iterations_per_temperature") c.iterations_per_temperature = v.get<int>();
            else if (key == "min_temperature") c.min_temperature = v.get<double>();
            else if (key == "move_scale") c.move_scale = v.get<double>();
            else if (key == "swap_probability") c.swap_probability = v.get<double>();
            else if (key == "convergence_window") c.convergence_window = v.get<int>();
            else if (key == "convergence_epsilon") c.convergence_epsilon = v.get<double>();
            else if (key == "init_min_distance") c.init_min_distance = v.get<double>();
            else if (key == "init_max_rejections") c.init_max_rejections = v.get<int>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else throw ConfigError("unknown optimizer option '" + key + "'");
        } catch (const json::exception&) {
            throw ConfigError("optimizer option '" + key + "' has the wrong type");
        }
    }
    c.validate();
    return c;
}

std::string to_string(Stage s) {
    switch (s) {
    case Stage::d: return "D";
    case Stage::dh: return "D+H";
    case Stage::dhsd: return "D+H+SD";
    }
    return "D";
}

json StageReport::to_json() const {
    return {{"stage", to_string(stage)},
            {"accepted_moves", accepted_moves},
            {"rejected_moves", rejected_moves},
            {"constraint_rejections", constraint_rejections},
            {"temperature_steps", temperature_steps},
            {"initial_temperature", initial_temperature},
            {"weight", weight},
            {"best_value", best_value},
            {"breakdown", breakdown.to_json()}};
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::ostringstream out;
    out.precision(10);
    out << "stage,step,temperature,best_value,acceptance_rate\n";
    for (const auto& r : rows)
        out << to_string(r.stage) << ',' << r.step << ',' << r.temperature << ',' << r.best_value << ','
            << r.acceptance_rate << '\n';
    return out.str();
}

double weight_for_new_goal(double current_value, double max_value) {
    if (!(max_value > 0.0)) throw ArgumentError("weight_for_new_goal: max_value must be positive");
    return std::clamp(current_value / max_value, 0.0, 1.0);
}

namespace {

struct Move {
    enum Kind { none, perturb, swap } kind = none;
    std::size_t i = 0, j = 0;
    LchColor color;
};

Move draw_move(const Palette& p, const FeasibleRangeSet& ranges, Rng& rng, double scale, double swap_probability) {
    const std::size_t m = p.size();
    Move mv;
    if (m >= 2 && swap_probability > 0.0 && rng.uniform() < swap_probability) {
        mv.i = rng.below(m);
        mv.j = rng.below(m - 1);
        if (mv.j >= mv.i) ++mv.j;
        if (ranges.at(mv.i).contains(p.color(mv.j)) && ranges.at(mv.j).contains(p.color(mv.i))) mv.kind = Move::swap;
        return mv;
    }
    mv.i = rng.below(m);
    const auto& range = ranges.at(mv.i);
    const auto& box = range.box();
    const LchColor c0 = p.color(mv.i);
    for (int attempt = 0; attempt < 8; ++attempt) {
        LchColor c{c0.L + scale * rng.normal(), c0.C + scale * rng.normal(), c0.h + scale * rng.normal()};
        c.L = std::clamp(c.L, box.l_lo, box.l_hi);
        c.C = std::clamp(c.C, box.c_lo, box.c_hi);
        c.h = normalize_hue(c.h);
        if (range.contains(c)) {
            mv.kind = Move::perturb;
            mv.color = c;
            return mv;
        }
    }
    return mv;
}

// What the annealing loop needs from a stage: the current palette, reversible
// moves and a value (nullopt when the current palette violates a constraint).
class Problem {
public:
    virtual ~Problem() = default;
    virtual const Palette& palette() const = 0;
    virtual void set(std::size_t i, const LchColor& c) = 0;
    virtual void swap(std::size_t i, std::size_t j) = 0;
    virtual void undo() = 0;
    virtual std::optional<double> value() = 0;
};

class PaletteProblem final : public Problem {
public:
    PaletteProblem(Palette p, const StageObjective& f) : cur_(std::move(p)), prev_(cur_), f_(f) {}
    const Palette& palette() const override { return cur_; }
    void set(std::size_t i, const LchColor& c) override {
        prev_ = cur_;
        cur_.set_color(i, c);
    }
    void swap(std::size_t i, std::size_t j) override {
        prev_ = cur_;
        cur_.swap_colors(i, j);
    }
    void undo() override { cur_ = prev_; }
    std::optional<double> value() override { return f_(cur_); }

private:
    Palette cur_, prev_;
    const StageObjective& f_;
};

using StateValue = std::function<std::optional<double>(const IncrementalObjective&)>;

class IncrementalProblem final : public Problem {
public:
    IncrementalProblem(IncrementalObjective& state, StateValue f) : state_(state), f_(std::move(f)) {}
    const Palette& palette() const override { return state_.palette(); }
    void set(std::size_t i, const LchColor& c) override { state_.set_color(i, c); }
    void swap(std::size_t i, std::size_t j) override { state_.swap(i, j); }
    void undo() override { state_.undo(); }
    std::optional<double> value() override { return f_(state_); }

private:
    IncrementalObjective& state_;
    StateValue f_;
};

bool apply(Problem& prob, const Move& mv) {
    switch (mv.kind) {
    case Move::none: return false;
    case Move::perturb: prob.set(mv.i, mv.color); return true;
    case Move::swap: prob.swap(mv.i, mv.j); return true;
    }
    return false;
}

void check_feasible(const Palette& p, const FeasibleRangeSet& ranges) {
    if (ranges.size() != p.size()) throw ArgumentError("anneal: range set does not match the palette");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!ranges.at(i).contains(p.color(i)))
            throw ArgumentError("anneal: color of class '" + p.class_id(i) + "' lies outside its range");
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

AnnealResult run_annealing(Problem& prob, const OptimizerConfig& cfg, const FeasibleRangeSet& ranges, Rng& rng,
                           Stage stage, std::vector<TraceRow>* trace) {
    check_feasible(prob.palette(), ranges);
    const auto start = prob.value();
    if (!start) throw ArgumentError("anneal: starting palette violates the stage constraints");

    AnnealResult out;
    out.report.stage = stage;
    double current = *start;

    double temperature = cfg.initial_temperature;
    if (temperature <= 0.0) {
        std::vector<double> deltas;
        for (int k = 0; k < 100; ++k) {
            const Move mv = draw_move(prob.palette(), ranges, rng, cfg.move_scale, cfg.swap_probability);
            if (!apply(prob, mv)) continue;
            if (const auto v = prob.value()) deltas.push_back(std::abs(*v - current));
            prob.undo();
        }
        const double med = median(deltas);
        temperature = med > 0.0 ? -med / std::log(0.8) : 10.0 * cfg.min_temperature;
        temperature = std::max(temperature, 10.0 * cfg.min_temperature);
    }
    out.report.initial_temperature = temperature;

    double best = current;
    out.palette = prob.palette();
    std::vector<double> best_history;
    int step = 0;
    for (; temperature > cfg.min_temperature; ++step) {
        std::size_t accepted = 0;
        for (int it = 0; it < cfg.iterations_per_temperature; ++it) {
            const Move mv = draw_move(prob.palette(), ranges, rng, cfg.move_scale, cfg.swap_probability);
            if (!apply(prob, mv)) {
                ++out.report.rejected_moves;
                continue;
            }
            const auto v = prob.value();
            if (!v) {
                prob.undo();
                ++out.report.rejected_moves;
                ++out.report.constraint_rejections;
                continue;
            }
            const double delta = *v - current;
            if (delta >= 0.0 || rng.uniform() < std::exp(delta / temperature)) {
                current = *v;
                ++accepted;
                if (current > best) {
                    best = current;
                    out.palette = prob.palette();
                }
            } else {
                prob.undo();
                ++out.report.rejected_moves;
            }
        }
        out.report.accepted_moves += accepted;
        if (trace)
            trace->push_back({stage, step, temperature, best,
                              static_cast<double>(accepted) / static_cast<double>(cfg.iterations_per_temperature)});
        best_history.push_back(best);
        const auto w = static_cast<std::size_t>(cfg.convergence_window);
        if (best_history.size() > w && best - best_history[best_history.size() - 1 - w] < cfg.convergence_epsilon) {
            ++step;
            break;
        }
        temperature *= cfg.cooling_rate;
    }
    out.report.temperature_steps = step;
    out.report.best_value = best;
    return out;
}

} // namespace

Palette propose_move(const Palette& p, const FeasibleRangeSet& ranges, Rng& rng, double move_scale,
                     double swap_probability) {
    const Move mv = draw_move(p, ranges, rng, move_scale, swap_probability);
    Palette out = p;
    if (mv.kind == Move::perturb) out.set_color(mv.i, mv.color);
    else if (mv.kind == Move::swap) out.swap_colors(mv.i, mv.j);
    return out;
}

AnnealResult anneal_stage(const Palette& p0, const StageObjective& objective, const OptimizerConfig& cfg,
                          const FeasibleRangeSet& ranges, Rng& rng, Stage stage, std::vector<TraceRow>* trace) {
    cfg.validate();
    PaletteProblem prob(p0, objective);
    return run_annealing(prob, cfg, ranges, rng, stage, trace);
}

Palette initial_palette(const std::vector<std::string>& classes, const FeasibleRangeSet& ranges,
                        const OptimizerConfig& cfg, Rng& rng) {
    if (classes.empty()) throw ArgumentError("optimize: no classes");
    if (ranges.size() != classes.size()) throw ArgumentError("optimize: range set does not match the classes");
    std::vector<LchColor> colors;
    std::vector<LabColor> lab;
    double min_distance = cfg.init_min_distance;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto& range = ranges.at(i);
        bool placed = false;
        while (!placed) {
            for (int rejections = 0; rejections < cfg.init_max_rejections && !placed;) {
                const auto c = range.sample(rng);
                if (!c) throw RangeTooSmallError(classes[i], "range of class '" + classes[i] + "' yields no color");
                const LabColor x = to_lab(*c);
                const bool far = std::all_of(lab.begin(), lab.end(),
                                             [&](const LabColor& y) { return ciede2000(x, y) >= min_distance; });
                if (far) {
                    colors.push_back(*c);
                    lab.push_back(x);
                    placed = true;
                } else {
                    ++rejections;
                }
            }
            // Crowded ranges: relax the spacing rather than fail; the
            // annealer spreads the colors afterwards.
            if (!placed) min_distance = min_distance > 1e-3 ? min_distance / 2.0 : 0.0;
        }
    }
    return Palette(classes, std::move(colors));
}

OptimizeResult optimize(const std::vector<std::string>& classes, const FeasibleRangeSet& ranges,
                        const ObjectiveContext& ctx_in, const OptimizerConfig& cfg, const OptimizeOptions& options) {
    cfg.validate();
    if (ranges.classes != classes) throw ArgumentError("optimize: range set classes differ from the class list");
    ObjectiveContext ctx = ctx_in;
    ctx.gamma1 = cfg.gamma1;
    ctx.gamma2 = cfg.gamma2;

    Rng rng(cfg.seed);
    Palette p0 = options.initial ? *options.initial : initial_palette(classes, ranges, cfg, rng);
    if (p0.classes() != classes) throw ArgumentError("optimize: initial palette classes differ from the class list");
    if (options.constraint && !options.constraint(p0))
        throw ValidationError("optimize: the starting palette violates the extra constraint");

    const bool spatial = options.spatial_stage && options.harmony_stage && ctx.has_spatial();
    const auto& constraint = options.constraint;

    OptimizeResult out;
    IncrementalObjective state(ctx, p0);
    NormalizationBounds& nb = out.bounds;
    nb.has_sd = spatial;
    nb.d_lo = state.terms(false, false).e_d;

    // Stage 1: discriminability only.
    IncrementalProblem s1(state, [&](const IncrementalObjective& st) -> std::optional<double> {
        if (constraint && !constraint(st.palette())) return std::nullopt;
        return st.terms(false, false).e_d;
    });
    auto r1 = run_annealing(s1, cfg, ranges, rng, Stage::d, options.trace);
    Palette p1 = r1.palette;
    IncrementalObjective st1(ctx, p1);
    const auto t1 = st1.terms(true, spatial);
    nb.d_hi = t1.e_d;
    nb.h_lo = t1.e_h;
    nb.h_hi = 2.0;
    r1.report.breakdown = t1;
    out.reports.push_back(r1.report);
    Palette current = p1;

    if (options.harmony_stage) {
        out.alpha = weight_for_new_goal(t1.e_h, 2.0);
        const double alpha = out.alpha;
        IncrementalProblem s2(st1, [&](const IncrementalObjective& st) -> std::optional<double> {
            if (constraint && !constraint(st.palette())) return std::nullopt;
            const auto t = st.terms(true, false);
            const double pd = NormalizationBounds::progress(t.e_d, nb.d_lo, nb.d_hi);
            const double ph = NormalizationBounds::progress(t.e_h, nb.h_lo, nb.h_hi);
            if (!(pd >= ph && ph >= 0.0)) return std::nullopt;
            return t.e_d + alpha * t.e_h;
        });
        auto r2 = run_annealing(s2, cfg, ranges, rng, Stage::dh, options.trace);
        r2.report.weight = alpha;
        IncrementalObjective st2(ctx, r2.palette);
        const auto t2 = st2.terms(true, spatial);
        r2.report.breakdown = t2;
        out.reports.push_back(r2.report);
        current = r2.palette;

        if (spatial) {
            const auto analytic = analytic_bounds(ctx, current);
            const double span = analytic.sd_hi - analytic.sd_lo;
            out.beta = span > 0.0 ? weight_for_new_goal(t2.e_sd - analytic.sd_lo, span) : 0.0;
            nb.sd_lo = t2.e_sd;
            nb.sd_hi = analytic.sd_hi;
            const double beta = out.beta;
            IncrementalProblem s3(st2, [&](const IncrementalObjective& st) -> std::optional<double> {
                if (constraint && !constraint(st.palette())) return std::nullopt;
                const auto t = st.terms(true, true);
                const double pd = NormalizationBounds::progress(t.e_d, nb.d_lo, nb.d_hi);
                const double ph = NormalizationBounds::progress(t.e_h, nb.h_lo, nb.h_hi);
                const double ps = NormalizationBounds::progress(t.e_sd, nb.sd_lo, nb.sd_hi);
                if (!(pd >= ph && ph >= ps && ps >= 0.0)) return std::nullopt;
                return t.e_d + alpha * t.e_h + beta * t.e_sd;
            });
            auto r3 = run_annealing(s3, cfg, ranges, rng, Stage::dhsd, options.trace);
            r3.report.weight = beta;
            r3.report.breakdown = IncrementalObjective(ctx, r3.palette).terms(true, true);
            out.reports.push_back(r3.report);
            current = r3.palette;
        }
    }

    for (auto& r : out.reports) normalize(r.breakdown, nb);
    out.palette = current;
    ObjectiveContext final_ctx = ctx;
    final_ctx.bounds = nb;
    if (!spatial) final_ctx.layout.reset();
    out.breakdown = total_objective(current, final_ctx, out.alpha, out.beta).breakdown;
    return out;
}

} // namespace dyncolor
