#include "dyncolor/objectives.hpp"

#include "dyncolor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dyncolor {

using nlohmann::json;

double perceptual_difference_score(std::span<const LchColor> colors) {
    const std::size_t m = colors.size();
    if (m < 2) throw ArgumentError("perceptual_difference_score: palette needs at least 2 colors");
    std::vector<LabColor> lab;
    lab.reserve(m);
    for (const auto& c : colors) lab.push_back(to_lab(c));
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) lo = std::min(lo, ciede2000(lab[i], lab[j]));
    return lo + std::min(lo - kDiscernibleThreshold, 0.0);
}

double perceptual_difference_score(const Palette& p) {
    return perceptual_difference_score(std::span<const LchColor>(p.colors()));
}

double discriminability(const Palette& p, const NameModel& model, double gamma1, double gamma2) {
    return gamma1 * perceptual_difference_score(p) + gamma2 * name_difference(model, p);
}

std::string to_string(SpatialMode mode) { return mode == SpatialMode::difference ? "difference" : "similarity"; }

SpatialMode spatial_mode_from_string(const std::string& s) {
    if (s == "difference") return SpatialMode::difference;
    if (s == "similarity") return SpatialMode::similarity;
    throw ArgumentError("unknown spatial mode '" + s + "' (expected difference or similarity)");
}

namespace {

std::vector<std::size_t> class_of_samples(const SpatialLayout& layout, const std::vector<std::string>& classes) {
    std::vector<std::size_t> out;
    out.reserve(layout.samples.size());
    for (const auto& s : layout.samples) {
        const auto it = std::find(classes.begin(), classes.end(), s.label);
        if (it == classes.end())
            throw ArgumentError("spatial layout: sample '" + s.id + "' has label '" + s.label +
                                "' which is not a palette class");
        out.push_back(static_cast<std::size_t>(it - classes.begin()));
    }
    return out;
}

} // namespace

SpatialWeights spatial_weights(const SpatialLayout& layout, const std::vector<std::string>& classes) {
    SpatialWeights w;
    w.classes = classes.size();
    w.pair.assign(w.classes * w.classes, 0.0);
    const std::size_t n = layout.samples.size();
    if (n == 0 || !layout.has_graph()) return w;
    const auto cls = class_of_samples(layout, classes);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nb = layout.neighbors[i];
        if (nb.empty()) continue;
        const double inv_k = 1.0 / static_cast<double>(nb.size());
        for (const auto& e : nb) {
            std::size_t a = cls[i], b = cls[e.index];
            if (a > b) std::swap(a, b);
            w.pair[a * w.classes + b] += inv_n * inv_k / e.distance;
        }
    }
    for (std::size_t a = 0; a < w.classes; ++a)
        for (std::size_t b = a + 1; b < w.classes; ++b) w.cross_total += w.pair[a * w.classes + b];
    return w;
}

std::vector<double> similarity_matrix(const ClassSimilarity& sim, const std::vector<std::string>& classes) {
    const std::size_t m = classes.size();
    std::vector<std::size_t> idx(m);
    for (std::size_t a = 0; a < m; ++a) {
        const auto it = std::find(sim.classes.begin(), sim.classes.end(), classes[a]);
        if (it == sim.classes.end()) throw ConfigError("class similarity has no entry for class '" + classes[a] + "'");
        idx[a] = static_cast<std::size_t>(it - sim.classes.begin());
    }
    std::vector<double> s(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) s[a * m + b] = sim.at(idx[a], idx[b]);
    return s;
}

double spatial_score(const Palette& p, const SpatialLayout& layout, SpatialMode mode,
                     const PairHarmonyScorer& scorer, const ClassSimilarity* similarity) {
    const std::size_t m = p.size();
    const auto w = spatial_weights(layout, p.classes());
    std::vector<double> s;
    if (mode == SpatialMode::similarity) {
        if (similarity == nullptr) throw ConfigError("similarity mode requires class similarity");
        s = similarity_matrix(*similarity, p.classes());
    }
    double total = 0.0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) {
            const double wt = w.pair[a * m + b];
            if (wt == 0.0) continue;
            const double d = a == b ? 0.0 : ciede2000(p.color(a), p.color(b));
            const double k = mode == SpatialMode::difference ? 1.0 : -s[a * m + b];
            total += wt * (k * d + scorer.score(p.color(a), p.color(b)));
        }
    return total;
}

double NormalizationBounds::progress(double x, double lo, double hi) noexcept {
    if (hi - lo > 1e-12) return (x - lo) / (hi - lo);
    return x >= lo - 1e-9 ? 1.0 : (x - lo) / 1e-12;
}

json NormalizationBounds::to_json() const {
    return {{"d", {d_lo, d_hi}}, {"h", {h_lo, h_hi}}, {"sd", {sd_lo, sd_hi}}, {"has_sd", has_sd}};
}

NormalizationBounds NormalizationBounds::from_json(const json& j) {
    NormalizationBounds b;
    b.d_lo = j.at("d").at(0).get<double>();
    b.d_hi = j.at("d").at(1).get<double>();
    b.h_lo = j.at("h").at(0).get<double>();
    b.h_hi = j.at("h").at(1).get<double>();
    b.sd_lo = j.at("sd").at(0).get<double>();
    b.sd_hi = j.at("sd").at(1).get<double>();
    b.has_sd = j.value("has_sd", false);
    return b;
}

json ObjectiveBreakdown::to_json() const {
    return {{"e_pd", e_pd},
            {"e_nd", e_nd},
            {"e_d", e_d},
            {"e_hue", e_hue},
            {"e_lc", e_lc},
            {"e_h", e_h},
            {"e_sd", e_sd},
            {"normalized_d", normalized_d},
            {"normalized_h", normalized_h},
            {"normalized_sd", normalized_sd}};
}

ObjectiveBreakdown ObjectiveBreakdown::from_json(const json& j) {
    ObjectiveBreakdown b;
    b.e_pd = j.at("e_pd").get<double>();
    b.e_nd = j.at("e_nd").get<double>();
    b.e_d = j.at("e_d").get<double>();
    b.e_hue = j.at("e_hue").get<double>();
    b.e_lc = j.at("e_lc").get<double>();
    b.e_h = j.at("e_h").get<double>();
    b.e_sd = j.at("e_sd").get<double>();
    b.normalized_d = j.at("normalized_d").get<double>();
    b.normalized_h = j.at("normalized_h").get<double>();
    b.normalized_sd = j.at("normalized_sd").get<double>();
    return b;
}

NormalizationBounds analytic_bounds(const ObjectiveContext& ctx, const Palette& p) {
    NormalizationBounds b;
    b.d_lo = 0.0;
    b.d_hi = ctx.gamma1 * 100.0 + ctx.gamma2;
    b.h_lo = 0.0;
    b.h_hi = 2.0;
    if (ctx.has_spatial()) {
        b.has_sd = true;
        const auto w = spatial_weights(*ctx.layout, p.classes());
        if (ctx.mode == SpatialMode::difference) {
            b.sd_lo = 0.0;
            b.sd_hi = 100.0 * w.cross_total;
        } else {
            if (!ctx.similarity) throw ConfigError("similarity mode requires class similarity");
            const auto s = similarity_matrix(*ctx.similarity, p.classes());
            double lo = 0.0;
            for (std::size_t a = 0; a < w.classes; ++a)
                for (std::size_t c = a + 1; c < w.classes; ++c) lo -= 100.0 * w.pair[a * w.classes + c] * s[a * w.classes + c];
            b.sd_lo = lo;
            b.sd_hi = 0.0;
        }
    }
    return b;
}

void normalize(ObjectiveBreakdown& b, const NormalizationBounds& n) noexcept {
    b.normalized_d = std::clamp(NormalizationBounds::progress(b.e_d, n.d_lo, n.d_hi), 0.0, 1.0);
    b.normalized_h = std::clamp(NormalizationBounds::progress(b.e_h, n.h_lo, n.h_hi), 0.0, 1.0);
    b.normalized_sd = n.has_sd ? std::clamp(NormalizationBounds::progress(b.e_sd, n.sd_lo, n.sd_hi), 0.0, 1.0) : 0.0;
}

bool priority_holds(const ObjectiveBreakdown& b) noexcept {
    return b.normalized_d >= b.normalized_h && b.normalized_h >= b.normalized_sd;
}

ObjectiveValue total_objective(const Palette& p, const ObjectiveContext& ctx, double alpha, double beta) {
    if (!ctx.names) throw ConfigError("objective context has no name model");
    ObjectiveValue out;
    auto& b = out.breakdown;
    if (p.size() >= 2) {
        b.e_pd = perceptual_difference_score(p);
        b.e_nd = name_difference(*ctx.names, p);
    }
    b.e_d = ctx.gamma1 * b.e_pd + ctx.gamma2 * b.e_nd;
    b.e_hue = hue_harmony(p, ctx.templates);
    b.e_lc = cl_harmony(p).e_lc;
    b.e_h = b.e_hue + b.e_lc;
    if (ctx.has_spatial())
        b.e_sd = spatial_score(p, *ctx.layout, ctx.mode, *ctx.pair_harmony, ctx.similarity.get());
    normalize(b, ctx.bounds ? *ctx.bounds : analytic_bounds(ctx, p));
    out.value = b.e_d + alpha * b.e_h + beta * b.e_sd;
    out.priority_ok = priority_holds(b);
    return out;
}

IncrementalObjective::IncrementalObjective(const ObjectiveContext& ctx, Palette p)
    : ctx_(&ctx), palette_(std::move(p)), m_(palette_.size()) {
    if (!ctx.names) throw ConfigError("objective context has no name model");
    lab_.resize(m_);
    hue_.resize(m_);
    bin_.resize(m_);
    d_.assign(m_ * m_, 0.0);
    n_.assign(m_ * m_, 0.0);
    p_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        const auto& c = palette_.color(i);
        lab_[i] = to_lab(c);
        hue_[i] = hsv_hue(c);
        bin_[i] = ctx.names->nearest_bin(lab_[i]);
    }
    hue_tracker_.emplace(ctx.templates, hue_);
    if (ctx.has_spatial()) {
        weights_ = spatial_weights(*ctx.layout, palette_.classes());
        factor_.assign(m_ * m_, 1.0);
        if (ctx.mode == SpatialMode::similarity) {
            if (!ctx.similarity) throw ConfigError("similarity mode requires class similarity");
            const auto s = similarity_matrix(*ctx.similarity, palette_.classes());
            for (std::size_t k = 0; k < m_ * m_; ++k) factor_[k] = -s[k];
        }
    }
    for (std::size_t i = 0; i < m_; ++i) fill_row(i);
}

void IncrementalObjective::fill_row(std::size_t i) {
    const auto& names = *ctx_->names;
    const NameVector vi = names.row(bin_[i]);
    const bool spatial = ctx_->has_spatial();
    for (std::size_t j = 0; j < m_; ++j) {
        double d = 0.0, n = 0.0, ph = 0.0;
        if (j != i) {
            d = ciede2000(lab_[i], lab_[j]);
            n = name_cosine_distance(vi, names.row(bin_[j]));
        }
        if (spatial && weights_.at(i, j) != 0.0) ph = ctx_->pair_harmony->score(palette_.color(i), palette_.color(j));
        d_[i * m_ + j] = d_[j * m_ + i] = d;
        n_[i * m_ + j] = n_[j * m_ + i] = n;
        p_[i * m_ + j] = p_[j * m_ + i] = ph;
    }
}

void IncrementalObjective::set_color(std::size_t i, const LchColor& c) {
    undo_.kind = Undo::set;
    undo_.i = i;
    undo_.color = palette_.color(i);
    undo_.lab = lab_[i];
    undo_.hue = hue_[i];
    undo_.bin = bin_[i];
    undo_.d_row.assign(d_.begin() + static_cast<std::ptrdiff_t>(i * m_), d_.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_));
    undo_.n_row.assign(n_.begin() + static_cast<std::ptrdiff_t>(i * m_), n_.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_));
    undo_.p_row.assign(p_.begin() + static_cast<std::ptrdiff_t>(i * m_), p_.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_));

    palette_.set_color(i, c);
    lab_[i] = to_lab(c);
    hue_[i] = hsv_hue(c);
    hue_tracker_->replace(undo_.hue, hue_[i]);
    bin_[i] = ctx_->names->nearest_bin(lab_[i]);
    fill_row(i);
}

void IncrementalObjective::swap(std::size_t i, std::size_t j) {
    undo_.kind = Undo::swap;
    undo_.i = i;
    undo_.j = j;
    if (i == j) return;
    palette_.swap_colors(i, j);
    std::swap(lab_[i], lab_[j]);
    std::swap(hue_[i], hue_[j]);
    std::swap(bin_[i], bin_[j]);
    // Pairwise matrices: permute row and column i <-> j.
    for (auto* mat : {&d_, &n_}) {
        auto& a = *mat;
        for (std::size_t k = 0; k < m_; ++k) std::swap(a[i * m_ + k], a[j * m_ + k]);
        for (std::size_t k = 0; k < m_; ++k) std::swap(a[k * m_ + i], a[k * m_ + j]);
    }
    // Pair harmony is only cached where a spatial weight exists, and the
    // weights follow classes, not colors; recompute the two rows.
    if (ctx_->has_spatial()) {
        for (std::size_t r : {i, j})
            for (std::size_t k = 0; k < m_; ++k) {
                const double ph = weights_.at(r, k) != 0.0
                                      ? ctx_->pair_harmony->score(palette_.color(r), palette_.color(k))
                                      : 0.0;
                p_[r * m_ + k] = p_[k * m_ + r] = ph;
            }
    }
}

void IncrementalObjective::undo() {
    switch (undo_.kind) {
    case Undo::none: return;
    case Undo::swap: {
        const auto i = undo_.i, j = undo_.j;
        swap(i, j);
        break;
    }
    case Undo::set: {
        const auto i = undo_.i;
        palette_.set_color(i, undo_.color);
        lab_[i] = undo_.lab;
        hue_tracker_->replace(hue_[i], undo_.hue);
        hue_[i] = undo_.hue;
        bin_[i] = undo_.bin;
        for (std::size_t k = 0; k < m_; ++k) {
            d_[i * m_ + k] = d_[k * m_ + i] = undo_.d_row[k];
            n_[i * m_ + k] = n_[k * m_ + i] = undo_.n_row[k];
            p_[i * m_ + k] = p_[k * m_ + i] = undo_.p_row[k];
        }
        break;
    }
    }
    undo_.kind = Undo::none;
}

double IncrementalObjective::min_pairwise() const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = i + 1; j < m_; ++j) lo = std::min(lo, d_[i * m_ + j]);
    return lo;
}

ObjectiveBreakdown IncrementalObjective::terms(bool with_harmony, bool with_spatial) const {
    ObjectiveBreakdown b;
    if (m_ >= 2) {
        const double lo = min_pairwise();
        b.e_pd = lo + std::min(lo - kDiscernibleThreshold, 0.0);
        double sum = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = i + 1; j < m_; ++j) sum += n_[i * m_ + j];
        b.e_nd = sum / (0.5 * static_cast<double>(m_ * (m_ - 1)));
    }
    b.e_d = ctx_->gamma1 * b.e_pd + ctx_->gamma2 * b.e_nd;
    if (with_harmony) {
        std::vector<double> chroma(m_);
        for (std::size_t i = 0; i < m_; ++i) chroma[i] = palette_.color(i).C;
        b.e_hue = hue_tracker_->harmony(hue_, chroma);
        b.e_lc = cl_harmony(palette_).e_lc;
        b.e_h = b.e_hue + b.e_lc;
    }
    if (with_spatial && ctx_->has_spatial()) {
        double total = 0.0;
        for (std::size_t a = 0; a < m_; ++a)
            for (std::size_t c = a; c < m_; ++c) {
                const double wt = weights_.pair[a * m_ + c];
                if (wt == 0.0) continue;
                total += wt * (factor_[a * m_ + c] * d_[a * m_ + c] + p_[a * m_ + c]);
            }
        b.e_sd = total;
    }
    return b;
}

} // namespace dyncolor
