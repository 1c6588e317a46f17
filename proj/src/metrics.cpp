#include "dyncolor/metrics.hpp"

#include "dyncolor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dyncolor {

using nlohmann::json;

double bhdi(double pd, double nd, double hue, double cl) noexcept { return 0.1 * pd + 2.0 * nd + hue + cl; }

json EvaluationReport::to_json() const {
    json j{{"pd", pd}, {"nd", nd}, {"hue", hue}, {"cl", cl}, {"bhdi", bhdi}};
    if (ss) j["ss"] = *ss;
    if (dr) j["dr"] = *dr;
    return j;
}

EvaluationReport EvaluationReport::from_json(const json& j) {
    EvaluationReport r;
    r.pd = j.at("pd").get<double>();
    r.nd = j.at("nd").get<double>();
    r.hue = j.at("hue").get<double>();
    r.cl = j.at("cl").get<double>();
    r.bhdi = j.at("bhdi").get<double>();
    if (j.contains("ss")) r.ss = j["ss"].get<double>();
    if (j.contains("dr")) r.dr = j["dr"].get<double>();
    return r;
}

std::string EvaluationReport::table() const {
    auto cell = [](std::optional<double> v) {
        if (!v) return std::string("-");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", *v);
        return std::string(buf);
    };
    const std::string names[] = {"PD", "ND", "Hue", "CL", "BHDI", "SS", "DR"};
    const std::string values[] = {cell(pd), cell(nd), cell(hue), cell(cl), cell(bhdi), cell(ss), cell(dr)};
    std::ostringstream head, row;
    for (std::size_t i = 0; i < 7; ++i) {
        const std::size_t w = std::max(names[i].size(), values[i].size()) + 2;
        head << std::string(w - names[i].size(), ' ') << names[i];
        row << std::string(w - values[i].size(), ' ') << values[i];
    }
    return head.str() + "\n" + row.str() + "\n";
}

namespace {

std::vector<std::string> groups_of(const Palette& children, const ParentMap& parent_of) {
    std::vector<std::string> g;
    for (const auto& id : children.classes()) {
        const auto it = parent_of.find(id);
        if (it == parent_of.end()) throw ArgumentError("child '" + id + "' has no parent in the map");
        g.push_back(it->second);
    }
    return g;
}

} // namespace

double silhouette(const Palette& children, const ParentMap& parent_of) {
    const std::size_t n = children.size();
    const auto group = groups_of(children, parent_of);
    std::vector<std::string> distinct = group;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) throw ArgumentError("silhouette: needs at least two parent groups");

    std::vector<LabColor> lab;
    for (const auto& c : children.colors()) lab.push_back(to_lab(c));
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = ciede2000(lab[i], lab[j]);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::string, std::pair<double, std::size_t>> per_group;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            auto& acc = per_group[group[j]];
            acc.first += dist[i * n + j];
            ++acc.second;
        }
        const auto own = per_group.find(group[i]);
        if (own == per_group.end()) continue; // singleton cluster
        const double a = own->second.first / static_cast<double>(own->second.second);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [g, acc] : per_group)
            if (g != group[i]) b = std::min(b, acc.first / static_cast<double>(acc.second));
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double distance_ratio(const Palette& children, const Palette& parents, const ParentMap& parent_of) {
    if (children.empty() || parents.empty()) throw ArgumentError("distance_ratio: empty palette");
    const auto group = groups_of(children, parent_of);
    std::vector<LabColor> plab;
    for (const auto& c : parents.colors()) plab.push_back(to_lab(c));
    double total = 0.0;
    for (std::size_t i = 0; i < children.size(); ++i) {
        const std::size_t own = parents.index_of(group[i]);
        if (own == parents.size())
            throw ArgumentError("distance_ratio: parent '" + group[i] + "' has no color");
        const LabColor x = to_lab(children.color(i));
        const double d_own = ciede2000(x, plab[own]);
        double nearest = d_own;
        for (const auto& p : plab) nearest = std::min(nearest, ciede2000(x, p));
        total += d_own == 0.0 ? 1.0 : nearest / d_own;
    }
    return total / static_cast<double>(children.size());
}

EvaluationReport evaluate(const Palette& palette, const ObjectiveContext& ctx, const HierarchyInfo* hierarchy) {
    if (!ctx.names) throw ConfigError("evaluate: context has no name model");
    EvaluationReport r;
    if (palette.size() >= 2) {
        r.pd = perceptual_difference_score(palette);
        r.nd = name_difference(*ctx.names, palette);
    }
    r.hue = hue_harmony(palette, ctx.templates);
    r.cl = cl_harmony(palette).e_lc;
    r.bhdi = bhdi(r.pd, r.nd, r.hue, r.cl);
    if (hierarchy) {
        r.dr = distance_ratio(palette, hierarchy->parents, hierarchy->parent_of);
        std::vector<std::string> groups;
        for (const auto& id : palette.classes()) {
            const auto it = hierarchy->parent_of.find(id);
            if (it != hierarchy->parent_of.end() &&
                std::find(groups.begin(), groups.end(), it->second) == groups.end())
                groups.push_back(it->second);
        }
        if (groups.size() >= 2) r.ss = silhouette(palette, hierarchy->parent_of);
    }
    return r;
}

} // namespace dyncolor
