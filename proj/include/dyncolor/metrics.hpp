#pragma once

#include "dyncolor/objectives.hpp"
#include "dyncolor/palette.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>

namespace dyncolor {

struct EvaluationReport {
    double pd = 0.0, nd = 0.0, hue = 0.0, cl = 0.0, bhdi = 0.0;
    std::optional<double> ss;
    std::optional<double> dr;

    nlohmann::json to_json() const;
    static EvaluationReport from_json(const nlohmann::json& j);
    /// Aligned columns: PD ND Hue CL BHDI SS DR ("-" for absent fields).
    std::string table() const;

    friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

double bhdi(double pd, double nd, double hue, double cl) noexcept;

/// Child class id -> parent class id.
using ParentMap = std::map<std::string, std::string>;

/// Mean silhouette coefficient of the children, clustered by parent, with
/// CIEDE2000 distances; children alone in their group contribute 0. Throws
/// ArgumentError with fewer than two groups or a child missing from the map.
double silhouette(const Palette& children, const ParentMap& parent_of);

/// Mean over children of CIEDE2000(child, nearest parent color) /
/// CIEDE2000(child, own parent color); a child on its parent's color counts 1.
double distance_ratio(const Palette& children, const Palette& parents, const ParentMap& parent_of);

struct HierarchyInfo {
    Palette parents; // parent-level reference colors
    ParentMap parent_of;
};

/// PD, ND, Hue and CL are E_PD, E_ND, E_Hue and E_LC of the palette; SS and
/// DR are filled only when hierarchy information is given.
EvaluationReport evaluate(const Palette& palette, const ObjectiveContext& ctx, const HierarchyInfo* hierarchy = nullptr);

} // namespace dyncolor
