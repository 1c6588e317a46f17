#pragma once

#include "dyncolor/dynamic_range.hpp"
#include "dyncolor/hierarchy.hpp"
#include "dyncolor/metrics.hpp"
#include "dyncolor/naming.hpp"
#include "dyncolor/objectives.hpp"
#include "dyncolor/optimizer.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace dyncolor {

/// Everything needed to rebuild a session from scratch.
struct SessionInputs {
    Hierarchy hierarchy;
    std::optional<SpatialLayout> layout; // labels are hierarchy node ids
    SpatialMode mode = SpatialMode::difference;
    OptimizerConfig config;              // config.seed is the session seed
    ChildRangeConfig range_config;
    std::shared_ptr<const NameModel> names;
    std::shared_ptr<const PairHarmonyScorer> pair_harmony = default_pair_harmony();

    /// {"hierarchy": {...}, "layout"?: {...}, "mode"?: str, "seed"?: int,
    ///  "config"?: {...}}. The name model and scorer are supplied separately.
    static SessionInputs from_json(const nlohmann::json& j, std::shared_ptr<const NameModel> names,
                                   std::shared_ptr<const PairHarmonyScorer> pair_harmony = default_pair_harmony());
    nlohmann::json to_json() const;
};

struct ColorEntry {
    std::string id;
    LchColor color;
};

nlohmann::json color_json(const std::string& id, const LchColor& c);

struct ExpansionRecord {
    std::string node;
    std::vector<std::string> children;
    std::vector<StageReport> reports;
};

/// Colors for the sibling group that owns a set of spheres.
struct GroupRanges {
    std::string group;                  // parent of the siblings ("" above the top level)
    ChildRanges ranges;
};

class Session {
public:
    Session(std::string id, SessionInputs inputs);

    const std::string& id() const noexcept { return id_; }
    const SessionInputs& inputs() const noexcept { return inputs_; }
    std::mutex& mutex() noexcept { return mutex_; }

    /// Top level: the root's children, or the root alone when it is a leaf.
    std::vector<std::string> top_level() const;

    /// Optimizes the top level in the default range. Called by the constructor.
    void assign_top();

    /// Expands a visible node. NotFoundError for unknown or hidden nodes,
    /// ArgumentError for leaves.
    const ExpansionRecord& expand(const std::string& node_id);

    /// Removes a node's expansion (and those below it) from the log and
    /// replays the rest. NotFoundError when the node is not expanded.
    void collapse(const std::string& node_id);

    const std::vector<std::string>& visible() const noexcept { return visible_; }
    const LchColor& color(const std::string& node_id) const;
    bool has_color(const std::string& node_id) const { return colors_.count(node_id) > 0; }
    bool expanded(const std::string& node_id) const;

    /// Sphere a node's children were optimized in.
    const FeasibleRange& child_range(const std::string& node_id) const;
    /// The reference (adjusted center) color for an expanded node's sphere.
    LchColor range_center(const std::string& node_id) const;
    const GroupRanges& group_of(const std::string& node_id) const;

    const std::vector<StageReport>& top_reports() const noexcept { return top_reports_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    const std::vector<ExpansionRecord>& expansions() const noexcept { return expansions_; }

    Palette visible_palette() const;
    Palette palette_of(const std::vector<std::string>& ids) const;

    /// {"session_id", "visible": [...], "expanded": [...]}; colors carry Lch and hex.
    nlohmann::json palette_json() const;
    /// {"frontier": report, "groups": [...], "expansions": [...]}
    nlohmann::json evaluation_json() const;
    /// {"inputs": ..., "events": [{"type": "expand", "node": id}...]}
    nlohmann::json event_log() const;

    static std::unique_ptr<Session> replay(std::string id, const nlohmann::json& log,
                                           std::shared_ptr<const NameModel> names,
                                           std::shared_ptr<const PairHarmonyScorer> pair_harmony = default_pair_harmony());

    ObjectiveContext context_for(const std::vector<std::string>& classes) const;

private:
    std::string group_key(const std::string& node_id) const;
    const GroupRanges& ranges_for_group(const std::string& node_id);
    void reset();

    std::string id_;
    SessionInputs inputs_;
    std::shared_ptr<const SpatialLayout> full_layout_; // graph built once
    std::mutex mutex_;

    std::vector<std::string> visible_;
    std::map<std::string, LchColor> colors_;
    std::map<std::string, GroupRanges> groups_;
    std::vector<ExpansionRecord> expansions_;
    std::vector<StageReport> top_reports_;
    std::vector<std::string> warnings_;
};

} // namespace dyncolor
