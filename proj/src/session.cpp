#include "dyncolor/session.hpp"

#include "dyncolor/errors.hpp"
#include "dyncolor/sampling.hpp"

#include <algorithm>
#include <set>

namespace dyncolor {

using nlohmann::json;

SessionInputs SessionInputs::from_json(const json& j, std::shared_ptr<const NameModel> names,
                                       std::shared_ptr<const PairHarmonyScorer> pair_harmony) {
    if (!j.is_object()) throw ParseError("session: request body must be a JSON object");
    if (!j.contains("hierarchy")) throw ParseError("session: missing 'hierarchy'");
    SessionInputs in;
    in.hierarchy = hierarchy_from_json(j["hierarchy"]);
    if (j.contains("layout") && !j["layout"].is_null()) in.layout = layout_from_json(j["layout"]);
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) throw ParseError("session: 'mode' must be a string");
        in.mode = spatial_mode_from_string(j["mode"].get<std::string>());
    }
    if (j.contains("config")) in.config = OptimizerConfig::from_json(j["config"]);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ParseError("session: 'seed' must be an integer");
        in.config.seed = j["seed"].get<std::uint64_t>();
    }
    if (!names) throw ConfigError("session: no name model");
    in.names = std::move(names);
    in.pair_harmony = std::move(pair_harmony);
    return in;
}

json SessionInputs::to_json() const {
    json j{{"hierarchy", hierarchy.to_json()},
           {"mode", dyncolor::to_string(mode)},
           {"seed", config.seed},
           {"config", config.to_json()}};
    if (layout) j["layout"] = dyncolor::to_json(*layout);
    return j;
}

json color_json(const std::string& id, const LchColor& c) {
    return {{"id", id}, {"lch", {{"L", c.L}, {"C", c.C}, {"h", c.h}}}, {"hex", to_hex(c)}};
}

Session::Session(std::string id, SessionInputs inputs) : id_(std::move(id)), inputs_(std::move(inputs)) {
    if (!inputs_.names) throw ConfigError("session: no name model");
    inputs_.config.validate();
    if (inputs_.layout) {
        for (const auto& s : inputs_.layout->samples)
            if (!inputs_.hierarchy.find(s.label))
                throw ValidationError("session: layout label '" + s.label + "' is not a hierarchy node");
        full_layout_ = std::make_shared<const SpatialLayout>(build_neighbor_graph(*inputs_.layout));
    }
    assign_top();
}

std::vector<std::string> Session::top_level() const {
    const auto& root = inputs_.hierarchy.root();
    if (root.children.empty()) return {root.id};
    std::vector<std::string> ids;
    for (const auto& c : root.children) ids.push_back(c.id);
    return ids;
}

ObjectiveContext Session::context_for(const std::vector<std::string>& classes) const {
    ObjectiveContext ctx;
    ctx.names = inputs_.names;
    ctx.pair_harmony = inputs_.pair_harmony;
    ctx.gamma1 = inputs_.config.gamma1;
    ctx.gamma2 = inputs_.config.gamma2;
    ctx.mode = inputs_.mode;
    if (!full_layout_) return ctx;
    const std::set<std::string> wanted(classes.begin(), classes.end());
    const auto& h = inputs_.hierarchy;
    auto projected = std::make_shared<SpatialLayout>(project_layout(
        *full_layout_, [&](const std::string& label) -> std::optional<std::string> {
            for (const HierarchyNode* n = h.find(label); n != nullptr; n = h.parent(n->id))
                if (wanted.count(n->id)) return n->id;
            return std::nullopt;
        }));
    if (projected->samples.empty()) return ctx;
    if (inputs_.mode == SpatialMode::similarity) {
        // Classes without samples never pair up in E_SD; give them zero rows.
        std::vector<std::string> present;
        for (const auto& c : classes)
            if (std::any_of(projected->samples.begin(), projected->samples.end(),
                            [&](const Sample& s) { return s.label == c; }))
                present.push_back(c);
        const auto sim = class_similarity(*projected, present);
        auto full = std::make_shared<ClassSimilarity>();
        full->classes = classes;
        full->mean_features.resize(classes.size());
        full->matrix.assign(classes.size() * classes.size(), 0.0);
        for (std::size_t a = 0; a < classes.size(); ++a) {
            full->matrix[a * classes.size() + a] = 1.0;
            const auto pa = std::find(present.begin(), present.end(), classes[a]);
            if (pa == present.end()) continue;
            full->mean_features[a] = sim.mean_features[pa - present.begin()];
            for (std::size_t b = 0; b < classes.size(); ++b) {
                const auto pb = std::find(present.begin(), present.end(), classes[b]);
                if (pb != present.end())
                    full->matrix[a * classes.size() + b] = sim.at(pa - present.begin(), pb - present.begin());
            }
        }
        ctx.similarity = std::move(full);
    }
    ctx.layout = std::move(projected);
    return ctx;
}

void Session::reset() {
    visible_.clear();
    colors_.clear();
    groups_.clear();
    expansions_.clear();
    top_reports_.clear();
    warnings_.clear();
}

void Session::assign_top() {
    reset();
    const auto classes = top_level();
    const auto range = default_range();
    OptimizerConfig cfg = inputs_.config;
    cfg.seed = derive_seed(inputs_.config.seed, "top");
    if (classes.size() > 20) {
        SamplerConfig sc;
        sc.seed = cfg.seed;
        sc.max_consecutive_rejections = 1000;
        const double cap = capacity(range, sc, 1);
        if (cap < static_cast<double>(classes.size()))
            warnings_.push_back("top level has " + std::to_string(classes.size()) +
                                " classes but the default range holds about " + std::to_string(static_cast<long>(cap)) +
                                " discernible colors");
    }
    const auto ctx = context_for(classes);
    const auto result = optimize(classes, FeasibleRangeSet::uniform(classes, range), ctx, cfg);
    for (std::size_t i = 0; i < classes.size(); ++i) colors_[classes[i]] = result.palette.color(i);
    visible_ = classes;
    top_reports_ = result.reports;
}

std::string Session::group_key(const std::string& node_id) const {
    const HierarchyNode* p = inputs_.hierarchy.parent(node_id);
    return p ? p->id : std::string();
}

const GroupRanges& Session::ranges_for_group(const std::string& node_id) {
    const std::string key = group_key(node_id);
    if (const auto it = groups_.find(key); it != groups_.end()) return it->second;

    std::vector<std::string> siblings;
    if (const HierarchyNode* p = inputs_.hierarchy.parent(node_id))
        for (const auto& c : p->children) siblings.push_back(c.id);
    else
        siblings.push_back(node_id);
    std::vector<LchColor> colors;
    std::vector<std::size_t> counts;
    for (const auto& id : siblings) {
        colors.push_back(color(id));
        counts.push_back(std::max<std::size_t>(1, inputs_.hierarchy.find(id)->children.size()));
    }
    OptimizerConfig cfg = inputs_.config;
    cfg.seed = derive_seed(inputs_.config.seed, "ranges:" + key);
    ObjectiveContext ctx = context_for({});
    ctx.layout.reset();
    GroupRanges g{key, make_child_ranges(Palette(siblings, colors), counts, ctx, cfg, inputs_.range_config)};
    for (const auto& w : g.ranges.warnings) warnings_.push_back(w);
    return groups_.emplace(key, std::move(g)).first->second;
}

const ExpansionRecord& Session::expand(const std::string& node_id) {
    const HierarchyNode* node = inputs_.hierarchy.find(node_id);
    if (!node) throw NotFoundError("unknown node '" + node_id + "'");
    const auto pos = std::find(visible_.begin(), visible_.end(), node_id);
    if (pos == visible_.end()) throw NotFoundError("node '" + node_id + "' is not visible");
    if (node->is_leaf()) throw ArgumentError("node '" + node_id + "' has no children");

    const auto& group = ranges_for_group(node_id);
    const FeasibleRange& sphere = group.ranges.ranges.of(node_id);

    std::vector<std::string> children;
    for (const auto& c : node->children) children.push_back(c.id);
    OptimizerConfig cfg = inputs_.config;
    cfg.seed = derive_seed(inputs_.config.seed, "expand:" + node_id);
    const auto ctx = context_for(children);
    const auto result = optimize(children, FeasibleRangeSet::uniform(children, sphere), ctx, cfg);

    for (std::size_t i = 0; i < children.size(); ++i) colors_[children[i]] = result.palette.color(i);
    const auto at = visible_.erase(std::find(visible_.begin(), visible_.end(), node_id));
    visible_.insert(at, children.begin(), children.end());
    expansions_.push_back({node_id, children, result.reports});
    return expansions_.back();
}

void Session::collapse(const std::string& node_id) {
    if (!expanded(node_id)) throw NotFoundError("node '" + node_id + "' is not expanded");
    const auto& h = inputs_.hierarchy;
    auto below = [&](const std::string& id) {
        for (const HierarchyNode* n = h.find(id); n != nullptr; n = h.parent(n->id))
            if (n->id == node_id) return true;
        return false;
    };
    std::vector<std::string> keep;
    for (const auto& e : expansions_)
        if (!below(e.node)) keep.push_back(e.node);
    assign_top();
    for (const auto& id : keep) expand(id);
}

bool Session::expanded(const std::string& node_id) const {
    return std::any_of(expansions_.begin(), expansions_.end(), [&](const auto& e) { return e.node == node_id; });
}

const LchColor& Session::color(const std::string& node_id) const {
    const auto it = colors_.find(node_id);
    if (it == colors_.end()) throw NotFoundError("node '" + node_id + "' has no color");
    return it->second;
}

const GroupRanges& Session::group_of(const std::string& node_id) const {
    const auto it = groups_.find(group_key(node_id));
    if (it == groups_.end()) throw NotFoundError("no ranges recorded for the group of '" + node_id + "'");
    return it->second;
}

const FeasibleRange& Session::child_range(const std::string& node_id) const {
    return group_of(node_id).ranges.ranges.of(node_id);
}

LchColor Session::range_center(const std::string& node_id) const {
    const auto& g = group_of(node_id).ranges;
    const std::size_t i = g.centers.index_of(node_id);
    return g.centers.color(i);
}

Palette Session::palette_of(const std::vector<std::string>& ids) const {
    std::vector<LchColor> colors;
    for (const auto& id : ids) colors.push_back(color(id));
    return Palette(ids, std::move(colors));
}

Palette Session::visible_palette() const { return palette_of(visible_); }

json Session::palette_json() const {
    json visible = json::array();
    for (const auto& id : visible_) {
        auto c = color_json(id, color(id));
        c["label"] = inputs_.hierarchy.find(id)->label;
        const HierarchyNode* p = inputs_.hierarchy.parent(id);
        c["parent"] = p ? json(p->id) : json(nullptr);
        visible.push_back(std::move(c));
    }
    json expanded = json::array();
    for (const auto& e : expansions_) {
        auto c = color_json(e.node, color(e.node));
        c["children"] = e.children;
        c["center"] = color_json(e.node, range_center(e.node))["lch"];
        expanded.push_back(std::move(c));
    }
    return {{"session_id", id_}, {"visible", std::move(visible)}, {"expanded", std::move(expanded)}};
}

json Session::evaluation_json() const {
    json out;
    const auto frontier = visible_palette();
    out["frontier"] = evaluate(frontier, context_for({}), nullptr).to_json();

    json groups = json::array();
    json per_expansion = json::array();
    for (const auto& [key, g] : groups_) {
        std::vector<std::string> children;
        ParentMap parent_of;
        std::vector<std::string> expanded_here;
        for (const auto& e : expansions_) {
            if (group_key(e.node) != key) continue;
            expanded_here.push_back(e.node);
            for (const auto& c : e.children) {
                children.push_back(c);
                parent_of[c] = e.node;
            }
            HierarchyInfo info{g.ranges.centers, {}};
            for (const auto& c : e.children) info.parent_of[c] = e.node;
            per_expansion.push_back(
                {{"node", e.node}, {"report", evaluate(palette_of(e.children), context_for({}), &info).to_json()}});
        }
        if (children.empty()) continue;
        HierarchyInfo info{g.ranges.centers, parent_of};
        groups.push_back({{"group", key},
                          {"expanded", expanded_here},
                          {"report", evaluate(palette_of(children), context_for({}), &info).to_json()}});
    }
    out["groups"] = std::move(groups);
    out["expansions"] = std::move(per_expansion);
    return out;
}

json Session::event_log() const {
    json events = json::array();
    for (const auto& e : expansions_) events.push_back({{"type", "expand"}, {"node", e.node}});
    return {{"inputs", inputs_.to_json()}, {"events", std::move(events)}};
}

std::unique_ptr<Session> Session::replay(std::string id, const json& log, std::shared_ptr<const NameModel> names,
                                         std::shared_ptr<const PairHarmonyScorer> pair_harmony) {
    if (!log.is_object() || !log.contains("inputs") || !log.contains("events"))
        throw ParseError("session log: expected 'inputs' and 'events'");
    auto s = std::make_unique<Session>(std::move(id),
                                       SessionInputs::from_json(log["inputs"], std::move(names), std::move(pair_harmony)));
    for (const auto& e : log["events"]) {
        const auto type = e.at("type").get<std::string>();
        if (type == "expand") s->expand(e.at("node").get<std::string>());
        else if (type == "collapse") s->collapse(e.at("node").get<std::string>());
        else throw ParseError("session log: unknown event type '" + type + "'");
    }
    return s;
}

} // namespace dyncolor
