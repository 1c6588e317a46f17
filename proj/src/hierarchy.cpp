#include "dyncolor/hierarchy.hpp"

#include "dyncolor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

namespace dyncolor {

using nlohmann::json;

namespace {

std::size_t count_leaves(HierarchyNode& node) {
    if (node.children.empty()) return node.leaf_count = 1;
    std::size_t n = 0;
    for (auto& c : node.children) n += count_leaves(c);
    return node.leaf_count = n;
}

HierarchyNode parse_node(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError("hierarchy: " + path + " must be an object");
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError("hierarchy: " + path + "/id must be a string");
    HierarchyNode node;
    node.id = j["id"].get<std::string>();
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw ParseError("hierarchy: " + path + "/label must be a string");
        node.label = j["label"].get<std::string>();
    } else {
        node.label = node.id;
    }
    if (j.contains("children")) {
        const auto& ch = j["children"];
        if (!ch.is_array()) throw ParseError("hierarchy: " + path + "/children must be an array");
        for (std::size_t i = 0; i < ch.size(); ++i)
            node.children.push_back(parse_node(ch[i], path + "/children/" + std::to_string(i)));
    }
    return node;
}

json node_to_json(const HierarchyNode& n) {
    json j{{"id", n.id}, {"label", n.label}};
    if (!n.children.empty()) {
        json ch = json::array();
        for (const auto& c : n.children) ch.push_back(node_to_json(c));
        j["children"] = std::move(ch);
    }
    return j;
}

json parse_stream(std::istream& in, const char* what) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": malformed JSON at byte " + std::to_string(e.byte));
    }
}

} // namespace

Hierarchy::Hierarchy(HierarchyNode root) : root_(std::move(root)) {
    count_leaves(root_);
    index(root_, nullptr);
}

void Hierarchy::reset(HierarchyNode root) {
    Hierarchy fresh(std::move(root)); // validates before touching *this
    root_ = std::move(fresh.root_);
    index_.clear();
    index(root_, nullptr);
}

void Hierarchy::index(const HierarchyNode& node, const HierarchyNode* parent) {
    if (node.id.empty()) throw ValidationError("hierarchy: empty node id");
    if (!index_.emplace(node.id, std::pair{&node, parent}).second)
        throw ValidationError("hierarchy: duplicate node id '" + node.id + "'");
    for (const auto& c : node.children) index(c, &node);
}

const HierarchyNode* Hierarchy::find(const std::string& id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : it->second.first;
}

const HierarchyNode* Hierarchy::parent(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw NotFoundError("hierarchy: unknown node '" + id + "'");
    return it->second.second;
}

json Hierarchy::to_json() const { return node_to_json(root_); }

Hierarchy hierarchy_from_json(const json& doc) { return Hierarchy(parse_node(doc, "")); }

Hierarchy load_hierarchy(std::istream& source) { return hierarchy_from_json(parse_stream(source, "hierarchy")); }

Hierarchy load_hierarchy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("hierarchy: cannot open " + path.string());
    return load_hierarchy(in);
}

std::string to_string(LayoutKind kind) {
    switch (kind) {
    case LayoutKind::grid: return "grid";
    case LayoutKind::scatter: return "scatter";
    case LayoutKind::parallel_coordinates: return "parallel-coordinates";
    }
    return "scatter";
}

LayoutKind layout_kind_from_string(const std::string& s) {
    if (s == "grid") return LayoutKind::grid;
    if (s == "scatter") return LayoutKind::scatter;
    if (s == "parallel-coordinates") return LayoutKind::parallel_coordinates;
    throw ParseError("layout: unknown kind '" + s + "'");
}

SpatialLayout layout_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("layout: top level must be an object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw ParseError("layout: /kind must be a string");
    if (!doc.contains("samples") || !doc["samples"].is_array()) throw ParseError("layout: /samples must be an array");
    SpatialLayout layout;
    layout.kind = layout_kind_from_string(doc["kind"].get<std::string>());
    const auto& arr = doc["samples"];
    std::size_t dims = 0;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "layout: /samples/" + std::to_string(i);
        const auto& s = arr[i];
        if (!s.is_object()) throw ParseError(path + " must be an object");
        Sample sample;
        if (s.contains("id")) {
            if (!s["id"].is_string()) throw ParseError(path + "/id must be a string");
            sample.id = s["id"].get<std::string>();
        } else {
            sample.id = std::to_string(i);
        }
        if (!s.contains("label") || !s["label"].is_string()) throw ParseError(path + "/label must be a string");
        sample.label = s["label"].get<std::string>();
        if (!s.contains("pos") || !s["pos"].is_array()) throw ParseError(path + "/pos must be an array");
        for (const auto& v : s["pos"]) {
            if (!v.is_number()) throw ParseError(path + "/pos must hold numbers");
            sample.pos.push_back(v.get<double>());
        }
        if (s.contains("features")) {
            if (!s["features"].is_array()) throw ParseError(path + "/features must be an array");
            for (const auto& v : s["features"]) {
                if (!v.is_number()) throw ParseError(path + "/features must hold numbers");
                sample.features.push_back(v.get<double>());
            }
        }
        const std::size_t want = layout.kind == LayoutKind::parallel_coordinates ? sample.pos.size() : 2;
        if (sample.pos.size() != want || want == 0)
            throw ParseError(path + "/pos has " + std::to_string(sample.pos.size()) + " values");
        if (i == 0) dims = sample.pos.size();
        if (sample.pos.size() != dims) throw ParseError(path + "/pos has a different axis count");
        layout.samples.push_back(std::move(sample));
    }
    return layout;
}

SpatialLayout load_layout(std::istream& source) { return layout_from_json(parse_stream(source, "layout")); }

SpatialLayout load_layout(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("layout: cannot open " + path.string());
    return load_layout(in);
}

json to_json(const SpatialLayout& layout) {
    json samples = json::array();
    for (const auto& s : layout.samples) {
        json j{{"id", s.id}, {"pos", s.pos}, {"label", s.label}};
        if (!s.features.empty()) j["features"] = s.features;
        samples.push_back(std::move(j));
    }
    return {{"kind", to_string(layout.kind)}, {"samples", std::move(samples)}};
}

double sample_distance(const SpatialLayout& layout, std::size_t i, std::size_t j) {
    const auto& a = layout.samples.at(i).pos;
    const auto& b = layout.samples.at(j).pos;
    double d = 0.0;
    if (layout.kind == LayoutKind::parallel_coordinates) {
        for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
        d /= static_cast<double>(a.size());
    } else {
        d = std::hypot(a[0] - b[0], a[1] - b[1]);
    }
    return std::max(d, kCoincidentDistance);
}

SpatialLayout build_neighbor_graph(SpatialLayout layout) {
    const std::size_t n = layout.samples.size();
    layout.neighbors.assign(n, {});
    if (n < 2) return layout;

    if (layout.kind == LayoutKind::grid) {
        std::map<std::pair<long long, long long>, std::vector<std::size_t>> cells;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = layout.samples[i].pos;
            cells[{std::llround(p[0]), std::llround(p[1])}].push_back(i);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = layout.samples[i].pos;
            const long long r = std::llround(p[0]), c = std::llround(p[1]);
            for (long long dr = -1; dr <= 1; ++dr)
                for (long long dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const auto it = cells.find({r + dr, c + dc});
                    if (it == cells.end()) continue;
                    for (std::size_t j : it->second)
                        layout.neighbors[i].push_back({j, sample_distance(layout, i, j)});
                }
            std::sort(layout.neighbors[i].begin(), layout.neighbors[i].end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
        }
        return layout;
    }

    const std::size_t k = std::min(kNeighborCount, n - 1);
    std::vector<Neighbor> cand;
    cand.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cand.push_back({j, sample_distance(layout, i, j)});
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(),
                          [](const Neighbor& a, const Neighbor& b) {
                              return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
                          });
        layout.neighbors[i].assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return layout;
}

SpatialLayout project_layout(const SpatialLayout& layout,
                             const std::function<std::optional<std::string>(const std::string&)>& map) {
    if (!layout.has_graph() && !layout.samples.empty())
        throw ArgumentError("project_layout: neighbor graph not built");
    SpatialLayout out;
    out.kind = layout.kind;
    std::vector<std::size_t> new_index(layout.samples.size(), SIZE_MAX);
    for (std::size_t i = 0; i < layout.samples.size(); ++i) {
        const auto mapped = map(layout.samples[i].label);
        if (!mapped) continue;
        new_index[i] = out.samples.size();
        Sample s = layout.samples[i];
        s.label = *mapped;
        out.samples.push_back(std::move(s));
    }
    out.neighbors.assign(out.samples.size(), {});
    for (std::size_t i = 0; i < layout.samples.size(); ++i) {
        if (new_index[i] == SIZE_MAX) continue;
        for (const auto& nb : layout.neighbors[i])
            if (new_index[nb.index] != SIZE_MAX) out.neighbors[new_index[i]].push_back({new_index[nb.index], nb.distance});
    }
    return out;
}

ClassSimilarity class_similarity(const SpatialLayout& layout, const std::vector<std::string>& classes) {
    ClassSimilarity out;
    out.classes = classes;
    const std::size_t k = classes.size();
    std::vector<std::size_t> counts(k, 0);
    std::size_t dims = 0;
    out.mean_features.assign(k, {});
    for (const auto& s : layout.samples) {
        const auto it = std::find(classes.begin(), classes.end(), s.label);
        if (it == classes.end()) continue;
        const auto c = static_cast<std::size_t>(it - classes.begin());
        if (s.features.empty())
            throw ConfigError("class similarity: sample '" + s.id + "' of class '" + s.label + "' has no features");
        if (dims == 0) dims = s.features.size();
        if (s.features.size() != dims) throw ConfigError("class similarity: feature vectors differ in length");
        if (out.mean_features[c].empty()) out.mean_features[c].assign(dims, 0.0);
        for (std::size_t d = 0; d < dims; ++d) out.mean_features[c][d] += s.features[d];
        ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) throw ConfigError("class similarity: class '" + classes[c] + "' has no samples");
        for (double& v : out.mean_features[c]) v /= static_cast<double>(counts[c]);
    }
    out.matrix.assign(k * k, 0.0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            const auto& x = out.mean_features[a];
            const auto& y = out.mean_features[b];
            const double dot = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
            const double nx = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
            const double ny = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
            double s = 0.0;
            if (a == b) s = 1.0;
            else if (nx > 0.0 && ny > 0.0) s = std::clamp(dot / (nx * ny), 0.0, 1.0);
            out.matrix[a * k + b] = s;
        }
    return out;
}

} // namespace dyncolor
