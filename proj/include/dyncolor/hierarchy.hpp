#pragma once

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dyncolor {

struct HierarchyNode {
    std::string id;
    std::string label;
    std::vector<HierarchyNode> children;
    std::size_t leaf_count = 1; // a leaf counts itself

    bool is_leaf() const noexcept { return children.empty(); }
};

/// A validated class tree with id lookup. Node pointers stay valid for the
/// lifetime of the Hierarchy (the tree is never mutated after load).
class Hierarchy {
public:
    Hierarchy() = default;
    /// Throws ValidationError on duplicate or empty ids.
    explicit Hierarchy(HierarchyNode root);

    Hierarchy(const Hierarchy& other) : Hierarchy(other.root_) {}
    Hierarchy& operator=(const Hierarchy& other) {
        if (this != &other) reset(other.root_);
        return *this;
    }
    Hierarchy(Hierarchy&& other) noexcept(false) : Hierarchy(std::move(other.root_)) {}
    Hierarchy& operator=(Hierarchy&& other) {
        if (this != &other) reset(std::move(other.root_));
        return *this;
    }

    const HierarchyNode& root() const noexcept { return root_; }
    const HierarchyNode* find(const std::string& id) const;
    /// Parent of a node, nullptr for the root. Throws NotFoundError for unknown ids.
    const HierarchyNode* parent(const std::string& id) const;
    std::size_t node_count() const noexcept { return index_.size(); }

    nlohmann::json to_json() const;

private:
    void index(const HierarchyNode& node, const HierarchyNode* parent);
    void reset(HierarchyNode root);

    HierarchyNode root_;
    std::unordered_map<std::string, std::pair<const HierarchyNode*, const HierarchyNode*>> index_;
};

/// {"id": str, "label"?: str, "children"?: [...]}. ParseError carries a
/// JSON-pointer-like path; duplicate ids give ValidationError.
Hierarchy hierarchy_from_json(const nlohmann::json& doc);
Hierarchy load_hierarchy(std::istream& source);
Hierarchy load_hierarchy(const std::filesystem::path& path);

enum class LayoutKind { grid, scatter, parallel_coordinates };

std::string to_string(LayoutKind kind);
LayoutKind layout_kind_from_string(const std::string& s);

struct Sample {
    std::string id;
    std::vector<double> pos; // [row, col], [x, y] or one value per axis
    std::string label;       // class id
    std::vector<double> features;
};

struct Neighbor {
    std::size_t index;
    double distance; // > 0
};

inline constexpr double kCoincidentDistance = 1e-6;
inline constexpr std::size_t kNeighborCount = 8;

struct SpatialLayout {
    LayoutKind kind = LayoutKind::scatter;
    std::vector<Sample> samples;
    std::vector<std::vector<Neighbor>> neighbors; // empty until built

    bool has_graph() const noexcept { return neighbors.size() == samples.size() && !samples.empty(); }
};

SpatialLayout layout_from_json(const nlohmann::json& doc);
SpatialLayout load_layout(std::istream& source);
SpatialLayout load_layout(const std::filesystem::path& path);
nlohmann::json to_json(const SpatialLayout& layout);

/// Distance between two samples under the layout's metric: Euclidean for
/// grid cells and scatter points, mean absolute per-axis gap for polylines.
double sample_distance(const SpatialLayout& layout, std::size_t i, std::size_t j);

/// Grid: Moore-8 cells. Scatter and parallel coordinates: 8 nearest samples
/// (ties by lower index). Fewer than 2 samples give an empty graph.
SpatialLayout build_neighbor_graph(SpatialLayout layout);

/// Keeps samples whose label maps to a class (via `map`), relabels them, and
/// drops edges to removed samples. The graph must already be built.
SpatialLayout project_layout(const SpatialLayout& layout,
                             const std::function<std::optional<std::string>(const std::string&)>& map);

struct ClassSimilarity {
    std::vector<std::string> classes;
    std::vector<std::vector<double>> mean_features;
    std::vector<double> matrix; // row-major, classes.size() squared

    double at(std::size_t i, std::size_t j) const { return matrix.at(i * classes.size() + j); }
};

/// Cosine similarity of class-mean feature vectors, clamped to [0,1].
/// Throws ConfigError when a sample of a listed class lacks features or a
/// class has no samples.
ClassSimilarity class_similarity(const SpatialLayout& layout, const std::vector<std::string>& classes);

} // namespace dyncolor
