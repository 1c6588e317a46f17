#include "dyncolor/palette.hpp"

#include "dyncolor/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace dyncolor {

Palette::Palette(std::vector<std::string> classes, std::vector<LchColor> colors)
    : classes_(std::move(classes)), colors_(std::move(colors)) {
    if (classes_.size() != colors_.size())
        throw ValidationError("palette: " + std::to_string(classes_.size()) + " class ids but " +
                              std::to_string(colors_.size()) + " colors");
    if (classes_.empty()) throw ValidationError("palette: at least one class is required");
    std::unordered_set<std::string> seen;
    for (const auto& id : classes_)
        if (!seen.insert(id).second) throw ValidationError("palette: duplicate class id '" + id + "'");
}

std::size_t Palette::index_of(const std::string& class_id) const noexcept {
    const auto it = std::find(classes_.begin(), classes_.end(), class_id);
    return static_cast<std::size_t>(it - classes_.begin());
}

} // namespace dyncolor
