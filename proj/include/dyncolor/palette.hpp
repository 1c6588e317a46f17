#pragma once

#include "dyncolor/colorspace.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dyncolor {

/// Ordered class ids with one CIELCh color each.
class Palette {
public:
    Palette() = default;

    /// Throws ValidationError on length mismatch, empty input or duplicate ids.
    Palette(std::vector<std::string> classes, std::vector<LchColor> colors);

    std::size_t size() const noexcept { return colors_.size(); }
    bool empty() const noexcept { return colors_.empty(); }

    const std::vector<std::string>& classes() const noexcept { return classes_; }
    const std::vector<LchColor>& colors() const noexcept { return colors_; }
    const std::string& class_id(std::size_t i) const { return classes_.at(i); }
    const LchColor& color(std::size_t i) const { return colors_.at(i); }

    /// Index of a class id, or size() when absent.
    std::size_t index_of(const std::string& class_id) const noexcept;

    void set_color(std::size_t i, const LchColor& c) { colors_.at(i) = c; }
    void swap_colors(std::size_t i, std::size_t j) { std::swap(colors_.at(i), colors_.at(j)); }

    friend bool operator==(const Palette&, const Palette&) = default;

private:
    std::vector<std::string> classes_;
    std::vector<LchColor> colors_;
};

} // namespace dyncolor
