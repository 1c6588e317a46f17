#pragma once

#include "dyncolor/colorspace.hpp"
#include "dyncolor/palette.hpp"

#include "json.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace dyncolor {

/// Non-owning view of one row of a name model's association matrix.
struct NameVector {
    std::span<const double> weights;
    double norm = 0.0;
};

/// Color-name associations over quantized Lab bins.
///
/// Immutable after construction. Every bin row carries at least one positive
/// count, so name vectors are never all-zero.
class NameModel {
public:
    /// counts is row-major, bins.size() x terms.size(). Throws ValidationError.
    NameModel(std::vector<std::string> terms, std::vector<LabColor> bins, std::vector<double> counts);

    std::size_t term_count() const noexcept { return terms_.size(); }
    std::size_t bin_count() const noexcept { return bins_.size(); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<LabColor>& bins() const noexcept { return bins_; }

    /// Nearest bin center by Euclidean Lab distance; ties go to the lowest index.
    std::size_t nearest_bin(const LabColor& c) const noexcept;

    NameVector row(std::size_t bin) const;

    nlohmann::json to_json() const;

private:
    std::vector<std::string> terms_;
    std::vector<LabColor> bins_;
    std::vector<double> counts_;
    std::vector<double> norms_;

    // Uniform-grid bucket index over the bin centers for nearest_bin.
    void build_index();
    double cell_ = 1.0;
    std::array<double, 3> origin_{};
    std::array<int, 3> dims_{};
    std::vector<std::size_t> cell_start_; // CSR offsets, one per cell plus one
    std::vector<std::size_t> cell_bins_;
};

/// Reads the name-model JSON format:
///   {"terms": [str...], "bins": [[L,a,b]...], "counts": [[bin, term, count]...]}
/// Counts are sparse triplets; absent entries are zero. Throws ParseError
/// (with byte offset or record path) or ValidationError.
NameModel load_name_model(std::istream& source);
NameModel load_name_model(const std::filesystem::path& path);
NameModel name_model_from_json(const nlohmann::json& doc);

/// Converts the color-naming data layout used by the c3 tools
/// ({"color": flat L,a,b list, "terms": [...], "T": flat (bin*W+term, count) pairs})
/// into a NameModel.
NameModel import_c3_name_data(const nlohmann::json& doc);

NameVector name_vector(const NameModel& model, const LabColor& c);
NameVector name_vector(const NameModel& model, const LchColor& c);

/// 1 - cosine similarity; in [0, 1] for non-negative vectors.
double name_cosine_distance(const NameVector& x, const NameVector& y) noexcept;

/// Mean cosine distance over all unordered pairs. Throws ArgumentError for m < 2.
double name_difference(const NameModel& model, std::span<const LchColor> colors);
double name_difference(const NameModel& model, const Palette& palette);

} // namespace dyncolor
