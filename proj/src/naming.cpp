#include "dyncolor/naming.hpp"

#include "dyncolor/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace dyncolor {

using nlohmann::json;

NameModel::NameModel(std::vector<std::string> terms, std::vector<LabColor> bins, std::vector<double> counts)
    : terms_(std::move(terms)), bins_(std::move(bins)), counts_(std::move(counts)) {
    if (terms_.empty()) throw ValidationError("name model: no terms");
    if (bins_.empty()) throw ValidationError("name model: no bins");
    const std::size_t w = terms_.size();
    if (counts_.size() != bins_.size() * w)
        throw ValidationError("name model: counts matrix has wrong size");
    norms_.resize(bins_.size());
    for (std::size_t b = 0; b < bins_.size(); ++b) {
        double sq = 0.0;
        for (std::size_t t = 0; t < w; ++t) {
            const double v = counts_[b * w + t];
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ValidationError("name model: count for bin " + std::to_string(b) + ", term " +
                                      std::to_string(t) + " is negative or not finite");
            sq += v * v;
        }
        if (sq == 0.0) throw ValidationError("name model: bin " + std::to_string(b) + " has no positive count");
        norms_[b] = std::sqrt(sq);
    }
    build_index();
}

void NameModel::build_index() {
    std::array<double, 3> lo{}, hi{};
    for (int d = 0; d < 3; ++d) {
        lo[d] = std::numeric_limits<double>::infinity();
        hi[d] = -lo[d];
    }
    for (const auto& b : bins_) {
        const double v[3] = {b.L, b.a, b.b};
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], v[d]);
            hi[d] = std::max(hi[d], v[d]);
        }
    }
    // About two bins per cell on average.
    double volume = 1.0;
    for (int d = 0; d < 3; ++d) volume *= std::max(hi[d] - lo[d], 1e-9);
    cell_ = std::max(std::cbrt(2.0 * volume / static_cast<double>(bins_.size())), 1e-6);
    origin_ = lo;
    for (int d = 0; d < 3; ++d) dims_[d] = std::max(1, static_cast<int>(std::floor((hi[d] - lo[d]) / cell_)) + 1);
    const std::size_t ncell = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    auto cell_of = [&](const LabColor& b) {
        const double v[3] = {b.L, b.a, b.b};
        std::size_t idx = 0;
        for (int d = 0; d < 3; ++d) {
            const int k = std::clamp(static_cast<int>((v[d] - origin_[d]) / cell_), 0, dims_[d] - 1);
            idx = idx * static_cast<std::size_t>(dims_[d]) + static_cast<std::size_t>(k);
        }
        return idx;
    };
    cell_start_.assign(ncell + 1, 0);
    for (const auto& b : bins_) ++cell_start_[cell_of(b) + 1];
    for (std::size_t c = 0; c < ncell; ++c) cell_start_[c + 1] += cell_start_[c];
    cell_bins_.resize(bins_.size());
    auto fill = cell_start_;
    for (std::size_t i = 0; i < bins_.size(); ++i) cell_bins_[fill[cell_of(bins_[i])]++] = i;
}

std::size_t NameModel::nearest_bin(const LabColor& c) const noexcept {
    // Search cubes of cells of growing half-width r around the query cell
    // until every unvisited cell is strictly farther than the best bin.
    const double q[3] = {c.L, c.a, c.b};
    int home[3];
    for (int d = 0; d < 3; ++d) {
        const double k = std::floor((q[d] - origin_[d]) / cell_);
        home[d] = static_cast<int>(std::clamp(k, 0.0, static_cast<double>(dims_[d] - 1)));
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const int max_r = std::max({dims_[0], dims_[1], dims_[2]});
    for (int r = 0; r <= max_r; ++r) {
        int lo[3], hi[3];
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::max(home[d] - r, 0);
            hi[d] = std::min(home[d] + r, dims_[d] - 1);
        }
        for (int i = lo[0]; i <= hi[0]; ++i)
            for (int j = lo[1]; j <= hi[1]; ++j)
                for (int k = lo[2]; k <= hi[2]; ++k) {
                    const bool shell = std::abs(i - home[0]) == r || std::abs(j - home[1]) == r ||
                                       std::abs(k - home[2]) == r;
                    if (!shell) continue;
                    const std::size_t cell =
                        (static_cast<std::size_t>(i) * dims_[1] + static_cast<std::size_t>(j)) * dims_[2] +
                        static_cast<std::size_t>(k);
                    for (std::size_t p = cell_start_[cell]; p < cell_start_[cell + 1]; ++p) {
                        const std::size_t b = cell_bins_[p];
                        const double dl = bins_[b].L - c.L, da = bins_[b].a - c.a, db = bins_[b].b - c.b;
                        const double dist = dl * dl + da * da + db * db;
                        if (dist < best_d || (dist == best_d && b < best)) {
                            best_d = dist;
                            best = b;
                        }
                    }
                }
        // Distance from q to the nearest face of the visited cube that still
        // has cells beyond it.
        double bound = std::numeric_limits<double>::infinity();
        for (int d = 0; d < 3; ++d) {
            if (home[d] - r > 0) bound = std::min(bound, q[d] - (origin_[d] + (home[d] - r) * cell_));
            if (home[d] + r < dims_[d] - 1) bound = std::min(bound, origin_[d] + (home[d] + r + 1) * cell_ - q[d]);
        }
        if (!std::isfinite(bound)) break;
        if (bound > 0.0 && best_d < bound * bound) break;
    }
    return best;
}

NameVector NameModel::row(std::size_t bin) const {
    if (bin >= bins_.size()) throw ArgumentError("name model: bin index out of range");
    const std::size_t w = terms_.size();
    return {std::span<const double>(counts_).subspan(bin * w, w), norms_[bin]};
}

json NameModel::to_json() const {
    json bins = json::array();
    for (const auto& b : bins_) bins.push_back({b.L, b.a, b.b});
    json counts = json::array();
    const std::size_t w = terms_.size();
    for (std::size_t b = 0; b < bins_.size(); ++b)
        for (std::size_t t = 0; t < w; ++t)
            if (counts_[b * w + t] != 0.0) counts.push_back({b, t, counts_[b * w + t]});
    return {{"terms", terms_}, {"bins", std::move(bins)}, {"counts", std::move(counts)}};
}

NameModel name_model_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("name model: top level must be an object");
    for (const char* key : {"terms", "bins", "counts"})
        if (!doc.contains(key) || !doc[key].is_array())
            throw ParseError(std::string("name model: missing array '") + key + "'");

    std::vector<std::string> terms;
    for (std::size_t i = 0; i < doc["terms"].size(); ++i) {
        const auto& t = doc["terms"][i];
        if (!t.is_string()) throw ParseError("name model: terms[" + std::to_string(i) + "] is not a string");
        terms.push_back(t.get<std::string>());
    }

    std::vector<LabColor> bins;
    for (std::size_t i = 0; i < doc["bins"].size(); ++i) {
        const auto& b = doc["bins"][i];
        if (!b.is_array() || b.size() != 3 || !b[0].is_number() || !b[1].is_number() || !b[2].is_number())
            throw ParseError("name model: bins[" + std::to_string(i) + "] must be [L, a, b]");
        bins.push_back({b[0].get<double>(), b[1].get<double>(), b[2].get<double>()});
    }
    if (bins.empty()) throw ValidationError("name model: zero bins");
    if (terms.empty()) throw ValidationError("name model: zero terms");

    const std::size_t w = terms.size();
    std::vector<double> counts(bins.size() * w, 0.0);
    for (std::size_t i = 0; i < doc["counts"].size(); ++i) {
        const auto& rec = doc["counts"][i];
        const std::string where = "name model: counts[" + std::to_string(i) + "]";
        if (!rec.is_array() || rec.size() != 3 || !rec[0].is_number_integer() ||
            !rec[1].is_number_integer() || !rec[2].is_number())
            throw ParseError(where + " must be [bin_index, term_index, count]");
        const auto bin = rec[0].get<long long>();
        const auto term = rec[1].get<long long>();
        const double count = rec[2].get<double>();
        if (bin < 0 || static_cast<std::size_t>(bin) >= bins.size())
            throw ValidationError(where + ": bin index out of range");
        if (term < 0 || static_cast<std::size_t>(term) >= w)
            throw ValidationError(where + ": term index out of range");
        if (count < 0.0) throw ValidationError(where + ": negative count");
        counts[static_cast<std::size_t>(bin) * w + static_cast<std::size_t>(term)] += count;
    }
    return NameModel(std::move(terms), std::move(bins), std::move(counts));
}

NameModel load_name_model(std::istream& source) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ParseError("name model: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return name_model_from_json(doc);
}

NameModel load_name_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("name model: cannot open " + path.string());
    return load_name_model(in);
}

NameModel import_c3_name_data(const json& doc) {
    if (!doc.contains("color") || !doc.contains("terms") || !doc.contains("T"))
        throw ParseError("c3 data: expected keys 'color', 'terms' and 'T'");
    const auto& flat = doc["color"];
    if (flat.size() % 3 != 0) throw ParseError("c3 data: 'color' length is not a multiple of 3");
    std::vector<std::string> terms = doc["terms"].get<std::vector<std::string>>();
    std::vector<LabColor> bins;
    for (std::size_t i = 0; i < flat.size(); i += 3)
        bins.push_back({flat[i].get<double>(), flat[i + 1].get<double>(), flat[i + 2].get<double>()});
    const std::size_t w = terms.size();
    std::vector<double> counts(bins.size() * w, 0.0);
    const auto& t = doc["T"];
    if (t.size() % 2 != 0) throw ParseError("c3 data: 'T' length is odd");
    for (std::size_t i = 0; i < t.size(); i += 2) {
        const auto idx = t[i].get<long long>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= counts.size())
            throw ValidationError("c3 data: T[" + std::to_string(i) + "] index out of range");
        counts[static_cast<std::size_t>(idx)] += t[i + 1].get<double>();
    }
    // Bins without any naming response carry no information; drop them.
    std::vector<LabColor> kept_bins;
    std::vector<double> kept_counts;
    for (std::size_t b = 0; b < bins.size(); ++b) {
        const auto first = counts.begin() + static_cast<std::ptrdiff_t>(b * w);
        if (std::any_of(first, first + static_cast<std::ptrdiff_t>(w), [](double v) { return v > 0.0; })) {
            kept_bins.push_back(bins[b]);
            kept_counts.insert(kept_counts.end(), first, first + static_cast<std::ptrdiff_t>(w));
        }
    }
    return NameModel(std::move(terms), std::move(kept_bins), std::move(kept_counts));
}

NameVector name_vector(const NameModel& model, const LabColor& c) {
    return model.row(model.nearest_bin(c));
}

NameVector name_vector(const NameModel& model, const LchColor& c) {
    return name_vector(model, to_lab(c));
}

double name_cosine_distance(const NameVector& x, const NameVector& y) noexcept {
    if (x.weights.data() == y.weights.data()) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < x.weights.size(); ++i) dot += x.weights[i] * y.weights[i];
    return std::clamp(1.0 - dot / (x.norm * y.norm), 0.0, 1.0);
}

double name_difference(const NameModel& model, std::span<const LchColor> colors) {
    const std::size_t m = colors.size();
    if (m < 2) throw ArgumentError("name_difference: palette needs at least 2 colors");
    std::vector<NameVector> vecs;
    vecs.reserve(m);
    for (const auto& c : colors) vecs.push_back(name_vector(model, c));
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) sum += name_cosine_distance(vecs[i], vecs[j]);
    return sum / (0.5 * static_cast<double>(m * (m - 1)));
}

double name_difference(const NameModel& model, const Palette& palette) {
    return name_difference(model, std::span<const LchColor>(palette.colors()));
}

} // namespace dyncolor
