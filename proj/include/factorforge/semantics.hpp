#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factorforge/matrix.hpp"

namespace factorforge {

inline constexpr int kCategoryCount = 6;

enum class Gender { female = 0, male = 1 };
enum class AgeBand { young = 0, middle = 1, old = 2 };

/// One of the six gender x age-band cells, indexed row-major:
/// female_young=0 ... male_old=5.
struct SemanticLabel {
    Gender gender = Gender::female;
    AgeBand age_band = AgeBand::young;

    int category_index() const {
        return 3 * static_cast<int>(gender) + static_cast<int>(age_band);
    }
};

SemanticLabel label_from_category(int category_index);

/// CLI-facing category names: female_young, female_middle, female_old,
/// male_young, male_middle, male_old.
const char* category_name(int category_index);
std::optional<int> category_from_name(const std::string& name);

/// Rule-based linear stand-in for the pretrained age/gender classifier:
/// continuous scores from affine functionals on the image vector, banded by
/// thresholds.
struct LabelerSpec {
    Vector gender_weights;        // u_g
    double gender_offset = 0.0;   // b_g
    Vector age_weights;           // u_a
    double age_offset = 0.0;      // b_a
    double young_threshold = 30.0;
    double old_threshold = 60.0;

    std::size_t dim() const { return age_weights.size(); }
};

struct LabelResult {
    SemanticLabel label;
    double age_score = 0.0;
};

/// age_score = u_a . image + b_a; young below young_threshold, middle on the
/// closed interval [young_threshold, old_threshold], old above. Male when
/// u_g . image + b_g > 0.
LabelResult assign_label(const LabelerSpec& spec, const Vector& image);

/// Groups coordinates by label. Only categories that actually occur appear in
/// the result; subset order preserves input order.
std::map<int, std::vector<Vector>> partition_by_label(const std::vector<Vector>& coords,
                                                      const std::vector<SemanticLabel>& labels);

struct CategoryRange {
    Vector min;
    Vector max;
    std::size_t count = 0;
};

/// Per-category, per-channel [min, max] of observed factor coordinates.
/// Categories with no samples are absent, never zero-filled.
struct CategoryRangeTable {
    std::size_t k = 0;
    std::array<std::optional<CategoryRange>, kCategoryCount> categories;

    bool present(int category_index) const {
        return category_index >= 0 && category_index < kCategoryCount &&
               categories[static_cast<std::size_t>(category_index)].has_value();
    }
};

/// Exact per-channel extremes over each subset; raises empty-data when every
/// category is empty.
CategoryRangeTable compute_ranges(const std::map<int, std::vector<Vector>>& partition);

// JSON schema:
// {"k": int, "categories": [{"index": 0-5, "name": "...", "count": int,
//  "min": [k reals], "max": [k reals]}]}, absent categories omitted.
void save_ranges(const CategoryRangeTable& table, const std::filesystem::path& path);
CategoryRangeTable load_ranges(const std::filesystem::path& path);

// Label files: JSON array of {"index", "gender", "age_band", "age_score"}.
void save_labels(const std::vector<LabelResult>& labels, const std::filesystem::path& path);
std::vector<LabelResult> load_labels(const std::filesystem::path& path);

} // namespace factorforge
