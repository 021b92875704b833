#include "factorforge/semantics.hpp"

#include <cmath>

#include <json.hpp>

#include "factorforge/error.hpp"
#include "binio.hpp"
#include "jsonio.hpp"

namespace factorforge {

namespace {

const char* const kCategoryNames[kCategoryCount] = {
    "female_young", "female_middle", "female_old",
    "male_young",   "male_middle",   "male_old",
};

const char* gender_name(Gender g) {
    return g == Gender::female ? "female" : "male";
}

const char* age_band_name(AgeBand b) {
    switch (b) {
    case AgeBand::young: return "young";
    case AgeBand::middle: return "middle";
    default: return "old";
    }
}

nlohmann::json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in = binio::open_binary_input(path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded())
        raise(ErrorCode::format_error, "malformed JSON: " + path.string());
    return j;
}

const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                    const std::filesystem::path& path) {
    auto it = j.find(key);
    if (it == j.end())
        raise(ErrorCode::format_error,
              std::string("missing \"") + key + "\" in " + path.string());
    return *it;
}

Vector read_number_array(const nlohmann::json& j, std::size_t expected,
                         const char* key, const std::filesystem::path& path) {
    if (!j.is_array() || j.size() != expected)
        raise(ErrorCode::format_error,
              std::string("\"") + key + "\" must be an array of " +
                  std::to_string(expected) + " numbers in " + path.string());
    Vector v(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        if (!j[i].is_number())
            raise(ErrorCode::format_error,
                  std::string("non-numeric entry in \"") + key + "\" in " + path.string());
        v[i] = j[i].get<double>();
        if (!std::isfinite(v[i]))
            raise(ErrorCode::format_error,
                  std::string("non-finite entry in \"") + key + "\" in " + path.string());
    }
    return v;
}

} // namespace

SemanticLabel label_from_category(int category_index) {
    if (category_index < 0 || category_index >= kCategoryCount)
        raise(ErrorCode::invalid_argument, "category index must be in [0, 5]");
    SemanticLabel label;
    label.gender = static_cast<Gender>(category_index / 3);
    label.age_band = static_cast<AgeBand>(category_index % 3);
    return label;
}

const char* category_name(int category_index) {
    if (category_index < 0 || category_index >= kCategoryCount)
        raise(ErrorCode::invalid_argument, "category index must be in [0, 5]");
    return kCategoryNames[category_index];
}

std::optional<int> category_from_name(const std::string& name) {
    for (int i = 0; i < kCategoryCount; ++i)
        if (name == kCategoryNames[i])
            return i;
    return std::nullopt;
}

LabelResult assign_label(const LabelerSpec& spec, const Vector& image) {
    if (image.size() != spec.age_weights.size() ||
        image.size() != spec.gender_weights.size())
        raise(ErrorCode::invalid_argument, "assign_label: image dim does not match labeler");
    if (!(spec.young_threshold < spec.old_threshold))
        raise(ErrorCode::invalid_argument, "assign_label: young_threshold must be below old_threshold");

    LabelResult result;
    result.age_score = dot(spec.age_weights, image) + spec.age_offset;
    if (result.age_score < spec.young_threshold)
        result.label.age_band = AgeBand::young;
    else if (result.age_score <= spec.old_threshold)
        result.label.age_band = AgeBand::middle;
    else
        result.label.age_band = AgeBand::old;

    const double gender_score = dot(spec.gender_weights, image) + spec.gender_offset;
    result.label.gender = gender_score > 0.0 ? Gender::male : Gender::female;
    return result;
}

std::map<int, std::vector<Vector>> partition_by_label(const std::vector<Vector>& coords,
                                                      const std::vector<SemanticLabel>& labels) {
    if (coords.size() != labels.size())
        raise(ErrorCode::invalid_argument, "partition_by_label: coords and labels differ in length");
    std::map<int, std::vector<Vector>> partition;
    for (std::size_t i = 0; i < coords.size(); ++i)
        partition[labels[i].category_index()].push_back(coords[i]);
    return partition;
}

CategoryRangeTable compute_ranges(const std::map<int, std::vector<Vector>>& partition) {
    CategoryRangeTable table;
    std::size_t total = 0;
    for (const auto& [category, subset] : partition) {
        if (category < 0 || category >= kCategoryCount)
            raise(ErrorCode::invalid_argument, "compute_ranges: category index out of range");
        if (subset.empty())
            continue;
        if (table.k == 0)
            table.k = subset.front().size();
        CategoryRange range;
        range.min = subset.front();
        range.max = subset.front();
        range.count = subset.size();
        for (const Vector& c : subset) {
            if (c.size() != table.k)
                raise(ErrorCode::invalid_argument, "compute_ranges: inconsistent coordinate length");
            for (std::size_t j = 0; j < table.k; ++j) {
                if (c[j] < range.min[j])
                    range.min[j] = c[j];
                if (c[j] > range.max[j])
                    range.max[j] = c[j];
            }
        }
        table.categories[static_cast<std::size_t>(category)] = std::move(range);
        total += subset.size();
    }
    if (total == 0)
        raise(ErrorCode::empty_data, "compute_ranges: no samples in any category");
    if (table.k == 0)
        raise(ErrorCode::invalid_argument, "compute_ranges: zero-length coordinates");
    return table;
}

void save_ranges(const CategoryRangeTable& table, const std::filesystem::path& path) {
    if (table.k == 0)
        raise(ErrorCode::invalid_argument, "save_ranges: table has no channels");
    std::string out;
    out += "{\"k\": " + std::to_string(table.k) + ", \"categories\": [";
    bool first = true;
    for (int c = 0; c < kCategoryCount; ++c) {
        const auto& entry = table.categories[static_cast<std::size_t>(c)];
        if (!entry)
            continue;
        if (entry->min.size() != table.k || entry->max.size() != table.k || entry->count == 0)
            raise(ErrorCode::invalid_argument, "save_ranges: malformed category entry");
        if (!first)
            out += ", ";
        first = false;
        out += "{\"index\": " + std::to_string(c) + ", \"name\": ";
        jsonio::append_string(out, category_name(c));
        out += ", \"count\": " + std::to_string(entry->count) + ", \"min\": [";
        for (std::size_t j = 0; j < table.k; ++j) {
            if (j)
                out += ", ";
            out += jsonio::format_double(entry->min[j]);
        }
        out += "], \"max\": [";
        for (std::size_t j = 0; j < table.k; ++j) {
            if (j)
                out += ", ";
            out += jsonio::format_double(entry->max[j]);
        }
        out += "]}";
    }
    out += "]}\n";
    binio::atomic_write_file(path, [&](std::ostream& os) { os << out; });
}

CategoryRangeTable load_ranges(const std::filesystem::path& path) {
    const nlohmann::json j = parse_json_file(path);
    if (!j.is_object())
        raise(ErrorCode::format_error, "range table must be a JSON object: " + path.string());
    const auto& kj = require_field(j, "k", path);
    if (!kj.is_number_unsigned() || kj.get<std::uint64_t>() == 0)
        raise(ErrorCode::format_error, "\"k\" must be a positive integer in " + path.string());

    CategoryRangeTable table;
    table.k = kj.get<std::size_t>();
    const auto& cats = require_field(j, "categories", path);
    if (!cats.is_array())
        raise(ErrorCode::format_error, "\"categories\" must be an array in " + path.string());
    for (const auto& cj : cats) {
        if (!cj.is_object())
            raise(ErrorCode::format_error, "category entry must be an object in " + path.string());
        const auto& ij = require_field(cj, "index", path);
        if (!ij.is_number_integer())
            raise(ErrorCode::format_error, "category \"index\" must be an integer in " + path.string());
        const int index = ij.get<int>();
        if (index < 0 || index >= kCategoryCount)
            raise(ErrorCode::format_error, "category index out of range in " + path.string());
        if (table.categories[static_cast<std::size_t>(index)])
            raise(ErrorCode::format_error, "duplicate category index in " + path.string());
        const auto& nj = require_field(cj, "name", path);
        if (!nj.is_string() || nj.get<std::string>() != category_name(index))
            raise(ErrorCode::format_error, "category name does not match index in " + path.string());
        const auto& countj = require_field(cj, "count", path);
        if (!countj.is_number_unsigned() || countj.get<std::uint64_t>() == 0)
            raise(ErrorCode::format_error, "category \"count\" must be positive in " + path.string());

        CategoryRange range;
        range.count = countj.get<std::size_t>();
        range.min = read_number_array(require_field(cj, "min", path), table.k, "min", path);
        range.max = read_number_array(require_field(cj, "max", path), table.k, "max", path);
        for (std::size_t ch = 0; ch < table.k; ++ch)
            if (range.min[ch] > range.max[ch])
                raise(ErrorCode::format_error, "min exceeds max in " + path.string());
        table.categories[static_cast<std::size_t>(index)] = std::move(range);
    }
    return table;
}

void save_labels(const std::vector<LabelResult>& labels, const std::filesystem::path& path) {
    std::string out;
    out += "[";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i)
            out += ", ";
        const LabelResult& l = labels[i];
        out += "{\"index\": " + std::to_string(l.label.category_index()) + ", \"gender\": ";
        jsonio::append_string(out, gender_name(l.label.gender));
        out += ", \"age_band\": ";
        jsonio::append_string(out, age_band_name(l.label.age_band));
        out += ", \"age_score\": " + jsonio::format_double(l.age_score) + "}";
    }
    out += "]\n";
    binio::atomic_write_file(path, [&](std::ostream& os) { os << out; });
}

std::vector<LabelResult> load_labels(const std::filesystem::path& path) {
    const nlohmann::json j = parse_json_file(path);
    if (!j.is_array())
        raise(ErrorCode::format_error, "label file must be a JSON array: " + path.string());
    std::vector<LabelResult> labels;
    labels.reserve(j.size());
    for (const auto& lj : j) {
        if (!lj.is_object())
            raise(ErrorCode::format_error, "label entry must be an object in " + path.string());
        const auto& ij = require_field(lj, "index", path);
        const auto& gj = require_field(lj, "gender", path);
        const auto& bj = require_field(lj, "age_band", path);
        const auto& sj = require_field(lj, "age_score", path);
        if (!ij.is_number_integer() || !gj.is_string() || !bj.is_string() || !sj.is_number())
            raise(ErrorCode::format_error, "malformed label entry in " + path.string());

        LabelResult l;
        const std::string g = gj.get<std::string>();
        if (g == "female")
            l.label.gender = Gender::female;
        else if (g == "male")
            l.label.gender = Gender::male;
        else
            raise(ErrorCode::format_error, "unknown gender \"" + g + "\" in " + path.string());
        const std::string b = bj.get<std::string>();
        if (b == "young")
            l.label.age_band = AgeBand::young;
        else if (b == "middle")
            l.label.age_band = AgeBand::middle;
        else if (b == "old")
            l.label.age_band = AgeBand::old;
        else
            raise(ErrorCode::format_error, "unknown age_band \"" + b + "\" in " + path.string());
        l.age_score = sj.get<double>();
        if (!std::isfinite(l.age_score))
            raise(ErrorCode::format_error, "non-finite age_score in " + path.string());
        if (ij.get<int>() != l.label.category_index())
            raise(ErrorCode::format_error, "label index disagrees with gender/age_band in " + path.string());
        labels.push_back(l);
    }
    return labels;
}

} // namespace factorforge
