#include "factorforge/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "factorforge/coords.hpp"
#include "factorforge/error.hpp"
#include "factorforge/parallel.hpp"
#include "factorforge/rng.hpp"
#include "binio.hpp"
#include "jsonio.hpp"

namespace factorforge {

namespace {

constexpr std::uint64_t kDefaultModelSeed = 0x666163746f726765ULL;

// substreams of the fixed model seed, one tag per field
constexpr std::uint64_t field_tag(std::uint64_t tag, std::size_t row = 0) {
    return (tag << 32) | static_cast<std::uint64_t>(row);
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

std::filesystem::path resolve_sibling(const std::filesystem::path& json_path,
                                      const std::string& ref) {
    std::filesystem::path p(ref);
    if (p.is_absolute())
        return p;
    return json_path.parent_path() / p;
}

void affine_into(const Matrix& m, const double* x, const Vector& offset, double* out) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.row(i);
        double s = offset[i];
        for (std::size_t j = 0; j < m.cols; ++j)
            s += row[j] * x[j];
        out[i] = s;
    }
}

Matrix synth_batch(const GeneratorSpec& gen, const Matrix& latents) {
    Matrix images(latents.rows, gen.image_dim());
    parallel_for(latents.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r)
            affine_into(gen.synthesis, latents.row(r), gen.synthesis_offset, images.row(r));
    });
    return images;
}

} // namespace

void validate_generator(const GeneratorSpec& spec) {
    if (spec.mapping.rows == 0 || spec.mapping.rows != spec.mapping.cols)
        raise(ErrorCode::invalid_argument, "generator: mapping must be square and non-empty");
    if (spec.mapping_offset.size() != spec.mapping.rows)
        raise(ErrorCode::invalid_argument, "generator: mapping offset dim mismatch");
    if (spec.synthesis.rows == 0 || spec.synthesis.cols != spec.mapping.cols)
        raise(ErrorCode::invalid_argument, "generator: synthesis shape mismatch");
    if (spec.synthesis_offset.size() != spec.synthesis.rows)
        raise(ErrorCode::invalid_argument, "generator: synthesis offset dim mismatch");
    if (!spec.mapping.all_finite() || !all_finite(spec.mapping_offset) ||
        !spec.synthesis.all_finite() || !all_finite(spec.synthesis_offset))
        raise(ErrorCode::invalid_argument, "generator: non-finite entries");
}

Vector synth_generate(const GeneratorSpec& spec, const Vector& latent) {
    if (latent.size() != spec.dim())
        raise(ErrorCode::invalid_argument, "synth_generate: latent dim mismatch");
    Vector image(spec.image_dim());
    affine_into(spec.synthesis, latent.data(), spec.synthesis_offset, image.data());
    return image;
}

BaselineResult baseline_collect(const GeneratorSpec& generator, const LabelerSpec& labeler,
                                std::size_t n_per_category, Seed seed, std::size_t max_draws) {
    validate_generator(generator);
    if (n_per_category < 1)
        raise(ErrorCode::invalid_argument, "baseline_collect: n_per_category must be >= 1");
    if (max_draws < n_per_category)
        raise(ErrorCode::invalid_argument, "baseline_collect: max_draws must be >= n_per_category");
    if (labeler.dim() != generator.image_dim() ||
        labeler.gender_weights.size() != labeler.age_weights.size())
        raise(ErrorCode::invalid_argument, "baseline_collect: labeler dim does not match generator output");

    const std::size_t d = generator.dim();
    const std::size_t block = 1024;

    std::array<std::vector<double>, kCategoryCount> stores;
    std::array<std::size_t, kCategoryCount> counts{};
    for (auto& s : stores)
        s.reserve(n_per_category * d);

    BaselineResult result;
    result.accepted.cols = d;
    result.accepted.data.reserve(kCategoryCount * n_per_category * d);
    result.accepted_labels.reserve(kCategoryCount * n_per_category);

    Matrix wbuf(block, d);
    std::vector<LabelResult> labelbuf(block);
    int filled = 0;
    bool done = false;

    for (std::size_t block_start = 0; block_start < max_draws && !done; block_start += block) {
        const std::size_t block_n = std::min(block, max_draws - block_start);
        parallel_for(block_n, [&](std::size_t begin, std::size_t end) {
            Vector z(d);
            Vector image(generator.image_dim());
            for (std::size_t idx = begin; idx < end; ++idx) {
                const std::uint64_t draw = block_start + idx;
                for (std::size_t j = 0; j < d; ++j)
                    z[j] = rng::normal(seed, rng::kStreamBaselineNoise, draw, j);
                affine_into(generator.mapping, z.data(), generator.mapping_offset, wbuf.row(idx));
                affine_into(generator.synthesis, wbuf.row(idx), generator.synthesis_offset,
                            image.data());
                labelbuf[idx] = assign_label(labeler, image);
            }
        });
        for (std::size_t idx = 0; idx < block_n; ++idx) {
            const int c = labelbuf[idx].label.category_index();
            if (counts[static_cast<std::size_t>(c)] >= n_per_category)
                continue;
            const double* row = wbuf.row(idx);
            stores[static_cast<std::size_t>(c)].insert(stores[static_cast<std::size_t>(c)].end(),
                                                       row, row + d);
            result.accepted.data.insert(result.accepted.data.end(), row, row + d);
            result.accepted_labels.push_back(labelbuf[idx]);
            if (++counts[static_cast<std::size_t>(c)] == n_per_category && ++filled == kCategoryCount) {
                result.total_draws = block_start + idx + 1;
                done = true;
                break;
            }
        }
    }

    if (!done) {
        std::string missing;
        for (int c = 0; c < kCategoryCount; ++c) {
            if (counts[static_cast<std::size_t>(c)] < n_per_category) {
                if (!missing.empty())
                    missing += ", ";
                missing += category_name(c);
                missing += " (" + std::to_string(counts[static_cast<std::size_t>(c)]) + "/" +
                           std::to_string(n_per_category) + ")";
            }
        }
        raise(ErrorCode::budget_exhausted,
              "draw budget of " + std::to_string(max_draws) +
                  " exhausted before filling: " + missing);
    }

    result.accepted.rows = result.accepted_labels.size();
    for (int c = 0; c < kCategoryCount; ++c) {
        Matrix batch(n_per_category, d);
        batch.data = std::move(stores[static_cast<std::size_t>(c)]);
        result.batches.emplace(c, std::move(batch));
    }
    return result;
}

DistanceFn metric_by_name(const std::string& name) {
    if (name == "euclidean") {
        return [](std::span<const double> a, std::span<const double> b) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double diff = a[i] - b[i];
                s += diff * diff;
            }
            return std::sqrt(s);
        };
    }
    if (name == "manhattan") {
        return [](std::span<const double> a, std::span<const double> b) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                s += std::abs(a[i] - b[i]);
            return s;
        };
    }
    raise(ErrorCode::invalid_argument, "unknown metric: " + name);
}

double mean_pairwise_distance(const Matrix& images, const DistanceFn& metric) {
    const std::size_t n = images.rows;
    if (n < 2)
        raise(ErrorCode::invalid_argument, "mean_pairwise_distance: need at least 2 images");
    if (!metric)
        raise(ErrorCode::invalid_argument, "mean_pairwise_distance: no metric");
    const std::size_t dim = images.cols;

    // per-row partial sums, reduced in fixed row order afterwards
    std::vector<double> row_sums(n, 0.0);
    parallel_for(n - 1, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::span<const double> a(images.row(i), dim);
            double s = 0.0;
            for (std::size_t j = i + 1; j < n; ++j)
                s += metric(a, std::span<const double>(images.row(j), dim));
            row_sums[i] = s;
        }
    });
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        total += row_sums[i];
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return total / pairs;
}

double mean_pairwise_distance(const std::vector<Vector>& images, const DistanceFn& metric) {
    if (images.size() < 2)
        raise(ErrorCode::invalid_argument, "mean_pairwise_distance: need at least 2 images");
    const std::size_t dim = images.front().size();
    Matrix m(images.size(), dim);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != dim)
            raise(ErrorCode::invalid_argument, "mean_pairwise_distance: images differ in dim");
        std::copy(images[i].begin(), images[i].end(), m.row(i));
    }
    return mean_pairwise_distance(m, metric);
}

double retention_rate(const Matrix& latents, const GeneratorSpec& generator,
                      const LabelerSpec& labeler, int category) {
    if (latents.rows == 0)
        raise(ErrorCode::invalid_argument, "retention_rate: empty batch");
    if (category < 0 || category >= kCategoryCount)
        raise(ErrorCode::invalid_argument, "retention_rate: category index out of range");
    validate_generator(generator);
    if (latents.cols != generator.dim())
        raise(ErrorCode::invalid_argument, "retention_rate: latent dim mismatch");

    std::size_t hits = 0;
    Vector image(generator.image_dim());
    for (std::size_t r = 0; r < latents.rows; ++r) {
        affine_into(generator.synthesis, latents.row(r), generator.synthesis_offset, image.data());
        if (assign_label(labeler, image).label.category_index() == category)
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(latents.rows);
}

GeneratorSpec make_default_generator(std::size_t dim, std::size_t image_dim) {
    if (dim < 2 || image_dim < 2)
        raise(ErrorCode::invalid_argument,
              "default generator needs dim >= 2 and image_dim >= 2");
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));

    GeneratorSpec spec;
    spec.mapping = Matrix(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            spec.mapping(i, j) =
                scale * rng::normal(kDefaultModelSeed, rng::kStreamModelWeights, field_tag(0, i), j);
    spec.synthesis = Matrix(image_dim, dim);
    for (std::size_t i = 0; i < image_dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            spec.synthesis(i, j) =
                scale * rng::normal(kDefaultModelSeed, rng::kStreamModelWeights, field_tag(1, i), j);
    spec.mapping_offset.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
        spec.mapping_offset[i] =
            0.25 * rng::normal(kDefaultModelSeed, rng::kStreamModelWeights, field_tag(2), i);
    spec.synthesis_offset.resize(image_dim);
    for (std::size_t i = 0; i < image_dim; ++i)
        spec.synthesis_offset[i] =
            0.25 * rng::normal(kDefaultModelSeed, rng::kStreamModelWeights, field_tag(3), i);
    return spec;
}

LabelerSpec make_default_labeler(const GeneratorSpec& generator) {
    validate_generator(generator);
    const std::size_t d = generator.dim();
    const std::size_t p = generator.image_dim();
    if (d < 2 || p < 2)
        raise(ErrorCode::invalid_argument, "default labeler needs dim >= 2 and image_dim >= 2");

    Vector age_raw(p), gender_raw(p);
    for (std::size_t i = 0; i < p; ++i) {
        age_raw[i] = rng::normal(kDefaultModelSeed, rng::kStreamModelWeights, field_tag(4), i);
        gender_raw[i] = rng::normal(kDefaultModelSeed, rng::kStreamModelWeights, field_tag(5), i);
    }

    // induced noise-space directions: score(u) = (M_tot^T u) . z + u . base
    const Matrix total = matmul(generator.synthesis, generator.mapping);
    const Vector age_induced = matvec_transposed(total, age_raw);
    const double age_norm = norm2(age_induced);
    if (age_norm < 1e-12)
        raise(ErrorCode::invalid_argument, "default labeler: degenerate age functional");

    // gender functional made independent of the age score under z ~ N(0, I)
    const Vector gender_induced_raw = matvec_transposed(total, gender_raw);
    const double beta = dot(gender_induced_raw, age_induced) / dot(age_induced, age_induced);
    Vector gender_mid(p);
    for (std::size_t i = 0; i < p; ++i)
        gender_mid[i] = gender_raw[i] - beta * age_raw[i];
    const Vector gender_induced = matvec_transposed(total, gender_mid);
    const double gender_norm = norm2(gender_induced);
    if (gender_norm < 1e-12)
        raise(ErrorCode::invalid_argument, "default labeler: degenerate gender functional");

    LabelerSpec labeler;
    labeler.age_weights.resize(p);
    const double age_scale = 15.0 / age_norm; // age score sigma = 15 under z ~ N(0, I)
    for (std::size_t i = 0; i < p; ++i)
        labeler.age_weights[i] = age_scale * age_raw[i];
    labeler.gender_weights.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        labeler.gender_weights[i] = gender_mid[i] / gender_norm;

    Vector base = matvec(generator.synthesis, generator.mapping_offset);
    for (std::size_t i = 0; i < p; ++i)
        base[i] += generator.synthesis_offset[i];
    labeler.age_offset = 45.0 - dot(labeler.age_weights, base); // centers the age score at 45
    labeler.gender_offset = -dot(labeler.gender_weights, base);
    labeler.young_threshold = 30.0;
    labeler.old_threshold = 60.0;
    return labeler;
}

ExperimentReport run_comparison(const ComparisonConfig& config) {
    const std::size_t image_dim = config.image_dim == 0 ? config.dim : config.image_dim;
    if (config.generator.has_value() != config.labeler.has_value())
        raise(ErrorCode::invalid_argument,
              "run_comparison: generator and labeler must be provided together");
    if (config.n_per_category < 2)
        raise(ErrorCode::invalid_argument,
              "run_comparison: n_per_category must be >= 2 to score diversity");
    const DistanceFn metric = metric_by_name(config.metric);

    const GeneratorSpec generator =
        config.generator ? *config.generator : make_default_generator(config.dim, image_dim);
    const LabelerSpec labeler =
        config.labeler ? *config.labeler : make_default_labeler(generator);
    validate_generator(generator);

    const std::size_t d = generator.dim();
    const std::size_t k = config.k == 0 ? d : config.k;
    const FactorBasis basis = compute_basis(generator.mapping, k);

    BaselineResult baseline =
        baseline_collect(generator, labeler, config.n_per_category, config.seed, config.max_draws);

    const Matrix coords = project_batch(basis, baseline.accepted);
    std::vector<Vector> coord_rows(coords.rows);
    for (std::size_t r = 0; r < coords.rows; ++r)
        coord_rows[r].assign(coords.row(r), coords.row(r) + coords.cols);
    std::vector<SemanticLabel> labels(baseline.accepted_labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = baseline.accepted_labels[i].label;
    const CategoryRangeTable table = compute_ranges(partition_by_label(coord_rows, labels));

    ExperimentReport report;
    report.seed = config.seed;
    report.metric = config.metric;
    for (int c = 0; c < kCategoryCount; ++c) {
        const Matrix ours_latents =
            generate_for_category(table, basis, c, config.n_per_category, config.seed);
        const Matrix ours_images = synth_batch(generator, ours_latents);
        const Matrix base_images = synth_batch(generator, baseline.batches.at(c));

        CategoryReport row;
        row.index = c;
        row.name = category_name(c);
        row.ours_diversity = mean_pairwise_distance(ours_images, metric);
        row.baseline_diversity = mean_pairwise_distance(base_images, metric);
        row.retention = retention_rate(ours_latents, generator, labeler, c);
        row.n_ours = config.n_per_category;
        row.n_baseline = config.n_per_category;
        report.categories.push_back(std::move(row));
    }
    return report;
}

std::string report_to_json(const ExperimentReport& report) {
    std::string out;
    out += "{\"seed\": " + std::to_string(report.seed) + ", \"metric\": ";
    jsonio::append_string(out, report.metric);
    out += ", \"categories\": [";
    for (std::size_t i = 0; i < report.categories.size(); ++i) {
        const CategoryReport& c = report.categories[i];
        if (i)
            out += ", ";
        out += "{\"index\": " + std::to_string(c.index) + ", \"name\": ";
        jsonio::append_string(out, c.name);
        out += ", \"ours_diversity\": " + jsonio::format_double(c.ours_diversity);
        out += ", \"baseline_diversity\": " + jsonio::format_double(c.baseline_diversity);
        out += ", \"retention\": " + jsonio::format_double(c.retention);
        out += ", \"n_ours\": " + std::to_string(c.n_ours);
        out += ", \"n_baseline\": " + std::to_string(c.n_baseline) + "}";
    }
    out += "]}\n";
    return out;
}

void save_report(const ExperimentReport& report, const std::filesystem::path& path) {
    const std::string text = report_to_json(report);
    binio::atomic_write_file(path, [&](std::ostream& os) { os << text; });
}

void save_generator_spec(const GeneratorSpec& spec, const std::filesystem::path& json_path) {
    validate_generator(spec);
    const std::filesystem::path dir = json_path.parent_path();
    write_matrix(spec.mapping, dir / "mapping.fck");
    write_vector(spec.mapping_offset, dir / "mapping_offset.fck");
    write_matrix(spec.synthesis, dir / "synthesis.fck");
    write_vector(spec.synthesis_offset, dir / "synthesis_offset.fck");

    std::string out = "{\"dim\": " + std::to_string(spec.dim()) +
                      ", \"image_dim\": " + std::to_string(spec.image_dim()) +
                      ", \"mapping\": \"mapping.fck\""
                      ", \"mapping_offset\": \"mapping_offset.fck\""
                      ", \"synthesis\": \"synthesis.fck\""
                      ", \"synthesis_offset\": \"synthesis_offset.fck\"}\n";
    binio::atomic_write_file(json_path, [&](std::ostream& os) { os << out; });
}

GeneratorSpec load_generator_spec(const std::filesystem::path& json_path) {
    const nlohmann::json j = parse_json_file(json_path);
    if (!j.is_object())
        raise(ErrorCode::format_error, "generator spec must be a JSON object: " + json_path.string());
    const auto& dimj = require_field(j, "dim", json_path);
    const auto& pdimj = require_field(j, "image_dim", json_path);
    if (!dimj.is_number_unsigned() || !pdimj.is_number_unsigned())
        raise(ErrorCode::format_error, "dims must be unsigned integers in " + json_path.string());

    auto path_field = [&](const char* key) {
        const auto& f = require_field(j, key, json_path);
        if (!f.is_string())
            raise(ErrorCode::format_error,
                  std::string("\"") + key + "\" must be a path string in " + json_path.string());
        return resolve_sibling(json_path, f.get<std::string>());
    };

    // validate the whole schema before touching any referenced file
    const std::filesystem::path mapping_path = path_field("mapping");
    const std::filesystem::path mapping_offset_path = path_field("mapping_offset");
    const std::filesystem::path synthesis_path = path_field("synthesis");
    const std::filesystem::path synthesis_offset_path = path_field("synthesis_offset");

    GeneratorSpec spec;
    spec.mapping = read_matrix(mapping_path);
    spec.mapping_offset = read_vector(mapping_offset_path);
    spec.synthesis = read_matrix(synthesis_path);
    spec.synthesis_offset = read_vector(synthesis_offset_path);

    const auto dim = dimj.get<std::size_t>();
    const auto image_dim = pdimj.get<std::size_t>();
    if (spec.mapping.rows != dim || spec.mapping.cols != dim ||
        spec.mapping_offset.size() != dim || spec.synthesis.rows != image_dim ||
        spec.synthesis.cols != dim || spec.synthesis_offset.size() != image_dim)
        raise(ErrorCode::format_error,
              "matrix shapes disagree with declared dims in " + json_path.string());
    return spec;
}

void save_labeler_spec(const LabelerSpec& spec, const std::filesystem::path& json_path) {
    if (spec.gender_weights.empty() || spec.gender_weights.size() != spec.age_weights.size())
        raise(ErrorCode::invalid_argument, "save_labeler_spec: inconsistent weight dims");
    if (!(spec.young_threshold < spec.old_threshold))
        raise(ErrorCode::invalid_argument, "save_labeler_spec: young_threshold must be below old_threshold");
    const std::filesystem::path dir = json_path.parent_path();
    write_vector(spec.gender_weights, dir / "gender_weights.fck");
    write_vector(spec.age_weights, dir / "age_weights.fck");

    std::string out = "{\"gender_weights\": \"gender_weights.fck\", \"gender_offset\": " +
                      jsonio::format_double(spec.gender_offset) +
                      ", \"age_weights\": \"age_weights.fck\", \"age_offset\": " +
                      jsonio::format_double(spec.age_offset) +
                      ", \"young_threshold\": " + jsonio::format_double(spec.young_threshold) +
                      ", \"old_threshold\": " + jsonio::format_double(spec.old_threshold) + "}\n";
    binio::atomic_write_file(json_path, [&](std::ostream& os) { os << out; });
}

LabelerSpec load_labeler_spec(const std::filesystem::path& json_path) {
    const nlohmann::json j = parse_json_file(json_path);
    if (!j.is_object())
        raise(ErrorCode::format_error, "labeler spec must be a JSON object: " + json_path.string());

    auto number_field = [&](const char* key) {
        const auto& f = require_field(j, key, json_path);
        if (!f.is_number())
            raise(ErrorCode::format_error,
                  std::string("\"") + key + "\" must be a number in " + json_path.string());
        const double v = f.get<double>();
        if (!std::isfinite(v))
            raise(ErrorCode::format_error,
                  std::string("\"") + key + "\" must be finite in " + json_path.string());
        return v;
    };
    auto path_field = [&](const char* key) {
        const auto& f = require_field(j, key, json_path);
        if (!f.is_string())
            raise(ErrorCode::format_error,
                  std::string("\"") + key + "\" must be a path string in " + json_path.string());
        return resolve_sibling(json_path, f.get<std::string>());
    };

    const std::filesystem::path gender_path = path_field("gender_weights");
    const std::filesystem::path age_path = path_field("age_weights");

    LabelerSpec spec;
    spec.gender_offset = number_field("gender_offset");
    spec.age_offset = number_field("age_offset");
    spec.young_threshold = number_field("young_threshold");
    spec.old_threshold = number_field("old_threshold");
    spec.gender_weights = read_vector(gender_path);
    spec.age_weights = read_vector(age_path);
    if (spec.gender_weights.size() != spec.age_weights.size())
        raise(ErrorCode::format_error, "weight vectors differ in dim in " + json_path.string());
    if (!(spec.young_threshold < spec.old_threshold))
        raise(ErrorCode::format_error,
              "young_threshold must be below old_threshold in " + json_path.string());
    return spec;
}

ComparisonConfig load_comparison_config(const std::filesystem::path& path) {
    const nlohmann::json j = parse_json_file(path);
    if (!j.is_object())
        raise(ErrorCode::format_error, "config must be a JSON object: " + path.string());

    ComparisonConfig config;
    auto uint_field = [&](const char* key, std::size_t& slot) {
        auto it = j.find(key);
        if (it == j.end())
            return;
        if (!it->is_number_unsigned())
            raise(ErrorCode::format_error,
                  std::string("\"") + key + "\" must be an unsigned integer in " + path.string());
        slot = it->get<std::size_t>();
    };
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned())
            raise(ErrorCode::format_error, "\"seed\" must be an unsigned integer in " + path.string());
        config.seed = it->get<std::uint64_t>();
    }
    uint_field("dim", config.dim);
    uint_field("image_dim", config.image_dim);
    uint_field("n_per_category", config.n_per_category);
    uint_field("max_draws", config.max_draws);
    uint_field("k", config.k);
    if (auto it = j.find("metric"); it != j.end()) {
        if (!it->is_string())
            raise(ErrorCode::format_error, "\"metric\" must be a string in " + path.string());
        config.metric = it->get<std::string>();
    }
    const bool has_gen = j.contains("generator");
    const bool has_lab = j.contains("labeler");
    if (has_gen != has_lab)
        raise(ErrorCode::format_error,
              "\"generator\" and \"labeler\" must be provided together in " + path.string());
    if (has_gen) {
        if (!j["generator"].is_string() || !j["labeler"].is_string())
            raise(ErrorCode::format_error, "spec references must be path strings in " + path.string());
        config.generator = load_generator_spec(resolve_sibling(path, j["generator"].get<std::string>()));
        config.labeler = load_labeler_spec(resolve_sibling(path, j["labeler"].get<std::string>()));
    }
    return config;
}

} // namespace factorforge
