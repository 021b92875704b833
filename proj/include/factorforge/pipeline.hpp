#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factorforge/basis.hpp"
#include "factorforge/matrix.hpp"
#include "factorforge/sampler.hpp"
#include "factorforge/semantics.hpp"

namespace factorforge {

/// Linear stand-in for a style-based generator: an affine mapping layer
/// (noise z -> latent w) and an affine synthesis layer (latent w -> image
/// vector).
struct GeneratorSpec {
    Matrix mapping;          // d x d
    Vector mapping_offset;   // d
    Matrix synthesis;        // p x d
    Vector synthesis_offset; // p

    std::size_t dim() const { return mapping.cols; }
    std::size_t image_dim() const { return synthesis.rows; }
};

/// Raises invalid-argument when the generator's shapes are inconsistent.
void validate_generator(const GeneratorSpec& spec);

/// image = synthesis w + synthesis_offset.
Vector synth_generate(const GeneratorSpec& spec, const Vector& latent);

struct BaselineResult {
    std::map<int, Matrix> batches;            // category -> n x d latents, draw order
    Matrix accepted;                          // all accepted latents, global draw order
    std::vector<LabelResult> accepted_labels; // aligned with accepted rows
    std::size_t total_draws = 0;
};

/// Rejection baseline: draw z from the standard normal, map to w, generate,
/// classify, keep until every category holds n_per_category latents. Keyed by
/// draw index, so results are reproducible at any thread count. Raises
/// budget-exhausted (naming the unfilled categories) when max_draws runs out.
BaselineResult baseline_collect(const GeneratorSpec& generator, const LabelerSpec& labeler,
                                std::size_t n_per_category, Seed seed, std::size_t max_draws);

using DistanceFn = std::function<double(std::span<const double>, std::span<const double>)>;

/// Built-in metrics: "euclidean" (default everywhere) and "manhattan".
DistanceFn metric_by_name(const std::string& name);

/// Average of the metric over all n(n-1)/2 unordered pairs. Needs >= 2 images.
double mean_pairwise_distance(const std::vector<Vector>& images, const DistanceFn& metric);
double mean_pairwise_distance(const Matrix& images, const DistanceFn& metric);

/// Fraction of rows whose generated image is labeled back into `category`.
double retention_rate(const Matrix& latents, const GeneratorSpec& generator,
                      const LabelerSpec& labeler, int category);

struct CategoryReport {
    int index = 0;
    std::string name;
    double ours_diversity = 0.0;
    double baseline_diversity = 0.0;
    double retention = 0.0;
    std::size_t n_ours = 0;
    std::size_t n_baseline = 0;
};

struct ExperimentReport {
    Seed seed = 0;
    std::string metric;
    std::vector<CategoryReport> categories; // all six, by index
};

struct ComparisonConfig {
    Seed seed = 0;
    std::size_t dim = 64;
    std::size_t image_dim = 0; // 0 -> dim
    std::size_t n_per_category = 1000;
    std::size_t max_draws = 1000000;
    std::size_t k = 0; // 0 -> full basis
    std::string metric = "euclidean";
    std::optional<GeneratorSpec> generator; // default synthetic model when absent
    std::optional<LabelerSpec> labeler;
};

/// Full experiment: basis from the generator's mapping weights, rejection
/// baseline, projection, range table, box-sampled counterpart, then per
/// category diversity of both batches and retention of ours. Every number is
/// a pure function of the config.
ExperimentReport run_comparison(const ComparisonConfig& config);

std::string report_to_json(const ExperimentReport& report);
void save_report(const ExperimentReport& report, const std::filesystem::path& path);

/// Default synthetic model: a fixed pure function of (dim, image_dim). The
/// labeler's age functional is scaled to sigma 15 around 45 and its gender
/// functional is orthogonalized against it in noise space, so all six
/// categories have probability >= ~7.9% under the mapped normal.
GeneratorSpec make_default_generator(std::size_t dim, std::size_t image_dim);
LabelerSpec make_default_labeler(const GeneratorSpec& generator);

// Spec files are JSON referencing FCK1 matrices by path relative to the JSON
// file; save_* writes the matrices as fixed-name siblings.
void save_generator_spec(const GeneratorSpec& spec, const std::filesystem::path& json_path);
GeneratorSpec load_generator_spec(const std::filesystem::path& json_path);
void save_labeler_spec(const LabelerSpec& spec, const std::filesystem::path& json_path);
LabelerSpec load_labeler_spec(const std::filesystem::path& json_path);

/// Comparison config from JSON; every field optional, unset fields keep their
/// defaults. "generator"/"labeler" are spec-file paths (both or neither).
ComparisonConfig load_comparison_config(const std::filesystem::path& path);

} // namespace factorforge
