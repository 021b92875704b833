// factorforge CLI: one subcommand per pipeline stage plus an end-to-end demo.
// Exit codes: 0 success, 1 domain error (single machine-readable line on
// stderr), 2 usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <system_error>

#include <CLI11.hpp>

#include "factorforge/basis.hpp"
#include "factorforge/coords.hpp"
#include "factorforge/error.hpp"
#include "factorforge/pipeline.hpp"
#include "factorforge/sampler.hpp"
#include "factorforge/semantics.hpp"

namespace ff = factorforge;
namespace fs = std::filesystem;

namespace {

// output paths are checked before any computation starts
void require_writable_dir(const fs::path& out) {
    const fs::path parent = out.parent_path();
    if (!parent.empty() && !fs::is_directory(parent))
        ff::raise(ff::ErrorCode::io_error,
                  "output directory does not exist: " + parent.string());
}

void print_report_table(const ff::ExperimentReport& report) {
    std::printf("seed %llu, metric %s\n", static_cast<unsigned long long>(report.seed),
                report.metric.c_str());
    std::printf("%-16s %16s %16s %12s\n", "category", "ours", "baseline", "retention");
    for (const auto& row : report.categories)
        std::printf("%-16s %16.4f %16.4f %12.4f\n", row.name.c_str(), row.ours_diversity,
                    row.baseline_diversity, row.retention);
}

int run_basis(const std::string& weights, std::size_t k, const std::string& out) {
    require_writable_dir(out);
    const ff::Matrix w = ff::read_matrix(weights);
    const std::size_t effective_k = k == 0 ? w.cols : k;
    ff::save_basis(ff::compute_basis(w, effective_k), out);
    return 0;
}

int run_project(const std::string& basis_path, const std::string& latents,
                const std::string& out) {
    require_writable_dir(out);
    const ff::FactorBasis basis = ff::load_basis(basis_path);
    ff::write_matrix(ff::project_batch(basis, ff::read_matrix(latents)), out);
    return 0;
}

int run_ranges(const std::string& coords_path, const std::string& labels_path,
               const std::string& out) {
    require_writable_dir(out);
    const ff::Matrix coords = ff::read_matrix(coords_path);
    const std::vector<ff::LabelResult> labels = ff::load_labels(labels_path);
    if (labels.size() != coords.rows)
        ff::raise(ff::ErrorCode::invalid_argument,
                  "label count does not match coordinate rows");
    std::vector<ff::Vector> rows(coords.rows);
    std::vector<ff::SemanticLabel> semantic(coords.rows);
    for (std::size_t r = 0; r < coords.rows; ++r) {
        rows[r].assign(coords.row(r), coords.row(r) + coords.cols);
        semantic[r] = labels[r].label;
    }
    ff::save_ranges(ff::compute_ranges(ff::partition_by_label(rows, semantic)), out);
    return 0;
}

int run_sample(const std::string& ranges_path, const std::string& category_name,
               std::size_t n, ff::Seed seed, const std::string& out,
               const std::string& basis_path) {
    require_writable_dir(out);
    const ff::CategoryRangeTable table = ff::load_ranges(ranges_path);
    const auto category = ff::category_from_name(category_name);
    if (!category)
        ff::raise(ff::ErrorCode::empty_category, "unknown category name: " + category_name);
    if (!basis_path.empty()) {
        const ff::FactorBasis basis = ff::load_basis(basis_path);
        ff::write_matrix(ff::generate_for_category(table, basis, *category, n, seed), out);
        return 0;
    }
    const std::vector<ff::Vector> coords = ff::sample_uniform_box(table, *category, n, seed);
    ff::Matrix m(coords.size(), table.k);
    for (std::size_t i = 0; i < coords.size(); ++i)
        std::copy(coords[i].begin(), coords[i].end(), m.row(i));
    ff::write_matrix(m, out);
    return 0;
}

int run_baseline(const std::string& generator_path, const std::string& labeler_path,
                 std::size_t n, ff::Seed seed, std::size_t max_draws,
                 const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
        ff::raise(ff::ErrorCode::io_error, "cannot create output directory: " + out_dir);
    const ff::GeneratorSpec generator = ff::load_generator_spec(generator_path);
    const ff::LabelerSpec labeler = ff::load_labeler_spec(labeler_path);
    const ff::BaselineResult result =
        ff::baseline_collect(generator, labeler, n, seed, max_draws);

    for (const auto& [category, batch] : result.batches)
        ff::write_matrix(batch, fs::path(out_dir) /
                                    ("baseline_" + std::string(ff::category_name(category)) + ".fck"));
    ff::write_matrix(result.accepted, fs::path(out_dir) / "accepted.fck");
    ff::save_labels(result.accepted_labels, fs::path(out_dir) / "accepted_labels.json");
    std::printf("collected %zu per category in %zu draws\n", n, result.total_draws);
    return 0;
}

int run_evaluate(const std::string& config_path, const std::string& out) {
    require_writable_dir(out);
    const ff::ComparisonConfig config = ff::load_comparison_config(config_path);
    const ff::ExperimentReport report = ff::run_comparison(config);
    ff::save_report(report, out);
    print_report_table(report);
    return 0;
}

int run_demo(std::size_t dim, std::size_t image_dim, ff::Seed seed, std::size_t n,
             const std::string& metric, std::size_t max_draws, const std::string& out,
             const std::string& export_dir) {
    require_writable_dir(out);
    ff::ComparisonConfig config;
    config.dim = dim;
    config.image_dim = image_dim;
    config.seed = seed;
    config.n_per_category = n;
    config.metric = metric;
    config.max_draws = max_draws;

    if (!export_dir.empty()) {
        const ff::GeneratorSpec generator =
            ff::make_default_generator(dim, image_dim == 0 ? dim : image_dim);
        std::error_code ec;
        fs::create_directories(export_dir, ec);
        if (ec || !fs::is_directory(export_dir))
            ff::raise(ff::ErrorCode::io_error, "cannot create spec directory: " + export_dir);
        ff::save_generator_spec(generator, fs::path(export_dir) / "generator.json");
        ff::save_labeler_spec(ff::make_default_labeler(generator),
                              fs::path(export_dir) / "labeler.json");
    }

    const ff::ExperimentReport report = ff::run_comparison(config);
    ff::save_report(report, out);
    print_report_table(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"factorforge: derive a factor basis from generator weights, map latents to "
                 "factor coordinates, build per-category coordinate ranges, and synthesize new "
                 "latents by uniform box sampling"};
    app.require_subcommand(1);

    std::string weights, latents, basis_path, coords_path, labels_path, ranges_path;
    std::string generator_path, labeler_path, config_path, out_dir, export_dir;
    std::string category_name, metric = "euclidean";
    std::string out = "report.json";
    std::size_t k = 0, n = 1000, dim = 64, image_dim = 0, max_draws = 1000000;
    ff::Seed seed = 0;

    auto* basis_cmd = app.add_subcommand("basis", "compute a factor basis from weights");
    basis_cmd->add_option("--weights", weights, "FCK1 weight matrix")->required();
    basis_cmd->add_option("--k", k, "direction count (default: full)");
    basis_cmd->add_option("--out", out, "FCB1 output path")->required();

    auto* project_cmd = app.add_subcommand("project", "project latents to factor coordinates");
    project_cmd->add_option("--basis", basis_path, "FCB1 basis")->required();
    project_cmd->add_option("--latents", latents, "FCK1 latent batch, one row per latent")->required();
    project_cmd->add_option("--out", out, "FCK1 output path")->required();

    auto* ranges_cmd = app.add_subcommand("ranges", "build a per-category range table");
    ranges_cmd->add_option("--coords", coords_path, "FCK1 coordinates, one row per sample")->required();
    ranges_cmd->add_option("--labels", labels_path, "JSON label file, aligned with rows")->required();
    ranges_cmd->add_option("--out", out, "range-table JSON output path")->required();

    auto* sample_cmd = app.add_subcommand("sample", "uniformly sample a category's box");
    sample_cmd->add_option("--ranges", ranges_path, "range-table JSON")->required();
    sample_cmd->add_option("--category", category_name, "category name, e.g. female_young")->required();
    sample_cmd->add_option("--n", n, "sample count")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", seed, "random seed");
    sample_cmd->add_option("--basis", basis_path, "FCB1 basis; emit reconstructed latents");
    sample_cmd->add_option("--out", out, "FCK1 output path")->required();

    auto* baseline_cmd = app.add_subcommand("baseline", "rejection-sampling baseline collection");
    baseline_cmd->add_option("--generator", generator_path, "generator spec JSON")->required();
    baseline_cmd->add_option("--labeler", labeler_path, "labeler spec JSON")->required();
    baseline_cmd->add_option("--n", n, "samples per category")->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--seed", seed, "random seed");
    baseline_cmd->add_option("--max-draws", max_draws, "draw budget")->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--out-dir", out_dir, "output directory")->required();

    auto* evaluate_cmd = app.add_subcommand("evaluate", "run the comparison from a config file");
    evaluate_cmd->add_option("--config", config_path, "comparison config JSON")->required();
    evaluate_cmd->add_option("--out", out, "report JSON output path");

    auto* demo_cmd = app.add_subcommand("demo", "end-to-end synthetic comparison");
    demo_cmd->add_option("--dim", dim, "latent dimensionality")->check(CLI::PositiveNumber);
    demo_cmd->add_option("--image-dim", image_dim, "image vector dimensionality (default: dim)");
    demo_cmd->add_option("--seed", seed, "random seed");
    demo_cmd->add_option("--n", n, "samples per category")->check(CLI::PositiveNumber);
    demo_cmd->add_option("--metric", metric, "distance metric (euclidean, manhattan)");
    demo_cmd->add_option("--max-draws", max_draws, "baseline draw budget")->check(CLI::PositiveNumber);
    demo_cmd->add_option("--out", out, "report JSON output path");
    demo_cmd->add_option("--export-specs", export_dir, "also write the synthetic model specs here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (basis_cmd->parsed())
            return run_basis(weights, k, out);
        if (project_cmd->parsed())
            return run_project(basis_path, latents, out);
        if (ranges_cmd->parsed())
            return run_ranges(coords_path, labels_path, out);
        if (sample_cmd->parsed())
            return run_sample(ranges_path, category_name, n, seed, out, basis_path);
        if (baseline_cmd->parsed())
            return run_baseline(generator_path, labeler_path, n, seed, max_draws, out_dir);
        if (evaluate_cmd->parsed())
            return run_evaluate(config_path, out);
        if (demo_cmd->parsed())
            return run_demo(dim, image_dim, seed, n, metric, max_draws, out, export_dir);
    } catch (const ff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
