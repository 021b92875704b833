#include <cstring>
#include <optional>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "factorforge/basis.hpp"
#include "factorforge/coords.hpp"
#include "factorforge/error.hpp"
#include "factorforge/pipeline.hpp"
#include "factorforge/sampler.hpp"
#include "factorforge/semantics.hpp"

namespace py = pybind11;
namespace ff = factorforge;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ff::Matrix matrix_from_array(const DoubleArray& arr) {
    if (arr.ndim() != 2)
        throw py::value_error("expected a 2-D float array");
    ff::Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::memcpy(m.data.data(), arr.data(), m.data.size() * sizeof(double));
    return m;
}

ff::Vector vector_from_array(const DoubleArray& arr) {
    if (arr.ndim() != 1)
        throw py::value_error("expected a 1-D float array");
    ff::Vector v(static_cast<std::size_t>(arr.shape(0)));
    std::memcpy(v.data(), arr.data(), v.size() * sizeof(double));
    return v;
}

py::array_t<double> array_from_matrix(const ff::Matrix& m) {
    py::array_t<double> arr({m.rows, m.cols});
    std::memcpy(arr.mutable_data(), m.data.data(), m.data.size() * sizeof(double));
    return arr;
}

py::array_t<double> array_from_vector(const ff::Vector& v) {
    py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
    std::memcpy(arr.mutable_data(), v.data(), v.size() * sizeof(double));
    return arr;
}

} // namespace

PYBIND11_MODULE(_factorforge, m) {
    m.doc() = "Factor basis extraction, coordinate projection, and box-resampling toolkit";

    py::register_exception<ff::Error>(m, "FactorForgeError");

    m.def("gram", [](const DoubleArray& w) { return array_from_matrix(ff::gram(matrix_from_array(w))); },
          py::arg("weights"), "S = W^T W, bitwise symmetric");

    m.def("eigh_descending", [](const DoubleArray& s) {
        ff::EighResult r = ff::eigh_descending(matrix_from_array(s));
        return py::make_tuple(array_from_vector(r.eigenvalues), array_from_matrix(r.eigenvectors));
    }, py::arg("matrix"), "eigenvalues (descending) and orthonormal eigenvector columns");

    m.def("lstsq", [](const DoubleArray& a, const DoubleArray& b) {
        return array_from_vector(ff::lstsq(matrix_from_array(a), vector_from_array(b)));
    }, py::arg("a"), py::arg("b"));

    py::class_<ff::FactorBasis>(m, "FactorBasis")
        .def_property_readonly("dim", [](const ff::FactorBasis& b) { return b.dim; })
        .def_property_readonly("k", [](const ff::FactorBasis& b) { return b.k; })
        .def_property_readonly("eigenvalues",
                               [](const ff::FactorBasis& b) { return array_from_vector(b.eigenvalues); })
        .def_property_readonly("directions",
                               [](const ff::FactorBasis& b) { return array_from_matrix(b.directions); })
        .def_static("compute", [](const DoubleArray& w, std::size_t k) {
            const ff::Matrix weights = matrix_from_array(w);
            return ff::compute_basis(weights, k == 0 ? weights.cols : k);
        }, py::arg("weights"), py::arg("k") = 0, "top-k basis of gram(weights); k=0 keeps all")
        .def("save", [](const ff::FactorBasis& b, const std::string& path) { ff::save_basis(b, path); },
             py::arg("path"))
        .def_static("load", [](const std::string& path) { return ff::load_basis(path); },
                    py::arg("path"));

    m.def("project", [](const ff::FactorBasis& basis, const DoubleArray& w) {
        return array_from_vector(ff::project(basis, vector_from_array(w)));
    }, py::arg("basis"), py::arg("latent"));
    m.def("reconstruct", [](const ff::FactorBasis& basis, const DoubleArray& alpha) {
        return array_from_vector(ff::reconstruct(basis, vector_from_array(alpha)));
    }, py::arg("basis"), py::arg("coords"));
    m.def("project_batch", [](const ff::FactorBasis& basis, const DoubleArray& latents) {
        return array_from_matrix(ff::project_batch(basis, matrix_from_array(latents)));
    }, py::arg("basis"), py::arg("latents"));

    py::class_<ff::CategoryRangeTable>(m, "RangeTable")
        .def_property_readonly("k", [](const ff::CategoryRangeTable& t) { return t.k; })
        .def("present", &ff::CategoryRangeTable::present, py::arg("category"))
        .def("min", [](const ff::CategoryRangeTable& t, int c) {
            if (!t.present(c))
                throw py::value_error("category absent");
            return array_from_vector(t.categories[static_cast<std::size_t>(c)]->min);
        }, py::arg("category"))
        .def("max", [](const ff::CategoryRangeTable& t, int c) {
            if (!t.present(c))
                throw py::value_error("category absent");
            return array_from_vector(t.categories[static_cast<std::size_t>(c)]->max);
        }, py::arg("category"))
        .def("count", [](const ff::CategoryRangeTable& t, int c) {
            if (!t.present(c))
                throw py::value_error("category absent");
            return t.categories[static_cast<std::size_t>(c)]->count;
        }, py::arg("category"))
        .def("save", [](const ff::CategoryRangeTable& t, const std::string& path) {
            ff::save_ranges(t, path);
        }, py::arg("path"))
        .def_static("load", [](const std::string& path) { return ff::load_ranges(path); },
                    py::arg("path"));

    m.def("compute_ranges", [](const DoubleArray& coords, const std::vector<int>& categories) {
        const ff::Matrix c = matrix_from_array(coords);
        if (categories.size() != c.rows)
            throw py::value_error("category list length must match coordinate rows");
        std::vector<ff::Vector> rows(c.rows);
        std::vector<ff::SemanticLabel> labels(c.rows);
        for (std::size_t r = 0; r < c.rows; ++r) {
            rows[r].assign(c.row(r), c.row(r) + c.cols);
            labels[r] = ff::label_from_category(categories[r]);
        }
        return ff::compute_ranges(ff::partition_by_label(rows, labels));
    }, py::arg("coords"), py::arg("categories"),
       "range table from coordinate rows and their category indices (0..5)");

    m.def("sample_uniform_box", [](const ff::CategoryRangeTable& table, int category,
                                   std::size_t n, ff::Seed seed) {
        const std::vector<ff::Vector> samples = ff::sample_uniform_box(table, category, n, seed);
        ff::Matrix out(samples.size(), table.k);
        for (std::size_t i = 0; i < samples.size(); ++i)
            std::memcpy(out.row(i), samples[i].data(), table.k * sizeof(double));
        return array_from_matrix(out);
    }, py::arg("table"), py::arg("category"), py::arg("n"), py::arg("seed"));

    m.def("generate_for_category", [](const ff::CategoryRangeTable& table,
                                      const ff::FactorBasis& basis, int category,
                                      std::size_t n, ff::Seed seed) {
        return array_from_matrix(ff::generate_for_category(table, basis, category, n, seed));
    }, py::arg("table"), py::arg("basis"), py::arg("category"), py::arg("n"), py::arg("seed"));

    m.def("category_name", [](int index) { return std::string(ff::category_name(index)); },
          py::arg("index"));
    m.def("category_from_name", [](const std::string& name) -> std::optional<int> {
        return ff::category_from_name(name);
    }, py::arg("name"));

    m.def("run_demo_json", [](std::size_t dim, ff::Seed seed, std::size_t n_per_category,
                              std::size_t image_dim, const std::string& metric,
                              std::size_t max_draws, std::size_t k) {
        ff::ComparisonConfig config;
        config.dim = dim;
        config.seed = seed;
        config.n_per_category = n_per_category;
        config.image_dim = image_dim;
        config.metric = metric;
        config.max_draws = max_draws;
        config.k = k;
        return ff::report_to_json(ff::run_comparison(config));
    }, py::arg("dim") = 64, py::arg("seed") = 0, py::arg("n_per_category") = 1000,
       py::arg("image_dim") = 0, py::arg("metric") = "euclidean",
       py::arg("max_draws") = 1000000, py::arg("k") = 0,
       "synthetic end-to-end comparison; returns the report as a JSON string");
}
