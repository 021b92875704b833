#include "factorforge/basis.hpp"

#include <cstring>

#include "factorforge/error.hpp"
#include "binio.hpp"

namespace factorforge {

FactorBasis compute_basis(const Matrix& weights, std::size_t k) {
    if (k < 1 || k > weights.cols)
        raise(ErrorCode::invalid_argument, "compute_basis: k must be in [1, cols(W)]");
    const Matrix s = gram(weights);
    EighResult eig = eigh_descending(s);

    FactorBasis basis;
    basis.dim = s.rows;
    basis.k = k;
    basis.directions = Matrix(basis.dim, k);
    for (std::size_t i = 0; i < basis.dim; ++i)
        for (std::size_t j = 0; j < k; ++j)
            basis.directions(i, j) = eig.eigenvectors(i, j);
    basis.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
    for (double& v : basis.eigenvalues)
        if (v < 0.0)
            v = 0.0;
    return basis;
}

void save_basis(const FactorBasis& basis, const std::filesystem::path& path) {
    if (basis.dim == 0 || basis.k == 0 || basis.k > basis.dim)
        raise(ErrorCode::invalid_argument, "save_basis: invalid dim/k");
    if (basis.dim > 0xffffffffULL)
        raise(ErrorCode::invalid_argument, "save_basis: dim exceeds the FCB1 format");
    if (basis.directions.rows != basis.dim || basis.directions.cols != basis.k ||
        basis.eigenvalues.size() != basis.k)
        raise(ErrorCode::invalid_argument, "save_basis: fields do not match dim/k");
    if (!basis.directions.all_finite() || !all_finite(basis.eigenvalues))
        raise(ErrorCode::invalid_argument, "save_basis: non-finite values");
    binio::atomic_write_file(path, [&](std::ostream& out) {
        out.write("FCB1", 4);
        binio::put_u32le(out, static_cast<std::uint32_t>(basis.dim));
        binio::put_u32le(out, static_cast<std::uint32_t>(basis.k));
        for (double v : basis.eigenvalues)
            binio::put_f64le(out, v);
        for (double v : basis.directions.data)
            binio::put_f64le(out, v);
    });
}

FactorBasis load_basis(const std::filesystem::path& path) {
    std::ifstream in = binio::open_binary_input(path);
    char magic[4] = {};
    if (!in.read(magic, 4) || std::memcmp(magic, "FCB1", 4) != 0)
        raise(ErrorCode::format_error, "not an FCB1 basis file: " + path.string());
    std::uint32_t dim = 0, k = 0;
    if (!binio::get_u32le(in, dim) || !binio::get_u32le(in, k))
        raise(ErrorCode::format_error, "truncated FCB1 header: " + path.string());
    if (dim == 0 || k == 0 || k > dim)
        raise(ErrorCode::format_error, "invalid FCB1 shape: " + path.string());

    FactorBasis basis;
    basis.dim = dim;
    basis.k = k;
    basis.eigenvalues.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!binio::get_f64le(in, basis.eigenvalues[i]))
            raise(ErrorCode::format_error, "truncated FCB1 eigenvalues: " + path.string());
    }
    basis.directions = Matrix(dim, k);
    for (std::size_t i = 0; i < basis.directions.data.size(); ++i) {
        if (!binio::get_f64le(in, basis.directions.data[i]))
            raise(ErrorCode::format_error, "truncated FCB1 directions: " + path.string());
    }
    if (in.peek() != std::ifstream::traits_type::eof())
        raise(ErrorCode::format_error, "trailing bytes after FCB1 payload: " + path.string());
    if (!basis.directions.all_finite() || !all_finite(basis.eigenvalues))
        raise(ErrorCode::format_error, "non-finite values in FCB1 payload: " + path.string());
    for (std::size_t i = 0; i < k; ++i) {
        if (basis.eigenvalues[i] < -1e-12)
            raise(ErrorCode::format_error, "negative eigenvalue in FCB1 payload: " + path.string());
        if (basis.eigenvalues[i] < 0.0)
            basis.eigenvalues[i] = 0.0;
        if (i > 0 && basis.eigenvalues[i] > basis.eigenvalues[i - 1])
            raise(ErrorCode::format_error, "eigenvalues not descending in FCB1 payload: " + path.string());
    }
    return basis;
}

} // namespace factorforge
