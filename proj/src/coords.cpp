#include "factorforge/coords.hpp"

#include "factorforge/error.hpp"
#include "factorforge/parallel.hpp"

namespace factorforge {

namespace {

void project_into(const FactorBasis& basis, const double* latent, double* out) {
    const std::size_t d = basis.dim;
    const std::size_t k = basis.k;
    for (std::size_t j = 0; j < k; ++j)
        out[j] = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double wi = latent[i];
        const double* row = basis.directions.row(i);
        for (std::size_t j = 0; j < k; ++j)
            out[j] += row[j] * wi;
    }
}

} // namespace

Vector project(const FactorBasis& basis, const Vector& latent) {
    if (latent.size() != basis.dim)
        raise(ErrorCode::invalid_argument, "project: latent dim does not match basis dim");
    Vector alpha(basis.k, 0.0);
    project_into(basis, latent.data(), alpha.data());
    return alpha;
}

Vector reconstruct(const FactorBasis& basis, const Vector& alpha) {
    if (alpha.size() != basis.k)
        raise(ErrorCode::invalid_argument, "reconstruct: coordinate count does not match basis k");
    Vector latent(basis.dim, 0.0);
    for (std::size_t i = 0; i < basis.dim; ++i) {
        const double* row = basis.directions.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < basis.k; ++j)
            s += row[j] * alpha[j];
        latent[i] = s;
    }
    return latent;
}

Matrix project_batch(const FactorBasis& basis, const Matrix& latents) {
    if (latents.rows > 0 && latents.cols != basis.dim)
        raise(ErrorCode::invalid_argument, "project_batch: latent dim does not match basis dim");
    Matrix coords(latents.rows, basis.k);
    parallel_for(latents.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r)
            project_into(basis, latents.row(r), coords.row(r));
    });
    return coords;
}

} // namespace factorforge
