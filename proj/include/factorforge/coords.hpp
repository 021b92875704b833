#pragma once

#include "factorforge/basis.hpp"
#include "factorforge/matrix.hpp"

namespace factorforge {

// Factor coordinates are k-vectors; latent batches are n x dim matrices with
// one latent per row.

/// alpha = directions^T w. Exact least-squares solution because the basis
/// columns are orthonormal.
Vector project(const FactorBasis& basis, const Vector& latent);

/// w = directions alpha.
Vector reconstruct(const FactorBasis& basis, const Vector& alpha);

/// Row i of the result is project(basis, row i of latents). Parallelized over
/// rows; identical to the sequential loop.
Matrix project_batch(const FactorBasis& basis, const Matrix& latents);

} // namespace factorforge
