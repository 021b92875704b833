#pragma once

#include <filesystem>

#include "factorforge/matrix.hpp"

namespace factorforge {

/// Orthonormal factor directions derived from generator weights: the top-k
/// eigenvectors of gram(W), with their eigenvalues.
struct FactorBasis {
    std::size_t dim = 0; // latent dimensionality
    std::size_t k = 0;   // number of directions, 1 <= k <= dim
    Matrix directions;   // dim x k, orthonormal columns
    Vector eigenvalues;  // k entries, descending, nonnegative
};

/// Top-k basis from a weight matrix: eigendecompose W^T W and keep the k
/// leading eigenvector columns. Eigenvalues that come out as roundoff
/// negatives are clamped to zero (the gram matrix is PSD by construction).
FactorBasis compute_basis(const Matrix& weights, std::size_t k);

// FCB1 container: magic "FCB1", u32 LE dim, u32 LE k, k eigenvalues (f64 LE),
// then dim x k directions (f64 LE, row-major). Round trips are bit-exact.
void save_basis(const FactorBasis& basis, const std::filesystem::path& path);
FactorBasis load_basis(const std::filesystem::path& path);

} // namespace factorforge
