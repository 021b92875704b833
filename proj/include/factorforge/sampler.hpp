#pragma once

#include <cstdint>
#include <vector>

#include "factorforge/basis.hpp"
#include "factorforge/semantics.hpp"

namespace factorforge {

using Seed = std::uint64_t;

/// n coordinate vectors drawn uniformly inside the category's box, channels
/// independent. Sample i, channel j is keyed by (seed, category, i, j), so the
/// output is a pure function of its arguments: same inputs, identical bits,
/// regardless of threads or evaluation order.
std::vector<Vector> sample_uniform_box(const CategoryRangeTable& table, int category,
                                       std::size_t n, Seed seed);

/// Box-samples n coordinate vectors and reconstructs each through the basis;
/// row i of the batch is reconstruct(basis, sample i).
Matrix generate_for_category(const CategoryRangeTable& table, const FactorBasis& basis,
                             int category, std::size_t n, Seed seed);

} // namespace factorforge
