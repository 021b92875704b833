#include "factorforge/sampler.hpp"

#include <string>

#include "factorforge/coords.hpp"
#include "factorforge/error.hpp"
#include "factorforge/rng.hpp"

namespace factorforge {

std::vector<Vector> sample_uniform_box(const CategoryRangeTable& table, int category,
                                       std::size_t n, Seed seed) {
    if (!table.present(category))
        raise(ErrorCode::empty_category,
              "no samples observed for category " +
                  (category >= 0 && category < kCategoryCount
                       ? std::string(category_name(category))
                       : std::to_string(category)));
    const CategoryRange& range = *table.categories[static_cast<std::size_t>(category)];
    const std::size_t k = table.k;
    const auto stream = static_cast<std::uint64_t>(category);

    std::vector<Vector> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vector alpha(k);
        for (std::size_t j = 0; j < k; ++j)
            alpha[j] = rng::uniform_in(range.min[j], range.max[j], seed, stream, i, j);
        samples.push_back(std::move(alpha));
    }
    return samples;
}

Matrix generate_for_category(const CategoryRangeTable& table, const FactorBasis& basis,
                             int category, std::size_t n, Seed seed) {
    if (table.k != basis.k)
        raise(ErrorCode::invalid_argument, "generate_for_category: table k does not match basis k");
    const std::vector<Vector> coords = sample_uniform_box(table, category, n, seed);
    Matrix batch(n, basis.dim);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector latent = reconstruct(basis, coords[i]);
        double* row = batch.row(i);
        for (std::size_t j = 0; j < basis.dim; ++j)
            row[j] = latent[j];
    }
    return batch;
}

} // namespace factorforge
