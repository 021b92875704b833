#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "factorforge/basis.hpp"
#include "factorforge/error.hpp"
#include "oracles.hpp"

using namespace factorforge;
namespace fs = std::filesystem;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(rows, cols);
    for (double& x : m.data)
        x = dist(rng);
    return m;
}

fs::path temp_file(const char* name) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("factorforge-basis-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("compute_basis on a diagonal weight matrix") {
    Matrix w(3, 3, 0.0);
    w(0, 0) = 3.0;
    w(1, 1) = 2.0;
    w(2, 2) = 1.0;
    FactorBasis basis = compute_basis(w, 2);
    CHECK(basis.dim == 3);
    CHECK(basis.k == 2);
    CHECK(basis.eigenvalues[0] == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(basis.eigenvalues[1] == doctest::Approx(4.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(basis.directions(i, 0) == doctest::Approx(i == 0 ? 1.0 : 0.0).epsilon(1e-12));
        CHECK(basis.directions(i, 1) == doctest::Approx(i == 1 ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("compute_basis on the identity keeps the stable tie order") {
    const std::size_t d = 5;
    FactorBasis basis = compute_basis(Matrix::identity(d), d);
    for (std::size_t i = 0; i < d; ++i) {
        CHECK(basis.eigenvalues[i] == 1.0);
        for (std::size_t j = 0; j < d; ++j)
            CHECK(basis.directions(i, j) == (i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("compute_basis eigenpairs satisfy the residual bound and match the oracle") {
    std::mt19937_64 rng(201);
    Matrix w = random_matrix(rng, 6, 6);
    Matrix s = gram(w);
    FactorBasis basis = compute_basis(w, 6);

    const double scale = std::max(1.0, basis.eigenvalues.front());
    for (std::size_t c = 0; c < 6; ++c) {
        Vector v(6);
        for (std::size_t i = 0; i < 6; ++i)
            v[i] = basis.directions(i, c);
        Vector sv = matvec(s, v);
        double r2 = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            const double diff = sv[i] - basis.eigenvalues[c] * v[i];
            r2 += diff * diff;
        }
        CHECK(std::sqrt(r2) <= 1e-8 * scale);
    }

    oracles::PowerEigResult expect = oracles::power_iteration_deflation(s);
    std::sort(expect.eigenvalues.begin(), expect.eigenvalues.end(),
              [](double a, double b) { return a > b; });
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(std::abs(basis.eigenvalues[i] - expect.eigenvalues[i]) <= 1e-7 * scale);
}

TEST_CASE("compute_basis k range checks") {
    Matrix w = Matrix::identity(4);
    CHECK_THROWS_WITH_AS(compute_basis(w, 0), doctest::Contains("invalid-argument"), Error);
    CHECK_THROWS_WITH_AS(compute_basis(w, 5), doctest::Contains("invalid-argument"), Error);
}

TEST_CASE("basis directions are orthonormal and eigenvalues nonnegative") {
    std::mt19937_64 rng(202);
    Matrix w = random_matrix(rng, 4, 8); // rank <= 4, so gram has zero eigenvalues
    FactorBasis basis = compute_basis(w, 8);
    for (std::size_t a = 0; a < 8; ++a) {
        for (std::size_t b = 0; b < 8; ++b) {
            double g = 0.0;
            for (std::size_t i = 0; i < 8; ++i)
                g += basis.directions(i, a) * basis.directions(i, b);
            CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) <= 1e-9);
        }
        CHECK(basis.eigenvalues[a] >= 0.0);
    }
}

TEST_CASE("span property: top-k eigenvectors keep their norm under projection") {
    std::mt19937_64 rng(203);
    Matrix w = random_matrix(rng, 8, 8);
    EighResult eig = eigh_descending(gram(w));
    const std::size_t k = 4;
    REQUIRE(eig.eigenvalues[k - 1] - eig.eigenvalues[k] > 1e-8); // separated cut
    FactorBasis basis = compute_basis(w, k);
    for (std::size_t c = 0; c < k; ++c) {
        double norm2_proj = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double p = 0.0;
            for (std::size_t i = 0; i < 8; ++i)
                p += basis.directions(i, j) * eig.eigenvectors(i, c);
            norm2_proj += p * p;
        }
        CHECK(std::abs(std::sqrt(norm2_proj) - 1.0) <= 1e-8);
    }
}

TEST_CASE("truncated basis is a bitwise prefix of the full basis") {
    std::mt19937_64 rng(204);
    Matrix w = random_matrix(rng, 7, 7);
    FactorBasis full = compute_basis(w, 7);
    bool separated = true;
    for (std::size_t i = 0; i + 1 < 4; ++i)
        separated = separated && (full.eigenvalues[i] - full.eigenvalues[i + 1] > 1e-8);
    REQUIRE(separated);
    FactorBasis truncated = compute_basis(w, 3);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double a = truncated.directions(i, j);
            const double b = full.directions(i, j);
            CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
        }
}

TEST_CASE("FCB1 round trip is bitwise exact") {
    std::mt19937_64 rng(205);
    Matrix w = random_matrix(rng, 6, 6);
    FactorBasis basis = compute_basis(w, 4);
    const fs::path path = temp_file("basis.fcb");
    save_basis(basis, path);
    FactorBasis back = load_basis(path);
    CHECK(back.dim == basis.dim);
    CHECK(back.k == basis.k);
    CHECK(bitwise_equal(back.eigenvalues, basis.eigenvalues));
    CHECK(bitwise_equal(back.directions.data, basis.directions.data));
}

TEST_CASE("FCB1 rejects corrupt files") {
    const fs::path magic = temp_file("magic.fcb");
    {
        std::ofstream out(magic, std::ios::binary);
        out.write("FCQ9\x02\x00\x00\x00\x01\x00\x00\x00", 12);
    }
    CHECK_THROWS_WITH_AS(load_basis(magic), doctest::Contains("format-error"), Error);

    const fs::path trunc = temp_file("trunc.fcb");
    {
        // header promises dim=2, k=2: payload should be 2 + 4 doubles
        std::ofstream out(trunc, std::ios::binary);
        out.write("FCB1\x02\x00\x00\x00\x02\x00\x00\x00", 12);
        const double v = 1.0;
        for (int i = 0; i < 3; ++i)
            out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
    CHECK_THROWS_WITH_AS(load_basis(trunc), doctest::Contains("format-error"), Error);

    const fs::path badk = temp_file("badk.fcb");
    {
        std::ofstream out(badk, std::ios::binary);
        out.write("FCB1\x02\x00\x00\x00\x03\x00\x00\x00", 12); // k > dim
    }
    CHECK_THROWS_WITH_AS(load_basis(badk), doctest::Contains("format-error"), Error);

    const fs::path negative = temp_file("negative.fcb");
    {
        std::ofstream out(negative, std::ios::binary);
        out.write("FCB1\x01\x00\x00\x00\x01\x00\x00\x00", 12);
        const double ev = -1.0; // below the -1e-12 window
        out.write(reinterpret_cast<const char*>(&ev), sizeof(double));
        const double dir = 1.0;
        out.write(reinterpret_cast<const char*>(&dir), sizeof(double));
    }
    CHECK_THROWS_WITH_AS(load_basis(negative), doctest::Contains("format-error"), Error);

    const fs::path ascending = temp_file("ascending.fcb");
    {
        std::ofstream out(ascending, std::ios::binary);
        out.write("FCB1\x02\x00\x00\x00\x02\x00\x00\x00", 12);
        const double evs[2] = {0.5, 1.0}; // not descending
        out.write(reinterpret_cast<const char*>(evs), sizeof(evs));
        const double dirs[4] = {1.0, 0.0, 0.0, 1.0};
        out.write(reinterpret_cast<const char*>(dirs), sizeof(dirs));
    }
    CHECK_THROWS_WITH_AS(load_basis(ascending), doctest::Contains("format-error"), Error);

    CHECK_THROWS_WITH_AS(load_basis(temp_file("missing.fcb")), doctest::Contains("io-error"), Error);
}

TEST_CASE("save_basis validates its input") {
    FactorBasis basis;
    basis.dim = 2;
    basis.k = 3; // k > dim
    basis.directions = Matrix(2, 3, 0.0);
    basis.eigenvalues = {1.0, 0.5, 0.25};
    CHECK_THROWS_WITH_AS(save_basis(basis, temp_file("invalid.fcb")),
                         doctest::Contains("invalid-argument"), Error);
}
