#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace factorforge {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit reals.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }

    bool all_finite() const;
    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

bool all_finite(const Vector& v);
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);

/// y = M x
Vector matvec(const Matrix& m, const Vector& x);
/// y = M^T x
Vector matvec_transposed(const Matrix& m, const Vector& x);
/// C = A B
Matrix matmul(const Matrix& a, const Matrix& b);

/// S = W^T W. The upper triangle is computed and mirrored, so the result is
/// bitwise symmetric. Non-finite entries in W raise invalid-input.
Matrix gram(const Matrix& w);

struct EighResult {
    Vector eigenvalues;  // descending
    Matrix eigenvectors; // orthonormal columns, eigenvectors[.][i] pairs with eigenvalues[i]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Input must be square and symmetric within 1e-12 relative to its largest
/// entry. Eigenvalues come back sorted descending; ties keep the order the
/// sweep produced (stable sort), which is deterministic. Each eigenvector is
/// signed so its first component of magnitude > 1e-12 is positive.
EighResult eigh_descending(const Matrix& s);

/// Least squares: x minimizing ||Ax - b||_2, via Householder QR.
/// A must have full column rank; if the smallest |R_ii| falls below
/// 1e-10 times the largest, raises rank-deficiency.
Vector lstsq(const Matrix& a, const Vector& b);

// FCK1 binary matrix container: magic "FCK1", u32 LE rows, u32 LE cols, then
// rows*cols f64 LE row-major. Vectors travel as 1 x dim matrices.
void write_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix(const std::filesystem::path& path);
void write_vector(const Vector& v, const std::filesystem::path& path);
Vector read_vector(const std::filesystem::path& path);

} // namespace factorforge
