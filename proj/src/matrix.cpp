#include "factorforge/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "factorforge/error.hpp"
#include "binio.hpp"

namespace factorforge {

namespace {

constexpr std::size_t kMaxFileElements = std::size_t{1} << 26; // 64M doubles

double max_abs_entry(const Matrix& m) {
    double v = 0.0;
    for (double x : m.data)
        v = std::max(v, std::abs(x));
    return v;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double x : m.data)
        s += x * x;
    return std::sqrt(s);
}

double offdiag_norm(const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i + 1; j < m.cols; ++j)
            s += m(i, j) * m(i, j);
    return std::sqrt(2.0 * s);
}

} // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

bool Matrix::all_finite() const {
    for (double x : data)
        if (!std::isfinite(x))
            return false;
    return true;
}

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(const Vector& v) {
    return std::sqrt(dot(v, v));
}

Vector matvec(const Matrix& m, const Vector& x) {
    if (x.size() != m.cols)
        raise(ErrorCode::invalid_argument, "matvec: dimension mismatch");
    Vector y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* r = m.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j)
            s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const Matrix& m, const Vector& x) {
    if (x.size() != m.rows)
        raise(ErrorCode::invalid_argument, "matvec_transposed: dimension mismatch");
    Vector y(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* r = m.row(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < m.cols; ++j)
            y[j] += r[j] * xi;
    }
    return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        raise(ErrorCode::invalid_argument, "matmul: dimension mismatch");
    Matrix c(a.rows, b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ra = a.row(i);
        double* rc = c.row(i);
        for (std::size_t l = 0; l < a.cols; ++l) {
            const double v = ra[l];
            const double* rb = b.row(l);
            for (std::size_t j = 0; j < b.cols; ++j)
                rc[j] += v * rb[j];
        }
    }
    return c;
}

Matrix gram(const Matrix& w) {
    if (w.rows == 0 || w.cols == 0)
        raise(ErrorCode::invalid_argument, "gram: matrix must have at least one row and column");
    if (!w.all_finite())
        raise(ErrorCode::invalid_input, "gram: non-finite entries");
    const std::size_t n = w.cols;
    Matrix s(n, n, 0.0);
    // upper triangle, then mirror: symmetry holds bitwise
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < w.rows; ++r)
                acc += w(r, i) * w(r, j);
            s(i, j) = acc;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            s(i, j) = s(j, i);
    return s;
}

EighResult eigh_descending(const Matrix& input) {
    if (input.rows == 0 || input.rows != input.cols)
        raise(ErrorCode::invalid_input, "eigh: matrix must be square and non-empty");
    if (!input.all_finite())
        raise(ErrorCode::invalid_input, "eigh: non-finite entries");

    const std::size_t n = input.rows;
    const double scale = max_abs_entry(input);
    double max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            max_asym = std::max(max_asym, std::abs(input(i, j) - input(j, i)));
    if (max_asym > 1e-12 * scale)
        raise(ErrorCode::invalid_input, "eigh: matrix is not symmetric");

    // Work on an exactly symmetric copy; sweeps maintain the upper triangle
    // only (nothing below the diagonal is read after this point).
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        b(i, i) = input(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (input(i, j) + input(j, i));
            b(i, j) = v;
            b(j, i) = v;
        }
    }

    // Rotations accumulate into rows of vt (transposed at the end), so both
    // update loops stay contiguous.
    Matrix vt = Matrix::identity(n);

    const double threshold = 1e-12 * frobenius_norm(b);
    // elements at most skip_below cannot lift the off-diagonal norm back
    // above threshold (n of them sum to threshold/2 in quadrature)
    const double skip_below = 0.5 * threshold / static_cast<double>(n);
    bool converged = offdiag_norm(b) <= threshold;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double bpq = b(p, q);
                if (std::abs(bpq) <= skip_below)
                    continue;
                const double bpp = b(p, p);
                const double bqq = b(q, q);
                const double tau = (bqq - bpp) / (2.0 * bpq);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 1.0 / (2.0 * tau);
                } else if (tau >= 0.0) {
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                } else {
                    t = 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                double* rp = b.row(p);
                double* rq = b.row(q);
                for (std::size_t j = 0; j < p; ++j) {
                    const double tp = b(j, p);
                    const double tq = b(j, q);
                    b(j, p) = c * tp - sn * tq;
                    b(j, q) = sn * tp + c * tq;
                }
                for (std::size_t j = p + 1; j < q; ++j) {
                    const double tp = rp[j];
                    const double tq = b(j, q);
                    rp[j] = c * tp - sn * tq;
                    b(j, q) = sn * tp + c * tq;
                }
                for (std::size_t j = q + 1; j < n; ++j) {
                    const double tp = rp[j];
                    const double tq = rq[j];
                    rp[j] = c * tp - sn * tq;
                    rq[j] = sn * tp + c * tq;
                }
                rp[p] = c * c * bpp - 2.0 * sn * c * bpq + sn * sn * bqq;
                rq[q] = sn * sn * bpp + 2.0 * sn * c * bpq + c * c * bqq;
                rp[q] = 0.0;

                double* vp = vt.row(p);
                double* vq = vt.row(q);
                for (std::size_t j = 0; j < n; ++j) {
                    const double tp = vp[j];
                    const double tq = vq[j];
                    vp[j] = c * tp - sn * tq;
                    vq[j] = sn * tp + c * tq;
                }
            }
        }
        converged = offdiag_norm(b) <= threshold;
    }
    if (!converged)
        raise(ErrorCode::no_convergence, "eigh: Jacobi sweep limit reached");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c2) {
        return b(a, a) > b(c2, c2);
    });

    EighResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        result.eigenvalues[col] = b(src, src);
        const double* v = vt.row(src);
        // sign convention: first component with magnitude > 1e-12 is positive
        double flip = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(v[j]) > 1e-12) {
                flip = v[j] < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t j = 0; j < n; ++j)
            result.eigenvectors(j, col) = flip * v[j];
    }
    return result;
}

Vector lstsq(const Matrix& a, const Vector& b) {
    if (a.rows == 0 || a.cols == 0)
        raise(ErrorCode::invalid_argument, "lstsq: matrix must have at least one row and column");
    if (b.size() != a.rows)
        raise(ErrorCode::invalid_argument, "lstsq: rows of A must match dim of b");
    if (!a.all_finite() || !all_finite(b))
        raise(ErrorCode::invalid_input, "lstsq: non-finite entries");
    if (a.rows < a.cols)
        raise(ErrorCode::rank_deficiency, "lstsq: fewer rows than columns, full column rank impossible");

    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    Matrix r = a;
    Vector qtb = b;
    Vector house(m);

    for (std::size_t k = 0; k < n; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k; i < m; ++i)
            nrm += r(i, k) * r(i, k);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) {
            r(k, k) = 0.0;
            continue; // diagonal zero, caught by the rank check below
        }
        const double alpha = r(k, k) > 0.0 ? -nrm : nrm;
        double vtv = 0.0;
        house[k] = r(k, k) - alpha;
        vtv += house[k] * house[k];
        for (std::size_t i = k + 1; i < m; ++i) {
            house[i] = r(i, k);
            vtv += house[i] * house[i];
        }
        if (vtv > 0.0) {
            for (std::size_t j = k + 1; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i)
                    s += house[i] * r(i, j);
                const double f = 2.0 * s / vtv;
                for (std::size_t i = k; i < m; ++i)
                    r(i, j) -= f * house[i];
            }
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i)
                s += house[i] * qtb[i];
            const double f = 2.0 * s / vtv;
            for (std::size_t i = k; i < m; ++i)
                qtb[i] -= f * house[i];
        }
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i)
            r(i, k) = 0.0;
    }

    double dmin = std::abs(r(0, 0));
    double dmax = dmin;
    for (std::size_t k = 1; k < n; ++k) {
        const double d = std::abs(r(k, k));
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    if (dmax == 0.0 || dmin < 1e-10 * dmax)
        raise(ErrorCode::rank_deficiency, "lstsq: matrix is rank deficient");

    Vector x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = qtb[k];
        for (std::size_t j = k + 1; j < n; ++j)
            s -= r(k, j) * x[j];
        x[k] = s / r(k, k);
    }
    return x;
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
    if (m.rows == 0 || m.cols == 0)
        raise(ErrorCode::invalid_argument, "write_matrix: matrix must be non-empty");
    if (m.rows > 0xffffffffULL || m.cols > 0xffffffffULL)
        raise(ErrorCode::invalid_argument, "write_matrix: shape exceeds the FCK1 format");
    if (m.data.size() != m.rows * m.cols)
        raise(ErrorCode::invalid_argument, "write_matrix: data length does not match shape");
    binio::atomic_write_file(path, [&](std::ostream& out) {
        out.write("FCK1", 4);
        binio::put_u32le(out, static_cast<std::uint32_t>(m.rows));
        binio::put_u32le(out, static_cast<std::uint32_t>(m.cols));
        for (double v : m.data)
            binio::put_f64le(out, v);
    });
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in = binio::open_binary_input(path);
    char magic[4] = {};
    if (!in.read(magic, 4) || std::memcmp(magic, "FCK1", 4) != 0)
        raise(ErrorCode::format_error, "not an FCK1 matrix file: " + path.string());
    std::uint32_t rows = 0, cols = 0;
    if (!binio::get_u32le(in, rows) || !binio::get_u32le(in, cols))
        raise(ErrorCode::format_error, "truncated FCK1 header: " + path.string());
    if (rows == 0 || cols == 0)
        raise(ErrorCode::format_error, "FCK1 shape must be positive: " + path.string());
    const std::size_t count = std::size_t{rows} * std::size_t{cols};
    if (count > kMaxFileElements)
        raise(ErrorCode::format_error, "FCK1 payload too large: " + path.string());
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < count; ++i) {
        if (!binio::get_f64le(in, m.data[i]))
            raise(ErrorCode::format_error, "truncated FCK1 payload: " + path.string());
    }
    if (in.peek() != std::ifstream::traits_type::eof())
        raise(ErrorCode::format_error, "trailing bytes after FCK1 payload: " + path.string());
    if (!m.all_finite())
        raise(ErrorCode::format_error, "non-finite values in FCK1 payload: " + path.string());
    return m;
}

void write_vector(const Vector& v, const std::filesystem::path& path) {
    Matrix m(1, v.size());
    m.data = v;
    write_matrix(m, path);
}

Vector read_vector(const std::filesystem::path& path) {
    Matrix m = read_matrix(path);
    if (m.rows != 1)
        raise(ErrorCode::format_error, "expected a 1-row FCK1 vector: " + path.string());
    return m.data;
}

} // namespace factorforge
