#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ordalg::linalg {

using Matrix = std::vector<std::vector<mpq_class>>;
using IntMatrix = std::vector<std::vector<mpz_class>>;

inline Matrix identity(std::size_t n) {
    Matrix m(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t rows = a.size();
    const std::size_t inner = b.size();
    const std::size_t cols = inner ? b[0].size() : 0;
    Matrix out(rows, std::vector<mpq_class>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

/// Rows scaled by the lcm of their denominators; scaling rows preserves rank.
inline IntMatrix clear_denominators(const Matrix& m) {
    IntMatrix out;
    out.reserve(m.size());
    for (const auto& row : m) {
        mpz_class scale = 1;
        for (const auto& x : row) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), x.get_den_mpz_t());
        std::vector<mpz_class> r;
        r.reserve(row.size());
        for (const auto& x : row) r.push_back(x.get_num() * (scale / x.get_den()));
        out.push_back(std::move(r));
    }
    return out;
}

/// Rank by fraction-free (Bareiss) elimination; every division is exact.
inline std::size_t rank(const Matrix& m) {
    IntMatrix a = clear_denominators(m);
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    mpz_class previous = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_class v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
            }
            a[i][c] = 0;
        }
        previous = a[r][c];
        ++r;
    }
    return r;
}

/// Inverse by fraction-free Gauss-Jordan on [M | I]; nullopt when M is singular.
/// After elimination the left block is det·I and the right block the adjugate (up to the
/// same scalar), so a single rational division per entry finishes the job.
inline std::optional<Matrix> inverse(const Matrix& m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("inverse of a non-square matrix");
    // (D M)^-1 = M^-1 D^-1, so column j of the result is rescaled by d_j at the end
    std::vector<mpz_class> scale(n, 1);
    IntMatrix a(n, std::vector<mpz_class>(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& x : m[i]) mpz_lcm(scale[i].get_mpz_t(), scale[i].get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j].get_num() * (scale[i] / m[i][j].get_den());
        a[i][n + i] = 1;
    }
    mpz_class previous = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && a[pivot][k] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != k) std::swap(a[pivot], a[k]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            for (std::size_t j = 0; j < 2 * n; ++j) {
                if (j == k) continue;
                mpz_class v = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                mpz_class q, rem;
                mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
                if (rem != 0) throw std::logic_error("inexact fraction-free step");
                a[i][j] = q;
            }
            a[i][k] = 0;
        }
        previous = a[k][k];
    }
    Matrix out(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            out[i][j] = mpq_class(a[i][n + j] * scale[j], a[i][i]);
            out[i][j].canonicalize();
        }
    return out;
}

}  // namespace ordalg::linalg
