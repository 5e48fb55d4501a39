#pragma once

// Dense linear algebra over Q: row reduction, rank, kernels and particular solutions.

#include "graded_algebra.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hpoisson {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>; // row-major

inline Matrix zero_matrix(std::size_t rows, std::size_t cols) { return Matrix(rows, Vector(cols, 0)); }

inline bool is_zero_vector(const Vector& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

struct RowEchelon {
    Matrix reduced;                   // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
    std::size_t rank() const { return pivots.size(); }
};

inline RowEchelon row_reduce(Matrix m, std::size_t cols) {
    RowEchelon out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[row], m[pivot]);
        const Rational inv = 1 / m[row][col];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        out.pivots.push_back(col);
        ++row;
    }
    m.resize(row);
    out.reduced = std::move(m);
    return out;
}

inline std::size_t rank(const Matrix& m, std::size_t cols) { return row_reduce(m, cols).rank(); }

/// Basis of {v : m v = 0}, one vector per free column, with that free entry 1.
inline std::vector<Vector> kernel(const Matrix& m, std::size_t cols) {
    auto re = row_reduce(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : re.pivots) is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vector v(cols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < re.pivots.size(); ++r) v[re.pivots[r]] = -re.reduced[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// A solution of m x = b with all free variables zero, or nullopt when inconsistent.
inline std::optional<Vector> solve(const Matrix& m, std::size_t cols, const Vector& b) {
    Matrix aug = m;
    for (std::size_t r = 0; r < aug.size(); ++r) {
        aug[r].resize(cols);
        aug[r].push_back(b[r]);
    }
    auto re = row_reduce(std::move(aug), cols + 1);
    Vector x(cols, 0);
    for (std::size_t r = 0; r < re.pivots.size(); ++r) {
        if (re.pivots[r] == cols) return std::nullopt;
        x[re.pivots[r]] = re.reduced[r][cols];
    }
    return x;
}

inline Vector matvec(const Matrix& m, const Vector& v) {
    Vector out(m.size(), 0);
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
    return out;
}

/// Matrix whose columns are the given vectors.
inline Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m = zero_matrix(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows; ++r) m[r][c] = cols[c][r];
    return m;
}

} // namespace hpoisson
