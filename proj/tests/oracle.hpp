#pragma once

// Independent reference computations on dense matrices. Nothing here touches
// the block algorithms: plain row operations, schoolbook products.

#include <optional>
#include <vector>

#include "quadla/dense_matrix.hpp"
#include "quadla/rings.hpp"

namespace oracle {

using quadla::DenseMatrix;

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& x, const DenseMatrix<T>& y) {
    const auto n = x.size();
    DenseMatrix<T> out(n, x(0, 0).context().zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            T acc = x(0, 0).context().zero();
            for (std::size_t k = 0; k < n; ++k) acc = acc + x(i, k) * y(k, j);
            out(i, j) = acc;
        }
    return out;
}

/// Gauss–Jordan on [M | I] with row pivoting. Row operations are left
/// multiplications, so this is valid over division rings too.
template <class T>
std::optional<DenseMatrix<T>> inverse(DenseMatrix<T> m) {
    const auto n = m.size();
    const auto ctx = m(0, 0).context();
    auto inv = DenseMatrix<T>::identity(ctx, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m(piv, col).is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const T p = *try_invert(m(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) = p * m(col, j);
            inv(col, j) = p * inv(col, j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || m(i, col).is_zero()) continue;
            const T f = m(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = m(i, j) - f * m(col, j);
                inv(i, j) = inv(i, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Determinant by fraction-carrying elimination; commutative fields only.
template <class T>
T determinant(DenseMatrix<T> m) {
    const auto n = m.size();
    const auto ctx = m(0, 0).context();
    T det = ctx.one();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m(piv, col).is_zero()) ++piv;
        if (piv == n) return ctx.zero();
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det = det * m(col, col);
        const T p = *try_invert(m(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m(i, col).is_zero()) continue;
            const T f = m(i, col) * p;
            for (std::size_t j = col; j < n; ++j) m(i, j) = m(i, j) - f * m(col, j);
        }
    }
    return det;
}

/// Dense matrix from integer rows.
template <class T>
DenseMatrix<T> from_ints(const typename T::context_type& ctx, std::vector<std::vector<long>> rows) {
    DenseMatrix<T> m(rows.size(), ctx.zero());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = ctx.from_int(rows[i][j]);
    return m;
}

} // namespace oracle
