#pragma once

#include <stdexcept>

#include "quadla/block_matrix.hpp"
#include "quadla/errors.hpp"
#include "quadla/inversion.hpp"
#include "quadla/random.hpp"

namespace quadla {

template <Ring T>
BlockMatrix<T> random_block_matrix(const typename T::context_type& ctx, int depth, Generator& g) {
    if (depth == 0) return BlockMatrix<T>::leaf(random_element<T>(ctx, g));
    auto a = random_block_matrix<T>(ctx, depth - 1, g);
    auto b = random_block_matrix<T>(ctx, depth - 1, g);
    auto c = random_block_matrix<T>(ctx, depth - 1, g);
    auto d = random_block_matrix<T>(ctx, depth - 1, g);
    return BlockMatrix<T>::quad(std::move(a), std::move(b), std::move(c), std::move(d));
}

/// Draws until the matrix is invertible. Gives up after `max_draws`.
template <Ring T>
BlockMatrix<T> random_invertible(const typename T::context_type& ctx, int depth, Generator& g, int max_draws = 1000) {
    for (int i = 0; i < max_draws; ++i) {
        auto m = random_block_matrix<T>(ctx, depth, g);
        if (is_invertible(m)) return m;
    }
    throw std::runtime_error("no invertible matrix found within the draw limit");
}

template <Ring T>
DenseMatrix<T> random_dense(const typename T::context_type& ctx, std::size_t n, Generator& g) {
    DenseMatrix<T> m(n, ctx.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_element<T>(ctx, g);
    return m;
}

/// True if none of the four half-size blocks is invertible.
template <Ring T>
bool all_blocks_singular_p(const BlockMatrix<T>& m) {
    return !m.is_leaf() && !is_invertible(m.a()) && !is_invertible(m.b()) && !is_invertible(m.c()) &&
           !is_invertible(m.d());
}

/// An invertible matrix whose four half-size blocks are all singular, for
/// dimension 2^depth >= 4. Built as E·M₀·F with E, F random block-diagonal
/// invertible and
///
///     M₀ = [ I′  E_h ]      I′ = diag(1, ..., 1, 0),
///          [ E_h  I′ ]      E_h = unit matrix at (h, h),
///
/// a permutation matrix whose blocks have ranks h-1 and 1; E and F keep
/// every block rank.
template <Ring T>
BlockMatrix<T> random_all_blocks_singular(const typename T::context_type& ctx, int depth, Generator& g) {
    if (depth < 2) throw std::invalid_argument("all-blocks-singular matrices need dimension >= 4");
    const int k = depth - 1;
    const std::size_t h = std::size_t{1} << k;
    DenseMatrix<T> ip(h, ctx.zero()), eh(h, ctx.zero());
    for (std::size_t i = 0; i + 1 < h; ++i) ip(i, i) = ctx.one();
    eh(h - 1, h - 1) = ctx.one();
    const auto m0 = BlockMatrix<T>::quad(from_dense(ip), from_dense(eh), from_dense(eh), from_dense(ip));
    const auto zero = BlockMatrix<T>::zero(ctx, k);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const auto e = BlockMatrix<T>::quad(random_invertible<T>(ctx, k, g), zero, zero, random_invertible<T>(ctx, k, g));
        const auto f = BlockMatrix<T>::quad(random_invertible<T>(ctx, k, g), zero, zero, random_invertible<T>(ctx, k, g));
        auto m = e * m0 * f;
        if (all_blocks_singular_p(m) && is_invertible(m)) return m;
    }
    throw std::runtime_error("could not construct an all-blocks-singular matrix");
}

/// The 4x4 witness with rows (1,1,0,0), (1,1,1,0), (0,1,1,1), (0,0,1,1):
/// every 2x2 block is singular, the determinant is -1.
template <Ring T>
BlockMatrix<T> all_blocks_singular_witness(const typename T::context_type& ctx) {
    const int rows[4][4] = {{1, 1, 0, 0}, {1, 1, 1, 0}, {0, 1, 1, 1}, {0, 0, 1, 1}};
    DenseMatrix<T> d(4, ctx.zero());
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) d(i, j) = ctx.from_int(rows[i][j]);
    return from_dense(d);
}

} // namespace quadla
