#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

#include "quadla/dense_matrix.hpp"
#include "quadla/errors.hpp"
#include "quadla/op_counter.hpp"
#include "quadla/rings/concepts.hpp"

namespace quadla {

/// A 2^k x 2^k matrix stored as a quadtree: either a scalar leaf or four
/// equal-depth quadrants
///
///     [ A  B ]
///     [ C  D ]
///
/// Values are immutable and share structure. There is deliberately no row or
/// column access; algorithms see only whole blocks.
template <Ring T>
class BlockMatrix {
public:
    using scalar_type = T;
    using context_type = typename T::context_type;

    static BlockMatrix leaf(T value) {
        return BlockMatrix(std::make_shared<const Node>(Node{0, std::move(value)}));
    }

    static BlockMatrix quad(BlockMatrix a, BlockMatrix b, BlockMatrix c, BlockMatrix d) {
        const int k = a.depth();
        for (const auto* m : {&b, &c, &d})
            if (m->depth() != k) throw depth_mismatch(k, m->depth());
        return BlockMatrix(std::make_shared<const Node>(
            Node{k + 1, std::array<BlockMatrix, 4>{std::move(a), std::move(b), std::move(c), std::move(d)}}));
    }

    static BlockMatrix zero(const context_type& ctx, int depth) {
        auto z = leaf(ctx.zero());
        for (int k = 0; k < depth; ++k) z = quad(z, z, z, z);
        return z;
    }

    static BlockMatrix identity(const context_type& ctx, int depth) {
        auto id = leaf(ctx.one());
        auto z = leaf(ctx.zero());
        for (int k = 0; k < depth; ++k) {
            id = quad(id, z, z, id);
            z = quad(z, z, z, z);
        }
        return id;
    }

    int depth() const noexcept { return node_->depth; }
    std::size_t dim() const noexcept { return std::size_t{1} << depth(); }
    bool is_leaf() const noexcept { return node_->depth == 0; }

    const T& scalar() const {
        if (!is_leaf()) throw std::logic_error("scalar() on a non-leaf block");
        return std::get<T>(node_->content);
    }
    const BlockMatrix& a() const { return children()[0]; }
    const BlockMatrix& b() const { return children()[1]; }
    const BlockMatrix& c() const { return children()[2]; }
    const BlockMatrix& d() const { return children()[3]; }

    context_type context() const {
        const BlockMatrix* m = this;
        while (!m->is_leaf()) m = &m->a();
        return m->scalar().context();
    }

    bool is_zero() const {
        if (is_leaf()) return scalar().is_zero();
        const auto& ch = children();
        return ch[0].is_zero() && ch[1].is_zero() && ch[2].is_zero() && ch[3].is_zero();
    }

    friend bool operator==(const BlockMatrix& x, const BlockMatrix& y) {
        if (x.node_ == y.node_) return true;
        if (x.depth() != y.depth()) return false;
        if (x.is_leaf()) return x.scalar() == y.scalar();
        const auto& cx = x.children();
        const auto& cy = y.children();
        return cx[0] == cy[0] && cx[1] == cy[1] && cx[2] == cy[2] && cx[3] == cy[3];
    }

private:
    struct Node;

    explicit BlockMatrix(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    const std::array<BlockMatrix, 4>& children() const {
        if (is_leaf()) throw std::logic_error("block access on a leaf");
        return std::get<std::array<BlockMatrix, 4>>(node_->content);
    }

    std::shared_ptr<const Node> node_;
};

template <Ring T>
struct BlockMatrix<T>::Node {
    int depth;
    std::variant<T, std::array<BlockMatrix<T>, 4>> content;
};

namespace detail {

template <Ring T>
void require_same_depth(const BlockMatrix<T>& x, const BlockMatrix<T>& y) {
    if (x.depth() != y.depth()) throw depth_mismatch(x.depth(), y.depth());
}

template <Ring T, class F>
BlockMatrix<T> zip(const BlockMatrix<T>& x, const BlockMatrix<T>& y, F&& f) {
    if (x.is_leaf()) return BlockMatrix<T>::leaf(f(x.scalar(), y.scalar()));
    return BlockMatrix<T>::quad(zip(x.a(), y.a(), f), zip(x.b(), y.b(), f), zip(x.c(), y.c(), f), zip(x.d(), y.d(), f));
}

} // namespace detail

/// Applies f to every entry; the result may live over another ring.
template <Ring T, class F>
auto map_entries(const BlockMatrix<T>& m, F&& f) -> BlockMatrix<std::invoke_result_t<F&, const T&>> {
    using U = std::invoke_result_t<F&, const T&>;
    if (m.is_leaf()) return BlockMatrix<U>::leaf(f(m.scalar()));
    return BlockMatrix<U>::quad(map_entries(m.a(), f), map_entries(m.b(), f), map_entries(m.c(), f),
                                map_entries(m.d(), f));
}

/// Entrywise map that also receives the entry's global (row, col).
template <Ring T, class F>
auto map_entries_indexed(const BlockMatrix<T>& m, F&& f, std::size_t row = 0, std::size_t col = 0)
    -> BlockMatrix<std::invoke_result_t<F&, std::size_t, std::size_t, const T&>> {
    using U = std::invoke_result_t<F&, std::size_t, std::size_t, const T&>;
    if (m.is_leaf()) return BlockMatrix<U>::leaf(f(row, col, m.scalar()));
    const std::size_t h = m.dim() / 2;
    return BlockMatrix<U>::quad(map_entries_indexed(m.a(), f, row, col), map_entries_indexed(m.b(), f, row, col + h),
                                map_entries_indexed(m.c(), f, row + h, col),
                                map_entries_indexed(m.d(), f, row + h, col + h));
}

template <Ring T>
BlockMatrix<T> add(const BlockMatrix<T>& x, const BlockMatrix<T>& y, OpCounter& counter) {
    detail::require_same_depth(x, y);
    return detail::zip(x, y, [&](const T& p, const T& q) {
        ++counter.add_count;
        return p + q;
    });
}

template <Ring T>
BlockMatrix<T> sub(const BlockMatrix<T>& x, const BlockMatrix<T>& y, OpCounter& counter) {
    detail::require_same_depth(x, y);
    return detail::zip(x, y, [&](const T& p, const T& q) {
        ++counter.add_count;
        return p - q;
    });
}

template <Ring T>
BlockMatrix<T> negate(const BlockMatrix<T>& x) {
    return map_entries(x, [](const T& v) { return -v; });
}

template <Ring T>
BlockMatrix<T> operator+(const BlockMatrix<T>& x, const BlockMatrix<T>& y) {
    OpCounter scratch;
    return add(x, y, scratch);
}

template <Ring T>
BlockMatrix<T> operator-(const BlockMatrix<T>& x, const BlockMatrix<T>& y) {
    OpCounter scratch;
    return sub(x, y, scratch);
}

template <Ring T>
BlockMatrix<T> operator-(const BlockMatrix<T>& x) {
    return negate(x);
}

namespace detail {

template <Ring T>
BlockMatrix<T> mul_naive(const BlockMatrix<T>& x, const BlockMatrix<T>& y, OpCounter& c) {
    if (x.is_leaf()) {
        ++c.mul_count;
        return BlockMatrix<T>::leaf(x.scalar() * y.scalar());
    }
    return BlockMatrix<T>::quad(add(mul_naive(x.a(), y.a(), c), mul_naive(x.b(), y.c(), c), c),
                                add(mul_naive(x.a(), y.b(), c), mul_naive(x.b(), y.d(), c), c),
                                add(mul_naive(x.c(), y.a(), c), mul_naive(x.d(), y.c(), c), c),
                                add(mul_naive(x.c(), y.b(), c), mul_naive(x.d(), y.d(), c), c));
}

/// Strassen's seven products. Left factors stay on the left, so the scheme
/// is valid over noncommutative rings.
template <Ring T>
BlockMatrix<T> mul_strassen(const BlockMatrix<T>& x, const BlockMatrix<T>& y, OpCounter& c) {
    if (x.is_leaf()) {
        ++c.mul_count;
        return BlockMatrix<T>::leaf(x.scalar() * y.scalar());
    }
    const auto &a11 = x.a(), &a12 = x.b(), &a21 = x.c(), &a22 = x.d();
    const auto &b11 = y.a(), &b12 = y.b(), &b21 = y.c(), &b22 = y.d();
    auto m1 = mul_strassen(add(a11, a22, c), add(b11, b22, c), c);
    auto m2 = mul_strassen(add(a21, a22, c), b11, c);
    auto m3 = mul_strassen(a11, sub(b12, b22, c), c);
    auto m4 = mul_strassen(a22, sub(b21, b11, c), c);
    auto m5 = mul_strassen(add(a11, a12, c), b22, c);
    auto m6 = mul_strassen(sub(a21, a11, c), add(b11, b12, c), c);
    auto m7 = mul_strassen(sub(a12, a22, c), add(b21, b22, c), c);
    return BlockMatrix<T>::quad(add(sub(add(m1, m4, c), m5, c), m7, c), add(m3, m5, c), add(m2, m4, c),
                                add(add(sub(m1, m2, c), m3, c), m6, c));
}

} // namespace detail

/// Exact product X*Y. Naive costs n^3 scalar multiplications, Strassen 7^k.
template <Ring T>
BlockMatrix<T> mul(const BlockMatrix<T>& x, const BlockMatrix<T>& y, OpCounter& counter,
                   MulStrategy strategy = MulStrategy::naive) {
    detail::require_same_depth(x, y);
    return strategy == MulStrategy::naive ? detail::mul_naive(x, y, counter) : detail::mul_strassen(x, y, counter);
}

template <Ring T>
BlockMatrix<T> operator*(const BlockMatrix<T>& x, const BlockMatrix<T>& y) {
    OpCounter scratch;
    return mul(x, y, scratch);
}

template <Ring T>
BlockMatrix<T> transpose(const BlockMatrix<T>& m) {
    if (m.is_leaf()) return m;
    return BlockMatrix<T>::quad(transpose(m.a()), transpose(m.c()), transpose(m.b()), transpose(m.d()));
}

/// Conjugate transpose: transpose with star applied to every entry.
template <Ring T>
BlockMatrix<T> adjoint(const BlockMatrix<T>& m) {
    if (m.is_leaf()) return BlockMatrix<T>::leaf(star(m.scalar()));
    return BlockMatrix<T>::quad(adjoint(m.a()), adjoint(m.c()), adjoint(m.b()), adjoint(m.d()));
}

/// Every entry multiplied by t^e; each nonzero entry costs one scaling.
template <TPowerScalable T>
BlockMatrix<T> scale_t_power(const BlockMatrix<T>& m, long e, OpCounter& counter) {
    if (e == 0) return m;
    return map_entries(m, [&](const T& v) {
        if (v.is_zero()) return v;
        ++counter.scaling_count;
        return v.mul_t_power(e);
    });
}

/// M° = Q^{-1} M^T Q with Q = diag(1, t, ..., t^{n-1}), so (M°)_{ij} = t^{j-i} M_{ji}.
/// Blockwise, with h = n/2:  [A B; C D]° = [A°, t^h C°; t^{-h} B°, D°].
template <TPowerScalable T>
BlockMatrix<T> circ_conjugate(const BlockMatrix<T>& m, OpCounter& counter) {
    if (m.is_leaf()) return m;
    const auto h = static_cast<long>(m.dim() / 2);
    return BlockMatrix<T>::quad(circ_conjugate(m.a(), counter), scale_t_power(circ_conjugate(m.c(), counter), h, counter),
                                scale_t_power(circ_conjugate(m.b(), counter), -h, counter),
                                circ_conjugate(m.d(), counter));
}

template <TPowerScalable T>
BlockMatrix<T> circ_conjugate(const BlockMatrix<T>& m) {
    OpCounter scratch;
    return circ_conjugate(m, scratch);
}

/// Entry (i, j) multiplied by t^{sign*(i-j)}; sign is +1 or -1.
template <TPowerScalable T>
BlockMatrix<T> scale_by_t_powers(const BlockMatrix<T>& m, int sign, OpCounter& counter) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    if (m.is_leaf()) return m;
    const auto h = static_cast<long>(m.dim() / 2);
    return BlockMatrix<T>::quad(scale_by_t_powers(m.a(), sign, counter),
                                scale_t_power(scale_by_t_powers(m.b(), sign, counter), -sign * h, counter),
                                scale_t_power(scale_by_t_powers(m.c(), sign, counter), sign * h, counter),
                                scale_by_t_powers(m.d(), sign, counter));
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int ceil_log2(std::size_t n) {
    int k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

namespace detail {

template <Ring T, class Entry>
BlockMatrix<T> build(int depth, std::size_t row, std::size_t col, const Entry& entry) {
    if (depth == 0) return BlockMatrix<T>::leaf(entry(row, col));
    const std::size_t h = std::size_t{1} << (depth - 1);
    return BlockMatrix<T>::quad(build<T>(depth - 1, row, col, entry), build<T>(depth - 1, row, col + h, entry),
                                build<T>(depth - 1, row + h, col, entry), build<T>(depth - 1, row + h, col + h, entry));
}

template <Ring T>
void fill_dense(const BlockMatrix<T>& m, DenseMatrix<T>& out, std::size_t row, std::size_t col) {
    if (m.is_leaf()) {
        out(row, col) = m.scalar();
        return;
    }
    const std::size_t h = m.dim() / 2;
    fill_dense(m.a(), out, row, col);
    fill_dense(m.b(), out, row, col + h);
    fill_dense(m.c(), out, row + h, col);
    fill_dense(m.d(), out, row + h, col + h);
}

} // namespace detail

template <Ring T>
DenseMatrix<T> to_dense(const BlockMatrix<T>& m) {
    DenseMatrix<T> out(m.dim(), m.context().zero());
    detail::fill_dense(m, out, 0, 0);
    return out;
}

/// Lossless conversion; throws non_power_of_two (use embed for other sizes).
template <Ring T>
BlockMatrix<T> from_dense(const DenseMatrix<T>& m) {
    if (!is_power_of_two(m.size())) throw non_power_of_two(m.size());
    return detail::build<T>(ceil_log2(m.size()), 0, 0, [&](std::size_t i, std::size_t j) { return m(i, j); });
}

/// Pads an n x n matrix to 2^ceil(log2 n) with an identity block, so an
/// invertible input stays invertible.
template <Ring T>
BlockMatrix<T> embed(const DenseMatrix<T>& m) {
    if (m.size() == 0) throw std::invalid_argument("cannot embed an empty matrix");
    const auto ctx = m(0, 0).context();
    const std::size_t n = m.size();
    return detail::build<T>(ceil_log2(n), 0, 0, [&](std::size_t i, std::size_t j) {
        if (i < n && j < n) return m(i, j);
        return i == j ? ctx.one() : ctx.zero();
    });
}

} // namespace quadla
