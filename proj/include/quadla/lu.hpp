#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quadla/block_matrix.hpp"
#include "quadla/errors.hpp"
#include "quadla/inversion.hpp"
#include "quadla/random.hpp"

namespace quadla {

enum class Orientation { lower, upper };
/// Side of the general factor a triangular matrix multiplies from.
enum class Side { left, right };
enum class Axis { rows, cols };

/// True if the strictly-upper (lower) part is zero at every node and, when
/// `unit`, every diagonal leaf is 1.
template <Ring T>
bool is_triangular(const BlockMatrix<T>& m, Orientation o, bool unit) {
    if (m.is_leaf()) return !unit || m.scalar() == m.scalar().context().one();
    const auto& off = o == Orientation::lower ? m.b() : m.c();
    return off.is_zero() && is_triangular(m.a(), o, unit) && is_triangular(m.d(), o, unit);
}

template <Ring T>
class TriangularMatrix {
public:
    /// Validates the structural zeros and, if requested, the unit diagonal.
    TriangularMatrix(BlockMatrix<T> body, Orientation o, bool unit_diagonal)
        : body_(std::move(body)), orientation_(o), unit_(unit_diagonal) {
        if (!is_triangular(body_, o, unit_diagonal)) throw std::invalid_argument("matrix is not of the stated triangular shape");
    }

    /// Skips validation; for results the kernels construct by shape.
    static TriangularMatrix trusted(BlockMatrix<T> body, Orientation o, bool unit_diagonal) {
        return TriangularMatrix(std::move(body), o, unit_diagonal, 0);
    }

    static TriangularMatrix identity(const typename T::context_type& ctx, int depth, Orientation o) {
        return trusted(BlockMatrix<T>::identity(ctx, depth), o, true);
    }

    const BlockMatrix<T>& body() const noexcept { return body_; }
    Orientation orientation() const noexcept { return orientation_; }
    bool unit_diagonal() const noexcept { return unit_; }
    int depth() const noexcept { return body_.depth(); }

    TriangularMatrix upper_left() const { return trusted(body_.a(), orientation_, unit_); }
    TriangularMatrix lower_right() const { return trusted(body_.d(), orientation_, unit_); }
    /// The general off-diagonal block: C for lower, B for upper.
    const BlockMatrix<T>& off_diagonal() const { return orientation_ == Orientation::lower ? body_.c() : body_.b(); }

private:
    TriangularMatrix(BlockMatrix<T> body, Orientation o, bool unit, int)
        : body_(std::move(body)), orientation_(o), unit_(unit) {}

    BlockMatrix<T> body_;
    Orientation orientation_;
    bool unit_;
};

/// Recorded block swaps of a recursive LU. A row trace P stands for
/// T^{swap}·diag(P_first, P_second); a column trace Q for diag(Q_first, Q_second)·T^{swap},
/// with T = [0 I; I 0]. Leaves (depth 0) carry no swap.
class PermutationTrace {
public:
    static PermutationTrace identity(int depth) { return PermutationTrace(depth, false, nullptr, nullptr); }

    static PermutationTrace node(bool swap, PermutationTrace first, PermutationTrace second) {
        if (first.depth() != second.depth()) throw depth_mismatch(first.depth(), second.depth());
        const int d = first.depth() + 1;
        return PermutationTrace(d, swap, std::make_shared<const PermutationTrace>(std::move(first)),
                                std::make_shared<const PermutationTrace>(std::move(second)));
    }

    int depth() const noexcept { return depth_; }
    bool swap() const noexcept { return swap_; }
    bool has_children() const noexcept { return first_ != nullptr; }
    PermutationTrace first() const { return first_ ? *first_ : identity(depth_ - 1); }
    PermutationTrace second() const { return second_ ? *second_ : identity(depth_ - 1); }

    bool is_identity() const {
        if (swap_) return false;
        return (!first_ || first_->is_identity()) && (!second_ || second_->is_identity());
    }

    /// Gathers v in the order of P⁻¹: afterwards v[i] is the old entry that
    /// row (column) i of P⁻¹·M (M·Q⁻¹) comes from.
    template <class V>
    void permute(std::vector<V>& v, std::size_t offset = 0) const {
        if (depth_ == 0) return;
        const std::size_t h = std::size_t{1} << (depth_ - 1);
        if (swap_)
            for (std::size_t i = 0; i < h; ++i) std::swap(v[offset + i], v[offset + h + i]);
        if (first_) first_->permute(v, offset);
        if (second_) second_->permute(v, offset + h);
    }

    /// 1-indexed: row i of P⁻¹·M is row v[i] of M, so (L·U)[i][j] = M[p[i]][q[j]].
    std::vector<std::size_t> vector() const {
        std::vector<std::size_t> v(std::size_t{1} << depth_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = i + 1;
        permute(v);
        return v;
    }

    friend bool operator==(const PermutationTrace& x, const PermutationTrace& y) { return x.vector() == y.vector(); }

private:
    PermutationTrace(int depth, bool swap, std::shared_ptr<const PermutationTrace> first,
                     std::shared_ptr<const PermutationTrace> second)
        : depth_(depth), swap_(swap), first_(std::move(first)), second_(std::move(second)) {}

    int depth_;
    bool swap_;
    std::shared_ptr<const PermutationTrace> first_;
    std::shared_ptr<const PermutationTrace> second_;
};

namespace detail {

template <Ring T>
BlockMatrix<T> swap_rows(const BlockMatrix<T>& m) {
    return BlockMatrix<T>::quad(m.c(), m.d(), m.a(), m.b());
}

template <Ring T>
BlockMatrix<T> swap_cols(const BlockMatrix<T>& m) {
    return BlockMatrix<T>::quad(m.b(), m.a(), m.d(), m.c());
}

template <Ring T>
void require_trace_depth(const PermutationTrace& p, const BlockMatrix<T>& m) {
    if (p.depth() != m.depth()) throw depth_mismatch(p.depth(), m.depth());
}

} // namespace detail

/// P·M (rows) or M·Q (cols), by swapping whole blocks only.
template <Ring T>
BlockMatrix<T> apply_permutation(const PermutationTrace& p, const BlockMatrix<T>& m, Axis axis) {
    detail::require_trace_depth(p, m);
    if (m.is_leaf() || p.is_identity()) return m;
    const auto f = p.first();
    const auto s = p.second();
    if (axis == Axis::rows) {
        auto r = BlockMatrix<T>::quad(apply_permutation(f, m.a(), axis), apply_permutation(f, m.b(), axis),
                                      apply_permutation(s, m.c(), axis), apply_permutation(s, m.d(), axis));
        return p.swap() ? detail::swap_rows(r) : r;
    }
    auto r = BlockMatrix<T>::quad(apply_permutation(f, m.a(), axis), apply_permutation(s, m.b(), axis),
                                  apply_permutation(f, m.c(), axis), apply_permutation(s, m.d(), axis));
    return p.swap() ? detail::swap_cols(r) : r;
}

/// P⁻¹·M (rows) or M·Q⁻¹ (cols).
template <Ring T>
BlockMatrix<T> apply_inverse(const PermutationTrace& p, const BlockMatrix<T>& m, Axis axis) {
    detail::require_trace_depth(p, m);
    if (m.is_leaf() || p.is_identity()) return m;
    const auto f = p.first();
    const auto s = p.second();
    if (axis == Axis::rows) {
        const auto x = p.swap() ? detail::swap_rows(m) : m;
        return BlockMatrix<T>::quad(apply_inverse(f, x.a(), axis), apply_inverse(f, x.b(), axis),
                                    apply_inverse(s, x.c(), axis), apply_inverse(s, x.d(), axis));
    }
    const auto x = p.swap() ? detail::swap_cols(m) : m;
    return BlockMatrix<T>::quad(apply_inverse(f, x.a(), axis), apply_inverse(s, x.b(), axis),
                                apply_inverse(f, x.c(), axis), apply_inverse(s, x.d(), axis));
}

/// Result of block_pivot: M′ = P₁·M·Q₁ with invertible leading block.
template <Ring T>
struct PivotChoice {
    bool swap_rows = false;
    bool swap_cols = false;
    BlockMatrix<T> permuted;
};

/// Every admissible pivot in precedence order A, C, B, D.
template <Ring T>
std::vector<PivotChoice<T>> pivot_candidates(const BlockMatrix<T>& m) {
    std::vector<PivotChoice<T>> out;
    if (is_invertible(m.a())) out.push_back({false, false, m});
    if (is_invertible(m.c())) out.push_back({true, false, detail::swap_rows(m)});
    if (is_invertible(m.b())) out.push_back({false, true, detail::swap_cols(m)});
    if (is_invertible(m.d())) out.push_back({true, true, detail::swap_cols(detail::swap_rows(m))});
    return out;
}

/// First invertible block in the order A, C, B, D, moved to the top left.
template <Ring T>
PivotChoice<T> block_pivot(const BlockMatrix<T>& m) {
    if (m.is_leaf()) throw std::invalid_argument("block_pivot needs a matrix of dimension >= 2");
    const auto blocks = {std::pair{m.a(), 0}, std::pair{m.c(), 1}, std::pair{m.b(), 2}, std::pair{m.d(), 3}};
    for (const auto& [block, which] : blocks) {
        if (!is_invertible(block)) continue;
        switch (which) {
        case 0: return {false, false, m};
        case 1: return {true, false, detail::swap_rows(m)};
        case 2: return {false, true, detail::swap_cols(m)};
        default: return {true, true, detail::swap_cols(detail::swap_rows(m))};
        }
    }
    throw all_blocks_singular();
}

namespace detail {

template <Ring T>
BlockMatrix<T> tri_mul_left(const TriangularMatrix<T>& t, const BlockMatrix<T>& g, OpCounter& c);
template <Ring T>
BlockMatrix<T> tri_mul_right(const BlockMatrix<T>& g, const TriangularMatrix<T>& t, OpCounter& c);

template <Ring T>
BlockMatrix<T> tri_mul_left(const TriangularMatrix<T>& t, const BlockMatrix<T>& g, OpCounter& c) {
    if (g.is_leaf()) {
        ++c.mul_count;
        return BlockMatrix<T>::leaf(t.body().scalar() * g.scalar());
    }
    const auto ta = t.upper_left();
    const auto td = t.lower_right();
    const auto& off = t.off_diagonal();
    if (t.orientation() == Orientation::lower) {
        // [La 0; Lc Ld]·[Ga Gb; Gc Gd]
        return BlockMatrix<T>::quad(tri_mul_left(ta, g.a(), c), tri_mul_left(ta, g.b(), c),
                                    add(mul(off, g.a(), c), tri_mul_left(td, g.c(), c), c),
                                    add(mul(off, g.b(), c), tri_mul_left(td, g.d(), c), c));
    }
    // [Ua Ub; 0 Ud]·[Ga Gb; Gc Gd]
    return BlockMatrix<T>::quad(add(tri_mul_left(ta, g.a(), c), mul(off, g.c(), c), c),
                                add(tri_mul_left(ta, g.b(), c), mul(off, g.d(), c), c), tri_mul_left(td, g.c(), c),
                                tri_mul_left(td, g.d(), c));
}

template <Ring T>
BlockMatrix<T> tri_mul_right(const BlockMatrix<T>& g, const TriangularMatrix<T>& t, OpCounter& c) {
    if (g.is_leaf()) {
        ++c.mul_count;
        return BlockMatrix<T>::leaf(g.scalar() * t.body().scalar());
    }
    const auto ta = t.upper_left();
    const auto td = t.lower_right();
    const auto& off = t.off_diagonal();
    if (t.orientation() == Orientation::lower) {
        // [Ga Gb; Gc Gd]·[La 0; Lc Ld]
        return BlockMatrix<T>::quad(add(tri_mul_right(g.a(), ta, c), mul(g.b(), off, c), c),
                                    tri_mul_right(g.b(), td, c),
                                    add(tri_mul_right(g.c(), ta, c), mul(g.d(), off, c), c),
                                    tri_mul_right(g.d(), td, c));
    }
    // [Ga Gb; Gc Gd]·[Ua Ub; 0 Ud]
    return BlockMatrix<T>::quad(tri_mul_right(g.a(), ta, c), add(mul(g.a(), off, c), tri_mul_right(g.b(), td, c), c),
                                tri_mul_right(g.c(), ta, c), add(mul(g.c(), off, c), tri_mul_right(g.d(), td, c), c));
}

template <Ring T>
TriangularMatrix<T> tri_inv(const TriangularMatrix<T>& t, OpCounter& c, const std::string& path) {
    const auto& body = t.body();
    if (body.is_leaf()) {
        auto inv = leaf_inverse(body.scalar(), c);
        if (!inv) throw singular_diagonal(path.empty() ? "/" : path);
        return TriangularMatrix<T>::trusted(BlockMatrix<T>::leaf(std::move(*inv)), t.orientation(), t.unit_diagonal());
    }
    const auto a_inv = tri_inv(t.upper_left(), c, path + "/A");
    const auto d_inv = tri_inv(t.lower_right(), c, path + "/D");
    const auto zero = BlockMatrix<T>::zero(body.context(), body.depth() - 1);
    if (t.orientation() == Orientation::lower) {
        // [A 0; C D]⁻¹ = [A⁻¹ 0; -D⁻¹(CA⁻¹) D⁻¹]
        const auto off = negate(tri_mul_left(d_inv, tri_mul_right(body.c(), a_inv, c), c));
        return TriangularMatrix<T>::trusted(BlockMatrix<T>::quad(a_inv.body(), zero, off, d_inv.body()),
                                            Orientation::lower, t.unit_diagonal());
    }
    // [A B; 0 D]⁻¹ = [A⁻¹ -(A⁻¹B)D⁻¹; 0 D⁻¹]
    const auto off = negate(tri_mul_right(tri_mul_left(a_inv, body.b(), c), d_inv, c));
    return TriangularMatrix<T>::trusted(BlockMatrix<T>::quad(a_inv.body(), off, zero, d_inv.body()),
                                        Orientation::upper, t.unit_diagonal());
}

} // namespace detail

/// Tm·G (Side::left) or G·Tm (Side::right): four triangular and two general
/// half-size products per node.
template <Ring T>
BlockMatrix<T> tri_mul(const TriangularMatrix<T>& tm, const BlockMatrix<T>& g, Side side, OpCounter& counter) {
    detail::require_same_depth(tm.body(), g);
    return side == Side::left ? detail::tri_mul_left(tm, g, counter) : detail::tri_mul_right(g, tm, counter);
}

/// Inverse of a triangular matrix, same orientation; two triangular
/// inversions and two tri_mul calls per node.
template <Ring T>
TriangularMatrix<T> tri_invert(const TriangularMatrix<T>& tm, OpCounter& counter) {
    return detail::tri_inv(tm, counter, "");
}

/// Single-level block factorization M = Lb·Db·Ub with
/// Lb = [I 0; CA⁻¹ I], Db = diag(A, S_A), Ub = [I A⁻¹B; 0 I].
template <Ring T>
struct LduResult {
    BlockMatrix<T> lower;
    BlockMatrix<T> diagonal;
    BlockMatrix<T> upper;
};

template <Ring T>
LduResult<T> ldu(const BlockMatrix<T>& m, OpCounter& counter) {
    const auto ctx = m.context();
    if (m.is_leaf()) {
        if (m.scalar().is_zero()) throw pivot_block_singular("/A");
        const auto one = BlockMatrix<T>::leaf(ctx.one());
        return {one, m, one};
    }
    std::optional<BlockMatrix<T>> a_inv;
    try {
        a_inv = auto_invert(m.a(), counter);
    } catch (const singular_matrix&) {
        throw pivot_block_singular("/A");
    }
    const auto c_ainv = mul(m.c(), *a_inv, counter);
    const auto ainv_b = mul(*a_inv, m.b(), counter);
    const auto s = sub(m.d(), mul(c_ainv, m.b(), counter), counter);
    if (!is_invertible(s)) throw pivot_block_singular("/S");
    const int k = m.depth() - 1;
    const auto id = BlockMatrix<T>::identity(ctx, k);
    const auto zero = BlockMatrix<T>::zero(ctx, k);
    return {BlockMatrix<T>::quad(id, zero, c_ainv, id), BlockMatrix<T>::quad(m.a(), zero, zero, s),
            BlockMatrix<T>::quad(id, ainv_b, zero, id)};
}

/// M = P·L·U·Q with L unit lower and U upper triangular.
template <Ring T>
struct LUResult {
    PermutationTrace p;
    TriangularMatrix<T> l;
    TriangularMatrix<T> u;
    PermutationTrace q;
    bool randomized_used = false;
    int retries = 0;
};

/// Rebuilds P·(L·U)·Q.
template <Ring T>
BlockMatrix<T> reconstruct(const LUResult<T>& r) {
    OpCounter scratch;
    return apply_permutation(r.p, apply_permutation(r.q, mul(r.l.body(), r.u.body(), scratch), Axis::cols), Axis::rows);
}

/// Supplies (R_L, R_U) for a given attempt number instead of random draws.
template <Ring T>
using PreconditionerSource = std::function<std::pair<BlockMatrix<T>, BlockMatrix<T>>(int attempt)>;

struct LuOptions {
    std::uint64_t seed = 1;
    int max_retries = 8;
};

/// Factors from randomized_lu: L·U = M, no permutations.
template <Ring T>
struct RandomizedLU {
    TriangularMatrix<T> l;
    TriangularMatrix<T> u;
    int attempts = 0;
};

namespace detail {

template <Ring T>
struct Factors {
    PermutationTrace p;
    TriangularMatrix<T> l;
    TriangularMatrix<T> u;
    PermutationTrace q;
    bool randomized = false;
    int retries = 0;
};

/// L, U of a matrix whose leading blocks are invertible all the way down.
template <Ring T>
std::pair<TriangularMatrix<T>, TriangularMatrix<T>> unpivoted_lu(const BlockMatrix<T>& m, OpCounter& c) {
    const auto ctx = m.context();
    if (m.is_leaf()) {
        if (m.scalar().is_zero()) throw singular_matrix();
        return {TriangularMatrix<T>::trusted(BlockMatrix<T>::leaf(ctx.one()), Orientation::lower, true),
                TriangularMatrix<T>::trusted(m, Orientation::upper, false)};
    }
    auto [l1, u1] = unpivoted_lu(m.a(), c);
    const auto x = tri_mul(tri_invert(u1, c), m.c(), Side::right, c);
    const auto y = tri_mul(tri_invert(l1, c), m.b(), Side::left, c);
    auto [l2, u2] = unpivoted_lu(sub(m.d(), mul(x, y, c), c), c);
    const auto zero = BlockMatrix<T>::zero(ctx, m.depth() - 1);
    return {TriangularMatrix<T>::trusted(BlockMatrix<T>::quad(l1.body(), zero, x, l2.body()), Orientation::lower, true),
            TriangularMatrix<T>::trusted(BlockMatrix<T>::quad(u1.body(), y, zero, u2.body()), Orientation::upper,
                                         false)};
}

/// Unit triangular matrix with off-diagonal entries from `draw`.
template <Ring T, class Draw>
BlockMatrix<T> random_unit_triangular(const typename T::context_type& ctx, int depth, Orientation o, Draw&& draw) {
    const std::size_t n = std::size_t{1} << depth;
    DenseMatrix<T> d(n, ctx.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) d(i, j) = ctx.one();
            else if ((o == Orientation::lower) == (i > j)) d(i, j) = draw();
        }
    return from_dense(d);
}

/// One conditioned attempt: L′U′ = R_L·M·R_U, then L = R_L⁻¹L′, U = U′R_U⁻¹.
template <Ring W>
std::optional<std::pair<BlockMatrix<W>, BlockMatrix<W>>> conditioned_attempt(const BlockMatrix<W>& m,
                                                                              const BlockMatrix<W>& rl,
                                                                              const BlockMatrix<W>& ru, OpCounter& c) {
    const auto rl_t = TriangularMatrix<W>::trusted(rl, Orientation::lower, true);
    const auto ru_t = TriangularMatrix<W>::trusted(ru, Orientation::upper, true);
    const auto conditioned = tri_mul(ru_t, tri_mul(rl_t, m, Side::left, c), Side::right, c);
    try {
        auto [lp, up] = unpivoted_lu(conditioned, c);
        auto l = tri_mul(tri_invert(rl_t, c), lp.body(), Side::left, c);
        auto u = tri_mul(tri_invert(ru_t, c), up.body(), Side::right, c);
        return std::pair{std::move(l), std::move(u)};
    } catch (const singular_matrix&) {
        return std::nullopt;
    }
}

/// Sampling-set bookkeeping: a set of at least 2n² scalars.
inline std::uint64_t sampling_set_size(std::size_t n) { return 2 * static_cast<std::uint64_t>(n) * n; }

/// Smallest d with p^(d+1) >= size, so polynomials of degree <= d over GF(p) suffice.
inline int sampling_degree(std::uint64_t p, std::uint64_t size) {
    int d = 0;
    unsigned __int128 count = p;
    while (count < size) {
        count *= p;
        ++d;
    }
    return d;
}

template <Ring T>
T sample_scalar(const typename T::context_type& ctx, Generator& g, std::uint64_t size) {
    const auto k = static_cast<std::int64_t>(size);
    if constexpr (std::is_same_v<T, PrimeField>) {
        return ctx.element(g() % ctx.modulus());
    } else if constexpr (is_rational_function_v<T>) {
        using K = typename T::base_type;
        if constexpr (std::is_same_v<K, PrimeField>) {
            const int d = sampling_degree(ctx.base.modulus(), size);
            std::vector<K> coeffs;
            for (int i = 0; i <= d; ++i) coeffs.push_back(ctx.base.element(g() % ctx.base.modulus()));
            return T::reduce(ctx, Polynomial<K>(ctx.base, std::move(coeffs)), Polynomial<K>::constant(ctx.base, ctx.base.one()));
        } else {
            return ctx.from_int(uniform_int(g, 1, k));
        }
    } else {
        return ctx.from_int(uniform_int(g, 1, k));
    }
}

/// Runs attempts over the working ring W (M lifted if needed).
template <Ring W>
std::optional<std::pair<BlockMatrix<W>, BlockMatrix<W>>> randomized_attempts(const BlockMatrix<W>& m, Generator& g,
                                                                              int max_retries, OpCounter& c,
                                                                              int& attempts) {
    const auto ctx = m.context();
    const auto size = sampling_set_size(m.dim());
    auto draw = [&] { return sample_scalar<W>(ctx, g, size); };
    for (attempts = 1; attempts <= max_retries; ++attempts) {
        const auto rl = random_unit_triangular<W>(ctx, m.depth(), Orientation::lower, draw);
        const auto ru = random_unit_triangular<W>(ctx, m.depth(), Orientation::upper, draw);
        if (auto r = conditioned_attempt(m, rl, ru, c)) return r;
    }
    attempts = max_retries;
    return std::nullopt;
}

} // namespace detail

/// LU without permutations through random unit-triangular preconditioners
/// R_L (lower) and R_U (upper). Over GF(p) with p < 2n² the preconditioner
/// entries are polynomials in t and the factors are projected back to GF(p).
template <Ring T>
RandomizedLU<T> randomized_lu(const BlockMatrix<T>& m, std::uint64_t seed, int max_retries, OpCounter& counter,
                              const PreconditionerSource<T>& source = {}) {
    const auto ctx = m.context();
    if (max_retries < 1) throw std::invalid_argument("max_retries must be positive");
    auto exhausted = [&](int attempts) -> RandomizedLU<T> {
        if (!is_invertible(m)) throw singular_matrix();
        throw randomness_exhausted(attempts);
    };
    auto wrap = [](BlockMatrix<T> l, BlockMatrix<T> u, int attempts) {
        return RandomizedLU<T>{TriangularMatrix<T>::trusted(std::move(l), Orientation::lower, true),
                               TriangularMatrix<T>::trusted(std::move(u), Orientation::upper, false), attempts};
    };
    if (source) {
        for (int attempt = 1; attempt <= max_retries; ++attempt) {
            auto [rl, ru] = source(attempt);
            if (auto r = detail::conditioned_attempt(m, rl, ru, counter)) return wrap(r->first, r->second, attempt);
        }
        return exhausted(max_retries);
    }
    Generator g(seed);
    int attempts = 0;
    if constexpr (std::is_same_v<T, PrimeField>) {
        if (ctx.modulus() < detail::sampling_set_size(m.dim())) {
            const auto lctx = lifted_context<T>(ctx);
            const auto lifted = map_entries(m, [&](const T& x) { return lctx.constant(x); });
            auto r = detail::randomized_attempts(lifted, g, max_retries, counter, attempts);
            if (!r) return exhausted(attempts);
            auto project = [](const BlockMatrix<lifted_t<T>>& x) {
                return map_entries_indexed(x, [](std::size_t i, std::size_t j, const lifted_t<T>& v) {
                    if (!v.is_constant()) throw non_constant_residue(i, j);
                    return v.constant_value();
                });
            };
            return wrap(project(r->first), project(r->second), attempts);
        }
    }
    auto r = detail::randomized_attempts(m, g, max_retries, counter, attempts);
    if (!r) return exhausted(attempts);
    return wrap(r->first, r->second, attempts);
}

namespace detail {

template <Ring T>
Factors<T> leaf_factors(const BlockMatrix<T>& m) {
    if (m.scalar().is_zero()) throw singular_matrix();
    return {PermutationTrace::identity(0),
            TriangularMatrix<T>::trusted(BlockMatrix<T>::leaf(m.context().one()), Orientation::lower, true),
            TriangularMatrix<T>::trusted(m, Orientation::upper, false), PermutationTrace::identity(0)};
}

template <Ring T>
Factors<T> pluq(const BlockMatrix<T>& m, const LuOptions& opt, OpCounter& c);

/// Recursive step for a pivot already moved to the top left.
template <Ring T>
Factors<T> pluq_with_pivot(const PivotChoice<T>& pivot, const LuOptions& opt, OpCounter& c) {
    const auto& mp = pivot.permuted;
    const auto ctx = mp.context();
    auto top = pluq(mp.a(), opt, c);
    // X = C′Q_A⁻¹·U₁⁻¹,  Y = L₁⁻¹·P_A⁻¹B′
    const auto x = tri_mul(tri_invert(top.u, c), apply_inverse(top.q, mp.c(), Axis::cols), Side::right, c);
    const auto y = tri_mul(tri_invert(top.l, c), apply_inverse(top.p, mp.b(), Axis::rows), Side::left, c);
    auto bottom = pluq(sub(mp.d(), mul(x, y, c), c), opt, c);
    const auto zero = BlockMatrix<T>::zero(ctx, mp.depth() - 1);
    auto l = BlockMatrix<T>::quad(top.l.body(), zero, apply_inverse(bottom.p, x, Axis::rows), bottom.l.body());
    auto u = BlockMatrix<T>::quad(top.u.body(), apply_inverse(bottom.q, y, Axis::cols), zero, bottom.u.body());
    return {PermutationTrace::node(pivot.swap_rows, std::move(top.p), std::move(bottom.p)),
            TriangularMatrix<T>::trusted(std::move(l), Orientation::lower, true),
            TriangularMatrix<T>::trusted(std::move(u), Orientation::upper, false),
            PermutationTrace::node(pivot.swap_cols, std::move(top.q), std::move(bottom.q)),
            top.randomized || bottom.randomized, top.retries + bottom.retries};
}

template <Ring T>
Factors<T> pluq(const BlockMatrix<T>& m, const LuOptions& opt, OpCounter& c) {
    if (m.is_leaf()) return leaf_factors(m);
    const auto candidates = pivot_candidates(m);
    if (candidates.empty()) {
        auto r = randomized_lu(m, opt.seed, opt.max_retries, c);
        return {PermutationTrace::identity(m.depth()), std::move(r.l), std::move(r.u),
                PermutationTrace::identity(m.depth()), true, r.attempts};
    }
    // With an invertible pivot, the Schur complement is singular exactly when
    // M is, so only a failed randomized subproblem moves on to the next pivot.
    std::optional<randomness_exhausted> last;
    for (const auto& pivot : candidates) {
        try {
            return pluq_with_pivot(pivot, opt, c);
        } catch (const randomness_exhausted& e) {
            last = e;
        }
    }
    throw *last;
}

} // namespace detail

/// Recursive block PLUQ. Pivots on the first invertible block in the order
/// A, C, B, D; a subproblem with no invertible block goes to randomized_lu.
template <Ring T>
LUResult<T> lu_decompose(const BlockMatrix<T>& m, OpCounter& counter, const LuOptions& options = {}) {
    auto f = detail::pluq(m, options, counter);
    return {std::move(f.p), std::move(f.l), std::move(f.u), std::move(f.q), f.randomized, f.retries};
}

} // namespace quadla
