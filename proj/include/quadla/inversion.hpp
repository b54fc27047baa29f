#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "quadla/block_matrix.hpp"
#include "quadla/errors.hpp"
#include "quadla/rings.hpp"

namespace quadla {

enum class ConjugationKind { transpose, star, circ };

inline const char* to_string(ConjugationKind k) {
    switch (k) {
    case ConjugationKind::transpose: return "transpose";
    case ConjugationKind::star: return "star";
    case ConjugationKind::circ: return "circ";
    }
    return "?";
}

/// A Gram matrix N = M^σ·M, self-adjoint for its kind σ.
template <Ring T>
struct GramMatrix {
    BlockMatrix<T> body;
    ConjugationKind kind;
};

/// Optional instrumentation for hermitian_invert: each internal node
/// attempts its leading-block inversion exactly once.
struct InversionProbe {
    std::uint64_t leading_attempts = 0;
    std::uint64_t leading_failures = 0;
};

/// M^σ for the given kind. Circ needs entries in K(t).
template <Ring T>
BlockMatrix<T> conjugate(const BlockMatrix<T>& m, ConjugationKind kind, OpCounter& counter) {
    switch (kind) {
    case ConjugationKind::transpose: return transpose(m);
    case ConjugationKind::star: return adjoint(m);
    case ConjugationKind::circ:
        if constexpr (TPowerScalable<T>) return circ_conjugate(m, counter);
        else throw std::invalid_argument("circ conjugation needs a rational function field");
    }
    throw std::invalid_argument("unknown conjugation kind");
}

template <Ring T>
GramMatrix<T> make_gram(const BlockMatrix<T>& m, ConjugationKind kind, OpCounter& counter) {
    return {mul(conjugate(m, kind, counter), m, counter), kind};
}

namespace detail {

template <Ring T>
std::optional<T> leaf_inverse(const T& x, OpCounter& counter) {
    ++counter.div_count;
    return try_invert(x);
}

/// Given t₂ = A⁻¹B of a self-adjoint [A B; B^σ D], rebuilds the lower
/// off-diagonal partner t₁ = C·A⁻¹ from the symmetry alone. Costs scalings only.
template <Ring T>
BlockMatrix<T> partner(const BlockMatrix<T>& x, ConjugationKind kind, OpCounter& counter) {
    switch (kind) {
    case ConjugationKind::transpose: return transpose(x);
    case ConjugationKind::star: return adjoint(x);
    case ConjugationKind::circ:
        if constexpr (TPowerScalable<T>)
            return scale_t_power(circ_conjugate(x, counter), -static_cast<long>(x.dim()), counter);
        else throw std::invalid_argument("circ conjugation needs a rational function field");
    }
    throw std::invalid_argument("unknown conjugation kind");
}

/// One node of the symmetric Schur scheme: two recursive inversions via
/// `invert_block`, four half-size multiplications.
template <Ring T, class SubInvert>
BlockMatrix<T> symmetric_node(const BlockMatrix<T>& n, ConjugationKind kind, OpCounter& counter,
                              SubInvert&& invert_block) {
    const auto a_inv = invert_block(n.a());
    const auto t2 = mul(a_inv, n.b(), counter);
    const auto t1 = partner(t2, kind, counter);
    const auto s = sub(n.d(), mul(t1, n.b(), counter), counter);
    const auto s_inv = invert_block(s);
    const auto t3 = mul(t2, s_inv, counter);
    const auto t4 = mul(t3, t1, counter);
    const auto minus_t3 = negate(t3);
    return BlockMatrix<T>::quad(add(a_inv, t4, counter), minus_t3, partner(minus_t3, kind, counter), s_inv);
}

template <Ring T>
BlockMatrix<T> schur(const BlockMatrix<T>& m, OpCounter& c, const std::string& path) {
    if (m.is_leaf()) {
        auto inv = leaf_inverse(m.scalar(), c);
        if (!inv) throw pivot_block_singular(path.empty() ? "/" : path);
        return BlockMatrix<T>::leaf(std::move(*inv));
    }
    const auto a_inv = schur(m.a(), c, path + "/A");
    const auto c_ainv = mul(m.c(), a_inv, c);
    const auto ainv_b = mul(a_inv, m.b(), c);
    const auto s = sub(m.d(), mul(m.c(), ainv_b, c), c);
    const auto s_inv = schur(s, c, path + "/S");
    const auto top_right = mul(ainv_b, s_inv, c);
    const auto bottom_left = mul(s_inv, c_ainv, c);
    return BlockMatrix<T>::quad(add(a_inv, mul(top_right, c_ainv, c), c), negate(top_right), negate(bottom_left),
                                s_inv);
}

template <Ring T>
BlockMatrix<T> hermitian(const BlockMatrix<T>& n, ConjugationKind kind, OpCounter& c, InversionProbe* probe) {
    if (n.is_leaf()) {
        auto inv = leaf_inverse(n.scalar(), c);
        if (!inv) throw gram_singular();
        return BlockMatrix<T>::leaf(std::move(*inv));
    }
    bool first = true;
    return symmetric_node(n, kind, c, [&](const BlockMatrix<T>& block) {
        if (!first || !probe) return hermitian(block, kind, c, probe);
        first = false;
        ++probe->leading_attempts;
        try {
            return hermitian(block, kind, c, probe);
        } catch (const gram_singular&) {
            ++probe->leading_failures;
            throw;
        }
    });
}

/// Gram driver for Transpose/Star: M⁻¹ = (M^σM)⁻¹M^σ, with the half-size
/// diagonal inversions of the Gram matrix done by this same driver.
template <Ring T>
BlockMatrix<T> gram_drive(const BlockMatrix<T>& m, ConjugationKind kind, OpCounter& c) {
    if (m.is_leaf()) {
        auto inv = leaf_inverse(m.scalar(), c);
        if (!inv) throw gram_singular();
        return BlockMatrix<T>::leaf(std::move(*inv));
    }
    const auto ms = conjugate(m, kind, c);
    const auto n = mul(ms, m, c);
    const auto n_inv =
        symmetric_node(n, kind, c, [&](const BlockMatrix<T>& block) { return gram_drive(block, kind, c); });
    return mul(n_inv, ms, c);
}

/// Entries already in K(t) get lifted in a second variable s.
template <class T>
constexpr char lifted_variable() {
    return is_rational_function_v<T> ? 's' : 't';
}

} // namespace detail

/// Block inverse from the Schur complement of the leading block, with no
/// pivoting. Six half-size multiplications and two half-size inversions per node.
template <Ring T>
BlockMatrix<T> schur_invert(const BlockMatrix<T>& m, OpCounter& counter) {
    return detail::schur(m, counter, "");
}

/// Inverse of a Gram matrix through its leading blocks, which are invertible
/// whenever the original matrix was. Never pivots.
template <Ring T>
BlockMatrix<T> hermitian_invert(const GramMatrix<T>& n, OpCounter& counter, InversionProbe* probe = nullptr) {
    return detail::hermitian(n.body, n.kind, counter, probe);
}

/// M⁻¹ = (MᵀM)⁻¹Mᵀ over a formally real commutative field.
template <Ring T>
BlockMatrix<T> invert_gram_transpose(const BlockMatrix<T>& m, OpCounter& counter) {
    try {
        return detail::gram_drive(m, ConjugationKind::transpose, counter);
    } catch (const gram_singular&) {
        throw singular_matrix();
    }
}

/// M⁻¹ = (M*M)⁻¹M*; valid for Gaussian rationals and quaternions.
template <Ring T>
BlockMatrix<T> invert_gram_star(const BlockMatrix<T>& m, OpCounter& counter) {
    try {
        return detail::gram_drive(m, ConjugationKind::star, counter);
    } catch (const gram_singular&) {
        throw singular_matrix();
    }
}

/// Field of the t-lifted scalars used by invert_gram_gv.
template <Ring T>
using lifted_t = RationalFunction<T>;

template <Ring T>
typename lifted_t<T>::Context lifted_context(const typename T::context_type& ctx) {
    return {ctx, detail::lifted_variable<T>()};
}

/// Unprojected GV inverse (M°M)⁻¹M° over K(t). Exposed so callers can
/// inspect that every entry is a constant.
template <Ring T>
BlockMatrix<lifted_t<T>> gv_lifted_inverse(const BlockMatrix<T>& m, OpCounter& counter) {
    const auto lctx = lifted_context<T>(m.context());
    const auto lifted = map_entries(m, [&](const T& x) { return lctx.constant(x); });
    const auto ms = circ_conjugate(lifted, counter);
    const GramMatrix<lifted_t<T>> n{mul(ms, lifted, counter), ConjugationKind::circ};
    try {
        return mul(hermitian_invert(n, counter), ms, counter);
    } catch (const gram_singular&) {
        throw singular_matrix();
    }
}

/// M⁻¹ over any field K via the t-conjugate M° = Q⁻¹MᵀQ, Q = diag(1, t, ..., t^{n-1}).
template <Ring T>
BlockMatrix<T> invert_gram_gv(const BlockMatrix<T>& m, OpCounter& counter) {
    const auto lifted_inverse = gv_lifted_inverse(m, counter);
    return map_entries_indexed(lifted_inverse, [](std::size_t i, std::size_t j, const lifted_t<T>& x) {
        if (!x.is_constant()) throw non_constant_residue(i, j);
        return x.constant_value();
    });
}

/// Which Gram driver a scalar ring uses when Schur inversion hits a singular pivot block.
template <Ring T>
constexpr ConjugationKind default_conjugation() {
    if constexpr (ring_traits<T>::has_involution) return ConjugationKind::star;
    else if constexpr (ring_traits<T>::formally_real) return ConjugationKind::transpose;
    else return ConjugationKind::circ;
}

/// Inverts with the ring's Gram driver.
template <Ring T>
BlockMatrix<T> invert_gram(const BlockMatrix<T>& m, OpCounter& counter) {
    constexpr auto kind = default_conjugation<T>();
    if constexpr (kind == ConjugationKind::star) return invert_gram_star(m, counter);
    else if constexpr (kind == ConjugationKind::transpose) return invert_gram_transpose(m, counter);
    else return invert_gram_gv(m, counter);
}

enum class InversionMethod { schur, gram, gv, automatic };

/// Schur first; on a singular pivot block, the ring's Gram driver.
template <Ring T>
BlockMatrix<T> auto_invert(const BlockMatrix<T>& m, OpCounter& counter) {
    OpCounter attempt;
    try {
        auto result = schur_invert(m, attempt);
        counter += attempt;
        return result;
    } catch (const pivot_block_singular&) {
        counter += attempt;
    }
    return invert_gram(m, counter);
}

template <Ring T>
BlockMatrix<T> invert(const BlockMatrix<T>& m, InversionMethod method, OpCounter& counter) {
    switch (method) {
    case InversionMethod::schur: return schur_invert(m, counter);
    case InversionMethod::gram: return invert_gram(m, counter);
    case InversionMethod::gv: return invert_gram_gv(m, counter);
    case InversionMethod::automatic: return auto_invert(m, counter);
    }
    throw std::invalid_argument("unknown inversion method");
}

template <Ring T>
bool is_invertible(const BlockMatrix<T>& m) {
    OpCounter scratch;
    try {
        auto_invert(m, scratch);
        return true;
    } catch (const singular_matrix&) {
        return false;
    }
}

} // namespace quadla
