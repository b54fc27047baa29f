#pragma once

#include <cstdint>
#include <random>

#include "quadla/rings.hpp"

namespace quadla {

/// The library's only source of randomness. mt19937_64 output is fixed by
/// the standard, and reductions below avoid std distributions, so a seed
/// reproduces the same values on every platform.
using Generator = std::mt19937_64;

inline constexpr const char* generator_name = "mt19937_64";

/// Uniform-ish integer in [lo, hi] by modular reduction.
inline std::int64_t uniform_int(Generator& g, std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(g() % span);
}

/// Random entries for generated test matrices. Small magnitudes keep exact
/// arithmetic cheap.
template <class T>
struct random_scalar;

template <>
struct random_scalar<Rational> {
    static Rational draw(const Rational::Context&, Generator& g) {
        auto num = uniform_int(g, -9, 9);
        auto den = uniform_int(g, 1, 4) == 4 ? uniform_int(g, 2, 5) : 1;
        return Rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    }
};

template <>
struct random_scalar<PrimeField> {
    static PrimeField draw(const PrimeField::Context& ctx, Generator& g) { return ctx.element(g() % ctx.modulus()); }
};

template <>
struct random_scalar<GaussianRational> {
    static GaussianRational draw(const GaussianRational::Context&, Generator& g) {
        return {Rational(uniform_int(g, -5, 5)), Rational(uniform_int(g, -5, 5))};
    }
};

template <>
struct random_scalar<Quaternion> {
    static Quaternion draw(const Quaternion::Context&, Generator& g) {
        return {Rational(uniform_int(g, -3, 3)), Rational(uniform_int(g, -3, 3)), Rational(uniform_int(g, -3, 3)),
                Rational(uniform_int(g, -3, 3))};
    }
};

template <class K>
struct random_scalar<RationalFunction<K>> {
    /// Polynomials of degree <= 1 over 1 or (1 + c*t).
    static RationalFunction<K> draw(const typename RationalFunction<K>::Context& ctx, Generator& g) {
        Polynomial<K> num(ctx.base, {random_scalar<K>::draw(ctx.base, g), random_scalar<K>::draw(ctx.base, g)});
        Polynomial<K> den(ctx.base, {ctx.base.one()});
        if (uniform_int(g, 0, 3) == 0) den = Polynomial<K>(ctx.base, {ctx.base.one(), random_scalar<K>::draw(ctx.base, g)});
        return RationalFunction<K>::reduce(ctx, std::move(num), std::move(den));
    }
};

template <class T>
T random_element(const typename T::context_type& ctx, Generator& g) {
    return random_scalar<T>::draw(ctx, g);
}

} // namespace quadla
