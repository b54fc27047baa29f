#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "quadla/rings/polynomial.hpp"

namespace quadla {

/// Element of K(t) in canonical form: gcd(num, den) = 1, den monic, zero is
/// 0/1. Two values are equal iff their canonical forms are identical.
template <Ring K>
class RationalFunction {
public:
    using base_type = K;
    using polynomial_type = Polynomial<K>;

    struct Context {
        typename K::context_type base;
        char var = 't';

        RationalFunction zero() const { return RationalFunction(*this); }
        RationalFunction one() const { return constant(base.one()); }
        RationalFunction from_int(std::int64_t v) const { return constant(base.from_int(v)); }
        RationalFunction constant(K c) const {
            return RationalFunction(*this, polynomial_type::constant(base, std::move(c)), polynomial_type::constant(base, base.one()),
                                    canonical_tag{});
        }
        /// t^e for any integer e.
        RationalFunction t_power(long e) const { return one().mul_t_power(e); }
        RationalFunction parse(std::string_view token) const;
        std::string header() const { return "ratfun:" + base.header(); }
        friend bool operator==(const Context&, const Context&) = default;
    };
    using context_type = Context;

    explicit RationalFunction(Context ctx)
        : ctx_(ctx), num_(ctx.base), den_(polynomial_type::constant(ctx.base, ctx.base.one())) {}

    /// Canonical form of num/den; throws zero_denominator for den = 0.
    static RationalFunction reduce(const Context& ctx, polynomial_type num, polynomial_type den) {
        if (den.is_zero()) throw zero_denominator{};
        if (num.is_zero()) return RationalFunction(ctx);
        auto g = gcd(num, den);
        if (!g.is_one()) {
            num = exact_quotient(num, g);
            den = exact_quotient(den, g);
        }
        return normalized(ctx, std::move(num), std::move(den));
    }

    const polynomial_type& numerator() const noexcept { return num_; }
    const polynomial_type& denominator() const noexcept { return den_; }
    const Context& context() const noexcept { return ctx_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    /// Degree-0 numerator (or zero) over denominator 1.
    bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }
    /// Value of a constant; only meaningful when is_constant().
    K constant_value() const { return num_.coefficient(0); }

    /// Multiplies by t^e. Only t-power factors can cancel, so no gcd is needed.
    RationalFunction mul_t_power(long e) const {
        if (e == 0 || is_zero()) return *this;
        if (e > 0) {
            auto k = static_cast<std::size_t>(e);
            std::size_t cancel = std::min(k, den_.valuation());
            return RationalFunction(ctx_, num_.shift_up(k - cancel), den_.shift_down(cancel), canonical_tag{});
        }
        auto k = static_cast<std::size_t>(-e);
        std::size_t cancel = std::min(k, num_.valuation());
        return RationalFunction(ctx_, num_.shift_down(cancel), den_.shift_up(k - cancel), canonical_tag{});
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            auto n = a.num_ + b.num_;
            if (n.is_zero()) return RationalFunction(a.ctx_);
            if (a.den_.degree() == 0) return RationalFunction(a.ctx_, std::move(n), a.den_, canonical_tag{});
            auto g = gcd(n, a.den_);
            return RationalFunction(a.ctx_, exact_quotient(n, g), exact_quotient(a.den_, g), canonical_tag{});
        }
        // With g = gcd(b1, b2): a1/b1 + a2/b2 = (a1*(b2/g) + a2*(b1/g)) / (b1*(b2/g)),
        // and only factors of g can cancel from that quotient.
        auto g = gcd(a.den_, b.den_);
        auto bq = exact_quotient(b.den_, g);
        auto aq = exact_quotient(a.den_, g);
        auto n = a.num_ * bq + b.num_ * aq;
        if (n.is_zero()) return RationalFunction(a.ctx_);
        auto d = a.den_ * bq;
        if (!g.is_one()) {
            auto h = gcd(n, g);
            if (!h.is_one()) {
                n = exact_quotient(n, h);
                d = exact_quotient(d, h);
            }
        }
        return RationalFunction(a.ctx_, std::move(n), std::move(d), canonical_tag{});
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        return RationalFunction(a.ctx_, -a.num_, a.den_, canonical_tag{});
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return RationalFunction(a.ctx_);
        auto g1 = gcd(a.num_, b.den_);
        auto g2 = gcd(b.num_, a.den_);
        auto n = exact_quotient(a.num_, g1) * exact_quotient(b.num_, g2);
        auto d = exact_quotient(a.den_, g2) * exact_quotient(b.den_, g1);
        return normalized(a.ctx_, std::move(n), std::move(d));
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend std::optional<RationalFunction> try_invert(const RationalFunction& x) {
        if (x.is_zero()) return std::nullopt;
        return normalized(x.ctx_, x.den_, x.num_);
    }
    friend RationalFunction star(const RationalFunction& x) { return x; }
    /// "(c0+c1*t)/(d0+d1*t)", with "/(...)" omitted when the denominator is 1.
    friend std::string to_string(const RationalFunction& x) {
        std::string out = "(" + x.num_.to_string(x.ctx_.var) + ")";
        if (x.den_.degree() > 0) out += "/(" + x.den_.to_string(x.ctx_.var) + ")";
        return out;
    }

private:
    struct canonical_tag {};
    RationalFunction(Context ctx, polynomial_type num, polynomial_type den, canonical_tag)
        : ctx_(std::move(ctx)), num_(std::move(num)), den_(std::move(den)) {}

    /// Coprime num/den with den made monic.
    static RationalFunction normalized(const Context& ctx, polynomial_type num, polynomial_type den) {
        if (den.is_zero()) throw zero_denominator{};
        if (num.is_zero()) return RationalFunction(ctx);
        if (!(den.leading() == ctx.base.one())) {
            auto inv = *try_invert(den.leading());
            num = num.scaled(inv);
            den = den.scaled(inv);
        }
        return RationalFunction(ctx, std::move(num), std::move(den), canonical_tag{});
    }

    Context ctx_;
    polynomial_type num_;
    polynomial_type den_;
};

/// Canonical reduction of num/den.
template <Ring K>
RationalFunction<K> ratfun_reduce(const typename RationalFunction<K>::Context& ctx, Polynomial<K> num, Polynomial<K> den) {
    return RationalFunction<K>::reduce(ctx, std::move(num), std::move(den));
}

template <Ring K>
RationalFunction<K> RationalFunction<K>::Context::parse(std::string_view token) const {
    auto take_group = [&](std::string_view s, std::size_t& pos) -> std::string_view {
        if (pos >= s.size() || s[pos] != '(') {
            auto rest = s.substr(pos);
            pos = s.size();
            return rest;
        }
        int depth = 0;
        for (std::size_t i = pos; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')' && --depth == 0) {
                auto inner = s.substr(pos + 1, i - pos - 1);
                pos = i + 1;
                return inner;
            }
        }
        throw parse_error("unbalanced parentheses in '" + std::string(s) + "'");
    };
    if (token.empty()) throw parse_error("empty rational function");
    std::size_t pos = 0;
    std::string_view num_text, den_text = "1";
    if (token.front() == '(') {
        num_text = take_group(token, pos);
        if (pos < token.size()) {
            if (token[pos] != '/') throw parse_error("bad rational function '" + std::string(token) + "'");
            ++pos;
            den_text = take_group(token, pos);
            if (pos != token.size()) throw parse_error("bad rational function '" + std::string(token) + "'");
        }
    } else {
        num_text = token;
    }
    return RationalFunction::reduce(*this, polynomial_type::parse(base, num_text, var),
                                    polynomial_type::parse(base, den_text, var));
}

template <Ring K>
struct ring_traits<RationalFunction<K>> {
    static constexpr bool commutative = ring_traits<K>::commutative;
    static constexpr bool formally_real = ring_traits<K>::formally_real;
    static constexpr bool has_involution = false;
};

} // namespace quadla
