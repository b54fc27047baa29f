#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quadla {

/// Per-instance context: the data needed to build constants of a ring
/// (the modulus of a prime field, the base field of K(t), ...).
template <class C, class T>
concept RingContext = std::copyable<C> && std::equality_comparable<C> &&
    requires(const C& ctx, std::int64_t v, std::string_view token) {
        { ctx.zero() } -> std::same_as<T>;
        { ctx.one() } -> std::same_as<T>;
        { ctx.from_int(v) } -> std::same_as<T>;
        { ctx.parse(token) } -> std::same_as<T>;
        { ctx.header() } -> std::convertible_to<std::string>;
    };

/// An exact scalar. Multiplication need not commute; `try_invert` is partial
/// and `star` is an involution (identity unless the ring overrides it).
template <class T>
concept Ring = std::copyable<T> && std::equality_comparable<T> &&
    RingContext<typename T::context_type, T> &&
    requires(const T& a, const T& b) {
        { a + b } -> std::same_as<T>;
        { a - b } -> std::same_as<T>;
        { -a } -> std::same_as<T>;
        { a * b } -> std::same_as<T>;
        { a.is_zero() } -> std::convertible_to<bool>;
        { a.context() } -> std::convertible_to<typename T::context_type>;
        { try_invert(a) } -> std::same_as<std::optional<T>>;
        { star(a) } -> std::same_as<T>;
        { to_string(a) } -> std::same_as<std::string>;
    };

/// Scalars of K(t) that can be multiplied by t^e, e in Z.
template <class T>
concept TPowerScalable = Ring<T> && requires(const T& a, long e) {
    { a.mul_t_power(e) } -> std::same_as<T>;
};

template <class T>
struct ring_traits {
    static constexpr bool commutative = true;
    static constexpr bool formally_real = false;
    static constexpr bool has_involution = false;
};

namespace detail {

/// Splits "a+b*i-c*j" into signed terms {"a", "+b*i", "-c*j"}. Signs inside
/// brackets or parentheses and after '^' do not split.
inline std::vector<std::string> split_terms(std::string_view s) {
    std::vector<std::string> terms;
    std::string current;
    int nesting = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(' || c == '[') ++nesting;
        if (c == ')' || c == ']') --nesting;
        if ((c == '+' || c == '-') && nesting == 0 && !current.empty() && current.back() != '^') {
            terms.push_back(current);
            current.clear();
        }
        current.push_back(c);
    }
    if (!current.empty()) terms.push_back(current);
    return terms;
}

/// Appends `coeff` + `unit` to `out`, inserting '+' between terms when the
/// coefficient has no sign of its own.
inline void append_term(std::string& out, const std::string& coeff, std::string_view unit) {
    if (!out.empty() && !coeff.empty() && coeff.front() != '-') out.push_back('+');
    out += coeff;
    out += unit;
}

/// Unqualified call so hidden-friend overloads are found by ADL from
/// contexts where a member named to_string would hide them.
template <class T>
std::string render(const T& x) {
    return to_string(x);
}

inline std::string strip_plus(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return std::string(s);
}

} // namespace detail
} // namespace quadla
