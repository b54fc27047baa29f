#pragma once

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "quadla/errors.hpp"
#include "quadla/rings/concepts.hpp"

namespace quadla {

/// Exact rational number in lowest terms with positive denominator.
/// Backed by GMP's mpq_class.
class Rational {
public:
    struct Context {
        Rational zero() const { return Rational{}; }
        Rational one() const { return Rational{1}; }
        Rational from_int(std::int64_t v) const { return Rational{v}; }
        Rational parse(std::string_view token) const { return Rational::parse(token); }
        std::string header() const { return "q"; }
        friend bool operator==(const Context&, const Context&) = default;
    };
    using context_type = Context;

    Rational() = default;
    Rational(std::int64_t v) : value_(static_cast<long>(v)) {}
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw zero_denominator{};
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }
    explicit Rational(mpq_class q) : value_(std::move(q)) { value_.canonicalize(); }

    /// Accepts `p` or `p/q` with an optional sign on p.
    static Rational parse(std::string_view token) {
        auto digits = [](std::string_view s) {
            if (s.empty()) return false;
            for (char c : s)
                if (!std::isdigit(static_cast<unsigned char>(c))) return false;
            return true;
        };
        std::string_view num = token, den = "1";
        if (auto slash = token.find('/'); slash != std::string_view::npos) {
            num = token.substr(0, slash);
            den = token.substr(slash + 1);
        }
        std::string_view unsigned_num = num;
        if (!unsigned_num.empty() && (unsigned_num.front() == '-' || unsigned_num.front() == '+'))
            unsigned_num.remove_prefix(1);
        if (!digits(unsigned_num) || !digits(den))
            throw parse_error("bad rational token '" + std::string(token) + "'");
        mpz_class n(detail::strip_plus(num), 10), d(std::string(den), 10);
        return Rational(n, d);
    }

    const mpq_class& value() const noexcept { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }
    bool is_zero() const noexcept { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }
    Context context() const { return {}; }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw zero_denominator{};
        return Rational(mpq_class(a.value_ / b.value_));
    }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }
    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    friend std::optional<Rational> try_invert(const Rational& x) {
        if (x.is_zero()) return std::nullopt;
        return Rational(mpq_class(1 / x.value_));
    }
    friend Rational star(const Rational& x) { return x; }
    friend std::string to_string(const Rational& x) { return x.value_.get_str(); }

private:
    mpq_class value_;
};

template <>
struct ring_traits<Rational> {
    static constexpr bool commutative = true;
    static constexpr bool formally_real = true;
    static constexpr bool has_involution = false;
};

} // namespace quadla
