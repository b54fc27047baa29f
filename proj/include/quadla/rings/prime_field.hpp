#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "quadla/errors.hpp"
#include "quadla/rings/concepts.hpp"

namespace quadla {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    if (m <= 0xffffffffULL) return a * b % m;
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact far
/// beyond 2^64.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto p : bases) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (auto a : bases) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

} // namespace detail

/// Element of GF(p) for a word-size prime p < 2^62. Every element carries its
/// modulus; mixing moduli is a logic error.
class PrimeField {
public:
    class Context {
    public:
        explicit Context(std::uint64_t p) : p_(p) {
            if (p >= (std::uint64_t{1} << 62) || !detail::is_prime(p))
                throw std::invalid_argument("modulus " + std::to_string(p) + " is not a prime below 2^62");
        }
        std::uint64_t modulus() const noexcept { return p_; }
        PrimeField zero() const { return PrimeField(0, p_); }
        PrimeField one() const { return PrimeField(1 % p_, p_); }
        PrimeField element(std::uint64_t r) const { return PrimeField(r % p_, p_); }
        PrimeField from_int(std::int64_t v) const {
            auto m = static_cast<std::int64_t>(p_);
            auto r = v % m;
            if (r < 0) r += m;
            return PrimeField(static_cast<std::uint64_t>(r), p_);
        }
        PrimeField parse(std::string_view token) const {
            bool negative = false;
            std::string_view digits = token;
            if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
                negative = digits.front() == '-';
                digits.remove_prefix(1);
            }
            if (digits.empty()) throw parse_error("empty prime-field token");
            std::uint64_t r = 0;
            for (char c : digits) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw parse_error("bad prime-field token '" + std::string(token) + "'");
                r = (detail::mulmod(r, 10, p_) + static_cast<std::uint64_t>(c - '0')) % p_;
            }
            auto x = PrimeField(r, p_);
            return negative ? -x : x;
        }
        std::string header() const { return "gf:" + std::to_string(p_); }
        friend bool operator==(const Context&, const Context&) = default;

    private:
        struct unchecked {};
        Context(std::uint64_t p, unchecked) : p_(p) {}
        std::uint64_t p_;

        friend class PrimeField;
    };
    using context_type = Context;

    std::uint64_t residue() const noexcept { return r_; }
    std::uint64_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return r_ == 0; }
    Context context() const { return Context(p_, Context::unchecked{}); }

    friend PrimeField operator+(const PrimeField& a, const PrimeField& b) {
        std::uint64_t s = a.r_ + b.r_;
        if (s >= a.p_) s -= a.p_;
        return PrimeField(s, a.p_);
    }
    friend PrimeField operator-(const PrimeField& a, const PrimeField& b) {
        return PrimeField(a.r_ >= b.r_ ? a.r_ - b.r_ : a.r_ + a.p_ - b.r_, a.p_);
    }
    friend PrimeField operator-(const PrimeField& a) { return PrimeField(a.r_ == 0 ? 0 : a.p_ - a.r_, a.p_); }
    friend PrimeField operator*(const PrimeField& a, const PrimeField& b) {
        return PrimeField(detail::mulmod(a.r_, b.r_, a.p_), a.p_);
    }
    friend bool operator==(const PrimeField& a, const PrimeField& b) = default;

    /// Extended Euclid on (r, p).
    friend std::optional<PrimeField> try_invert(const PrimeField& x) {
        if (x.r_ == 0) return std::nullopt;
        __int128 t = 0, new_t = 1;
        __int128 r = x.p_, new_r = x.r_;
        while (new_r != 0) {
            __int128 q = r / new_r;
            __int128 tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (t < 0) t += x.p_;
        return PrimeField(static_cast<std::uint64_t>(t), x.p_);
    }
    friend PrimeField star(const PrimeField& x) { return x; }
    friend std::string to_string(const PrimeField& x) { return std::to_string(x.r_); }

private:
    PrimeField(std::uint64_t r, std::uint64_t p) : r_(r), p_(p) {}

    std::uint64_t r_;
    std::uint64_t p_;

    friend class Context;
};

} // namespace quadla
