#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "quadla/rings/rational.hpp"

namespace quadla {

/// Rational quaternion a + b*i + c*j + d*k. Multiplication does not commute:
/// ij = k, ji = -k.
class Quaternion {
public:
    struct Context {
        Quaternion zero() const { return {}; }
        Quaternion one() const { return Quaternion(1); }
        Quaternion from_int(std::int64_t v) const { return Quaternion(v); }
        Quaternion parse(std::string_view token) const {
            if (token.empty()) throw parse_error("empty quaternion token");
            Rational part[4];
            for (const auto& term : detail::split_terms(token)) {
                std::string_view t = term;
                int slot = 0;
                switch (t.back()) {
                case 'i': slot = 1; break;
                case 'j': slot = 2; break;
                case 'k': slot = 3; break;
                default: break;
                }
                if (slot == 0) {
                    part[0] += Rational::parse(t);
                    continue;
                }
                t.remove_suffix(1);
                if (t.empty() || t == "+") part[slot] += Rational(1);
                else if (t == "-") part[slot] -= Rational(1);
                else if (t.back() == '*') part[slot] += Rational::parse(t.substr(0, t.size() - 1));
                else throw parse_error("bad quaternion token '" + std::string(token) + "'");
            }
            return {part[0], part[1], part[2], part[3]};
        }
        std::string header() const { return "quat"; }
        friend bool operator==(const Context&, const Context&) = default;
    };
    using context_type = Context;

    Quaternion() = default;
    Quaternion(std::int64_t v) : a_(v) {}
    Quaternion(Rational a, Rational b, Rational c, Rational d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    static Quaternion i() { return {0, 1, 0, 0}; }
    static Quaternion j() { return {0, 0, 1, 0}; }
    static Quaternion k() { return {0, 0, 0, 1}; }

    const Rational& a() const noexcept { return a_; }
    const Rational& b() const noexcept { return b_; }
    const Rational& c() const noexcept { return c_; }
    const Rational& d() const noexcept { return d_; }
    bool is_zero() const { return a_.is_zero() && b_.is_zero() && c_.is_zero() && d_.is_zero(); }
    Context context() const { return {}; }
    /// star(q)*q = a^2 + b^2 + c^2 + d^2.
    Rational norm() const { return a_ * a_ + b_ * b_ + c_ * c_ + d_ * d_; }

    friend Quaternion operator+(const Quaternion& x, const Quaternion& y) {
        return {x.a_ + y.a_, x.b_ + y.b_, x.c_ + y.c_, x.d_ + y.d_};
    }
    friend Quaternion operator-(const Quaternion& x, const Quaternion& y) {
        return {x.a_ - y.a_, x.b_ - y.b_, x.c_ - y.c_, x.d_ - y.d_};
    }
    friend Quaternion operator-(const Quaternion& x) { return {-x.a_, -x.b_, -x.c_, -x.d_}; }
    friend Quaternion operator*(const Quaternion& x, const Quaternion& y) {
        return {x.a_ * y.a_ - x.b_ * y.b_ - x.c_ * y.c_ - x.d_ * y.d_,
                x.a_ * y.b_ + x.b_ * y.a_ + x.c_ * y.d_ - x.d_ * y.c_,
                x.a_ * y.c_ - x.b_ * y.d_ + x.c_ * y.a_ + x.d_ * y.b_,
                x.a_ * y.d_ + x.b_ * y.c_ - x.c_ * y.b_ + x.d_ * y.a_};
    }
    friend bool operator==(const Quaternion&, const Quaternion&) = default;

    friend std::optional<Quaternion> try_invert(const Quaternion& x) {
        if (x.is_zero()) return std::nullopt;
        Rational n = x.norm();
        return Quaternion(x.a_ / n, -x.b_ / n, -x.c_ / n, -x.d_ / n);
    }
    friend Quaternion star(const Quaternion& x) { return {x.a_, -x.b_, -x.c_, -x.d_}; }
    friend std::string to_string(const Quaternion& x) {
        if (x.is_zero()) return "0";
        std::string out;
        if (!x.a_.is_zero()) out = to_string(x.a_);
        if (!x.b_.is_zero()) detail::append_term(out, to_string(x.b_), "*i");
        if (!x.c_.is_zero()) detail::append_term(out, to_string(x.c_), "*j");
        if (!x.d_.is_zero()) detail::append_term(out, to_string(x.d_), "*k");
        return out;
    }

private:
    Rational a_, b_, c_, d_;
};

template <>
struct ring_traits<Quaternion> {
    static constexpr bool commutative = false;
    static constexpr bool formally_real = false;
    static constexpr bool has_involution = true;
};

} // namespace quadla
