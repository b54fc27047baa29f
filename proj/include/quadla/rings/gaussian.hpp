#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "quadla/rings/rational.hpp"

namespace quadla {

/// a + b*i over Q, with i^2 = -1 and star the complex conjugate.
class GaussianRational {
public:
    struct Context {
        GaussianRational zero() const { return {}; }
        GaussianRational one() const { return GaussianRational(1); }
        GaussianRational from_int(std::int64_t v) const { return GaussianRational(v); }
        GaussianRational parse(std::string_view token) const {
            if (token.empty()) throw parse_error("empty Gaussian token");
            Rational re, im;
            for (const auto& term : detail::split_terms(token)) {
                std::string_view t = term;
                if (t.size() >= 1 && t.back() == 'i') {
                    t.remove_suffix(1);
                    if (t.empty() || t == "+") im += Rational(1);
                    else if (t == "-") im -= Rational(1);
                    else if (t.back() == '*') im += Rational::parse(t.substr(0, t.size() - 1));
                    else throw parse_error("bad Gaussian token '" + std::string(token) + "'");
                } else {
                    re += Rational::parse(t);
                }
            }
            return {re, im};
        }
        std::string header() const { return "qi"; }
        friend bool operator==(const Context&, const Context&) = default;
    };
    using context_type = Context;

    GaussianRational() = default;
    GaussianRational(std::int64_t v) : re_(v) {}
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    const Rational& re() const noexcept { return re_; }
    const Rational& im() const noexcept { return im_; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    Context context() const { return {}; }
    /// star(x)*x = re^2 + im^2.
    Rational norm() const { return re_ * re_ + im_ * im_; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend bool operator==(const GaussianRational&, const GaussianRational&) = default;

    friend std::optional<GaussianRational> try_invert(const GaussianRational& x) {
        if (x.is_zero()) return std::nullopt;
        Rational n = x.norm();
        return GaussianRational(x.re_ / n, -x.im_ / n);
    }
    friend GaussianRational star(const GaussianRational& x) { return {x.re_, -x.im_}; }
    friend std::string to_string(const GaussianRational& x) {
        if (x.is_zero()) return "0";
        std::string out;
        if (!x.re_.is_zero()) out = to_string(x.re_);
        if (!x.im_.is_zero()) detail::append_term(out, to_string(x.im_), "*i");
        return out;
    }

private:
    Rational re_;
    Rational im_;
};

template <>
struct ring_traits<GaussianRational> {
    static constexpr bool commutative = true;
    static constexpr bool formally_real = false;
    static constexpr bool has_involution = true;
};

} // namespace quadla
