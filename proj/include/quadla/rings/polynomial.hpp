#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <string_view>
#include <utility>
#include <vector>

#include "quadla/errors.hpp"
#include "quadla/rings/concepts.hpp"
#include "quadla/rings/prime_field.hpp"

namespace quadla {

namespace detail::gf_poly {

// Residue-vector kernels for GF(p) with p < 2^32, where a product of two
// residues plus one more residue fits in 64 bits.
using Vec = std::vector<std::uint64_t>;

inline bool applicable(std::uint64_t p) { return p <= 0xffffffffULL; }

/// Barrett reduction of 64-bit values modulo p.
struct Modulus {
    std::uint64_t p;
    std::uint64_t m;
    explicit Modulus(std::uint64_t p_) : p(p_), m(~std::uint64_t{0} / p_) {}
    std::uint64_t operator()(std::uint64_t x) const {
        const auto q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * m) >> 64);
        std::uint64_t r = x - q * p;
        while (r >= p) r -= p;
        return r;
    }
};

inline void trim(Vec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Below 2^16 a product is under 2^32, so sums of products stay far below
/// 2^64 and reduction can wait until a coefficient is read.
inline bool lazy(const Modulus& mod) { return mod.p < (std::uint64_t{1} << 16); }

inline Vec mul(const Vec& a, const Vec& b, const Modulus& mod) {
    if (a.empty() || b.empty()) return {};
    Vec v(a.size() + b.size() - 1, 0);
    if (lazy(mod)) {
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) v[i + j] += a[i] * b[j];
        for (auto& x : v) x = mod(x);
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j) v[i + j] = mod(v[i + j] + a[i] * b[j]);
        }
    }
    trim(v);
    return v;
}

/// a ← a mod b, optionally collecting the quotient.
inline void remainder_into(Vec& a, const Vec& b, const Modulus& mod, Vec* quotient) {
    const std::uint64_t p = mod.p;
    const std::size_t db = b.size() - 1;
    const std::uint64_t lead_inv = powmod(b.back(), p - 2, p);
    const bool defer = lazy(mod);
    if (quotient) quotient->assign(a.size() >= b.size() ? a.size() - db : 0, 0);
    while (a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        const std::uint64_t f = mod(mod(a.back()) * lead_inv);
        if (quotient) (*quotient)[shift] = f;
        const std::uint64_t nf = p - f;
        if (defer)
            for (std::size_t j = 0; j < db; ++j) a[shift + j] += nf * b[j];
        else
            for (std::size_t j = 0; j < db; ++j) a[shift + j] = mod(a[shift + j] + nf * b[j]);
        a.pop_back();
        while (!a.empty() && (a.back() = mod(a.back())) == 0) a.pop_back();
    }
    if (defer)
        for (auto& x : a) x = mod(x);
}

inline Vec gcd(Vec a, Vec b, const Modulus& mod) {
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        if (b.size() == 1) return {1};
        remainder_into(a, b, mod, nullptr);
        std::swap(a, b);
    }
    if (a.empty()) return a;
    const std::uint64_t inv = powmod(a.back(), mod.p - 2, mod.p);
    for (auto& x : a) x = mod(x * inv);
    return a;
}

} // namespace detail::gf_poly

template <Ring K>
class RationalFunction;

template <class K>
inline constexpr bool is_rational_function_v = false;
template <Ring K>
inline constexpr bool is_rational_function_v<RationalFunction<K>> = true;

/// Dense univariate polynomial over a field K, lowest degree first. The
/// coefficient list never ends in a zero; the zero polynomial is empty.
template <Ring K>
class Polynomial {
public:
    using coefficient_type = K;
    using context_type = typename K::context_type;

    explicit Polynomial(context_type ctx) : ctx_(std::move(ctx)) {}
    Polynomial(context_type ctx, std::vector<K> coeffs) : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) { trim(); }

    static Polynomial constant(const context_type& ctx, K c) { return Polynomial(ctx, {std::move(c)}); }
    static Polynomial monomial(const context_type& ctx, K c, std::size_t degree) {
        std::vector<K> v(degree + 1, ctx.zero());
        v[degree] = std::move(c);
        return Polynomial(ctx, std::move(v));
    }

    const context_type& context() const noexcept { return ctx_; }
    const std::vector<K>& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const K& leading() const { return coeffs_.back(); }
    K coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : ctx_.zero(); }
    bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == ctx_.one(); }

    /// Largest v with x^v dividing the polynomial (0 for the zero polynomial).
    std::size_t valuation() const {
        std::size_t v = 0;
        while (v < coeffs_.size() && coeffs_[v].is_zero()) ++v;
        return v == coeffs_.size() ? 0 : v;
    }

    /// Multiplies by x^k.
    Polynomial shift_up(std::size_t k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<K> v(k, ctx_.zero());
        v.insert(v.end(), coeffs_.begin(), coeffs_.end());
        return Polynomial(ctx_, std::move(v));
    }
    /// Divides by x^k; the caller guarantees k <= valuation().
    Polynomial shift_down(std::size_t k) const {
        if (k == 0) return *this;
        return Polynomial(ctx_, std::vector<K>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
    }

    Polynomial scaled(const K& c) const {
        if (c.is_zero()) return Polynomial(ctx_);
        std::vector<K> v;
        v.reserve(coeffs_.size());
        for (const auto& x : coeffs_) v.push_back(x * c);
        return Polynomial(ctx_, std::move(v));
    }

    /// Same polynomial scaled to leading coefficient 1; zero stays zero.
    Polynomial monic() const {
        if (is_zero() || leading() == ctx_.one()) return *this;
        auto inv = try_invert(leading());
        return scaled(*inv);
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        const auto& longer = a.coeffs_.size() >= b.coeffs_.size() ? a : b;
        const auto& shorter = a.coeffs_.size() >= b.coeffs_.size() ? b : a;
        std::vector<K> v = longer.coeffs_;
        for (std::size_t i = 0; i < shorter.coeffs_.size(); ++i) v[i] = v[i] + shorter.coeffs_[i];
        return Polynomial(a.ctx_, std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a) {
        std::vector<K> v;
        v.reserve(a.coeffs_.size());
        for (const auto& x : a.coeffs_) v.push_back(-x);
        return Polynomial(a.ctx_, std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<K> v = a.coeffs_;
        if (v.size() < b.coeffs_.size()) v.resize(b.coeffs_.size(), a.ctx_.zero());
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] = v[i] - b.coeffs_[i];
        return Polynomial(a.ctx_, std::move(v));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial(a.ctx_);
        if constexpr (std::is_same_v<K, PrimeField>) {
            if (a.fast_gf()) return a.from_raw(detail::gf_poly::mul(a.raw(), b.raw(), detail::gf_poly::Modulus(a.ctx_.modulus())));
        }
        std::vector<K> v(a.coeffs_.size() + b.coeffs_.size() - 1, a.ctx_.zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] = v[i + j] + a.coeffs_[i] * b.coeffs_[j];
        }
        return Polynomial(a.ctx_, std::move(v));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

    /// Quotient and remainder; throws zero_denominator when b = 0.
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) throw zero_denominator{};
        if (a.degree() < b.degree()) return {Polynomial(a.ctx_), a};
        if constexpr (std::is_same_v<K, PrimeField>) {
            if (a.fast_gf()) {
                auto r = a.raw();
                detail::gf_poly::Vec q;
                detail::gf_poly::remainder_into(r, b.raw(), detail::gf_poly::Modulus(a.ctx_.modulus()), &q);
                return {a.from_raw(std::move(q)), a.from_raw(std::move(r))};
            }
        }
        auto lead_inv = *try_invert(b.leading());
        std::vector<K> r = a.coeffs_;
        std::vector<K> q(r.size() - b.coeffs_.size() + 1, a.ctx_.zero());
        const std::size_t db = b.coeffs_.size() - 1;
        for (std::size_t k = q.size(); k-- > 0;) {
            const K& top = r[k + db];
            if (top.is_zero()) continue;
            K f = top * lead_inv;
            for (std::size_t j = 0; j <= db; ++j) r[k + j] = r[k + j] - f * b.coeffs_[j];
            q[k] = std::move(f);
        }
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(db), r.end());
        return {Polynomial(a.ctx_, std::move(q)), Polynomial(a.ctx_, std::move(r))};
    }

    /// Exact quotient; the caller guarantees b divides a.
    friend Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
        if (b.is_one()) return a;
        return divmod(a, b).first;
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    friend Polynomial gcd(Polynomial a, Polynomial b) {
        if constexpr (std::is_same_v<K, PrimeField>) {
            if (a.fast_gf()) return a.from_raw(detail::gf_poly::gcd(a.raw(), b.raw(), detail::gf_poly::Modulus(a.ctx_.modulus())));
        }
        if (a.degree() < b.degree()) std::swap(a, b);
        while (!b.is_zero()) {
            if (b.degree() == 0) return Polynomial::constant(a.ctx_, a.ctx_.one());
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    /// Renders with variable `var`, lowest degree first: "c0+c1*t+c2*t^2".
    std::string to_string(char var) const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            std::string c = detail::render(coeffs_[i]);
            if constexpr (is_rational_function_v<K>) c = "[" + c + "]";
            std::string unit;
            if (i >= 1) {
                unit = std::string("*") + var;
                if (i >= 2) unit += "^" + std::to_string(i);
            }
            detail::append_term(out, c, unit);
        }
        return out;
    }

    static Polynomial parse(const context_type& ctx, std::string_view text, char var) {
        if (text.empty()) throw parse_error("empty polynomial");
        Polynomial result(ctx);
        for (const auto& raw : detail::split_terms(text)) {
            std::string_view term = raw;
            bool negative = false;
            if (!term.empty() && (term.front() == '+' || term.front() == '-')) {
                negative = term.front() == '-';
                term.remove_prefix(1);
            }
            std::size_t degree = 0;
            std::string_view coeff = term;
            if (auto pos = term.rfind(var); pos != std::string_view::npos &&
                                            (pos + 1 == term.size() || term[pos + 1] == '^')) {
                if (pos + 1 < term.size()) {
                    auto exp = term.substr(pos + 2);
                    if (exp.empty()) throw parse_error("bad exponent in '" + std::string(text) + "'");
                    for (char c : exp) {
                        if (c < '0' || c > '9') throw parse_error("bad exponent in '" + std::string(text) + "'");
                        degree = degree * 10 + static_cast<std::size_t>(c - '0');
                    }
                } else {
                    degree = 1;
                }
                coeff = term.substr(0, pos);
                if (coeff.empty()) coeff = "1";
                else if (coeff.back() == '*') coeff.remove_suffix(1);
                else throw parse_error("bad polynomial term '" + std::string(raw) + "'");
            }
            if (coeff.size() >= 2 && coeff.front() == '[' && coeff.back() == ']') coeff = coeff.substr(1, coeff.size() - 2);
            K c = ctx.parse(coeff);
            if (negative) c = -c;
            result = result + monomial(ctx, std::move(c), degree);
        }
        return result;
    }

private:
    bool fast_gf() const
        requires std::is_same_v<K, PrimeField>
    {
        return detail::gf_poly::applicable(ctx_.modulus());
    }
    detail::gf_poly::Vec raw() const
        requires std::is_same_v<K, PrimeField>
    {
        detail::gf_poly::Vec v;
        v.reserve(coeffs_.size());
        for (const auto& c : coeffs_) v.push_back(c.residue());
        return v;
    }
    Polynomial from_raw(const detail::gf_poly::Vec& v) const
        requires std::is_same_v<K, PrimeField>
    {
        std::vector<K> c;
        c.reserve(v.size());
        for (auto x : v) c.push_back(ctx_.element(x));
        return Polynomial(ctx_, std::move(c));
    }

    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    context_type ctx_;
    std::vector<K> coeffs_;
};

} // namespace quadla
