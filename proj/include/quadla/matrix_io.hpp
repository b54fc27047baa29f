#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quadla/dense_matrix.hpp"
#include "quadla/errors.hpp"
#include "quadla/rings.hpp"

namespace quadla {

/// The `ring ...` header of a matrix file.
struct RingSpec {
    enum class Kind { rational, prime_field, gaussian, quaternion, ratfun_rational, ratfun_prime_field };

    Kind kind = Kind::rational;
    std::uint64_t modulus = 0;

    static RingSpec parse(std::string_view text) {
        auto prime_after = [&](std::string_view prefix) -> std::uint64_t {
            auto digits = text.substr(prefix.size());
            if (digits.empty() || digits.size() > 19) throw parse_error("bad modulus in ring '" + std::string(text) + "'");
            std::uint64_t p = 0;
            for (char c : digits) {
                if (c < '0' || c > '9') throw parse_error("bad modulus in ring '" + std::string(text) + "'");
                p = p * 10 + static_cast<std::uint64_t>(c - '0');
            }
            if (!detail::is_prime(p)) throw parse_error("modulus " + std::string(digits) + " is not prime");
            return p;
        };
        if (text == "q") return {Kind::rational, 0};
        if (text == "qi") return {Kind::gaussian, 0};
        if (text == "quat") return {Kind::quaternion, 0};
        if (text == "ratfun:q") return {Kind::ratfun_rational, 0};
        if (text.starts_with("gf:")) return {Kind::prime_field, prime_after("gf:")};
        if (text.starts_with("ratfun:gf:")) return {Kind::ratfun_prime_field, prime_after("ratfun:gf:")};
        throw parse_error("unknown ring '" + std::string(text) + "'");
    }

    std::string to_string() const {
        switch (kind) {
        case Kind::rational: return "q";
        case Kind::prime_field: return "gf:" + std::to_string(modulus);
        case Kind::gaussian: return "qi";
        case Kind::quaternion: return "quat";
        case Kind::ratfun_rational: return "ratfun:q";
        case Kind::ratfun_prime_field: return "ratfun:gf:" + std::to_string(modulus);
        }
        return "?";
    }

    /// Calls f(context) with the scalar context this header names.
    template <class F>
    decltype(auto) visit(F&& f) const {
        switch (kind) {
        case Kind::rational: return f(Rational::Context{});
        case Kind::prime_field: return f(PrimeField::Context(modulus));
        case Kind::gaussian: return f(GaussianRational::Context{});
        case Kind::quaternion: return f(Quaternion::Context{});
        case Kind::ratfun_rational: return f(function_field<Rational>(Rational::Context{}));
        case Kind::ratfun_prime_field: return f(function_field<PrimeField>(PrimeField::Context(modulus)));
        }
        throw parse_error("unknown ring kind");
    }
};

using AnyDenseMatrix = std::variant<DenseMatrix<Rational>, DenseMatrix<PrimeField>, DenseMatrix<GaussianRational>,
                                    DenseMatrix<Quaternion>, DenseMatrix<RationalFunctionQ>,
                                    DenseMatrix<RationalFunctionGF>>;

namespace detail {

/// Next line that is neither blank nor a '#' comment.
inline bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

inline std::string expect_keyword(std::istream& in, std::string_view keyword) {
    std::string line;
    if (!next_content_line(in, line)) throw parse_error("missing '" + std::string(keyword) + "' line");
    std::istringstream ls(line);
    std::string word, value, extra;
    ls >> word >> value;
    if (word != keyword || value.empty() || (ls >> extra))
        throw parse_error("expected '" + std::string(keyword) + " <value>', got '" + line + "'");
    return value;
}

template <Ring T>
DenseMatrix<T> read_body(std::istream& in, const typename T::context_type& ctx, std::size_t n) {
    std::vector<T> entries;
    entries.reserve(n * n);
    std::string line;
    for (std::size_t i = 0; i < n; ++i) {
        if (!next_content_line(in, line)) throw parse_error("expected " + std::to_string(n) + " rows");
        std::istringstream ls(line);
        std::string token;
        std::size_t count = 0;
        while (ls >> token) {
            entries.push_back(ctx.parse(token));
            ++count;
        }
        if (count != n)
            throw parse_error("row " + std::to_string(i + 1) + " has " + std::to_string(count) + " entries, expected " +
                              std::to_string(n));
    }
    return DenseMatrix<T>(n, std::move(entries));
}

inline std::size_t parse_size(const std::string& text) {
    if (text.empty() || text.size() > 9 || text.find_first_not_of("0123456789") != std::string::npos)
        throw parse_error("bad size '" + text + "'");
    auto n = static_cast<std::size_t>(std::stoul(text));
    if (n == 0) throw parse_error("size must be positive");
    return n;
}

} // namespace detail

/// Reads a matrix file of any supported ring.
inline AnyDenseMatrix read_matrix(std::istream& in) {
    auto spec = RingSpec::parse(detail::expect_keyword(in, "ring"));
    auto n = detail::parse_size(detail::expect_keyword(in, "size"));
    return spec.visit([&](const auto& ctx) -> AnyDenseMatrix {
        using T = std::decay_t<decltype(ctx.zero())>;
        return detail::read_body<T>(in, ctx, n);
    });
}

/// Reads a matrix file that must be over the scalar type T.
template <Ring T>
DenseMatrix<T> read_matrix_as(std::istream& in) {
    auto any = read_matrix(in);
    if (auto* m = std::get_if<DenseMatrix<T>>(&any)) return std::move(*m);
    throw parse_error("matrix file is over a different ring");
}

inline AnyDenseMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    return read_matrix(in);
}

/// Canonical serialization: header, size, rows of canonical tokens.
template <Ring T>
void write_matrix(std::ostream& out, const DenseMatrix<T>& m) {
    out << "ring " << m(0, 0).context().header() << '\n' << "size " << m.size() << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out << ' ';
            out << detail::render(m(i, j));
        }
        out << '\n';
    }
}

template <Ring T>
std::string format_matrix(const DenseMatrix<T>& m) {
    std::ostringstream out;
    write_matrix(out, m);
    return out.str();
}

inline std::string format_matrix(const AnyDenseMatrix& m) {
    return std::visit([](const auto& x) { return format_matrix(x); }, m);
}

} // namespace quadla
