#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadla/block_matrix.hpp"
#include "quadla/generate.hpp"
#include "quadla/inversion.hpp"
#include "quadla/lu.hpp"
#include "quadla/rings/rational.hpp"

namespace quadla {

/// T_×(n) = α·n^ω. Closed forms are only evaluated for integral ω (naive);
/// Strassen is checked against its 7-branch recurrence.
struct CostModel {
    Rational alpha{1};
    Rational omega{3};
    MulStrategy strategy = MulStrategy::naive;

    static CostModel naive() { return {}; }
    static CostModel strassen() { return {Rational(1), Rational(0), MulStrategy::strassen}; }
};

namespace detail {

inline void require_power_of_two(std::uint64_t n) {
    if (!is_power_of_two(n)) throw non_power_of_two(n);
}

inline Rational power(const Rational& base, const Rational& exponent) {
    if (!exponent.is_integer() || exponent.sign() < 0) throw std::invalid_argument("closed forms need integral omega");
    mpq_class r = 1;
    for (long i = 0, e = exponent.numerator().get_si(); i < e; ++i) r *= base.value();
    return Rational(r);
}

inline void require_closed_form(const CostModel& m) {
    if (m.strategy != MulStrategy::naive) throw std::invalid_argument("closed forms are evaluated for naive multiplication only");
}

inline long log2_exact(std::uint64_t n) {
    long k = 0;
    while ((std::uint64_t{1} << k) < n) ++k;
    return k;
}

} // namespace detail

/// T_inv(n) = 2αn^ω − (2α−1)n + 8α(2^ω+2)(n^ω−n)/(4^ω−4).
inline Rational closed_form_T_inv(std::uint64_t n, const CostModel& m = CostModel::naive()) {
    detail::require_power_of_two(n);
    detail::require_closed_form(m);
    const Rational N(static_cast<std::int64_t>(n));
    const auto nw = detail::power(N, m.omega);
    const auto tw = detail::power(Rational(2), m.omega);
    const auto fw = detail::power(Rational(4), m.omega);
    return Rational(2) * m.alpha * nw - (Rational(2) * m.alpha - Rational(1)) * N +
           Rational(8) * m.alpha * (tw + Rational(2)) * (nw - N) / (fw - Rational(4));
}

/// T_△×(n) = 2α/(2^ω−4)·(n^ω − n²) + n².
inline Rational closed_form_T_trimul(std::uint64_t n, const CostModel& m = CostModel::naive()) {
    detail::require_power_of_two(n);
    detail::require_closed_form(m);
    const Rational N(static_cast<std::int64_t>(n));
    const auto tw = detail::power(Rational(2), m.omega);
    return Rational(2) * m.alpha / (tw - Rational(4)) * (detail::power(N, m.omega) - N * N) + N * N;
}

/// T_LU(n) = α(n^ω−n)·2^ω/((2^ω−2)(2^ω−4)) + (n²−n)(3/2 − 2α/(2^ω−4)) + ½n·log₂n + n.
inline Rational closed_form_T_lu(std::uint64_t n, const CostModel& m = CostModel::naive()) {
    detail::require_power_of_two(n);
    detail::require_closed_form(m);
    const Rational N(static_cast<std::int64_t>(n));
    const auto tw = detail::power(Rational(2), m.omega);
    const Rational half(mpz_class(1), mpz_class(2));
    return m.alpha * (detail::power(N, m.omega) - N) * tw / ((tw - Rational(2)) * (tw - Rational(4))) +
           (N * N - N) * (Rational(3) * half - Rational(2) * m.alpha / (tw - Rational(4))) +
           half * N * Rational(detail::log2_exact(n)) + N;
}

/// T_inv△(n) = ½n(n+1), the published figure for triangular inversion.
inline Rational closed_form_T_triinv(std::uint64_t n) {
    const Rational N(static_cast<std::int64_t>(n));
    return N * (N + Rational(1)) / Rational(2);
}

/// Exact integer recurrences, all with T(1) = 1 unless stated.
namespace recurrence {

inline std::uint64_t mul(std::uint64_t n, MulStrategy s = MulStrategy::naive) {
    detail::require_power_of_two(n);
    if (n == 1) return 1;
    return (s == MulStrategy::naive ? 8 : 7) * mul(n / 2, s);
}

/// 4T(n/2) + 2T_×(n/2)
inline std::uint64_t tri_mul(std::uint64_t n) {
    detail::require_power_of_two(n);
    return n == 1 ? 1 : 4 * tri_mul(n / 2) + 2 * mul(n / 2);
}

/// 2T(n/2) + 2T_△×(n/2)
inline std::uint64_t tri_inv(std::uint64_t n) {
    detail::require_power_of_two(n);
    return n == 1 ? 1 : 2 * tri_inv(n / 2) + 2 * tri_mul(n / 2);
}

/// 2H(n/2) + 4T_×(n/2)
inline std::uint64_t hermitian_inv(std::uint64_t n) {
    detail::require_power_of_two(n);
    return n == 1 ? 1 : 2 * hermitian_inv(n / 2) + 4 * mul(n / 2);
}

/// 2T_×(n) + 2T_inv(n/2) + 4T_×(n/2)
inline std::uint64_t gram_inv(std::uint64_t n) {
    detail::require_power_of_two(n);
    return n == 1 ? 1 : 2 * mul(n) + 2 * gram_inv(n / 2) + 4 * mul(n / 2);
}

/// 2T_LU(n/2) + 2T_inv△(n/2) + T_×(n/2) + 2T_△×(n/2) with T_LU(1) = 1 and
/// T_inv△(m) = ½m(m+1): the assumptions under which the LU closed form holds.
inline std::uint64_t lu_published(std::uint64_t n) {
    detail::require_power_of_two(n);
    if (n == 1) return 1;
    const auto h = n / 2;
    return 2 * lu_published(h) + h * (h + 1) + mul(h) + 2 * tri_mul(h);
}

} // namespace recurrence

struct CountReport {
    std::string op;
    std::uint64_t n = 0;
    OpCounter counter;
    std::uint64_t measured = 0;
    std::uint64_t recurrence = 0;
    std::optional<Rational> closed_form;
    bool recurrence_match = false;
    bool closed_form_match = false;
    std::string note;

    /// "yes" when every available prediction matches, "recurrence-only" when
    /// the recurrence matches and a closed form differs, "no" otherwise.
    std::string match() const {
        if (!recurrence_match) return "no";
        if (closed_form && !closed_form_match) return "recurrence-only";
        return "yes";
    }
};

inline const std::vector<std::string>& count_operations() {
    static const std::vector<std::string> ops{"mul", "strassen", "tri_mul", "tri_inv", "hermitian_inv", "gram_inv", "lu"};
    return ops;
}

namespace detail {

using Q = Rational;
using QMatrix = BlockMatrix<Rational>;

inline QMatrix random_q(int depth, Generator& g) { return random_block_matrix<Q>(Q::Context{}, depth, g); }

inline TriangularMatrix<Q> random_triangular(int depth, Orientation o, Generator& g) {
    const Q::Context ctx;
    auto m = random_q(depth, g);
    auto masked = map_entries_indexed(m, [&](std::size_t i, std::size_t j, const Q& x) {
        if (i == j) return x.is_zero() ? ctx.one() : x;
        return (o == Orientation::lower) == (i > j) ? x : ctx.zero();
    });
    return TriangularMatrix<Q>(masked, o, false);
}

/// Measured mul+div of each kernel at size n over ℚ.
inline OpCounter measure(const std::string& op, std::uint64_t n, Generator& g) {
    const int k = static_cast<int>(log2_exact(n));
    OpCounter c(op);
    if (op == "mul" || op == "strassen") {
        const auto x = random_q(k, g);
        const auto y = random_q(k, g);
        quadla::mul(x, y, c, op == "mul" ? MulStrategy::naive : MulStrategy::strassen);
    } else if (op == "tri_mul") {
        const auto t = random_triangular(k, Orientation::lower, g);
        tri_mul(t, random_q(k, g), Side::left, c);
    } else if (op == "tri_inv") {
        tri_invert(random_triangular(k, Orientation::lower, g), c);
    } else if (op == "hermitian_inv") {
        OpCounter setup;
        const auto m = random_invertible<Q>(Q::Context{}, k, g);
        hermitian_invert(make_gram(m, ConjugationKind::transpose, setup), c);
    } else if (op == "gram_inv") {
        invert_gram_transpose(random_invertible<Q>(Q::Context{}, k, g), c);
    } else if (op == "lu") {
        auto r = lu_decompose(random_invertible<Q>(Q::Context{}, k, g), c);
        if (r.randomized_used) c.label = "lu (randomized)";
    } else {
        throw std::invalid_argument("unknown operation '" + op + "'");
    }
    return c;
}

inline bool integral(const Rational& r) { return r.is_integer(); }

} // namespace detail

/// Runs `op` on seeded random invertible ℚ inputs with naive multiplication
/// (Strassen for op "strassen") and compares against predictions.
inline std::vector<CountReport> verify_counts(const std::string& op, const std::vector<std::uint64_t>& sizes,
                                              std::uint64_t seed = 1) {
    std::vector<CountReport> out;
    for (auto n : sizes) {
        detail::require_power_of_two(n);
        if (n > 64) throw std::invalid_argument("verify_counts sizes are limited to 64");
        Generator g(seed ^ (n * 0x9e3779b97f4a7c15ULL));
        CountReport r;
        r.op = op;
        r.n = n;
        r.counter = detail::measure(op, n, g);
        r.measured = r.counter.mul_div();
        if (op == "mul") {
            r.recurrence = recurrence::mul(n);
            r.closed_form = Rational(static_cast<std::int64_t>(n * n * n));
        } else if (op == "strassen") {
            r.recurrence = recurrence::mul(n, MulStrategy::strassen);
            r.note = "7-branch recurrence; no closed form at fractional omega";
        } else if (op == "tri_mul") {
            r.recurrence = recurrence::tri_mul(n);
            r.closed_form = closed_form_T_trimul(n);
        } else if (op == "tri_inv") {
            r.recurrence = recurrence::tri_inv(n);
            r.closed_form = closed_form_T_triinv(n);
            r.note = "closed form is the published n(n+1)/2; the block scheme costs 2T(n/2)+2T_trimul(n/2)";
        } else if (op == "hermitian_inv") {
            r.recurrence = recurrence::hermitian_inv(n);
        } else if (op == "gram_inv") {
            r.recurrence = recurrence::gram_inv(n);
            r.closed_form = closed_form_T_inv(n);
        } else if (op == "lu") {
            // Recurrence from this implementation's own sub-kernel tallies at n/2.
            if (n == 1) {
                r.recurrence = 0;
            } else {
                Generator sub(seed ^ (n * 0x51ed270b27a3f1c3ULL));
                const auto h = n / 2;
                auto half_lu = detail::measure("lu", h, sub).mul_div();
                r.recurrence = 2 * half_lu + 2 * detail::measure("tri_inv", h, sub).mul_div() +
                               detail::measure("mul", h, sub).mul_div() +
                               2 * detail::measure("tri_mul", h, sub).mul_div();
            }
            r.closed_form = closed_form_T_lu(n);
            if (n == 1) r.note = "closed form assumes T_LU(1)=1; a 1x1 LU here performs no multiplication";
            std::ostringstream note;
            note << "closed form assumes T_LU(1)=1 and T_inv_tri(m)=m(m+1)/2 (recurrence under those: "
                 << recurrence::lu_published(n) << "); here a 1x1 LU costs 0 and T_inv_tri(" << n / 2
                 << ") measures " << (n > 1 ? recurrence::tri_inv(n / 2) : 0) << " vs published "
                 << to_string(n > 1 ? closed_form_T_triinv(n / 2) : Rational(0));
            if (n > 1) r.note = note.str();
            if (r.counter.label == "lu (randomized)") r.note += "; randomized path was used";
        } else {
            throw std::invalid_argument("unknown operation '" + op + "'");
        }
        r.recurrence_match = r.measured == r.recurrence;
        if (r.closed_form) {
            r.closed_form_match = detail::integral(*r.closed_form) &&
                                  *r.closed_form == Rational(static_cast<std::int64_t>(r.measured));
            if (!detail::integral(*r.closed_form)) r.note += (r.note.empty() ? "" : "; ") + std::string("closed form is not an integer");
        }
        out.push_back(std::move(r));
    }
    return out;
}

/// One line per report: `op n measured recurrence closed_form match`.
inline void write_count_lines(std::ostream& os, const std::vector<CountReport>& reports) {
    for (const auto& r : reports)
        os << r.op << ' ' << r.n << ' ' << r.measured << ' ' << r.recurrence << ' '
           << (r.closed_form ? to_string(*r.closed_form) : std::string("-")) << ' ' << r.match() << '\n';
}

/// Aligned table with the individual tallies and annotations.
inline void write_count_table(std::ostream& os, const std::vector<CountReport>& reports) {
    const std::vector<std::string> head{"op", "n", "mul", "div", "add", "scaling", "measured", "recurrence", "closed_form",
                                        "match"};
    std::vector<std::vector<std::string>> rows{head};
    for (const auto& r : reports)
        rows.push_back({r.op, std::to_string(r.n), std::to_string(r.counter.mul_count),
                        std::to_string(r.counter.div_count), std::to_string(r.counter.add_count),
                        std::to_string(r.counter.scaling_count), std::to_string(r.measured),
                        std::to_string(r.recurrence), r.closed_form ? to_string(*r.closed_form) : "-", r.match()});
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << "  ";
            os << std::setw(static_cast<int>(width[i])) << row[i];
        }
        os << '\n';
    }
    for (const auto& r : reports)
        if (!r.note.empty()) os << "note (" << r.op << ", n=" << r.n << "): " << r.note << '\n';
}

} // namespace quadla
