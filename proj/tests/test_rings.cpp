#include <catch_amalgamated.hpp>

#include <random>

#include "quadla/random.hpp"
#include "quadla/rings.hpp"

using namespace quadla;

namespace {

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }

template <class T>
void check_axioms(const typename T::context_type& ctx, std::uint64_t seed, int rounds) {
    Generator g(seed);
    for (int i = 0; i < rounds; ++i) {
        const auto x = random_element<T>(ctx, g);
        const auto y = random_element<T>(ctx, g);
        const auto z = random_element<T>(ctx, g);
        REQUIRE((x + y) * z == x * z + y * z);
        REQUIRE(z * (x + y) == z * x + z * y);
        REQUIRE((x * y) * z == x * (y * z));
        REQUIRE(x + (-x) == ctx.zero());
        REQUIRE(star(x * y) == star(y) * star(x));
        REQUIRE(star(star(x)) == x);
        if (auto inv = try_invert(x)) {
            REQUIRE(*inv * x == ctx.one());
            REQUIRE(x * *inv == ctx.one());
        } else {
            REQUIRE(x.is_zero());
        }
    }
}

} // namespace

TEST_CASE("try_invert on scalars") {
    CHECK(*try_invert(q(2, 3)) == q(3, 2));
    CHECK_FALSE(try_invert(q(0)).has_value());

    PrimeField::Context f7(7);
    CHECK(try_invert(f7.element(3))->residue() == 5);
    CHECK_FALSE(try_invert(f7.zero()).has_value());

    CHECK(*try_invert(Quaternion::i()) == -Quaternion::i());
}

TEST_CASE("star involutions") {
    GaussianRational::Context qi;
    CHECK(star(qi.parse("1+2*i")) == qi.parse("1-2*i"));
    Quaternion::Context h;
    CHECK(star(h.parse("1+1*i+1*j+1*k")) == h.parse("1-1*i-1*j-1*k"));
    CHECK(star(q(5, 3)) == q(5, 3));
}

TEST_CASE("quaternion units do not commute") {
    CHECK(Quaternion::i() * Quaternion::j() == Quaternion::k());
    CHECK(Quaternion::j() * Quaternion::i() == -Quaternion::k());
    const Quaternion x{q(1), q(2), q(-1), q(3)};
    const auto n = star(x) * x;
    CHECK(n == Quaternion{q(15), q(0), q(0), q(0)});
}

TEST_CASE("rational canonical form") {
    CHECK(q(6, -4) == q(-3, 2));
    CHECK(to_string(q(6, -4)) == "-3/2");
    CHECK(to_string(q(0, 5)) == "0");
    CHECK_THROWS_AS(Rational::parse("1/0"), zero_denominator);
    CHECK_THROWS_AS(Rational::parse("1.5"), parse_error);
}

TEST_CASE("prime field construction") {
    CHECK_THROWS(PrimeField::Context(8));
    CHECK_THROWS(PrimeField::Context(1));
    PrimeField::Context big(4611686018427387847ULL);  // largest prime below 2^62
    const auto x = big.element(4611686018427387846ULL);
    CHECK(x * x == big.one());
    CHECK(PrimeField::Context(7).parse("-1").residue() == 6);
}

TEST_CASE("rational function reduction") {
    Rational::Context qc;
    auto qt = function_field<Rational>(qc);
    using P = Polynomial<Rational>;

    // (t²−1)/(t−1) = t+1
    auto r = ratfun_reduce(qt, P(qc, {q(-1), q(0), q(1)}), P(qc, {q(-1), q(1)}));
    CHECK(r.numerator() == P(qc, {q(1), q(1)}));
    CHECK(r.denominator() == P(qc, {q(1)}));

    // 2t/4 = (1/2)t
    auto s = ratfun_reduce(qt, P(qc, {q(0), q(2)}), P(qc, {q(4)}));
    CHECK(s.numerator() == P(qc, {q(0), q(1, 2)}));
    CHECK(s.denominator().is_one());

    PrimeField::Context f2(2);
    auto gt = function_field<PrimeField>(f2);
    using G = Polynomial<PrimeField>;
    auto u = ratfun_reduce(gt, G(f2, {f2.zero(), f2.one()}), G(f2, {f2.zero(), f2.one()}));
    CHECK(u == gt.one());

    CHECK_THROWS_AS(ratfun_reduce(qt, P(qc, {q(1)}), P(qc)), zero_denominator);
}

TEST_CASE("rational function canonical forms decide equality") {
    Rational::Context qc;
    auto qt = function_field<Rational>(qc);
    auto a = qt.parse("(2+2*t)/(4+4*t^2)");
    auto b = qt.parse("(1+1*t)/(2+2*t^2)");
    CHECK(a == b);
    CHECK(to_string(a) == to_string(b));
    CHECK(qt.parse(to_string(a)) == a);
    CHECK(a.denominator().leading() == q(1));
    CHECK(to_string(qt.parse("(3)")) == "(3)");
    CHECK(qt.parse("(1)/(1*t)").mul_t_power(1) == qt.one());
}

TEST_CASE("scalar tokens round trip") {
    Rational::Context qc;
    GaussianRational::Context qi;
    Quaternion::Context h;
    PrimeField::Context f(13);
    auto qt = function_field<Rational>(qc);
    auto ft = function_field<PrimeField>(f);
    Generator g(7);
    for (int i = 0; i < 100; ++i) {
        auto a = random_element<Rational>(qc, g);
        CHECK(qc.parse(to_string(a)) == a);
        auto b = random_element<GaussianRational>(qi, g);
        CHECK(qi.parse(to_string(b)) == b);
        auto c = random_element<Quaternion>(h, g);
        CHECK(h.parse(to_string(c)) == c);
        auto d = random_element<PrimeField>(f, g);
        CHECK(f.parse(to_string(d)) == d);
        auto e = random_element<RationalFunctionQ>(qt, g) * random_element<RationalFunctionQ>(qt, g);
        CHECK(qt.parse(to_string(e)) == e);
        auto k = random_element<RationalFunctionGF>(ft, g);
        CHECK(ft.parse(to_string(k)) == k);
    }
    CHECK(qi.parse("i") == GaussianRational{q(0), q(1)});
    CHECK(qi.parse("-3/2") == GaussianRational{q(-3, 2), q(0)});
}

TEST_CASE("ring axioms on random elements") {
    SECTION("rationals") { check_axioms<Rational>(Rational::Context{}, 1, 500); }
    SECTION("GF(7)") { check_axioms<PrimeField>(PrimeField::Context(7), 2, 500); }
    SECTION("GF(2)") { check_axioms<PrimeField>(PrimeField::Context(2), 3, 500); }
    SECTION("Gaussian rationals") { check_axioms<GaussianRational>(GaussianRational::Context{}, 4, 500); }
    SECTION("quaternions") { check_axioms<Quaternion>(Quaternion::Context{}, 5, 500); }
    SECTION("Q(t)") { check_axioms<RationalFunctionQ>(function_field<Rational>(Rational::Context{}), 6, 500); }
    SECTION("GF(5)(t)") { check_axioms<RationalFunctionGF>(function_field<PrimeField>(PrimeField::Context(5)), 7, 500); }
}

TEST_CASE("prime-field polynomial arithmetic across modulus sizes") {
    // 2 and 7 take the deferred-reduction kernels, 65537 the reduced-per-step
    // kernels, and 4294967311 (first prime above 2^32) the generic path.
    for (std::uint64_t p : {2ULL, 7ULL, 65537ULL, 4294967311ULL}) {
        CAPTURE(p);
        PrimeField::Context f(p);
        using G = Polynomial<PrimeField>;
        std::mt19937_64 rng(p);
        auto poly = [&](int max_degree) {
            std::vector<PrimeField> c;
            const int d = static_cast<int>(rng() % static_cast<std::uint64_t>(max_degree + 1));
            for (int i = 0; i <= d; ++i) c.push_back(f.element(rng()));
            return G(f, c);
        };
        // schoolbook product with scalar operators only
        auto schoolbook = [&](const G& a, const G& b) {
            if (a.is_zero() || b.is_zero()) return G(f);
            std::vector<PrimeField> c(a.coefficients().size() + b.coefficients().size() - 1, f.zero());
            for (std::size_t i = 0; i < a.coefficients().size(); ++i)
                for (std::size_t j = 0; j < b.coefficients().size(); ++j)
                    c[i + j] = c[i + j] + a.coefficients()[i] * b.coefficients()[j];
            return G(f, c);
        };
        for (int round = 0; round < 200; ++round) {
            const auto a = poly(24), b = poly(12), c = poly(6);
            REQUIRE(a * b == schoolbook(a, b));
            if (b.is_zero()) continue;
            const auto [quo, rem] = divmod(a, b);
            REQUIRE(schoolbook(quo, b) + rem == a);
            REQUIRE((rem.is_zero() || rem.degree() < b.degree()));
            if (c.is_zero()) continue;
            const auto g = gcd(schoolbook(a, c), schoolbook(b, c));
            REQUIRE(g.leading() == f.one());
            REQUIRE(divmod(schoolbook(a, c), g).second.is_zero());
            REQUIRE(divmod(schoolbook(b, c), g).second.is_zero());
            REQUIRE(divmod(g, c).second.is_zero());
        }
    }
}
