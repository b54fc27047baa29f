#include <catch_amalgamated.hpp>

#include <sstream>

#include "quadla/generate.hpp"
#include "quadla/matrix_io.hpp"

using namespace quadla;

namespace {

template <class T>
void round_trip(const typename T::context_type& ctx, std::uint64_t seed) {
    Generator g(seed);
    for (std::size_t n : {1, 3, 4}) {
        const auto m = random_dense<T>(ctx, n, g);
        const auto text = format_matrix(m);
        const auto parsed = parse_matrix(text);
        REQUIRE(std::get<DenseMatrix<T>>(parsed) == m);
        REQUIRE(format_matrix(parsed) == text);
    }
}

} // namespace

TEST_CASE("file header and rows") {
    const auto m = parse_matrix("ring q\nsize 2\n1 -2/4\n0 3\n");
    const auto& d = std::get<DenseMatrix<Rational>>(m);
    CHECK(d(0, 1) == Rational(mpz_class(-1), mpz_class(2)));
    CHECK(format_matrix(m) == "ring q\nsize 2\n1 -1/2\n0 3\n");
}

TEST_CASE("comments and blank lines are skipped") {
    const auto m = parse_matrix("# generated\nring gf:7\n\nsize 2\n1 8\n# mid\n6 0\n# generator mt19937_64 seed 1\n");
    const auto& d = std::get<DenseMatrix<PrimeField>>(m);
    CHECK(d(0, 1).residue() == 1);
    CHECK(d(0, 0).modulus() == 7);
}

TEST_CASE("every ring round trips byte for byte") {
    round_trip<Rational>(Rational::Context{}, 1);
    round_trip<PrimeField>(PrimeField::Context(7), 2);
    round_trip<GaussianRational>(GaussianRational::Context{}, 3);
    round_trip<Quaternion>(Quaternion::Context{}, 4);
    round_trip<RationalFunctionQ>(function_field<Rational>(Rational::Context{}), 5);
    round_trip<RationalFunctionGF>(function_field<PrimeField>(PrimeField::Context(3)), 6);
}

TEST_CASE("ring specs") {
    CHECK(RingSpec::parse("ratfun:gf:5").to_string() == "ratfun:gf:5");
    CHECK(RingSpec::parse("quat").kind == RingSpec::Kind::quaternion);
    CHECK_THROWS_AS(RingSpec::parse("gf:9"), parse_error);
    CHECK_THROWS_AS(RingSpec::parse("zz"), parse_error);
}

TEST_CASE("malformed files are rejected") {
    CHECK_THROWS_AS(parse_matrix("ring q\nsize 2\n1 2\n3\n"), parse_error);
    CHECK_THROWS_AS(parse_matrix("ring q\nsize 2\n1 2\n"), parse_error);
    CHECK_THROWS_AS(parse_matrix("size 2\nring q\n1 2\n3 4\n"), parse_error);
    CHECK_THROWS_AS(parse_matrix("ring q\nsize 0\n"), parse_error);
    CHECK_THROWS_AS(parse_matrix("ring q\nsize 1\nx\n"), parse_error);
    CHECK_THROWS_AS(parse_matrix("ring q\nsize 1\n1/0\n"), zero_denominator);
    CHECK_THROWS_AS(parse_matrix("ring qi\nsize 1\n1+2*j\n"), parse_error);
}
