#include <catch_amalgamated.hpp>

#include "oracle.hpp"
#include "quadla/generate.hpp"
#include "quadla/inversion.hpp"

using namespace quadla;

namespace {

const Rational::Context Q;

BlockMatrix<Rational> qm(std::vector<std::vector<long>> rows) { return from_dense(oracle::from_ints<Rational>(Q, rows)); }

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }

// Independent evaluations of the cost recurrences, T(1) = 1.
std::uint64_t cube(std::uint64_t n) { return n * n * n; }
std::uint64_t hermitian_cost(std::uint64_t n) { return n == 1 ? 1 : 2 * hermitian_cost(n / 2) + 4 * cube(n / 2); }
std::uint64_t gram_cost(std::uint64_t n) { return n == 1 ? 1 : 2 * cube(n) + 2 * gram_cost(n / 2) + 4 * cube(n / 2); }

/// Random invertible matrices drawn against the dense oracle, returned with
/// the oracle's inverse.
template <class T>
std::vector<std::pair<BlockMatrix<T>, DenseMatrix<T>>> invertible_cases(const typename T::context_type& ctx,
                                                                         int depth, int count, std::uint64_t seed) {
    Generator g(seed);
    std::vector<std::pair<BlockMatrix<T>, DenseMatrix<T>>> out;
    while (static_cast<int>(out.size()) < count) {
        auto m = random_block_matrix<T>(ctx, depth, g);
        if (auto inv = oracle::inverse(to_dense(m))) out.emplace_back(m, *inv);
    }
    return out;
}

template <class T>
void auto_matches_oracle(const typename T::context_type& ctx, std::uint64_t seed, int per_depth, int max_depth = 3) {
    for (int depth = 1; depth <= max_depth; ++depth)
        for (const auto& [m, inv] : invertible_cases<T>(ctx, depth, per_depth, seed + depth)) {
            OpCounter c;
            const auto r = auto_invert(m, c);
            REQUIRE(to_dense(r) == inv);
            const auto id = BlockMatrix<T>::identity(ctx, depth);
            REQUIRE(r * m == id);
            REQUIRE(m * r == id);
        }
}

} // namespace

TEST_CASE("Schur-complement inversion") {
    OpCounter c;
    CHECK(schur_invert(qm({{2, 0}, {0, 3}}), c) == from_dense(DenseMatrix<Rational>(2, {q(1, 2), q(0), q(0), q(1, 3)})));
    CHECK(schur_invert(qm({{1, 2}, {3, 4}}), c) == from_dense(DenseMatrix<Rational>(2, {q(-2), q(1), q(3, 2), q(-1, 2)})));
    CHECK_THROWS_AS(schur_invert(qm({{0, 1}, {1, 0}}), c), pivot_block_singular);
    try {
        schur_invert(qm({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}}), c);
        FAIL("expected a singular pivot block");
    } catch (const pivot_block_singular& e) {
        CHECK(e.path() == "/S/S");
    }
}

TEST_CASE("hermitian inversion of Gram matrices") {
    for (auto kind : {ConjugationKind::transpose, ConjugationKind::star}) {
        OpCounter c;
        const auto id = BlockMatrix<Rational>::identity(Q, 1);
        CHECK(hermitian_invert(GramMatrix<Rational>{id, kind}, c) == id);
        CHECK(c.mul_div() == 6);
    }
    OpCounter c;
    CHECK(hermitian_invert(GramMatrix<Rational>{qm({{2, 1}, {1, 1}}), ConjugationKind::transpose}, c) ==
          qm({{1, -1}, {-1, 2}}));
    CHECK_THROWS_AS(hermitian_invert(GramMatrix<Rational>{qm({{0, 0}, {0, 0}}), ConjugationKind::transpose}, c),
                    gram_singular);
}

TEST_CASE("hermitian inversion never pivots") {
    Generator g(21);
    for (int depth = 1; depth <= 4; ++depth)
        for (int i = 0; i < 10; ++i) {
            const auto m = random_invertible<Rational>(Q, depth, g);
            OpCounter setup, c;
            InversionProbe probe;
            const auto n = make_gram(m, ConjugationKind::transpose, setup);
            const auto inv = hermitian_invert(n, c, &probe);
            REQUIRE(inv * n.body == BlockMatrix<Rational>::identity(Q, depth));
            // one leading-block attempt per internal node of the recursion
            REQUIRE(probe.leading_attempts == m.dim() - 1);
            REQUIRE(probe.leading_failures == 0);
        }
}

TEST_CASE("Gram inversion through the transpose") {
    OpCounter c;
    CHECK(invert_gram_transpose(qm({{0, 1}, {1, 0}}), c) == qm({{0, 1}, {1, 0}}));
    CHECK(invert_gram_transpose(qm({{1, 1}, {1, 0}}), c) == qm({{0, 1}, {1, -1}}));

    const auto m4 = all_blocks_singular_witness<Rational>(Q);
    CHECK(oracle::determinant(to_dense(m4)) == q(-1));
    const auto inv = invert_gram_transpose(m4, c);
    CHECK(to_dense(inv) == *oracle::inverse(to_dense(m4)));
    CHECK(m4 * inv == BlockMatrix<Rational>::identity(Q, 2));
    CHECK_THROWS_AS(schur_invert(m4, c), pivot_block_singular);
    CHECK_THROWS_AS(invert_gram_transpose(qm({{1, 2}, {2, 4}}), c), singular_matrix);
}

TEST_CASE("Gram inversion through the conjugate transpose") {
    GaussianRational::Context qi;
    const auto i = qi.parse("i"), one = qi.one(), zero = qi.zero();
    OpCounter c;
    const auto m = from_dense(DenseMatrix<GaussianRational>(2, {zero, i, i, zero}));
    CHECK(invert_gram_star(m, c) == from_dense(DenseMatrix<GaussianRational>(2, {zero, -i, -i, zero})));
    const auto u = from_dense(DenseMatrix<GaussianRational>(2, {one, i, zero, one}));
    CHECK(invert_gram_star(u, c) == from_dense(DenseMatrix<GaussianRational>(2, {one, -i, zero, one})));
    CHECK(invert_gram_star(BlockMatrix<Quaternion>::leaf(Quaternion::j()), c) ==
          BlockMatrix<Quaternion>::leaf(-Quaternion::j()));

    Quaternion::Context h;
    Generator g(8);
    for (int depth = 1; depth <= 2; ++depth)
        for (int k = 0; k < 10; ++k) {
            const auto a = random_invertible<Quaternion>(h, depth, g);
            const auto inv = invert_gram_star(a, c);
            const auto id = BlockMatrix<Quaternion>::identity(h, depth);
            REQUIRE(a * inv == id);
            REQUIRE(inv * a == id);
        }
}

TEST_CASE("GV inversion over finite fields") {
    PrimeField::Context f2(2);
    const auto one = f2.one(), zero = f2.zero();
    const auto m = from_dense(DenseMatrix<PrimeField>(2, {one, one, one, zero}));
    OpCounter c;
    CHECK(invert_gram_gv(m, c) == from_dense(DenseMatrix<PrimeField>(2, {zero, one, one, one})));
    CHECK(c.mul_div() == 2 * 8 + hermitian_cost(2));
    CHECK(c.scaling_count > 0);

    // intermediate Gram matrix M°M = [[1+t, 1], [1/t, 1/t]]
    auto ft = lifted_context<PrimeField>(f2);
    const auto lifted = map_entries(m, [&](const PrimeField& x) { return ft.constant(x); });
    const auto gram = circ_conjugate(lifted) * lifted;
    const auto t = ft.t_power(1), inv_t = ft.t_power(-1);
    CHECK(gram == from_dense(DenseMatrix<RationalFunctionGF>(2, {ft.one() + t, ft.one(), inv_t, inv_t})));

    PrimeField::Context f5(5);
    CHECK(invert_gram_gv(BlockMatrix<PrimeField>::identity(f5, 2), c) == BlockMatrix<PrimeField>::identity(f5, 2));
    PrimeField::Context f3(3);
    const auto ones = from_dense(DenseMatrix<PrimeField>(2, {f3.one(), f3.one(), f3.one(), f3.one()}));
    CHECK_THROWS_AS(invert_gram_gv(ones, c), singular_matrix);
}

TEST_CASE("GV residues are constants") {
    for (std::uint64_t p : {2, 7}) {
        PrimeField::Context f(p);
        for (int depth = 1; depth <= 3; ++depth)
            for (const auto& [m, inv] : invertible_cases<PrimeField>(f, depth, 10, 100 + p + depth)) {
                OpCounter c;
                const auto lifted = to_dense(gv_lifted_inverse(m, c));
                for (const auto& x : lifted.entries()) {
                    REQUIRE(x.denominator().is_one());
                    REQUIRE(x.numerator().degree() <= 0);
                }
                OpCounter d;
                REQUIRE(to_dense(invert_gram_gv(m, d)) == inv);
            }
    }
    // GV over rationals is valid as well.
    const auto m4 = all_blocks_singular_witness<Rational>(Q);
    OpCounter c;
    CHECK(to_dense(invert_gram_gv(m4, c)) == *oracle::inverse(to_dense(m4)));
}

TEST_CASE("automatic dispatch") {
    OpCounter c;
    CHECK(auto_invert(qm({{1, 2}, {3, 4}}), c) == from_dense(DenseMatrix<Rational>(2, {q(-2), q(1), q(3, 2), q(-1, 2)})));
    CHECK(auto_invert(qm({{0, 1}, {1, 0}}), c) == qm({{0, 1}, {1, 0}}));
    CHECK_THROWS_AS(auto_invert(qm({{0, 0}, {0, 0}}), c), singular_matrix);
    CHECK(default_conjugation<Rational>() == ConjugationKind::transpose);
    CHECK(default_conjugation<GaussianRational>() == ConjugationKind::star);
    CHECK(default_conjugation<Quaternion>() == ConjugationKind::star);
    CHECK(default_conjugation<PrimeField>() == ConjugationKind::circ);
    CHECK(default_conjugation<RationalFunctionQ>() == ConjugationKind::transpose);
    CHECK(default_conjugation<RationalFunctionGF>() == ConjugationKind::circ);

    CHECK(is_invertible(BlockMatrix<Rational>::identity(Q, 3)));
    CHECK_FALSE(is_invertible(BlockMatrix<Rational>::zero(Q, 2)));
    CHECK(is_invertible(all_blocks_singular_witness<Rational>(Q)));
}

TEST_CASE("automatic inversion matches the dense oracle") {
    SECTION("rationals") { auto_matches_oracle<Rational>(Q, 300, 30); }
    SECTION("GF(7)") { auto_matches_oracle<PrimeField>(PrimeField::Context(7), 310, 30); }
    SECTION("GF(2)") { auto_matches_oracle<PrimeField>(PrimeField::Context(2), 320, 30); }
    SECTION("Gaussian rationals") { auto_matches_oracle<GaussianRational>(GaussianRational::Context{}, 330, 30); }
    SECTION("quaternions") { auto_matches_oracle<Quaternion>(Quaternion::Context{}, 340, 10); }
    SECTION("Q(t)") { auto_matches_oracle<RationalFunctionQ>(function_field<Rational>(Q), 350, 3, 2); }
    SECTION("GF(3)(t)") {
        auto ctx = function_field<PrimeField>(PrimeField::Context(3));
        auto_matches_oracle<RationalFunctionGF>(ctx, 360, 3, 2);
        // an all-blocks-singular input forces the nested GV lift
        const auto w = all_blocks_singular_witness<RationalFunctionGF>(ctx);
        OpCounter c;
        CHECK(auto_invert(w, c) * w == BlockMatrix<RationalFunctionGF>::identity(ctx, 2));
    }
}

TEST_CASE("Gram symmetries") {
    Generator g(77);
    for (int k = 0; k < 30; ++k) {
        OpCounter c;
        const auto a = random_block_matrix<Rational>(Q, 2, g);
        const auto n = to_dense(make_gram(a, ConjugationKind::transpose, c).body);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) REQUIRE(n(j, i) == n(i, j));

        const auto b = random_block_matrix<Quaternion>(Quaternion::Context{}, 2, g);
        const auto s = to_dense(make_gram(b, ConjugationKind::star, c).body);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) REQUIRE(s(j, i) == star(s(i, j)));

        auto ft = function_field<PrimeField>(PrimeField::Context(7));
        const auto d = random_block_matrix<RationalFunctionGF>(ft, 2, g);
        const auto r = to_dense(make_gram(d, ConjugationKind::circ, c).body);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i; j < 4; ++j)
                REQUIRE(r(j, i) == r(i, j).mul_t_power(static_cast<long>(i) - static_cast<long>(j)));
    }
}

TEST_CASE("inversion count laws") {
    Generator g(5);
    for (int depth = 1; depth <= 3; ++depth) {
        const auto m = random_invertible<Rational>(Q, depth, g);
        const std::uint64_t n = m.dim();
        OpCounter setup, h, full;
        hermitian_invert(make_gram(m, ConjugationKind::transpose, setup), h);
        CHECK(h.mul_div() == hermitian_cost(n));
        invert_gram_transpose(m, full);
        CHECK(full.mul_div() == gram_cost(n));
    }
    CHECK(hermitian_cost(2) == 6);
    CHECK(hermitian_cost(4) == 44);
    CHECK(hermitian_cost(8) == 344);
    CHECK(gram_cost(2) == 22);
    CHECK(gram_cost(4) == 204);
    CHECK(gram_cost(8) == 1688);
}
