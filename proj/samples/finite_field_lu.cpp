// PLUQ factorization of a random invertible 8x8 matrix over GF(7), with the
// exported permutation vectors and an exact reconstruction check.

#include <iostream>

#include "quadla/quadla.hpp"

int main() {
    using namespace quadla;
    const PrimeField::Context f7(7);
    Generator g(2024);
    const auto m = random_invertible<PrimeField>(f7, 3, g);
    std::cout << "M =\n" << format_matrix(to_dense(m));

    OpCounter c("lu");
    const auto r = lu_decompose(m, c);
    std::cout << "L =\n" << format_matrix(to_dense(r.l.body()));
    std::cout << "U =\n" << format_matrix(to_dense(r.u.body()));
    std::cout << "perm-rows";
    for (auto i : r.p.vector()) std::cout << ' ' << i;
    std::cout << "\nperm-cols";
    for (auto j : r.q.vector()) std::cout << ' ' << j;
    std::cout << "\nP*L*U*Q == M: " << std::boolalpha << (reconstruct(r) == m) << '\n';
    std::cout << c << '\n';
}
