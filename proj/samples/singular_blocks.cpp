// Inverts a 4x4 rational matrix whose four 2x2 blocks are all singular.
// The Schur-complement method has no usable pivot block; the Gram driver
// inverts it without leaving the block structure.

#include <iostream>

#include "quadla/quadla.hpp"

int main() {
    using namespace quadla;
    const Rational::Context q;
    const auto m = all_blocks_singular_witness<Rational>(q);
    std::cout << "M =\n" << format_matrix(to_dense(m));

    OpCounter schur_count;
    try {
        schur_invert(m, schur_count);
    } catch (const pivot_block_singular& e) {
        std::cout << "schur_invert: singular pivot block at " << e.path() << '\n';
    }

    OpCounter c("gram");
    const auto inv = invert_gram_transpose(m, c);
    std::cout << "M^-1 =\n" << format_matrix(to_dense(inv));
    std::cout << "M * M^-1 == I: " << std::boolalpha << (m * inv == BlockMatrix<Rational>::identity(q, 2)) << '\n';
    std::cout << c << '\n';
}
