#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quadla {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class depth_mismatch : public error {
public:
    depth_mismatch(int lhs, int rhs)
        : error("block depth mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

class non_power_of_two : public error {
public:
    explicit non_power_of_two(std::size_t n)
        : error("dimension " + std::to_string(n) + " is not a power of two") {}
};

class zero_denominator : public error {
public:
    zero_denominator() : error("zero denominator") {}
};

class parse_error : public error {
public:
    using error::error;
};

/// Schur-complement inversion hit a non-invertible leading block or Schur
/// complement. `path()` names the recursion node, e.g. "/A/S".
class pivot_block_singular : public error {
public:
    explicit pivot_block_singular(std::string path)
        : error("pivot block singular at " + (path.empty() ? std::string("/") : path)),
          path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class singular_matrix : public error {
public:
    singular_matrix() : error("matrix is singular") {}
};

class gram_singular : public error {
public:
    gram_singular() : error("Gram matrix is singular") {}
};

/// A lifted GV inverse entry did not reduce to a constant of the base field.
class non_constant_residue : public error {
public:
    non_constant_residue(std::size_t i, std::size_t j)
        : error("non-constant residue at (" + std::to_string(i) + ", " + std::to_string(j) + ")"),
          row_(i), col_(j) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

class singular_diagonal : public error {
public:
    explicit singular_diagonal(std::string path)
        : error("triangular matrix has a singular diagonal at " + (path.empty() ? std::string("/") : path)),
          path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class all_blocks_singular : public error {
public:
    all_blocks_singular() : error("all four blocks are singular") {}
};

class randomness_exhausted : public error {
public:
    explicit randomness_exhausted(int attempts)
        : error("randomized preconditioning failed after " + std::to_string(attempts) + " attempts"),
          attempts_(attempts) {}
    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

} // namespace quadla
