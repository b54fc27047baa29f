#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "quadla/rings/concepts.hpp"

namespace quadla {

/// Row-major n x n matrix. Only used at the I/O and test-oracle boundary;
/// block algorithms never see it.
template <Ring T>
class DenseMatrix {
public:
    DenseMatrix(std::size_t n, const T& fill) : n_(n), entries_(n * n, fill) {}
    DenseMatrix(std::size_t n, std::vector<T> entries) : n_(n), entries_(std::move(entries)) {
        if (entries_.size() != n * n) throw std::invalid_argument("dense matrix needs n*n entries");
    }

    static DenseMatrix identity(const typename T::context_type& ctx, std::size_t n) {
        DenseMatrix m(n, ctx.zero());
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ctx.one();
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    const std::vector<T>& entries() const noexcept { return entries_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t n_;
    std::vector<T> entries_;
};

} // namespace quadla
