#pragma once

// Linear algebra over Z/ell^n: Smith form, module rank, and solvability of
// linear systems.

#include <cstdint>
#include <vector>

namespace minigal {

/// Dense matrix over Z/ell^level, row-major.
class ModMatrix {
public:
    ModMatrix(std::uint32_t ell, std::uint32_t level, std::size_t rows, std::size_t cols);

    std::uint32_t ell() const { return ell_; }
    std::uint32_t level() const { return level_; }
    std::uint64_t modulus() const { return mod_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::uint32_t ell_;
    std::uint32_t level_;
    std::uint64_t mod_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint64_t> data_;
};

/// Diagonal of the Smith form as ell-adic valuations of the nonzero invariant
/// factors, ascending. The column span is isomorphic to the sum of
/// Z/ell^(level - k) over the returned k.
std::vector<std::uint32_t> smith_valuations(ModMatrix m);

// dim over Z/ell of M / ell M for M the column span.
std::size_t column_module_rank(ModMatrix const& m);

// Whether b lies in the column span.
bool in_column_span(ModMatrix const& m, std::vector<std::uint64_t> const& b);

}  // namespace minigal
