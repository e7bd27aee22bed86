/**
 * Integer matrices and their diagonal (Smith) forms.
 *
 * Elimination starts in checked 64-bit arithmetic and restarts with
 * arbitrary-precision integers if any intermediate value overflows.
 */
#ifndef XMC_INTSNF_HPP
#define XMC_INTSNF_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <utility>
#include <vector>

namespace xmc {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse integer matrix stored by rows; each row sorted by column.
struct SparseIntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::pair<int, std::int64_t>>> data;

    SparseIntMatrix() = default;
    SparseIntMatrix(int r, int c) : rows(r), cols(c), data(r) {}
    /// Add v to entry (r, c).
    void add(int r, int c, std::int64_t v);
};

/// Nonzero diagonal entries (absolute values) of a diagonal form; their count is the rank.
std::vector<BigInt> diagonal_form(const SparseIntMatrix& m);

/**
 * Invariant factors d1 | d2 | ... of the abelian group that is the direct
 * sum of cyclic groups of the given orders (0 = infinite cyclic, 1 dropped).
 * Zeros come last.
 */
std::vector<std::int64_t> invariant_factors(const std::vector<std::int64_t>& orders);

}  // namespace xmc

#endif
