/**
 * Linear algebra over the ring Z/N.
 *
 * Everything here works with 64-bit representatives in [0, N). Every module
 * handled by the cohomology code is a finite abelian group of exponent
 * dividing N, so these computations are exact.
 */
#ifndef XMC_ZN_HPP
#define XMC_ZN_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace xmc::zn {

using i64 = std::int64_t;

i64 mod(i64 x, i64 n);
i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

/// Unit u with a*u = gcd(a, n) mod n.
i64 unit_to_gcd(i64 a, i64 n);
/// Inverse of a unit modulo n.
i64 inverse(i64 a, i64 n);

/// Dense row-major matrix with entries reduced modulo a ring size held by the caller.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<i64> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    i64& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    i64 operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static Mat identity(int n);
    std::vector<i64> column(int c) const;
};

Mat multiply(const Mat& x, const Mat& y, i64 n);
std::vector<i64> apply(const Mat& x, const std::vector<i64>& v, i64 n);

/**
 * Smith form P*A*Q = D over Z/N. Diagonal entries divide N and each
 * divides the next; an entry equal to N stands for zero.
 */
struct Smith {
    i64 n = 1;
    std::vector<i64> diag;  // length min(rows, cols)
    int rank = 0;           // number of diagonal entries different from N
    Mat P, Pinv, Q;
};

Smith smith(Mat A, i64 n, bool want_p, bool want_q);

/// Row echelon form with the same row span; at most cols rows survive.
Mat row_compress(Mat A, i64 n);

/// Generators (as columns) of the kernel of A.
Mat kernel(const Mat& A, i64 n);

/// Some x with A x = b, or nothing.
std::optional<std::vector<i64>> solve(const Mat& A, const std::vector<i64>& b, i64 n);

/**
 * A submodule of (Z/N)^a spanned by the columns of a generator matrix,
 * put in diagonal form so that coordinates can be read off.
 */
class Submodule {
public:
    Submodule() = default;
    Submodule(const Mat& gens, i64 n);

    i64 ring() const { return n_; }
    int ambient() const { return ambient_; }
    /// Orders of the cyclic summands in the adapted basis.
    const std::vector<i64>& orders() const { return orders_; }
    bool contains(const std::vector<i64>& x) const;
    /// Coordinates of x in the adapted basis, reduced modulo orders().
    std::vector<i64> coords(const std::vector<i64>& x) const;
    /// Element with the given coordinates.
    std::vector<i64> element(const std::vector<i64>& c) const;

private:
    i64 n_ = 1;
    int ambient_ = 0;
    std::vector<i64> scale_;   // d_i
    std::vector<i64> orders_;  // N / d_i
    Mat P_, Pinv_;
};

/**
 * Howell form of a row span. reduce() returns the lexicographically
 * smallest element of the coset x + span.
 */
class Howell {
public:
    Howell() = default;
    Howell(const Mat& rows, i64 n);

    std::vector<i64> reduce(std::vector<i64> x) const;
    bool contains(const std::vector<i64>& x) const;

private:
    i64 n_ = 1;
    int cols_ = 0;
    std::vector<std::vector<i64>> rows_;
    std::vector<int> pivot_col_;
};

}  // namespace xmc::zn

#endif
