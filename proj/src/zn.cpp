#include "xmc/zn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace xmc::zn {

i64 mod(i64 x, i64 n)
{
    i64 r = x % n;
    return r < 0 ? r + n : r;
}

i64 gcd(i64 a, i64 b)
{
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

i64 lcm(i64 a, i64 b)
{
    if (a == 0 || b == 0) return 0;
    return a / gcd(a, b) * b;
}

namespace {

// s*a + t*b = g with g = gcd(a, b) >= 0.
i64 ext_gcd(i64 a, i64 b, i64& s, i64& t)
{
    i64 s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 r = a - q * b;
        a = b;
        b = r;
        i64 tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (a < 0) {
        a = -a;
        s0 = -s0;
        t0 = -t0;
    }
    s = s0;
    t = t0;
    return a;
}

i64 mulmod(i64 a, i64 b, i64 n)
{
    return static_cast<i64>((static_cast<__int128>(a) * b) % n);
}

}  // namespace

i64 inverse(i64 a, i64 n)
{
    if (n == 1) return 0;
    i64 s, t;
    i64 g = ext_gcd(mod(a, n), n, s, t);
    if (g != 1) throw std::invalid_argument("zn::inverse: not a unit");
    return mod(s, n);
}

i64 unit_to_gcd(i64 a, i64 n)
{
    a = mod(a, n);
    if (a == 0 || n == 1) return 1;
    i64 g = gcd(a, n);
    i64 m = n / g;
    i64 v = (m == 1) ? 1 : inverse((a / g) % m, m);
    for (i64 u = v; u < v + n * m + 1; u += m) {
        if (gcd(u, n) == 1) return mod(u, n);
    }
    throw std::logic_error("zn::unit_to_gcd: no unit found");
}

Mat Mat::identity(int n)
{
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

std::vector<i64> Mat::column(int c) const
{
    std::vector<i64> v(rows);
    for (int r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
}

Mat multiply(const Mat& x, const Mat& y, i64 n)
{
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            i64 a = x(i, k);
            if (a == 0) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) = (z(i, j) + mulmod(a, y(k, j), n)) % n;
        }
    }
    return z;
}

std::vector<i64> apply(const Mat& x, const std::vector<i64>& v, i64 n)
{
    std::vector<i64> out(x.rows, 0);
    for (int i = 0; i < x.rows; ++i) {
        i64 acc = 0;
        for (int k = 0; k < x.cols; ++k) {
            if (x(i, k) != 0 && v[k] != 0) acc = (acc + mulmod(x(i, k), mod(v[k], n), n)) % n;
        }
        out[i] = acc;
    }
    return out;
}

namespace {

// Row and column operations that keep the optional transforms in step.
struct Reducer {
    Mat& A;
    i64 n;
    Mat* P;
    Mat* Pinv;
    Mat* Q;

    void swap_rows(int i, int j)
    {
        if (i == j) return;
        for (int c = 0; c < A.cols; ++c) std::swap(A(i, c), A(j, c));
        if (P) {
            for (int c = 0; c < P->cols; ++c) std::swap((*P)(i, c), (*P)(j, c));
            for (int r = 0; r < Pinv->rows; ++r) std::swap((*Pinv)(r, i), (*Pinv)(r, j));
        }
    }

    void swap_cols(int i, int j)
    {
        if (i == j) return;
        for (int r = 0; r < A.rows; ++r) std::swap(A(r, i), A(r, j));
        if (Q) {
            for (int r = 0; r < Q->rows; ++r) std::swap((*Q)(r, i), (*Q)(r, j));
        }
    }

    void scale_row(int i, i64 u)
    {
        if (u == 1) return;
        for (int c = 0; c < A.cols; ++c) A(i, c) = mulmod(A(i, c), u, n);
        if (P) {
            for (int c = 0; c < P->cols; ++c) (*P)(i, c) = mulmod((*P)(i, c), u, n);
            i64 ui = inverse(u, n);
            for (int r = 0; r < Pinv->rows; ++r) (*Pinv)(r, i) = mulmod((*Pinv)(r, i), ui, n);
        }
    }

    // row i += k * row t
    void add_row(int i, int t, i64 k)
    {
        k = mod(k, n);
        if (k == 0) return;
        for (int c = 0; c < A.cols; ++c) {
            if (A(t, c) != 0) A(i, c) = (A(i, c) + mulmod(k, A(t, c), n)) % n;
        }
        if (P) {
            for (int c = 0; c < P->cols; ++c) {
                if ((*P)(t, c) != 0) (*P)(i, c) = ((*P)(i, c) + mulmod(k, (*P)(t, c), n)) % n;
            }
            for (int r = 0; r < Pinv->rows; ++r) {
                if ((*Pinv)(r, i) != 0)
                    (*Pinv)(r, t) = mod((*Pinv)(r, t) - mulmod(k, (*Pinv)(r, i), n), n);
            }
        }
    }

    // col j += k * col t
    void add_col(int j, int t, i64 k)
    {
        k = mod(k, n);
        if (k == 0) return;
        for (int r = 0; r < A.rows; ++r) {
            if (A(r, t) != 0) A(r, j) = (A(r, j) + mulmod(k, A(r, t), n)) % n;
        }
        if (Q) {
            for (int r = 0; r < Q->rows; ++r) {
                if ((*Q)(r, t) != 0) (*Q)(r, j) = ((*Q)(r, j) + mulmod(k, (*Q)(r, t), n)) % n;
            }
        }
    }

    // rows (t, i) <- [[s, x], [-b', a']] (rows t, i), determinant one
    void bezout_rows(int t, int i, int col)
    {
        i64 a = A(t, col), b = A(i, col);
        i64 s, x;
        i64 g = ext_gcd(a, b, s, x);
        i64 ap = a / g, bp = b / g;
        s = mod(s, n);
        x = mod(x, n);
        i64 nb = mod(-bp, n);
        ap = mod(ap, n);
        bp = mod(bp, n);
        for (int c = 0; c < A.cols; ++c) {
            i64 u = A(t, c), v = A(i, c);
            A(t, c) = (mulmod(s, u, n) + mulmod(x, v, n)) % n;
            A(i, c) = (mulmod(nb, u, n) + mulmod(ap, v, n)) % n;
        }
        if (P) {
            for (int c = 0; c < P->cols; ++c) {
                i64 u = (*P)(t, c), v = (*P)(i, c);
                (*P)(t, c) = (mulmod(s, u, n) + mulmod(x, v, n)) % n;
                (*P)(i, c) = (mulmod(nb, u, n) + mulmod(ap, v, n)) % n;
            }
            i64 nx = mod(-x, n);
            for (int r = 0; r < Pinv->rows; ++r) {
                i64 u = (*Pinv)(r, t), v = (*Pinv)(r, i);
                (*Pinv)(r, t) = (mulmod(ap, u, n) + mulmod(bp, v, n)) % n;
                (*Pinv)(r, i) = (mulmod(nx, u, n) + mulmod(s, v, n)) % n;
            }
        }
    }

    // cols (t, j) <- s*col_t + x*col_j, -b'*col_t + a'*col_j
    void bezout_cols(int t, int j, int row)
    {
        i64 a = A(row, t), b = A(row, j);
        i64 s, x;
        i64 g = ext_gcd(a, b, s, x);
        i64 ap = mod(a / g, n), nb = mod(-(b / g), n);
        s = mod(s, n);
        x = mod(x, n);
        for (int r = 0; r < A.rows; ++r) {
            i64 u = A(r, t), v = A(r, j);
            A(r, t) = (mulmod(s, u, n) + mulmod(x, v, n)) % n;
            A(r, j) = (mulmod(nb, u, n) + mulmod(ap, v, n)) % n;
        }
        if (Q) {
            for (int r = 0; r < Q->rows; ++r) {
                i64 u = (*Q)(r, t), v = (*Q)(r, j);
                (*Q)(r, t) = (mulmod(s, u, n) + mulmod(x, v, n)) % n;
                (*Q)(r, j) = (mulmod(nb, u, n) + mulmod(ap, v, n)) % n;
            }
        }
    }
};

}  // namespace

Smith smith(Mat A, i64 n, bool want_p, bool want_q)
{
    Smith out;
    out.n = n;
    for (auto& v : A.a) v = mod(v, n);
    if (want_p) {
        out.P = Mat::identity(A.rows);
        out.Pinv = Mat::identity(A.rows);
    }
    if (want_q) out.Q = Mat::identity(A.cols);
    Reducer red{A, n, want_p ? &out.P : nullptr, want_p ? &out.Pinv : nullptr, want_q ? &out.Q : nullptr};

    const int m = std::min(A.rows, A.cols);
    out.diag.assign(m, n);
    int t = 0;
    for (; t < m; ++t) {
        int bi = -1, bj = -1;
        i64 bg = n;
        for (int i = t; i < A.rows && bg != 1; ++i) {
            for (int j = t; j < A.cols; ++j) {
                i64 v = A(i, j);
                if (v == 0) continue;
                i64 g = gcd(v, n);
                if (g < bg) {
                    bg = g;
                    bi = i;
                    bj = j;
                    if (g == 1) break;
                }
            }
        }
        if (bi < 0) break;
        red.swap_rows(t, bi);
        red.swap_cols(t, bj);

        while (true) {
            red.scale_row(t, unit_to_gcd(A(t, t), n));
            bool clean = true;
            for (int i = t + 1; i < A.rows; ++i) {
                i64 b = A(i, t);
                if (b == 0) continue;
                i64 g = A(t, t);
                if (b % g == 0) {
                    red.add_row(i, t, -(b / g));
                } else {
                    red.bezout_rows(t, i, t);
                    red.scale_row(t, unit_to_gcd(A(t, t), n));
                }
            }
            for (int j = t + 1; j < A.cols; ++j) {
                i64 b = A(t, j);
                if (b == 0) continue;
                i64 g = A(t, t);
                if (b % g == 0) {
                    red.add_col(j, t, -(b / g));
                } else {
                    red.bezout_cols(t, j, t);
                    red.scale_row(t, unit_to_gcd(A(t, t), n));
                    clean = false;
                }
            }
            if (!clean) continue;
            i64 g = A(t, t);
            int bad = -1;
            for (int i = t + 1; i < A.rows && bad < 0; ++i) {
                for (int j = t + 1; j < A.cols; ++j) {
                    if (A(i, j) % g != 0) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad < 0) break;
            red.add_row(t, bad, 1);
        }
        out.diag[t] = A(t, t) == 0 ? n : A(t, t);
    }
    out.rank = 0;
    for (i64 d : out.diag) {
        if (d != n) ++out.rank;
    }
    return out;
}

Mat row_compress(Mat A, i64 n)
{
    for (auto& v : A.a) v = mod(v, n);
    Reducer red{A, n, nullptr, nullptr, nullptr};
    int p = 0;
    std::vector<int> nz;
    for (int j = 0; j < A.cols && p < A.rows; ++j) {
        int best = -1;
        i64 bg = n;
        for (int i = p; i < A.rows; ++i) {
            i64 v = A(i, j);
            if (v == 0) continue;
            i64 g = gcd(v, n);
            if (g < bg) {
                bg = g;
                best = i;
                if (g == 1) break;
            }
        }
        if (best < 0) continue;
        red.swap_rows(p, best);
        for (int i = p + 1; i < A.rows; ++i) {
            i64 b = A(i, j);
            if (b == 0) continue;
            i64 g = A(p, j);
            if (b % g != 0) {
                red.bezout_rows(p, i, j);
                continue;
            }
            i64 k = mod(-(b / g), n);
            nz.clear();
            for (int c = j; c < A.cols; ++c) {
                if (A(p, c) != 0) nz.push_back(c);
            }
            for (int c : nz) A(i, c) = (A(i, c) + mulmod(k, A(p, c), n)) % n;
        }
        ++p;
    }
    Mat out(p, A.cols);
    std::copy(A.a.begin(), A.a.begin() + static_cast<long>(p) * A.cols, out.a.begin());
    return out;
}

Mat kernel(const Mat& A, i64 n)
{
    Mat B = row_compress(A, n);
    if (B.rows == 0) return Mat::identity(A.cols);
    Smith s = smith(B, n, false, true);
    Mat K(A.cols, A.cols);
    for (int i = 0; i < A.cols; ++i) {
        i64 f = (i < static_cast<int>(s.diag.size())) ? n / s.diag[i] : 1;
        if (f == n) f = 0;
        for (int r = 0; r < A.cols; ++r) K(r, i) = mulmod(s.Q(r, i), f, n);
    }
    return K;
}

std::optional<std::vector<i64>> solve(const Mat& A, const std::vector<i64>& b, i64 n)
{
    Mat aug(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
        aug(i, A.cols) = b[i];
    }
    Mat C = row_compress(aug, n);
    Mat lhs(C.rows, A.cols);
    std::vector<i64> rhs(C.rows);
    for (int i = 0; i < C.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) lhs(i, j) = C(i, j);
        rhs[i] = C(i, A.cols);
    }
    if (C.rows == 0) return std::vector<i64>(A.cols, 0);
    Smith s = smith(lhs, n, true, true);
    std::vector<i64> pb = apply(s.P, rhs, n);
    std::vector<i64> y(A.cols, 0);
    for (int i = 0; i < C.rows; ++i) {
        i64 d = (i < static_cast<int>(s.diag.size())) ? s.diag[i] : n;
        if (d == n) {
            if (pb[i] != 0) return std::nullopt;
            continue;
        }
        if (pb[i] % d != 0) return std::nullopt;
        y[i] = pb[i] / d;
    }
    return apply(s.Q, y, n);
}

Submodule::Submodule(const Mat& gens, i64 n) : n_(n), ambient_(gens.rows)
{
    Mat t(gens.cols, gens.rows);
    for (int i = 0; i < gens.rows; ++i) {
        for (int j = 0; j < gens.cols; ++j) t(j, i) = gens(i, j);
    }
    Mat rows = row_compress(t, n);
    Mat g(gens.rows, rows.rows);
    for (int i = 0; i < rows.rows; ++i) {
        for (int j = 0; j < gens.rows; ++j) g(j, i) = rows(i, j);
    }
    Smith s = smith(g, n, true, false);
    P_ = std::move(s.P);
    Pinv_ = std::move(s.Pinv);
    for (int i = 0; i < s.rank; ++i) {
        scale_.push_back(s.diag[i]);
        orders_.push_back(n / s.diag[i]);
    }
}

bool Submodule::contains(const std::vector<i64>& x) const
{
    std::vector<i64> y = apply(P_, x, n_);
    for (int i = 0; i < ambient_; ++i) {
        if (i < static_cast<int>(scale_.size())) {
            if (y[i] % scale_[i] != 0) return false;
        } else if (y[i] != 0) {
            return false;
        }
    }
    return true;
}

std::vector<i64> Submodule::coords(const std::vector<i64>& x) const
{
    std::vector<i64> y = apply(P_, x, n_);
    std::vector<i64> c(scale_.size());
    for (size_t i = 0; i < scale_.size(); ++i) c[i] = (y[i] / scale_[i]) % orders_[i];
    return c;
}

std::vector<i64> Submodule::element(const std::vector<i64>& c) const
{
    std::vector<i64> y(ambient_, 0);
    for (size_t i = 0; i < scale_.size(); ++i) y[i] = mulmod(mod(c[i], orders_[i]), scale_[i], n_);
    return apply(Pinv_, y, n_);
}

Howell::Howell(const Mat& gens, i64 n) : n_(n), cols_(gens.cols)
{
    std::vector<std::vector<i64>> rows;
    for (int i = 0; i < gens.rows; ++i) {
        std::vector<i64> r(cols_);
        bool nonzero = false;
        for (int j = 0; j < cols_; ++j) {
            r[j] = mod(gens(i, j), n);
            nonzero = nonzero || r[j] != 0;
        }
        if (nonzero) rows.push_back(std::move(r));
    }
    auto axpy = [&](std::vector<i64>& dst, const std::vector<i64>& src, i64 k, int from) {
        k = mod(k, n);
        if (k == 0) return;
        for (int c = from; c < cols_; ++c) {
            if (src[c] != 0) dst[c] = (dst[c] + mulmod(k, src[c], n)) % n;
        }
    };
    size_t p = 0;
    for (int j = 0; j < cols_ && p < rows.size(); ++j) {
        size_t best = rows.size();
        i64 bg = n;
        for (size_t i = p; i < rows.size(); ++i) {
            if (rows[i][j] == 0) continue;
            i64 g = gcd(rows[i][j], n);
            if (g < bg) {
                bg = g;
                best = i;
            }
        }
        if (best == rows.size()) continue;
        std::swap(rows[p], rows[best]);
        for (size_t i = p + 1; i < rows.size(); ++i) {
            i64 b = rows[i][j];
            if (b == 0) continue;
            i64 a = rows[p][j];
            if (b % a == 0) {
                axpy(rows[i], rows[p], -(b / a), j);
            } else {
                i64 s, x;
                i64 g = ext_gcd(a, b, s, x);
                std::vector<i64> top(cols_), bot(cols_);
                for (int c = j; c < cols_; ++c) {
                    top[c] = mod(mulmod(mod(s, n), rows[p][c], n) + mulmod(mod(x, n), rows[i][c], n), n);
                    bot[c] = mod(mulmod(mod(-(b / g), n), rows[p][c], n) + mulmod(mod(a / g, n), rows[i][c], n), n);
                }
                rows[p] = std::move(top);
                rows[i] = std::move(bot);
            }
        }
        i64 u = unit_to_gcd(rows[p][j], n);
        if (u != 1) {
            for (int c = j; c < cols_; ++c) rows[p][c] = mulmod(rows[p][c], u, n);
        }
        i64 g = rows[p][j];
        std::vector<i64> ann(cols_, 0);
        bool nonzero = false;
        for (int c = j; c < cols_; ++c) {
            ann[c] = mulmod(n / g, rows[p][c], n);
            nonzero = nonzero || ann[c] != 0;
        }
        if (nonzero) rows.push_back(std::move(ann));
        for (size_t i = 0; i < p; ++i) {
            i64 q = rows[i][j] / g;
            axpy(rows[i], rows[p], -q, j);
        }
        pivot_col_.push_back(j);
        ++p;
    }
    rows.resize(p);
    rows_ = std::move(rows);
}

std::vector<i64> Howell::reduce(std::vector<i64> x) const
{
    for (auto& v : x) v = mod(v, n_);
    for (size_t k = 0; k < rows_.size(); ++k) {
        int j = pivot_col_[k];
        i64 g = rows_[k][j];
        i64 q = x[j] / g;
        if (q == 0) continue;
        i64 f = mod(-q, n_);
        for (int c = j; c < cols_; ++c) {
            if (rows_[k][c] != 0) x[c] = (x[c] + mulmod(f, rows_[k][c], n_)) % n_;
        }
    }
    return x;
}

bool Howell::contains(const std::vector<i64>& x) const
{
    auto r = reduce(x);
    return std::all_of(r.begin(), r.end(), [](i64 v) { return v == 0; });
}

}  // namespace xmc::zn
