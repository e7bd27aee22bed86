#include "xmc/intsnf.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace xmc {

void SparseIntMatrix::add(int r, int c, std::int64_t v)
{
    auto& row = data[r];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(c, INT64_MIN));
    if (it != row.end() && it->first == c) {
        it->second += v;
        if (it->second == 0) row.erase(it);
    } else if (v != 0) {
        row.insert(it, {c, v});
    }
}

namespace {

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}

BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
BigInt checked_sub(const BigInt& a, const BigInt& b) { return a - b; }

template <class T>
T abs_val(const T& v)
{
    return v < 0 ? T(-v) : v;
}

template <class T>
using Row = std::vector<std::pair<int, T>>;

template <class T>
const T* find_entry(const Row<T>& r, int c)
{
    auto it = std::lower_bound(r.begin(), r.end(), c,
                               [](const std::pair<int, T>& e, int col) { return e.first < col; });
    if (it != r.end() && it->first == c) return &it->second;
    return nullptr;
}

// dst -= q * src
template <class T>
void row_axpy(Row<T>& dst, const Row<T>& src, const T& q)
{
    Row<T> out;
    out.reserve(dst.size() + src.size());
    size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(dst[i++]);
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            T v = checked_sub(T(0), checked_mul(q, src[j].second));
            if (v != 0) out.push_back({src[j].first, v});
            ++j;
        } else {
            T v = checked_sub(dst[i].second, checked_mul(q, src[j].second));
            if (v != 0) out.push_back({dst[i].first, v});
            ++i;
            ++j;
        }
    }
    dst = std::move(out);
}

template <class T>
std::vector<BigInt> diagonalize(const SparseIntMatrix& m)
{
    std::vector<Row<T>> rows(m.rows);
    for (int r = 0; r < m.rows; ++r) {
        for (auto [c, v] : m.data[r]) rows[r].push_back({c, T(v)});
    }
    std::vector<int> active;
    for (int r = 0; r < m.rows; ++r) {
        if (!rows[r].empty()) active.push_back(r);
    }
    std::vector<BigInt> diag;
    while (!active.empty()) {
        int p = -1;
        int c = -1;
        T best = 0;
        size_t best_len = 0;
        for (int r : active) {
            for (auto& [col, v] : rows[r]) {
                T a = abs_val(v);
                if (p < 0 || a < best || (a == best && rows[r].size() < best_len)) {
                    p = r;
                    c = col;
                    best = a;
                    best_len = rows[r].size();
                }
            }
            if (best == 1 && best_len <= 2) break;
        }
        while (true) {
            T a = *find_entry(rows[p], c);
            bool moved = false;
            for (int r : active) {
                if (r == p) continue;
                const T* e = find_entry(rows[r], c);
                if (!e) continue;
                T q = *e / a;
                if (q != 0) row_axpy(rows[r], rows[p], q);
                if (const T* rem = find_entry(rows[r], c)) {
                    (void)rem;
                    p = r;
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            bool rest = false;
            for (auto& [col, v] : rows[p]) {
                if (col == c) continue;
                v = v % a;
                if (v != 0) rest = true;
            }
            if (!rest) {
                diag.push_back(BigInt(abs_val(a)));
                rows[p].clear();
                break;
            }
            Row<T> kept;
            for (auto& e : rows[p]) {
                if (e.second != 0) kept.push_back(e);
            }
            rows[p] = std::move(kept);
            T small = 0;
            int sc = -1;
            for (auto& [col, v] : rows[p]) {
                if (col == c) continue;
                if (sc < 0 || abs_val(v) < small) {
                    small = abs_val(v);
                    sc = col;
                }
            }
            c = sc;
        }
        active.erase(std::remove_if(active.begin(), active.end(), [&](int r) { return rows[r].empty(); }),
                     active.end());
    }
    return diag;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    std::vector<std::pair<std::int64_t, int>> f;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

}  // namespace

std::vector<BigInt> diagonal_form(const SparseIntMatrix& m)
{
    try {
        return diagonalize<std::int64_t>(m);
    } catch (const Overflow&) {
        return diagonalize<BigInt>(m);
    }
}

std::vector<std::int64_t> invariant_factors(const std::vector<std::int64_t>& orders)
{
    int free_rank = 0;
    std::map<std::int64_t, std::vector<std::int64_t>> primary;
    for (std::int64_t d : orders) {
        if (d < 0) throw std::invalid_argument("invariant_factors: negative order");
        if (d == 0) {
            ++free_rank;
            continue;
        }
        for (auto [p, e] : factorize(d)) {
            std::int64_t q = 1;
            for (int i = 0; i < e; ++i) q *= p;
            primary[p].push_back(q);
        }
    }
    size_t len = 0;
    for (auto& [p, v] : primary) {
        std::sort(v.begin(), v.end(), std::greater<>());
        len = std::max(len, v.size());
    }
    std::vector<std::int64_t> out(len, 1);
    for (auto& [p, v] : primary) {
        for (size_t i = 0; i < v.size(); ++i) out[len - 1 - i] *= v[i];
    }
    for (int i = 0; i < free_rank; ++i) out.push_back(0);
    return out;
}

}  // namespace xmc
