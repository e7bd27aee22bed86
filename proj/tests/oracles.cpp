#include "oracles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

std::vector<int> args_of(size_t t, int n, int q)
{
    std::vector<int> a(n);
    for (int i = n - 1; i >= 0; --i) {
        a[i] = static_cast<int>(t % q);
        t /= q;
    }
    return a;
}

size_t index_of(const std::vector<int>& a, int q)
{
    size_t t = 0;
    for (int v : a) t = t * q + v;
    return t;
}

size_t power(int q, int n)
{
    size_t p = 1;
    for (int i = 0; i < n; ++i) p *= q;
    return p;
}

std::string key(const Cochain& c)
{
    return std::string(c.begin(), c.end());
}

// Positions of C^n that are free, in increasing tuple order.
std::vector<size_t> free_positions(const xmc::FiniteGroup& g, int n, bool normalized)
{
    std::vector<size_t> out;
    for (size_t t = 0; t < power(g.order, n); ++t) {
        auto a = args_of(t, n, g.order);
        if (normalized && std::find(a.begin(), a.end(), g.identity) != a.end()) continue;
        out.push_back(t);
    }
    return out;
}

// Terms (position, sign) of (dc)(tuple) for an (n+1)-tuple.
std::vector<std::pair<size_t, int>> terms(const xmc::FiniteGroup& g, int n, const std::vector<int>& a)
{
    std::vector<std::pair<size_t, int>> out;
    const int q = g.order;
    out.push_back({index_of(std::vector<int>(a.begin() + 1, a.end()), q), 1});
    for (int i = 0; i < n; ++i) {
        std::vector<int> b;
        for (int j = 0; j < i; ++j) b.push_back(a[j]);
        b.push_back(g.m(a[i], a[i + 1]));
        for (int j = i + 2; j <= n; ++j) b.push_back(a[j]);
        out.push_back({index_of(b, q), (i + 1) % 2 ? -1 : 1});
    }
    out.push_back({index_of(std::vector<int>(a.begin(), a.end() - 1), q), (n + 1) % 2 ? -1 : 1});
    return out;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

std::vector<std::int64_t> divisibility_chain(std::vector<std::int64_t> d)
{
    d.erase(std::remove_if(d.begin(), d.end(), [](std::int64_t v) { return v == 1; }), d.end());
    for (size_t i = 0; i < d.size(); ++i) {
        for (size_t j = i + 1; j < d.size(); ++j) {
            std::int64_t g = gcd64(d[i], d[j]);
            std::int64_t l = d[i] / g * d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.erase(std::remove_if(d.begin(), d.end(), [](std::int64_t v) { return v == 1; }), d.end());
    return d;
}

}  // namespace

Cochain differential(const xmc::FiniteGroup& g, int N, int n, const Cochain& c)
{
    const int q = g.order;
    Cochain out(power(q, n + 1), 0);
    if (n == 0) return out;  // trivial action: c - c
    for (size_t t = 0; t < out.size(); ++t) {
        int v = 0;
        for (auto [p, s] : terms(g, n, args_of(t, n + 1, q))) v += s * c[p];
        out[t] = ((v % N) + N) % N;
    }
    return out;
}

Brute brute_cohomology(const xmc::FiniteGroup& g, int N, int n, bool normalized)
{
    const int q = g.order;
    Brute b;
    // every coboundary
    {
        std::vector<size_t> fp = n == 1 ? std::vector<size_t>{0} : free_positions(g, n - 1, normalized);
        Cochain c(n == 1 ? 1 : power(q, n - 1), 0);
        std::vector<int> digit(fp.size(), 0);
        while (true) {
            for (size_t i = 0; i < fp.size(); ++i) c[fp[i]] = digit[i];
            b.boundary_set.insert(key(differential(g, N, n - 1, c)));
            size_t i = 0;
            while (i < fp.size() && ++digit[i] == N) digit[i++] = 0;
            if (i == fp.size()) break;
        }
        b.coboundaries = static_cast<long long>(b.boundary_set.size());
    }
    // every cocycle, by backtracking with each condition checked once its last entry is set
    std::vector<size_t> fp = free_positions(g, n, normalized);
    std::vector<int> order_of(power(q, n), -1);
    for (size_t i = 0; i < fp.size(); ++i) order_of[fp[i]] = static_cast<int>(i);
    std::vector<std::vector<std::vector<std::pair<size_t, int>>>> bucket(fp.size());
    for (size_t t = 0; t < power(q, n + 1); ++t) {
        auto tm = terms(g, n, args_of(t, n + 1, q));
        int last = -1;
        for (auto [p, s] : tm) last = std::max(last, order_of[p]);
        if (last >= 0) bucket[last].push_back(tm);
    }
    Cochain c(power(q, n), 0);
    std::vector<size_t> stack;
    auto ok = [&](size_t pos) {
        for (const auto& tm : bucket[pos]) {
            int v = 0;
            for (auto [p, s] : tm) v += s * c[p];
            if (((v % N) + N) % N != 0) return false;
        }
        return true;
    };
    // iterative depth-first search
    std::vector<int> val(fp.size(), -1);
    size_t depth = 0;
    if (fp.empty()) {
        b.cocycle_list.push_back(c);
    } else {
        while (true) {
            if (++val[depth] == N) {
                val[depth] = -1;
                c[fp[depth]] = 0;
                if (depth == 0) break;
                --depth;
                continue;
            }
            c[fp[depth]] = val[depth];
            if (!ok(depth)) continue;
            if (depth + 1 == fp.size()) {
                b.cocycle_list.push_back(c);
            } else {
                ++depth;
            }
        }
    }
    b.cocycles = static_cast<long long>(b.cocycle_list.size());
    if (b.cocycles % b.coboundaries != 0) throw std::logic_error("oracle: |B| does not divide |Z|");
    // |H[d]| for every d | N fixes the invariant factors
    std::vector<std::int64_t> parts;
    int rest = N;
    for (int p = 2; p <= rest; ++p) {
        if (rest % p) continue;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        std::vector<long long> at(e + 1, 1);  // |H[p^k]|
        int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            long long cnt = 0;
            for (const auto& z : b.cocycle_list) {
                Cochain m(z.size());
                for (size_t i = 0; i < z.size(); ++i) m[i] = static_cast<int>((static_cast<long long>(z[i]) * pk) % N);
                cnt += b.boundary_set.count(key(m));
            }
            at[k] = cnt / b.coboundaries;
        }
        // number of cyclic p-factors of order >= p^k
        std::vector<int> ge(e + 2, 0);
        for (int k = 1; k <= e; ++k) {
            long long r = at[k] / at[k - 1];
            int lg = 0;
            while (r > 1) {
                r /= p;
                ++lg;
            }
            ge[k] = lg;
        }
        for (int k = 1; k <= e; ++k) {
            int exactly = ge[k] - ge[k + 1];
            std::int64_t f = 1;
            for (int i = 0; i < k; ++i) f *= p;
            for (int i = 0; i < exactly; ++i) parts.push_back(f);
        }
    }
    b.factors = divisibility_chain(parts);
    std::sort(b.factors.begin(), b.factors.end());
    std::int64_t order = 1;
    for (auto f : b.factors) order *= f;
    if (order != b.cocycles / b.coboundaries) throw std::logic_error("oracle: torsion count mismatch");
    return b;
}

bool in_boundaries(const Brute& b, const Cochain& z) { return b.boundary_set.count(key(z)) > 0; }

Cochain bockstein_lift(const xmc::FiniteGroup& g, const std::vector<int>& sign, const Cochain& u,
                       const std::vector<int>& lift)
{
    const int q = g.order;
    Cochain out(power(q, 3), 0);
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            for (int c = 0; c < q; ++c) {
                if (lift[b * q + c] % 2 != u[b * q + c]) throw std::logic_error("oracle: not a lift");
                int v = sign[a] * lift[b * q + c] + lift[a * q + g.m(b, c)] - lift[a * q + b] - lift[g.m(a, b) * q + c];
                v = ((v % 4) + 4) % 4;
                if (v % 2) throw std::logic_error("oracle: lift defect is odd, u is not a cocycle");
                out[(static_cast<size_t>(a) * q + b) * q + c] = v / 2;
            }
        }
    }
    return out;
}

Smith smith(std::vector<std::vector<std::int64_t>> a)
{
    Smith s;
    const size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<std::int64_t> diag;
    size_t r0 = 0;
    for (size_t c0 = 0; c0 < cols && r0 < rows; ++c0) {
        while (true) {
            // smallest nonzero entry in the remaining block
            size_t pr = rows, pc = cols;
            std::int64_t best = 0;
            for (size_t i = r0; i < rows; ++i) {
                for (size_t j = c0; j < cols; ++j) {
                    std::int64_t v = a[i][j] < 0 ? -a[i][j] : a[i][j];
                    if (v && (!best || v < best)) {
                        best = v;
                        pr = i;
                        pc = j;
                    }
                }
            }
            if (!best) {
                c0 = cols;
                break;
            }
            std::swap(a[r0], a[pr]);
            for (auto& row : a) std::swap(row[c0], row[pc]);
            bool clean = true;
            const std::int64_t p = a[r0][c0];
            for (size_t i = r0 + 1; i < rows; ++i) {
                std::int64_t f = a[i][c0] / p;
                if (f) {
                    for (size_t j = c0; j < cols; ++j) a[i][j] -= f * a[r0][j];
                }
                if (a[i][c0]) clean = false;
            }
            for (size_t j = c0 + 1; j < cols; ++j) {
                std::int64_t f = a[r0][j] / p;
                if (f) {
                    for (size_t i = r0; i < rows; ++i) a[i][j] -= f * a[i][c0];
                }
                if (a[r0][j]) clean = false;
            }
            for (const auto& row : a) {
                for (auto v : row) {
                    if (v > (std::int64_t(1) << 40) || v < -(std::int64_t(1) << 40))
                        throw std::overflow_error("oracle smith: entry growth");
                }
            }
            if (clean) {
                diag.push_back(p < 0 ? -p : p);
                ++r0;
                break;
            }
        }
    }
    s.rank = static_cast<int>(diag.size());
    s.torsion = divisibility_chain(diag);
    std::sort(s.torsion.begin(), s.torsion.end());
    return s;
}

std::vector<std::vector<std::int64_t>> full_homology(const xmc::TruncatedSimplicialSet& s, int maxdeg)
{
    if (maxdeg + 1 > s.N) throw std::invalid_argument("oracle: maxdeg must be below N");
    auto boundary = [&](int k) {
        std::vector<std::vector<std::int64_t>> m(s.counts[k - 1], std::vector<std::int64_t>(s.counts[k], 0));
        for (int x = 0; x < s.counts[k]; ++x) {
            for (int i = 0; i <= k; ++i) m[s.d(k, i, x)][x] += i % 2 ? -1 : 1;
        }
        return m;
    };
    std::vector<Smith> sm(maxdeg + 2);
    for (int k = 1; k <= maxdeg + 1; ++k) sm[k] = smith(boundary(k));
    std::vector<std::vector<std::int64_t>> out;
    for (int k = 0; k <= maxdeg; ++k) {
        int rk = k ? sm[k].rank : 0;
        int free = s.counts[k] - rk - sm[k + 1].rank;
        std::vector<std::int64_t> h(free, 0);
        h.insert(h.begin(), sm[k + 1].torsion.begin(), sm[k + 1].torsion.end());
        out.push_back(h);
    }
    return out;
}

}  // namespace oracle
