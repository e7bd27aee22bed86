#include "xmc/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "xmc/errors.hpp"
#include "xmc/intsnf.hpp"

namespace xmc {

Report validate_simplicial(const TruncatedSimplicialSet& s)
{
    Report r;
    auto fail = [&](const char* what, int k, int i, int j, int x) {
        if (r.size() < 20) r.push_back({what, {k, i, j, x}});
    };
    for (int k = 2; k <= s.N; ++k) {
        for (int x = 0; x < s.counts[k]; ++x) {
            for (int j = 1; j <= k; ++j) {
                for (int i = 0; i < j; ++i) {
                    if (s.d(k - 1, i, s.d(k, j, x)) != s.d(k - 1, j - 1, s.d(k, i, x))) fail("d_i d_j != d_{j-1} d_i", k, i, j, x);
                }
            }
        }
    }
    for (int k = 0; k < s.N; ++k) {
        for (int x = 0; x < s.counts[k]; ++x) {
            for (int j = 0; j <= k; ++j) {
                int y = s.s(k, j, x);
                for (int i = 0; i <= k + 1; ++i) {
                    int lhs = s.d(k + 1, i, y);
                    if (i == j || i == j + 1) {
                        if (lhs != x) fail("d_i s_j != id", k, i, j, x);
                    } else if (i < j) {
                        if (lhs != s.s(k - 1, j - 1, s.d(k, i, x))) fail("d_i s_j != s_{j-1} d_i", k, i, j, x);
                    } else {
                        if (lhs != s.s(k - 1, j, s.d(k, i - 1, x))) fail("d_i s_j != s_j d_{i-1}", k, i, j, x);
                    }
                }
                if (k + 2 > s.N) continue;
                for (int i = 0; i <= j; ++i) {
                    if (s.s(k + 1, i, y) != s.s(k + 1, j + 1, s.s(k, i, x))) fail("s_i s_j != s_{j+1} s_i", k, i, j, x);
                }
            }
        }
    }
    return r;
}

int chain_index(const FiniteGroup& g, const std::vector<int>& chain)
{
    int idx = 0;
    for (int v : chain) idx = idx * g.order + v;
    return idx;
}

std::vector<int> chain_of(const FiniteGroup& g, int k, int index)
{
    std::vector<int> c(k);
    for (int i = k - 1; i >= 0; --i) {
        c[i] = index % g.order;
        index /= g.order;
    }
    return c;
}

TruncatedSimplicialSet ordinary_nerve(const FiniteGroup& g, int N)
{
    if (N < 0) throw InputError("ordinary_nerve: negative truncation");
    double total = std::pow(static_cast<double>(g.order), N);
    if (total > 1e7) throw ResourceError("ordinary_nerve: more than 1e7 simplices in the top dimension");
    TruncatedSimplicialSet s;
    s.N = N;
    s.counts.resize(N + 1);
    s.face.resize(N + 1);
    s.degen.resize(N + 1);
    int c = 1;
    for (int k = 0; k <= N; ++k, c *= g.order) s.counts[k] = c;
    for (int k = 1; k <= N; ++k) {
        s.face[k].assign(k + 1, std::vector<int>(s.counts[k]));
        for (int x = 0; x < s.counts[k]; ++x) {
            auto ch = chain_of(g, k, x);
            for (int i = 0; i <= k; ++i) {
                std::vector<int> f;
                for (int t = 0; t < k; ++t) {
                    if (i == 0 && t == 0) continue;
                    if (i == k && t == k - 1) continue;
                    if (i > 0 && i < k && t == i - 1) {
                        f.push_back(g.m(ch[t], ch[t + 1]));
                        ++t;
                        continue;
                    }
                    f.push_back(ch[t]);
                }
                s.face[k][i][x] = chain_index(g, f);
            }
        }
    }
    for (int k = 0; k < N; ++k) {
        s.degen[k].assign(k + 1, std::vector<int>(s.counts[k]));
        for (int x = 0; x < s.counts[k]; ++x) {
            auto ch = chain_of(g, k, x);
            for (int i = 0; i <= k; ++i) {
                auto d = ch;
                d.insert(d.begin() + i, g.identity);
                s.degen[k][i][x] = chain_index(g, d);
            }
        }
    }
    return s;
}

Report check_simplicial_map(const TruncatedSimplicialSet& src, const TruncatedSimplicialSet& dst,
                            const SimplicialMap& f)
{
    Report r;
    const int N = std::min(src.N, dst.N);
    if (static_cast<int>(f.map.size()) <= N) {
        r.push_back({"map is missing dimensions", {}});
        return r;
    }
    for (int k = 0; k <= N; ++k) {
        if (static_cast<int>(f.map[k].size()) != src.counts[k]) {
            r.push_back({"map table has the wrong size", {k}});
            return r;
        }
    }
    for (int k = 1; k <= N; ++k) {
        for (int x = 0; x < src.counts[k]; ++x) {
            for (int i = 0; i <= k; ++i) {
                if (f.map[k - 1][src.d(k, i, x)] != dst.d(k, i, f.map[k][x]) && r.size() < 20)
                    r.push_back({"map does not commute with d_i", {k, i, x}});
            }
        }
    }
    for (int k = 0; k < N; ++k) {
        for (int x = 0; x < src.counts[k]; ++x) {
            for (int i = 0; i <= k; ++i) {
                if (f.map[k + 1][src.s(k, i, x)] != dst.s(k, i, f.map[k][x]) && r.size() < 20)
                    r.push_back({"map does not commute with s_i", {k, i, x}});
            }
        }
    }
    return r;
}

Report check_isomorphism(const TruncatedSimplicialSet& src, const TruncatedSimplicialSet& dst,
                         const SimplicialMap& f)
{
    Report r;
    if (src.N != dst.N) {
        r.push_back({"truncations differ", {src.N, dst.N}});
        return r;
    }
    for (int k = 0; k <= src.N; ++k) {
        if (src.counts[k] != dst.counts[k]) {
            r.push_back({"simplex counts differ", {k, src.counts[k], dst.counts[k]}});
            return r;
        }
    }
    r = check_simplicial_map(src, dst, f);
    for (int k = 0; k <= src.N && r.empty(); ++k) {
        std::vector<char> hit(dst.counts[k], 0);
        for (int y : f.map[k]) {
            if (y < 0 || y >= dst.counts[k] || hit[y]) {
                r.push_back({"map is not a bijection", {k}});
                break;
            }
            hit[y] = 1;
        }
    }
    return r;
}

namespace {

// Constraint system shared by check_homotopy and find_homotopy.
struct Term {
    int var = -1;  // variable id, or -1 for a fixed simplex
    int dim = 0;   // dimension of the value before the operation
    int fixed = 0;
    int op = 0;  // 0 none, 1 face, 2 degeneracy
    int i = 0;
};

struct Constraint {
    Term a, b;
    std::vector<int> what;
    const char* name;
};

struct HomotopySystem {
    const TruncatedSimplicialSet& src;
    const TruncatedSimplicialSet& dst;
    int top;  // h is defined on X_n for n <= top
    std::vector<int> offset;  // var id of (n, 0, 0)
    std::vector<Constraint> cons;

    HomotopySystem(const TruncatedSimplicialSet& s, const TruncatedSimplicialSet& d)
        : src(s), dst(d), top(std::min(s.N, d.N - 1))
    {
        int id = 0;
        for (int n = 0; n <= top; ++n) {
            offset.push_back(id);
            id += src.counts[n] * (n + 1);
        }
        offset.push_back(id);
    }
    int var(int n, int x, int j) const { return offset[n] + x * (n + 1) + j; }
    int vars() const { return offset.back(); }

    int eval(const Term& t, const std::vector<int>& val) const
    {
        int v = t.var >= 0 ? val[t.var] : t.fixed;
        if (t.op == 1) return dst.d(t.dim, t.i, v);
        if (t.op == 2) return dst.s(t.dim, t.i, v);
        return v;
    }

    void build(const SimplicialMap& f, const SimplicialMap& g)
    {
        auto H = [&](int n, int x, int j, int op = 0, int i = 0) { return Term{var(n, x, j), n + 1, 0, op, i}; };
        auto F = [&](int dim, int v) { return Term{-1, dim, v, 0, 0}; };
        for (int n = 0; n <= top; ++n) {
            for (int x = 0; x < src.counts[n]; ++x) {
                cons.push_back({H(n, x, 0, 1, 0), F(n, f.map[n][x]), {n, x}, "d_0 h_0 != f"});
                cons.push_back({H(n, x, n, 1, n + 1), F(n, g.map[n][x]), {n, x}, "d_{n+1} h_n != g"});
                for (int j = 0; j <= n; ++j) {
                    for (int i = 0; i <= n + 1; ++i) {
                        if (i < j) {
                            cons.push_back({H(n, x, j, 1, i), H(n - 1, src.d(n, i, x), j - 1), {n, x, i, j},
                                            "d_i h_j != h_{j-1} d_i"});
                        } else if (i == j && j > 0) {
                            cons.push_back({H(n, x, j, 1, j), H(n, x, j - 1, 1, j), {n, x, i, j},
                                            "d_j h_j != d_j h_{j-1}"});
                        } else if (i > j + 1) {
                            cons.push_back({H(n, x, j, 1, i), H(n - 1, src.d(n, i - 1, x), j), {n, x, i, j},
                                            "d_i h_j != h_j d_{i-1}"});
                        }
                    }
                    if (n + 1 > top) continue;
                    for (int i = 0; i <= n + 1; ++i) {
                        if (i <= j) {
                            cons.push_back({H(n, x, j, 2, i), H(n + 1, src.s(n, i, x), j + 1), {n, x, i, j},
                                            "s_i h_j != h_{j+1} s_i"});
                        } else {
                            cons.push_back({H(n, x, j, 2, i), H(n + 1, src.s(n, i - 1, x), j), {n, x, i, j},
                                            "s_i h_j != h_j s_{i-1}"});
                        }
                    }
                }
            }
        }
    }
};

}  // namespace

Report check_homotopy(const TruncatedSimplicialSet& src, const TruncatedSimplicialSet& dst, const SimplicialMap& f,
                      const SimplicialMap& g, const SimplicialHomotopy& h)
{
    HomotopySystem sys(src, dst);
    Report r;
    if (static_cast<int>(h.h.size()) <= sys.top) {
        r.push_back({"homotopy is missing dimensions", {}});
        return r;
    }
    std::vector<int> val(sys.vars());
    for (int n = 0; n <= sys.top; ++n) {
        for (int j = 0; j <= n; ++j) {
            for (int x = 0; x < src.counts[n]; ++x) val[sys.var(n, x, j)] = h.h[n][j][x];
        }
    }
    sys.build(f, g);
    for (const auto& c : sys.cons) {
        if (sys.eval(c.a, val) != sys.eval(c.b, val)) {
            r.push_back({c.name, c.what});
            if (r.size() >= 20) break;
        }
    }
    return r;
}

std::optional<SimplicialHomotopy> find_homotopy(const TruncatedSimplicialSet& src,
                                                const TruncatedSimplicialSet& dst, const SimplicialMap& f,
                                                const SimplicialMap& g, double budget)
{
    HomotopySystem sys(src, dst);
    sys.build(f, g);
    const int nv = sys.vars();
    std::vector<int> dim(nv);
    for (int n = 0; n <= sys.top; ++n) {
        for (int v = sys.offset[n]; v < sys.offset[n + 1]; ++v) dim[v] = n + 1;
    }
    std::vector<std::vector<int>> at(nv);
    for (size_t c = 0; c < sys.cons.size(); ++c) {
        int last = std::max(sys.cons[c].a.var, sys.cons[c].b.var);
        at[last].push_back(static_cast<int>(c));
    }
    std::vector<int> val(nv, 0);
    double nodes = 0;
    std::function<bool(int)> rec = [&](int v) {
        if (v == nv) return true;
        for (int y = 0; y < dst.counts[dim[v]]; ++y) {
            if (++nodes > budget) throw ResourceError("find_homotopy: search exceeded its budget");
            val[v] = y;
            bool ok = true;
            for (int c : at[v]) {
                if (sys.eval(sys.cons[c].a, val) != sys.eval(sys.cons[c].b, val)) {
                    ok = false;
                    break;
                }
            }
            if (ok && rec(v + 1)) return true;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    SimplicialHomotopy h;
    h.h.resize(sys.top + 1);
    for (int n = 0; n <= sys.top; ++n) {
        h.h[n].assign(n + 1, std::vector<int>(src.counts[n]));
        for (int j = 0; j <= n; ++j) {
            for (int x = 0; x < src.counts[n]; ++x) h.h[n][j][x] = val[sys.var(n, x, j)];
        }
    }
    return h;
}

std::vector<std::vector<bool>> degenerate_simplices(const TruncatedSimplicialSet& s)
{
    std::vector<std::vector<bool>> deg(s.N + 1);
    for (int k = 0; k <= s.N; ++k) deg[k].assign(s.counts[k], false);
    for (int k = 0; k < s.N; ++k) {
        for (int i = 0; i <= k; ++i) {
            for (int x = 0; x < s.counts[k]; ++x) deg[k + 1][s.s(k, i, x)] = true;
        }
    }
    return deg;
}

Homology homology(const TruncatedSimplicialSet& s, int maxdeg)
{
    if (maxdeg < 0 || maxdeg >= s.N) {
        std::ostringstream os;
        os << "homology: degree " << maxdeg << " needs truncation at least " << maxdeg + 1 << ", have " << s.N;
        throw InputError(os.str());
    }
    auto deg = degenerate_simplices(s);
    std::vector<std::vector<int>> pos(maxdeg + 2);
    std::vector<int> count(maxdeg + 2, 0);
    for (int k = 0; k <= maxdeg + 1; ++k) {
        pos[k].assign(s.counts[k], -1);
        for (int x = 0; x < s.counts[k]; ++x) {
            if (!deg[k][x]) pos[k][x] = count[k]++;
        }
    }
    // rank and torsion of the boundary out of each degree 1..maxdeg+1
    std::vector<int> rank(maxdeg + 2, 0);
    std::vector<std::vector<std::int64_t>> torsion(maxdeg + 2);
    for (int k = 1; k <= maxdeg + 1; ++k) {
        SparseIntMatrix m(count[k - 1], count[k]);
        for (int x = 0; x < s.counts[k]; ++x) {
            if (pos[k][x] < 0) continue;
            for (int i = 0; i <= k; ++i) {
                int y = s.d(k, i, x);
                if (pos[k - 1][y] >= 0) m.add(pos[k - 1][y], pos[k][x], i % 2 ? -1 : 1);
            }
        }
        auto diag = diagonal_form(m);
        rank[k] = static_cast<int>(diag.size());
        for (const auto& d : diag) {
            if (d > 1) {
                if (d > BigInt(INT64_MAX)) throw ResourceError("homology: torsion coefficient exceeds 64 bits");
                torsion[k].push_back(static_cast<std::int64_t>(d));
            }
        }
    }
    Homology h;
    for (int k = 0; k <= maxdeg; ++k) {
        std::vector<std::int64_t> orders = torsion[k + 1];
        int free = count[k] - rank[k] - rank[k + 1];
        for (int t = 0; t < free; ++t) orders.push_back(0);
        h.groups.push_back(invariant_factors(orders));
    }
    return h;
}

}  // namespace xmc
