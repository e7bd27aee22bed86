#include "xmc/duskin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "xmc/errors.hpp"

namespace xmc {

size_t VectorHash::operator()(const std::vector<int>& v) const
{
    size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<size_t>(x + 1)) * 1099511628211ull;
    return h;
}

std::vector<int> PseudofunctorSimplex::key() const
{
    std::vector<int> k(alpha);
    k.insert(k.end(), u.begin(), u.end());
    return k;
}

PseudofunctorSimplex identity_simplex(const CrossedModule& x, int n)
{
    PseudofunctorSimplex s;
    s.n = n;
    s.alpha.assign((n + 1) * (n + 1), x.G.identity);
    s.u.assign((n + 1) * (n + 1) * (n + 1), x.H.identity);
    return s;
}

namespace {

bool alpha_ok(const CrossedModule& x, const PseudofunctorSimplex& s, int i, int j, int k)
{
    return x.G.m(s.a(i, j), s.a(j, k)) == x.G.m(x.bd(s.w(i, j, k)), s.a(i, k));
}

bool u_ok(const CrossedModule& x, const PseudofunctorSimplex& s, int i, int j, int k, int l)
{
    const FiniteGroup& H = x.H;
    return H.m(x.act(s.a(i, j), s.w(j, k, l)), s.w(i, j, l)) == H.m(s.w(i, j, k), s.w(i, k, l));
}

}  // namespace

Report validate_simplex(const CrossedModule& x, const PseudofunctorSimplex& s)
{
    Report r;
    const int n = s.n;
    if (static_cast<int>(s.alpha.size()) != (n + 1) * (n + 1) ||
        static_cast<int>(s.u.size()) != (n + 1) * (n + 1) * (n + 1)) {
        r.push_back({"simplex table size mismatch", {n}});
        return r;
    }
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i >= j && s.a(i, j) != x.G.identity) r.push_back({"alpha off the upper triangle", {i, j}});
            for (int k = 0; k <= n; ++k) {
                if (!(i < j && j < k) && s.w(i, j, k) != x.H.identity) r.push_back({"u off increasing triples", {i, j, k}});
            }
        }
    }
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            for (int k = j + 1; k <= n; ++k) {
                if (!alpha_ok(x, s, i, j, k)) r.push_back({"alpha_ij alpha_jk != d(u_ijk) alpha_ik", {i, j, k}});
                for (int l = k + 1; l <= n; ++l) {
                    if (!u_ok(x, s, i, j, k, l)) r.push_back({"alpha_ij(u_jkl) u_ijl != u_ijk u_ikl", {i, j, k, l}});
                }
            }
        }
    }
    return r;
}

PseudofunctorSimplex pull_back(const CrossedModule& x, const PseudofunctorSimplex& s, const std::vector<int>& f)
{
    const int m = static_cast<int>(f.size()) - 1;
    PseudofunctorSimplex t = identity_simplex(x, m);
    for (int r = 0; r <= m; ++r) {
        for (int q = r + 1; q <= m; ++q) {
            if (f[r] < f[q]) t.a(r, q) = s.a(f[r], f[q]);
            for (int p = q + 1; p <= m; ++p) {
                if (f[r] < f[q] && f[q] < f[p]) t.w(r, q, p) = s.w(f[r], f[q], f[p]);
            }
        }
    }
    return t;
}

namespace {

std::vector<int> coface(int n, int i)  // [n-1] -> [n] skipping i
{
    std::vector<int> f;
    for (int j = 0; j <= n; ++j) {
        if (j != i) f.push_back(j);
    }
    return f;
}

std::vector<int> codegeneracy(int n, int i)  // [n+1] -> [n] hitting i twice
{
    std::vector<int> f;
    for (int j = 0; j <= n + 1; ++j) f.push_back(j <= i ? j : j - 1);
    return f;
}

}  // namespace

PseudofunctorSimplex face(const CrossedModule& x, const PseudofunctorSimplex& s, int i)
{
    return pull_back(x, s, coface(s.n, i));
}

PseudofunctorSimplex degeneracy(const CrossedModule& x, const PseudofunctorSimplex& s, int i)
{
    return pull_back(x, s, codegeneracy(s.n, i));
}

int DuskinNerve::find(const PseudofunctorSimplex& s) const
{
    if (s.n < 0 || s.n >= static_cast<int>(index.size())) return -1;
    auto it = index[s.n].find(s.key());
    return it == index[s.n].end() ? -1 : it->second;
}

DuskinNerve duskin_nerve(const CrossedModule& x, int N, const NerveOptions& opt)
{
    check_xmod_shape(x);
    if (N < 0) throw InputError("duskin_nerve: negative truncation");
    const FiniteGroup &G = x.G, &H = x.H;
    DuskinNerve d;
    d.x = x;
    d.simplices.resize(N + 1);
    d.simplices[0].push_back(identity_simplex(x, 0));
    for (int n = 1; n <= N; ++n) {
        double candidates = static_cast<double>(d.simplices[n - 1].size()) * G.order * std::pow(H.order, n - 1);
        if (candidates > opt.budget) {
            std::ostringstream os;
            os << "duskin_nerve: " << candidates << " candidates in dimension " << n << " exceed budget " << opt.budget;
            throw ResourceError(os.str());
        }
        auto& out = d.simplices[n];
        for (const auto& prev : d.simplices[n - 1]) {
            PseudofunctorSimplex s = identity_simplex(x, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    s.a(i, j) = prev.a(i, j);
                    for (int k = 0; k < n; ++k) s.w(i, j, k) = prev.w(i, j, k);
                }
            }
            std::vector<int> free(std::max(n - 1, 0), 0);  // u_{i,n-1,n}
            for (int a = 0; a < G.order; ++a) {
                std::fill(free.begin(), free.end(), 0);
                while (true) {
                    s.a(n - 1, n) = a;
                    for (int i = 0; i < n - 1; ++i) {
                        s.w(i, n - 1, n) = free[i];
                        s.a(i, n) = G.m(G.inverse(x.bd(free[i])), G.m(s.a(i, n - 1), a));
                    }
                    for (int i = 0; i < n - 1; ++i) {
                        for (int j = i + 1; j < n - 1; ++j) {
                            int t = H.inverse(x.act(s.a(i, j), s.w(j, n - 1, n)));
                            s.w(i, j, n) = H.m(H.m(t, s.w(i, j, n - 1)), s.w(i, n - 1, n));
                        }
                    }
                    bool ok = true;
                    for (int i = 0; i < n && ok; ++i) {
                        for (int j = i + 1; j < n && ok; ++j) {
                            ok = alpha_ok(x, s, i, j, n);
                            for (int k = j + 1; k < n && ok; ++k) ok = u_ok(x, s, i, j, k, n);
                        }
                    }
                    if (ok) out.push_back(s);
                    size_t p = 0;
                    while (p < free.size() && ++free[p] == H.order) free[p++] = 0;
                    if (p == free.size()) break;
                }
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const PseudofunctorSimplex& p, const PseudofunctorSimplex& q) { return p.key() < q.key(); });
    }
    d.index.resize(N + 1);
    TruncatedSimplicialSet& t = d.set;
    t.N = N;
    t.counts.resize(N + 1);
    t.face.resize(N + 1);
    t.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        t.counts[n] = static_cast<int>(d.simplices[n].size());
        for (int i = 0; i < t.counts[n]; ++i) d.index[n][d.simplices[n][i].key()] = i;
    }
    auto lookup = [&](const PseudofunctorSimplex& s) {
        int i = d.find(s);
        if (i < 0) throw ViolationError("duskin_nerve: structure map left the nerve");
        return i;
    };
    for (int n = 1; n <= N; ++n) {
        t.face[n].assign(n + 1, std::vector<int>(t.counts[n]));
        for (int i = 0; i <= n; ++i) {
            for (int s = 0; s < t.counts[n]; ++s) t.face[n][i][s] = lookup(face(x, d.simplices[n][s], i));
        }
    }
    for (int n = 0; n < N; ++n) {
        t.degen[n].assign(n + 1, std::vector<int>(t.counts[n]));
        for (int i = 0; i <= n; ++i) {
            for (int s = 0; s < t.counts[n]; ++s) t.degen[n][i][s] = lookup(degeneracy(x, d.simplices[n][s], i));
        }
    }
    return d;
}

SimplicialMap duskin_projection(const DuskinNerve& d)
{
    if (d.x.H.order != 1) throw InputError("duskin_projection: H must be trivial");
    SimplicialMap f;
    f.map.resize(d.set.N + 1);
    for (int n = 0; n <= d.set.N; ++n) {
        for (const auto& s : d.simplices[n]) {
            std::vector<int> chain;
            for (int i = 0; i < n; ++i) chain.push_back(s.a(i, i + 1));
            f.map[n].push_back(chain_index(d.x.G, chain));
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Monoidal double nerve

namespace {

struct Bisimplex {
    int m = 0;               // steps
    int n = 0;               // coordinates
    std::vector<int> g;      // source objects, n
    std::vector<int> u;      // u[s * n + c]
};

std::vector<int> sources_at(const CrossedModule& x, const Bisimplex& b, int step)
{
    std::vector<int> src = b.g;
    for (int s = 0; s < step; ++s) {
        for (int c = 0; c < b.n; ++c) src[c] = x.G.m(x.bd(b.u[s * b.n + c]), src[c]);
    }
    return src;
}

Bisimplex vertical_face(const CrossedModule& x, const Bisimplex& b, int i)
{
    Bisimplex r{b.m - 1, b.n, b.g, {}};
    for (int s = 0; s < b.m; ++s) {
        if (i == 0 && s == 0) {
            r.g = sources_at(x, b, 1);
            continue;
        }
        if (i == b.m && s == b.m - 1) continue;
        if (i > 0 && i < b.m && s == i - 1) {
            for (int c = 0; c < b.n; ++c) r.u.push_back(x.H.m(b.u[i * b.n + c], b.u[(i - 1) * b.n + c]));
            ++s;
            continue;
        }
        for (int c = 0; c < b.n; ++c) r.u.push_back(b.u[s * b.n + c]);
    }
    return r;
}

Bisimplex vertical_degeneracy(const CrossedModule& x, const Bisimplex& b, int i)
{
    Bisimplex r{b.m + 1, b.n, b.g, b.u};
    r.u.insert(r.u.begin() + i * b.n, b.n, x.H.identity);
    return r;
}

Bisimplex horizontal_face(const CrossedModule& x, const Bisimplex& b, int i)
{
    Bisimplex r{b.m, b.n - 1, {}, {}};
    auto keep = [&](int c, int s, std::vector<int>& out, const std::vector<int>& src) {
        (void)src;
        out.push_back(s < 0 ? b.g[c] : b.u[s * b.n + c]);
    };
    for (int s = -1; s < b.m; ++s) {
        std::vector<int> src = s < 0 ? b.g : sources_at(x, b, s);
        std::vector<int>& out = s < 0 ? r.g : r.u;
        for (int c = 0; c < b.n; ++c) {
            if (i == 0 && c == 0) continue;
            if (i == b.n && c == b.n - 1) continue;
            if (i > 0 && i < b.n && c == i - 1) {
                if (s < 0) {
                    out.push_back(x.G.m(b.g[c], b.g[c + 1]));
                } else {
                    int a = src[c];
                    out.push_back(x.H.m(b.u[s * b.n + c], x.act(a, b.u[s * b.n + c + 1])));
                }
                ++c;
                continue;
            }
            keep(c, s, out, src);
        }
    }
    return r;
}

Bisimplex horizontal_degeneracy(const CrossedModule& x, const Bisimplex& b, int i)
{
    Bisimplex r{b.m, b.n + 1, b.g, {}};
    r.g.insert(r.g.begin() + i, x.G.identity);
    for (int s = 0; s < b.m; ++s) {
        for (int c = 0; c <= b.n; ++c) {
            if (c == i) r.u.push_back(x.H.identity);
            if (c < b.n) r.u.push_back(b.u[s * b.n + c]);
        }
        if (i == b.n) {
            // inserted at the end: already handled when c == i == b.n
        }
    }
    return r;
}

long long bisimplex_index(const CrossedModule& x, const Bisimplex& b)
{
    long long idx = 0;
    for (int v : b.g) idx = idx * x.G.order + v;
    for (int v : b.u) idx = idx * x.H.order + v;
    return idx;
}

Bisimplex bisimplex_of(const CrossedModule& x, int k, long long idx)
{
    Bisimplex b{k, k, std::vector<int>(k), std::vector<int>(k * k)};
    for (int t = k * k - 1; t >= 0; --t) {
        b.u[t] = static_cast<int>(idx % x.H.order);
        idx /= x.H.order;
    }
    for (int t = k - 1; t >= 0; --t) {
        b.g[t] = static_cast<int>(idx % x.G.order);
        idx /= x.G.order;
    }
    return b;
}

}  // namespace

MonoidalDiagNerve monoidal_diag_nerve(const CrossedModule& x, int N, const NerveOptions& opt)
{
    check_xmod_shape(x);
    if (N < 0) throw InputError("monoidal_diag_nerve: negative truncation");
    MonoidalDiagNerve d;
    d.x = x;
    TruncatedSimplicialSet& t = d.set;
    t.N = N;
    t.counts.resize(N + 1);
    t.face.resize(N + 1);
    t.degen.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        double c = std::pow(static_cast<double>(x.G.order) * std::pow(x.H.order, k), k);
        if (c > opt.budget) {
            std::ostringstream os;
            os << "monoidal_diag_nerve: " << c << " simplices in dimension " << k << " exceed budget " << opt.budget;
            throw ResourceError(os.str());
        }
        t.counts[k] = static_cast<int>(c);
    }
    for (int k = 1; k <= N; ++k) {
        t.face[k].assign(k + 1, std::vector<int>(t.counts[k]));
        for (int s = 0; s < t.counts[k]; ++s) {
            Bisimplex b = bisimplex_of(x, k, s);
            for (int i = 0; i <= k; ++i) {
                t.face[k][i][s] = static_cast<int>(bisimplex_index(x, horizontal_face(x, vertical_face(x, b, i), i)));
            }
        }
    }
    for (int k = 0; k < N; ++k) {
        t.degen[k].assign(k + 1, std::vector<int>(t.counts[k]));
        for (int s = 0; s < t.counts[k]; ++s) {
            Bisimplex b = bisimplex_of(x, k, s);
            for (int i = 0; i <= k; ++i) {
                t.degen[k][i][s] =
                    static_cast<int>(bisimplex_index(x, horizontal_degeneracy(x, vertical_degeneracy(x, b, i), i)));
            }
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Cocycles to simplicial maps and coboundaries to homotopies

namespace {

int segment(const FiniteGroup& gamma, const std::vector<int>& chain, int i, int j)
{
    int g = gamma.identity;
    for (int t = i; t < j; ++t) g = gamma.m(g, chain[t]);
    return g;
}

PseudofunctorSimplex cocycle_simplex(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c,
                                     const std::vector<int>& chain)
{
    const int n = static_cast<int>(chain.size()), q = gamma.order;
    PseudofunctorSimplex s = identity_simplex(x, n);
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            s.a(i, j) = c.alpha[segment(gamma, chain, i, j)];
            for (int k = j + 1; k <= n; ++k)
                s.w(i, j, k) = c.u[segment(gamma, chain, i, j) * q + segment(gamma, chain, j, k)];
        }
    }
    return s;
}

// eps[i] = 1 marks vertices over the target cocycle b, 0 over a; eps is nonincreasing.
PseudofunctorSimplex theta_simplex(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& a,
                                   const Cocycle1& b, const Coboundary1Witness& w, const std::vector<int>& chain,
                                   const std::vector<int>& eps)
{
    const int n = static_cast<int>(chain.size()), q = gamma.order;
    const FiniteGroup &G = x.G, &H = x.H;
    PseudofunctorSimplex s = identity_simplex(x, n);
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            int g = segment(gamma, chain, i, j);
            if (eps[i] == eps[j]) {
                s.a(i, j) = eps[i] ? b.alpha[g] : a.alpha[g];
            } else {
                s.a(i, j) = G.m(w.gamma, a.alpha[g]);
            }
            for (int k = j + 1; k <= n; ++k) {
                int h = segment(gamma, chain, j, k);
                int v;
                if (eps[i] == eps[k]) {
                    v = eps[i] ? b.u[g * q + h] : a.u[g * q + h];
                } else if (eps[j] == 0) {
                    v = x.act(w.gamma, a.u[g * q + h]);
                } else {
                    v = H.m(w.w[g], x.act(w.gamma, a.u[g * q + h]));
                }
                s.w(i, j, k) = v;
            }
        }
    }
    return s;
}

}  // namespace

SimplicialMap cocycle_to_simplicial_map(const FiniteGroup& gamma, const Cocycle1& c, const DuskinNerve& d)
{
    Report r = validate_cocycle(gamma, d.x, c);
    if (!r.empty()) throw InputError("cocycle_to_simplicial_map: " + describe(r.front()));
    SimplicialMap f;
    f.map.resize(d.set.N + 1);
    for (int n = 0; n <= d.set.N; ++n) {
        double count = std::pow(static_cast<double>(gamma.order), n);
        if (count > 1e7) throw ResourceError("cocycle_to_simplicial_map: source too large");
        for (int idx = 0; idx < static_cast<int>(count); ++idx) {
            int y = d.find(cocycle_simplex(gamma, d.x, c, chain_of(gamma, n, idx)));
            if (y < 0) throw ViolationError("cocycle_to_simplicial_map: image is not a simplex of the nerve");
            f.map[n].push_back(y);
        }
    }
    return f;
}

SimplicialMap checked_cocycle_map(const FiniteGroup& gamma, const Cocycle1& c, const DuskinNerve& d,
                                  const TruncatedSimplicialSet& source)
{
    SimplicialMap f = cocycle_to_simplicial_map(gamma, c, d);
    Report r = check_simplicial_map(source, d.set, f);
    if (!r.empty()) throw ViolationError("cocycle_to_simplicial_map: " + describe(r.front()));
    return f;
}

std::optional<std::vector<int>> comparison_failure(const FiniteGroup& gamma, const CrossedModule& x,
                                                   const Cocycle1& a, const Cocycle1& b,
                                                   const Coboundary1Witness& w)
{
    const int q = gamma.order;
    const FiniteGroup& H = x.H;
    auto gu = [&](int g, int h) { return x.act(w.gamma, a.u[g * q + h]); };
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            for (int k = 0; k < q; ++k) {
                int lhs = H.m(x.act(b.alpha[g], H.m(w.w[h], gu(h, k))), H.m(w.w[g], gu(g, gamma.m(h, k))));
                int rhs = H.m(H.m(b.u[g * q + h], w.w[gamma.m(g, h)]), gu(gamma.m(g, h), k));
                if (lhs != rhs) return std::vector<int>{g, h, k};
            }
        }
    }
    return std::nullopt;
}

CoboundaryHomotopy coboundary_to_homotopy(const FiniteGroup& gamma, const Cocycle1& a, const Cocycle1& b,
                                          const Coboundary1Witness& w, const DuskinNerve& d,
                                          const TruncatedSimplicialSet& source)
{
    const CrossedModule& x = d.x;
    if (static_cast<int>(w.w.size()) != gamma.order || w.w[gamma.identity] != x.H.identity)
        throw InputError("coboundary_to_homotopy: witness must have w_e = 1");
    Report wr = check_witness(gamma, x, a, b, w);
    if (auto bad = comparison_failure(gamma, x, a, b, w)) {
        std::ostringstream os;
        os << "coboundary_to_homotopy: associativity comparison fails at (" << (*bad)[0] << "," << (*bad)[1] << ","
           << (*bad)[2] << ")";
        throw ViolationError(os.str());
    }
    if (!wr.empty()) throw ViolationError("coboundary_to_homotopy: " + describe(wr.front()));
    CoboundaryHomotopy out;
    out.from = checked_cocycle_map(gamma, a, d, source);
    out.to = checked_cocycle_map(gamma, b, d, source);
    const int top = std::min(source.N, d.set.N - 1);
    out.homotopy.h.resize(top + 1);
    for (int n = 0; n <= top; ++n) {
        out.homotopy.h[n].assign(n + 1, std::vector<int>(source.counts[n]));
        for (int j = 0; j <= n; ++j) {
            std::vector<int> eps(n + 2, 0);
            for (int i = 0; i <= j; ++i) eps[i] = 1;
            for (int idx = 0; idx < source.counts[n]; ++idx) {
                auto chain = chain_of(gamma, n, idx);
                chain.insert(chain.begin() + j, gamma.identity);
                PseudofunctorSimplex s = theta_simplex(gamma, x, a, b, w, chain, eps);
                int y = d.find(s);
                if (y < 0) {
                    Report sr = validate_simplex(x, s);
                    std::ostringstream os;
                    os << "coboundary_to_homotopy: simplex for (n=" << n << ", j=" << j << ", x=" << idx
                       << ") is invalid" << (sr.empty() ? "" : ": " + describe(sr.front()));
                    throw ViolationError(os.str());
                }
                out.homotopy.h[n][j][idx] = y;
            }
        }
    }
    // h_j realizes a homotopy from the map of b (eps = 1 at vertex 0) to the map of a.
    out.issues = check_homotopy(source, d.set, out.from, out.to, out.homotopy);
    return out;
}

OuterRoute outer_route(const FiniteGroup& gamma, const Cocycle1& a, const Cocycle1& b,
                       const Coboundary1Witness& w, const DuskinNerve& d, const TruncatedSimplicialSet& source)
{
    OuterRoute r;
    Coboundary1Witness conj{w.gamma, std::vector<int>(gamma.order, d.x.H.identity)};
    r.conjugated = transform(gamma, d.x, a, conj);
    r.to_conjugate = coboundary_to_homotopy(gamma, a, r.conjugated, conj, d, source);
    r.inner = coboundary_to_homotopy(gamma, r.conjugated, b, {d.x.G.identity, w.w}, d, source);
    r.direct = coboundary_to_homotopy(gamma, a, b, w, d, source);
    r.consistent = r.to_conjugate.issues.empty() && r.inner.issues.empty() && r.direct.issues.empty() &&
                   r.to_conjugate.to.map == r.inner.from.map && r.direct.from.map == r.to_conjugate.from.map &&
                   r.direct.to.map == r.inner.to.map;
    return r;
}

// ---------------------------------------------------------------------------
// Natural transformations and the retraction formulas

PseudofunctorSimplex nat_target(const CrossedModule& x, const PseudofunctorSimplex& s, const NatTransform& w)
{
    const FiniteGroup &G = x.G, &H = x.H;
    const int n = s.n;
    PseudofunctorSimplex t = identity_simplex(x, n);
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            t.a(i, j) = G.m(x.bd(w.at(i, j)), s.a(i, j));
            for (int k = j + 1; k <= n; ++k) {
                int lhs = H.m(H.m(w.at(i, j), x.act(s.a(i, j), w.at(j, k))), s.w(i, j, k));
                t.w(i, j, k) = H.m(lhs, H.inverse(w.at(i, k)));
            }
        }
    }
    return t;
}

Report validate_nat(const CrossedModule& x, const PseudofunctorSimplex& s, const PseudofunctorSimplex& t,
                    const NatTransform& w)
{
    const FiniteGroup &G = x.G, &H = x.H;
    Report r;
    const int n = s.n;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i >= j && w.at(i, j) != H.identity) r.push_back({"w off the upper triangle", {i, j}});
        }
    }
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            if (t.a(i, j) != G.m(x.bd(w.at(i, j)), s.a(i, j))) r.push_back({"alpha1_ij != d(w_ij) alpha0_ij", {i, j}});
            for (int k = j + 1; k <= n; ++k) {
                int lhs = H.m(H.m(w.at(i, j), x.act(s.a(i, j), w.at(j, k))), s.w(i, j, k));
                if (lhs != H.m(t.w(i, j, k), w.at(i, k))) r.push_back({"naturality fails", {i, j, k}});
            }
        }
    }
    return r;
}

namespace {

NatTransform identity_nat(const CrossedModule& x, int n) { return {n, std::vector<int>((n + 1) * (n + 1), x.H.identity)}; }

NatTransform nat_pull_back(const CrossedModule& x, const NatTransform& w, const std::vector<int>& f)
{
    const int m = static_cast<int>(f.size()) - 1;
    NatTransform t = identity_nat(x, m);
    for (int r = 0; r <= m; ++r) {
        for (int q = r + 1; q <= m; ++q) {
            if (f[r] < f[q]) t.at(r, q) = w.at(f[r], f[q]);
        }
    }
    return t;
}

NatTransform nat_face(const CrossedModule& x, const NatTransform& w, int i) { return nat_pull_back(x, w, coface(w.n, i)); }
NatTransform nat_degen(const CrossedModule& x, const NatTransform& w, int i)
{
    return nat_pull_back(x, w, codegeneracy(w.n, i));
}

/// Vertical composite: first a, then b.
NatTransform nat_compose(const CrossedModule& x, const NatTransform& a, const NatTransform& b)
{
    NatTransform t = a;
    for (size_t i = 0; i < t.w.size(); ++i) t.w[i] = x.H.m(b.w[i], a.w[i]);
    return t;
}

/// Phi(Psi(s)): alpha_ij = alpha_{i,i+1} ... alpha_{j-1,j}, u = 1.
PseudofunctorSimplex strictify(const CrossedModule& x, const PseudofunctorSimplex& s)
{
    PseudofunctorSimplex t = identity_simplex(x, s.n);
    for (int i = 0; i <= s.n; ++i) {
        int g = x.G.identity;
        for (int j = i + 1; j <= s.n; ++j) {
            g = x.G.m(g, s.a(j - 1, j));
            t.a(i, j) = g;
        }
    }
    return t;
}

/// Phi(Psi(w)): horizontal composite of the consecutive components over the source s.
NatTransform strictify_nat(const CrossedModule& x, const PseudofunctorSimplex& s, const NatTransform& w)
{
    NatTransform t = identity_nat(x, s.n);
    for (int i = 0; i <= s.n; ++i) {
        int obj = x.G.identity, mor = x.H.identity;
        for (int j = i + 1; j <= s.n; ++j) {
            // (obj, mor) (x) (alpha_{j-1,j}, w_{j-1,j}) = (obj alpha, mor obj(w))
            mor = x.H.m(mor, x.act(obj, w.at(j - 1, j)));
            obj = x.G.m(obj, s.a(j - 1, j));
            t.at(i, j) = mor;
        }
    }
    return t;
}

/// The unit s => Phi(Psi(s)): v_{i..j} = v_{i..j-1} u_{i(j-1)j}, v_{i,i+1} = 1.
NatTransform unit_nat(const CrossedModule& x, const PseudofunctorSimplex& s)
{
    NatTransform t = identity_nat(x, s.n);
    for (int i = 0; i <= s.n; ++i) {
        for (int j = i + 2; j <= s.n; ++j) t.at(i, j) = x.H.m(t.at(i, j - 1), s.w(i, j - 1, j));
    }
    return t;
}

int sigma(int k, int j) { return j <= k ? j : j - 1; }

PseudofunctorSimplex mu(const CrossedModule& x, const PseudofunctorSimplex& x0, const NatTransform& v0,
                        const PseudofunctorSimplex& x1, int k)
{
    const int n = x0.n;
    PseudofunctorSimplex s = identity_simplex(x, n + 1);
    for (int i = 0; i <= n + 1; ++i) {
        for (int j = i + 1; j <= n + 1; ++j) {
            s.a(i, j) = j <= k ? x1.a(i, j) : x0.a(sigma(k, i), j - 1);
            for (int l = j + 1; l <= n + 1; ++l) {
                int v;
                if (l <= k) {
                    v = x1.w(i, j, l);
                } else if (j <= k) {
                    v = x.H.m(v0.at(i, j), x0.w(i, j, l - 1));
                } else {
                    v = x0.w(sigma(k, i), j - 1, l - 1);
                }
                s.w(i, j, l) = v;
            }
        }
    }
    return s;
}

NatTransform hk(const CrossedModule& x, const NatTransform& v0, int k)
{
    const int n = v0.n;
    NatTransform t = identity_nat(x, n + 1);
    for (int i = 0; i <= n + 1; ++i) {
        for (int j = i + 1; j <= n + 1; ++j) t.at(i, j) = j <= k ? x.H.identity : v0.at(sigma(k, i), j - 1);
    }
    return t;
}

// An m-chain x^0 -> x^1 -> ... -> x^m of natural transformations at level n.
struct Chain {
    std::vector<PseudofunctorSimplex> obj;
    std::vector<NatTransform> mor;
    bool operator==(const Chain& o) const { return obj == o.obj && mor == o.mor; }
};

Chain chain_face(const CrossedModule& x, const Chain& c, int i)
{
    Chain r;
    for (const auto& o : c.obj) r.obj.push_back(face(x, o, i));
    for (const auto& m : c.mor) r.mor.push_back(nat_face(x, m, i));
    return r;
}

Chain chain_degen(const CrossedModule& x, const Chain& c, int i)
{
    Chain r;
    for (const auto& o : c.obj) r.obj.push_back(degeneracy(x, o, i));
    for (const auto& m : c.mor) r.mor.push_back(nat_degen(x, m, i));
    return r;
}

Chain homotopy_step(const CrossedModule& x, const Chain& c, int k)
{
    Chain r;
    r.obj.push_back(mu(x, c.obj[0], c.mor[0], c.obj[1], k));
    r.mor.push_back(hk(x, c.mor[0], k));
    for (size_t t = 1; t < c.obj.size(); ++t) r.obj.push_back(degeneracy(x, c.obj[t], k));
    for (size_t t = 1; t < c.mor.size(); ++t) r.mor.push_back(nat_degen(x, c.mor[t], k));
    return r;
}

/// s_0^h d_0^h: replace the first transformation by the identity on x^1.
Chain retract(const CrossedModule& x, const Chain& c)
{
    Chain r = c;
    r.obj[0] = c.obj[1];
    r.mor[0] = identity_nat(x, c.obj[0].n);
    return r;
}

class AppendixChecker {
public:
    AppendixChecker(const CrossedModule& x, AppendixReport& rep) : x_(x), rep_(rep) {}

    void expect(bool ok, const std::string& what, int n, int k, long long id)
    {
        ++rep_.identities;
        if (!ok && rep_.failures.size() < 50) {
            rep_.failures.push_back({what, {n, k, static_cast<int>(id)}});
        }
    }

    void valid_chain(const Chain& c, const std::string& what, int n, int k, long long id)
    {
        for (const auto& o : c.obj) expect(validate_simplex(x_, o).empty(), what + ": invalid pseudofunctor", n, k, id);
        for (size_t t = 0; t < c.mor.size(); ++t)
            expect(validate_nat(x_, c.obj[t], c.obj[t + 1], c.mor[t]).empty(), what + ": invalid transformation", n, k,
                   id);
    }

    // Lemma A.1 on an object and a transformation out of it.
    void retraction(const PseudofunctorSimplex& s, const NatTransform& v, int n, long long id)
    {
        PseudofunctorSimplex t = nat_target(x_, s, v);
        PseudofunctorSimplex ps = strictify(x_, s), pt = strictify(x_, t);
        expect(validate_simplex(x_, ps).empty(), "Phi(Psi(x)) is not a pseudofunctor", n, 0, id);
        expect(strictify(x_, ps) == ps, "Psi o Phi != id on objects", n, 0, id);
        NatTransform pv = strictify_nat(x_, s, v);
        expect(validate_nat(x_, ps, pt, pv).empty(), "Phi(Psi(w)) is not natural", n, 0, id);
        expect(strictify_nat(x_, ps, pv) == pv, "Psi o Phi != id on transformations", n, 0, id);
        NatTransform es = unit_nat(x_, s), et = unit_nat(x_, t);
        expect(validate_nat(x_, s, ps, es).empty(), "eta is not a natural transformation", n, 0, id);
        expect(nat_compose(x_, v, et) == nat_compose(x_, es, pv), "eta is not natural in x", n, 0, id);
    }

    // Simplicial homotopy identities for H on an m-chain at level n.
    void homotopy(const Chain& c, int n, long long id)
    {
        std::vector<Chain> H;
        for (int k = 0; k <= n; ++k) {
            H.push_back(homotopy_step(x_, c, k));
            valid_chain(H.back(), "H_k(v)", n, k, id);
        }
        expect(H[0].obj[0] == degeneracy(x_, c.obj[0], 0), "mu_0 v != s_0 x^0", n, 0, id);
        expect(H[0].mor[0] == nat_degen(x_, c.mor[0], 0), "h_0 v != s_0 v", n, 0, id);
        expect(chain_face(x_, H[0], 0) == c, "d_0 H_0 != id", n, 0, id);
        expect(face(x_, H[n].obj[0], n + 1) == c.obj[1], "d_{n+1} mu_n v != x^1", n, n, id);
        expect(nat_face(x_, H[n].mor[0], n + 1) == identity_nat(x_, n), "d_{n+1} h_n v != id", n, n, id);
        expect(chain_face(x_, H[n], n + 1) == retract(x_, c), "d_{n+1} H_n != s_0 d_0", n, n, id);
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n + 1; ++i) {
                if (i < j) {
                    expect(chain_face(x_, H[j], i) == homotopy_step(x_, chain_face(x_, c, i), j - 1),
                           "d_i H_j != H_{j-1} d_i", n, j, id);
                } else if (i == j && j > 0) {
                    expect(chain_face(x_, H[j], j) == chain_face(x_, H[j - 1], j), "d_j H_j != d_j H_{j-1}", n, j, id);
                } else if (i > j + 1) {
                    expect(chain_face(x_, H[j], i) == homotopy_step(x_, chain_face(x_, c, i - 1), j),
                           "d_i H_j != H_j d_{i-1}", n, j, id);
                }
            }
            for (int i = 0; i <= n + 1; ++i) {
                Chain lhs = chain_degen(x_, H[j], i);
                Chain rhs = i <= j ? homotopy_step(x_, chain_degen(x_, c, i), j + 1)
                                   : homotopy_step(x_, chain_degen(x_, c, i - 1), j);
                expect(lhs == rhs, i <= j ? "s_i H_j != H_{j+1} s_i" : "s_i H_j != H_j s_{i-1}", n, j, id);
            }
        }
    }

    // Simplicial identities of the transformation between faces and degeneracies (tail components).
    void structure(const PseudofunctorSimplex& s, const NatTransform& v, int n, long long id)
    {
        PseudofunctorSimplex t = nat_target(x_, s, v);
        for (int i = 0; i <= n && n > 0; ++i)
            expect(validate_nat(x_, face(x_, s, i), face(x_, t, i), nat_face(x_, v, i)).empty(),
                   "face of a transformation is not natural", n, i, id);
        for (int i = 0; i <= n; ++i)
            expect(validate_nat(x_, degeneracy(x_, s, i), degeneracy(x_, t, i), nat_degen(x_, v, i)).empty(),
                   "degeneracy of a transformation is not natural", n, i, id);
        for (int j = 0; j <= n; ++j) {
            NatTransform sv = nat_degen(x_, v, j);
            for (int i = 0; i <= n + 1; ++i) {
                NatTransform lhs = nat_face(x_, sv, i);
                if (i == j || i == j + 1) {
                    expect(lhs == v, "d_i s_j != id on transformations", n, j, id);
                } else if (i < j) {
                    expect(lhs == nat_degen(x_, nat_face(x_, v, i), j - 1), "d_i s_j != s_{j-1} d_i on transformations",
                           n, j, id);
                } else {
                    expect(lhs == nat_degen(x_, nat_face(x_, v, i - 1), j), "d_i s_j != s_j d_{i-1} on transformations",
                           n, j, id);
                }
            }
            for (int i = 0; i <= j; ++i)
                expect(nat_degen(x_, sv, i) == nat_degen(x_, nat_degen(x_, v, i), j + 1),
                       "s_i s_j != s_{j+1} s_i on transformations", n, j, id);
        }
    }

private:
    const CrossedModule& x_;
    AppendixReport& rep_;
};

std::vector<NatTransform> all_nats(const CrossedModule& x, int n)
{
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) pairs.push_back({i, j});
    }
    std::vector<NatTransform> out;
    std::vector<int> digit(pairs.size(), 0);
    while (true) {
        NatTransform t = identity_nat(x, n);
        for (size_t p = 0; p < pairs.size(); ++p) t.at(pairs[p].first, pairs[p].second) = digit[p];
        out.push_back(t);
        size_t p = 0;
        while (p < digit.size() && ++digit[p] == x.H.order) digit[p++] = 0;
        if (p == digit.size()) break;
    }
    return out;
}

}  // namespace

AppendixReport verify_appendix_retraction(const CrossedModule& x, int max_n, int max_m, const AppendixOptions& opt)
{
    if (max_n < 0 || max_m < 1) throw InputError("verify_appendix_retraction: need n >= 0 and m >= 1");
    AppendixReport rep;
    rep.max_n = max_n;
    rep.max_m = max_m;
    DuskinNerve d = duskin_nerve(x, max_n);
    AppendixChecker check(x, rep);
    for (int n = 0; n <= max_n; ++n) {
        const auto& objs = d.simplices[n];
        const auto nats = all_nats(x, n);
        rep.pseudofunctors += static_cast<long long>(objs.size());
        for (size_t o = 0; o < objs.size(); ++o) {
            for (size_t v = 0; v < nats.size(); ++v) {
                const long long id = static_cast<long long>(o * nats.size() + v);
                ++rep.transformations;
                PseudofunctorSimplex t = nat_target(x, objs[o], nats[v]);
                check.expect(d.find(t) >= 0, "target of a transformation is not a pseudofunctor", n, 0, id);
                check.retraction(objs[o], nats[v], n, id);
                check.structure(objs[o], nats[v], n, id);
                check.homotopy(Chain{{objs[o], t}, {nats[v]}}, n, id);
            }
        }
        // Every identity above acts componentwise on chains: the first component
        // is checked on all (x0, v0), later ones reduce to the structure checks.
        double per = static_cast<double>(nats.size());
        double chains = static_cast<double>(objs.size());
        for (int m = 1; m <= max_m; ++m) {
            chains *= per;
            rep.chains += static_cast<long long>(chains);
            if (m == 1 || chains > opt.budget) continue;
            std::vector<size_t> digit(m, 0);
            for (size_t o = 0; o < objs.size(); ++o) {
                std::fill(digit.begin(), digit.end(), 0);
                while (true) {
                    Chain c;
                    c.obj.push_back(objs[o]);
                    for (int s = 0; s < m; ++s) {
                        c.mor.push_back(nats[digit[s]]);
                        c.obj.push_back(nat_target(x, c.obj.back(), c.mor.back()));
                    }
                    ++rep.explicit_chains;
                    check.homotopy(c, n, static_cast<long long>(o));
                    int p = 0;
                    while (p < m && ++digit[p] == nats.size()) digit[p++] = 0;
                    if (p == m) break;
                }
            }
        }
        rep.explicit_chains += static_cast<long long>(objs.size() * nats.size());
    }
    return rep;
}

}  // namespace xmc
