#include "xmc/xmod.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <functional>
#include <sstream>

#include "xmc/errors.hpp"

namespace xmc {

void check_xmod_shape(const CrossedModule& x)
{
    if (static_cast<int>(x.boundary.size()) != x.H.order)
        throw InputError("crossed module: boundary table must have |H| entries");
    if (static_cast<int>(x.action.size()) != x.G.order * x.H.order)
        throw InputError("crossed module: action table must be |G| x |H|");
    for (int v : x.boundary) {
        if (v < 0 || v >= x.G.order) throw InputError("crossed module: boundary value out of range");
    }
    for (int v : x.action) {
        if (v < 0 || v >= x.H.order) throw InputError("crossed module: action value out of range");
    }
}

Report validate_xmod(const CrossedModule& x)
{
    check_xmod_shape(x);
    Report r;
    const FiniteGroup &H = x.H, &G = x.G;
    for (const auto& i : validate_hom(H, G, x.boundary)) r.push_back({"boundary: " + i.what, i.witness});
    for (int h = 0; h < H.order; ++h) {
        if (x.act(G.identity, h) != h) r.push_back({"identity of G acts nontrivially", {h}});
    }
    for (int g = 0; g < G.order; ++g) {
        std::vector<char> hit(H.order, 0);
        for (int h = 0; h < H.order; ++h) hit[x.act(g, h)] = 1;
        if (std::find(hit.begin(), hit.end(), 0) != hit.end()) {
            r.push_back({"action is not bijective", {g}});
            continue;
        }
        bool mult = true;
        for (int a = 0; a < H.order && mult; ++a) {
            for (int b = 0; b < H.order; ++b) {
                if (x.act(g, H.m(a, b)) != H.m(x.act(g, a), x.act(g, b))) {
                    r.push_back({"action is not by automorphisms", {g, a, b}});
                    mult = false;
                    break;
                }
            }
        }
    }
    for (int g1 = 0; g1 < G.order; ++g1) {
        for (int g2 = 0; g2 < G.order; ++g2) {
            for (int h = 0; h < H.order; ++h) {
                if (x.act(G.m(g1, g2), h) != x.act(g1, x.act(g2, h))) {
                    r.push_back({"action is not a homomorphism", {g1, g2, h}});
                    g2 = G.order;
                    g1 = G.order;
                    break;
                }
            }
        }
    }
    for (int g = 0; g < G.order; ++g) {
        for (int h = 0; h < H.order; ++h) {
            if (x.bd(x.act(g, h)) != G.m(G.m(g, x.bd(h)), G.inverse(g))) {
                r.push_back({"equivariance fails", {g, h}});
                g = G.order;
                break;
            }
        }
    }
    for (int u = 0; u < H.order; ++u) {
        for (int v = 0; v < H.order; ++v) {
            if (x.act(x.bd(u), v) != H.m(H.m(u, v), H.inverse(u))) {
                r.push_back({"Peiffer identity fails", {u, v}});
                u = H.order;
                break;
            }
        }
    }
    return r;
}

CrossedModule xmod_from_group(const FiniteGroup& g)
{
    CrossedModule x;
    x.H = make_trivial();
    x.G = g;
    x.boundary = {g.identity};
    x.action.assign(g.order, 0);
    return x;
}

CrossedModule xmod_from_coefficients(const FiniteGroup& h)
{
    CrossedModule x;
    x.H = h;
    x.G = make_trivial();
    x.boundary.assign(h.order, 0);
    x.action = identity_map(h);
    return x;
}

CrossedModule make_xmod(const FiniteGroup& h, const FiniteGroup& g, std::vector<int> boundary, std::vector<int> action)
{
    CrossedModule x{h, g, std::move(boundary), std::move(action)};
    Report r = validate_xmod(x);
    if (!r.empty()) throw InputError("crossed module: " + describe(r.front()));
    return x;
}

CrossedModule identity_xmod(const FiniteGroup& g)
{
    CrossedModule x;
    x.H = g;
    x.G = g;
    x.boundary = identity_map(g);
    x.action.resize(g.order * g.order);
    for (int a = 0; a < g.order; ++a) {
        for (int h = 0; h < g.order; ++h) x.action[a * g.order + h] = g.m(g.m(a, h), g.inverse(a));
    }
    return x;
}

Report validate_morphism(const XModMorphism& m)
{
    Report r;
    const auto &s = m.source, &t = m.target;
    for (const auto& i : validate_hom(s.H, t.H, m.phi1)) r.push_back({"phi1: " + i.what, i.witness});
    for (const auto& i : validate_hom(s.G, t.G, m.phi2)) r.push_back({"phi2: " + i.what, i.witness});
    if (!r.empty()) return r;
    for (int h = 0; h < s.H.order; ++h) {
        if (t.bd(m.phi1[h]) != m.phi2[s.bd(h)]) {
            r.push_back({"boundaries do not commute with the morphism", {h}});
            break;
        }
    }
    for (int g = 0; g < s.G.order; ++g) {
        for (int h = 0; h < s.H.order; ++h) {
            if (m.phi1[s.act(g, h)] != t.act(m.phi2[g], m.phi1[h])) {
                r.push_back({"morphism is not equivariant", {g, h}});
                g = s.G.order;
                break;
            }
        }
    }
    return r;
}

size_t CocycleHash::operator()(const Cocycle1& c) const
{
    size_t h = 1469598103934665603ull;
    for (int v : c.alpha) h = (h ^ static_cast<size_t>(v + 1)) * 1099511628211ull;
    for (int v : c.u) h = (h ^ static_cast<size_t>(v + 7)) * 1099511628211ull;
    return h;
}

Cocycle1 trivial_cocycle(const FiniteGroup& gamma, const CrossedModule& x)
{
    return {std::vector<int>(gamma.order, x.G.identity), std::vector<int>(gamma.order * gamma.order, x.H.identity)};
}

Report validate_cocycle(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c)
{
    Report r;
    const int q = gamma.order;
    const FiniteGroup &H = x.H, &G = x.G;
    if (static_cast<int>(c.alpha.size()) != q || static_cast<int>(c.u.size()) != q * q) {
        r.push_back({"cocycle table size mismatch", {}});
        return r;
    }
    for (int v : c.alpha) {
        if (v < 0 || v >= G.order) {
            r.push_back({"alpha value out of range", {}});
            return r;
        }
    }
    for (int v : c.u) {
        if (v < 0 || v >= H.order) {
            r.push_back({"u value out of range", {}});
            return r;
        }
    }
    const int e = gamma.identity;
    if (c.alpha[e] != G.identity) r.push_back({"not normalized: alpha_e != 1", {e}});
    for (int g = 0; g < q; ++g) {
        if (c.u[g * q + e] != H.identity || c.u[e * q + g] != H.identity)
            r.push_back({"not normalized: u with identity argument", {g}});
    }
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            if (G.m(c.alpha[g], c.alpha[h]) != G.m(x.bd(c.u[g * q + h]), c.alpha[gamma.m(g, h)]))
                r.push_back({"alpha equation fails", {g, h}});
        }
    }
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            for (int k = 0; k < q; ++k) {
                int lhs = H.m(x.act(c.alpha[g], c.u[h * q + k]), c.u[g * q + gamma.m(h, k)]);
                int rhs = H.m(c.u[g * q + h], c.u[gamma.m(g, h) * q + k]);
                if (lhs != rhs) r.push_back({"u equation fails", {g, h, k}});
            }
        }
    }
    return r;
}

Cocycle1 transform(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c, const Coboundary1Witness& w)
{
    const int q = gamma.order;
    const FiniteGroup &H = x.H, &G = x.G;
    const int ga = w.gamma, gi = G.inverse(w.gamma);
    Cocycle1 out;
    out.alpha.resize(q);
    out.u.resize(q * q);
    for (int g = 0; g < q; ++g) out.alpha[g] = G.m(x.bd(w.w[g]), G.m(G.m(ga, c.alpha[g]), gi));
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            int inner = H.m(x.act(c.alpha[g], x.act(gi, w.w[h])), c.u[g * q + h]);
            out.u[g * q + h] = H.m(H.m(w.w[g], x.act(ga, inner)), H.inverse(w.w[gamma.m(g, h)]));
        }
    }
    return out;
}

Report check_witness(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& a, const Cocycle1& b,
                     const Coboundary1Witness& w)
{
    Report r;
    const int q = gamma.order;
    if (static_cast<int>(w.w.size()) != q || w.gamma < 0 || w.gamma >= x.G.order) {
        r.push_back({"witness shape mismatch", {}});
        return r;
    }
    Cocycle1 t = transform(gamma, x, a, w);
    for (int g = 0; g < q; ++g) {
        if (t.alpha[g] != b.alpha[g]) r.push_back({"witness fails the alpha equation", {g}});
    }
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            if (t.u[g * q + h] != b.u[g * q + h]) r.push_back({"witness fails the u equation", {g, h}});
        }
    }
    return r;
}

Coboundary1Witness invert_witness(const FiniteGroup& gamma, const CrossedModule& x, const Coboundary1Witness& w)
{
    Coboundary1Witness out;
    out.gamma = x.G.inverse(w.gamma);
    out.w.resize(gamma.order);
    for (int g = 0; g < gamma.order; ++g) out.w[g] = x.act(out.gamma, x.H.inverse(w.w[g]));
    return out;
}

Coboundary1Witness compose_witness(const FiniteGroup& gamma, const CrossedModule& x, const Coboundary1Witness& first,
                                   const Coboundary1Witness& second)
{
    Coboundary1Witness out;
    out.gamma = x.G.m(second.gamma, first.gamma);
    out.w.resize(gamma.order);
    for (int g = 0; g < gamma.order; ++g) out.w[g] = x.H.m(second.w[g], x.act(second.gamma, first.w[g]));
    return out;
}

namespace {

// Preimages of each element of G under the boundary, ascending.
std::vector<std::vector<int>> fibers(const CrossedModule& x)
{
    std::vector<std::vector<int>> f(x.G.order);
    for (int h = 0; h < x.H.order; ++h) f[x.bd(h)].push_back(h);
    return f;
}

// Non-identity elements of Gamma in order.
std::vector<int> nonidentity(const FiniteGroup& gamma)
{
    std::vector<int> v;
    for (int g = 0; g < gamma.order; ++g) {
        if (g != gamma.identity) v.push_back(g);
    }
    return v;
}

void check_budget(double space, double budget, const std::string& what)
{
    if (space > budget) {
        std::ostringstream os;
        os << what << ": search space " << space << " exceeds budget " << budget;
        throw ResourceError(os.str());
    }
}

}  // namespace

std::vector<Cocycle1> enumerate_Z1(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt)
{
    check_xmod_shape(x);
    const int q = gamma.order, e = gamma.identity;
    const FiniteGroup &H = x.H, &G = x.G;
    const auto fib = fibers(x);
    const int ker = static_cast<int>(fib[G.identity].size());
    check_budget(std::pow(static_cast<double>(G.order), q - 1) * std::pow(static_cast<double>(ker), (q - 1.0) * (q - 1.0)),
                 opt.budget, "enumerate_Z1");

    const auto ne = nonidentity(gamma);
    std::vector<int> rank(q, -1);  // position of g among non-identity elements
    for (size_t i = 0; i < ne.size(); ++i) rank[ne[i]] = static_cast<int>(i);

    // Alpha pairs (a, b) become checkable once max(rank a, rank b, rank ab) is assigned.
    std::vector<std::vector<std::pair<int, int>>> alpha_checks(ne.size());
    for (int a : ne) {
        for (int b : ne) {
            int ab = gamma.m(a, b);
            int last = std::max({rank[a], rank[b], ab == e ? -1 : rank[ab]});
            alpha_checks[last].push_back({a, b});
        }
    }
    // u variables: pairs of non-identity elements, lexicographic.
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> pair_pos(q * q, -1);
    for (int a : ne) {
        for (int b : ne) {
            pair_pos[a * q + b] = static_cast<int>(pairs.size());
            pairs.push_back({a, b});
        }
    }
    std::vector<std::vector<std::array<int, 3>>> u_checks(pairs.size());
    for (int g : ne) {
        for (int h : ne) {
            for (int k : ne) {
                int hk = gamma.m(h, k), gh = gamma.m(g, h);
                int last = std::max({pair_pos[h * q + k], pair_pos[g * q + h],
                                     hk == e ? -1 : pair_pos[g * q + hk], gh == e ? -1 : pair_pos[gh * q + k]});
                u_checks[last].push_back({g, h, k});
            }
        }
    }

    std::vector<Cocycle1> out;
    Cocycle1 c = trivial_cocycle(gamma, x);
    auto alpha_ok = [&](size_t pos) {
        for (auto [a, b] : alpha_checks[pos]) {
            int t = G.m(G.m(c.alpha[a], c.alpha[b]), G.inverse(c.alpha[gamma.m(a, b)]));
            if (fib[t].empty()) return false;
        }
        return true;
    };
    auto u_ok = [&](size_t pos) {
        for (auto [g, h, k] : u_checks[pos]) {
            int lhs = H.m(x.act(c.alpha[g], c.u[h * q + k]), c.u[g * q + gamma.m(h, k)]);
            int rhs = H.m(c.u[g * q + h], c.u[gamma.m(g, h) * q + k]);
            if (lhs != rhs) return false;
        }
        return true;
    };
    std::function<void(size_t)> assign_u = [&](size_t pos) {
        if (pos == pairs.size()) {
            out.push_back(c);
            return;
        }
        auto [a, b] = pairs[pos];
        int t = G.m(G.m(c.alpha[a], c.alpha[b]), G.inverse(c.alpha[gamma.m(a, b)]));
        for (int h : fib[t]) {
            c.u[a * q + b] = h;
            if (u_ok(pos)) assign_u(pos + 1);
        }
        c.u[a * q + b] = H.identity;
    };
    std::function<void(size_t)> assign_alpha = [&](size_t pos) {
        if (pos == ne.size()) {
            assign_u(0);
            return;
        }
        for (int g = 0; g < G.order; ++g) {
            c.alpha[ne[pos]] = g;
            if (alpha_ok(pos)) assign_alpha(pos + 1);
        }
        c.alpha[ne[pos]] = G.identity;
    };
    assign_alpha(0);
    return out;
}

std::optional<Coboundary1Witness> are_cohomologous(const FiniteGroup& gamma, const CrossedModule& x,
                                                   const Cocycle1& a, const Cocycle1& b, const XModOptions& opt)
{
    check_xmod_shape(x);
    const int q = gamma.order, e = gamma.identity;
    const FiniteGroup &H = x.H, &G = x.G;
    check_budget(static_cast<double>(opt.strict ? 1 : G.order) * std::pow(static_cast<double>(H.order), q - 1),
                 opt.budget, "are_cohomologous");
    const auto fib = fibers(x);
    const auto ne = nonidentity(gamma);
    std::vector<int> rank(q, -1);
    for (size_t i = 0; i < ne.size(); ++i) rank[ne[i]] = static_cast<int>(i);
    // u equation at (g, h) needs w_g, w_h, w_gh.
    std::vector<std::vector<std::pair<int, int>>> checks(ne.size());
    for (int g : ne) {
        for (int h : ne) {
            int gh = gamma.m(g, h);
            checks[std::max({rank[g], rank[h], gh == e ? -1 : rank[gh]})].push_back({g, h});
        }
    }
    Coboundary1Witness w;
    w.w.assign(q, H.identity);
    const int gmax = opt.strict ? 1 : G.order;
    for (int gi = 0; gi < gmax; ++gi) {
        const int ga = opt.strict ? G.identity : gi;
        const int gin = G.inverse(ga);
        w.gamma = ga;
        std::vector<int> target(q);
        bool possible = true;
        for (int g : ne) {
            // d(w_g) = alpha^b_g (gamma alpha^a_g gamma^-1)^-1
            int conj = G.m(G.m(ga, a.alpha[g]), gin);
            target[g] = G.m(b.alpha[g], G.inverse(conj));
            if (fib[target[g]].empty()) possible = false;
        }
        if (!possible) continue;
        auto ok = [&](size_t pos) {
            for (auto [g, h] : checks[pos]) {
                int inner = H.m(x.act(a.alpha[g], x.act(gin, w.w[h])), a.u[g * q + h]);
                int val = H.m(H.m(w.w[g], x.act(ga, inner)), H.inverse(w.w[gamma.m(g, h)]));
                if (val != b.u[g * q + h]) return false;
            }
            return true;
        };
        std::function<bool(size_t)> rec = [&](size_t pos) {
            if (pos == ne.size()) return true;
            int g = ne[pos];
            for (int h : fib[target[g]]) {
                w.w[g] = h;
                if (ok(pos) && rec(pos + 1)) return true;
            }
            w.w[g] = H.identity;
            return false;
        };
        if (rec(0)) return w;
    }
    return std::nullopt;
}

bool is_ff(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c)
{
    std::vector<char> in_image(x.G.order, 0);
    for (int h = 0; h < x.H.order; ++h) in_image[x.bd(h)] = 1;
    for (int g = 0; g < gamma.order; ++g) {
        if (g != gamma.identity && in_image[c.alpha[g]]) return false;
    }
    return true;
}

int H1PointedSet::find(const Cocycle1& c) const
{
    auto it = index.find(c);
    return it == index.end() ? -1 : class_of[it->second];
}

namespace {

H1PointedSet quotient(const FiniteGroup& gamma, const CrossedModule& x, std::vector<Cocycle1> cocycles,
                      const XModOptions& opt)
{
    const int q = gamma.order;
    const FiniteGroup &H = x.H, &G = x.G;
    check_budget(static_cast<double>(opt.strict ? 1 : G.order) * std::pow(static_cast<double>(H.order), q - 1),
                 opt.budget, "compute_H1");
    H1PointedSet s;
    s.cocycles = std::move(cocycles);
    s.class_of.assign(s.cocycles.size(), -1);
    for (size_t i = 0; i < s.cocycles.size(); ++i) s.index[s.cocycles[i]] = static_cast<int>(i);
    const auto ne = nonidentity(gamma);
    for (size_t i = 0; i < s.cocycles.size(); ++i) {
        if (s.class_of[i] >= 0) continue;
        const int cls = static_cast<int>(s.classes.size());
        s.classes.push_back(s.cocycles[i]);
        s.ff.push_back(is_ff(gamma, x, s.cocycles[i]));
        // Orbit under all (gamma, w) with w_e = 1.
        Coboundary1Witness w;
        w.w.assign(q, H.identity);
        const int gmax = opt.strict ? 1 : G.order;
        for (int gi = 0; gi < gmax; ++gi) {
            w.gamma = opt.strict ? G.identity : gi;
            std::vector<int> digits(ne.size(), 0);
            while (true) {
                for (size_t t = 0; t < ne.size(); ++t) w.w[ne[t]] = digits[t];
                Cocycle1 t = transform(gamma, x, s.cocycles[i], w);
                auto it = s.index.find(t);
                if (it == s.index.end())
                    throw ViolationError("compute_H1: transformed cocycle missing from the enumeration");
                s.class_of[it->second] = cls;
                size_t p = 0;
                while (p < digits.size() && ++digits[p] == H.order) digits[p++] = 0;
                if (p == digits.size()) break;
            }
        }
    }
    auto it = s.index.find(trivial_cocycle(gamma, x));
    if (it != s.index.end()) s.basepoint = s.class_of[it->second];
    return s;
}

}  // namespace

H1PointedSet compute_H1(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt)
{
    return quotient(gamma, x, enumerate_Z1(gamma, x, opt), opt);
}

H1PointedSet compute_H1_ff(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt)
{
    auto all = enumerate_Z1(gamma, x, opt);
    std::vector<Cocycle1> ff;
    for (auto& c : all) {
        if (is_ff(gamma, x, c)) ff.push_back(std::move(c));
    }
    return quotient(gamma, x, std::move(ff), opt);
}

Cocycle1 pushforward(const XModMorphism& m, const FiniteGroup& gamma, const Cocycle1& c)
{
    Cocycle1 out;
    out.alpha = compose(m.phi2, c.alpha);
    out.u = compose(m.phi1, c.u);
    Report r = validate_cocycle(gamma, m.target, out);
    if (!r.empty()) throw ViolationError("pushforward produced an invalid cocycle: " + describe(r.front()));
    return out;
}

Cochain u_as_cochain(const FiniteGroup& gamma, const AbelianDecomposition& dec, const std::vector<int>& u)
{
    Coefficients m = Coefficients::finite(dec.factors());
    Cochain z = zero_cochain(gamma, m, 2);
    const int k = z.width;
    for (size_t t = 0; t < u.size(); ++t) {
        const auto& c = dec.coords(u[t]);
        for (int i = 0; i < k; ++i) z.values[t * k + i] = c[i];
    }
    return z;
}

Cocycle1 cochain_as_cocycle(const FiniteGroup& gamma, const AbelianDecomposition& dec, const Cochain& z)
{
    const int q = gamma.order, k = z.width;
    Cocycle1 c;
    c.alpha.assign(q, 0);
    c.u.resize(q * q);
    std::vector<i64> v(k);
    for (int t = 0; t < q * q; ++t) {
        for (int i = 0; i < k; ++i) v[i] = z.values[t * k + i];
        c.u[t] = dec.element(v);
    }
    return c;
}

AbelianShift abelian_shift(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt)
{
    if (x.G.order != 1) throw InputError("abelian_shift: the crossed module must have trivial G");
    if (!x.H.abelian()) throw InputError("abelian_shift: H must be abelian");
    AbelianShift s;
    s.decomposition = AbelianDecomposition(x.H, identity_map(x.H));
    s.module = Coefficients::finite(s.decomposition.factors());
    s.h2 = cohomology(gamma, s.module, 2);
    s.h1 = compute_H1(gamma, x, opt);
    std::vector<std::vector<i64>> seen;
    for (const auto& c : s.h1.classes) {
        s.coords.push_back(s.h2.classify(u_as_cochain(gamma, s.decomposition, c.u)));
        seen.push_back(s.coords.back());
    }
    std::sort(seen.begin(), seen.end());
    bool injective = std::adjacent_find(seen.begin(), seen.end()) == seen.end();
    s.bijective = injective && static_cast<i64>(seen.size()) == s.h2.order();
    return s;
}

}  // namespace xmc
