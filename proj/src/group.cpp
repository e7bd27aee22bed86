#include "xmc/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "xmc/errors.hpp"
#include "xmc/zn.hpp"

namespace xmc {

bool FiniteGroup::abelian() const
{
    for (int a = 0; a < order; ++a) {
        for (int b = a + 1; b < order; ++b) {
            if (m(a, b) != m(b, a)) return false;
        }
    }
    return true;
}

int FiniteGroup::element_order(int a) const
{
    int k = 1;
    for (int x = a; x != identity; x = m(x, a)) ++k;
    return k;
}

std::string describe(const Issue& i)
{
    std::ostringstream os;
    os << i.what;
    if (!i.witness.empty()) {
        os << " at (";
        for (size_t k = 0; k < i.witness.size(); ++k) os << (k ? "," : "") << i.witness[k];
        os << ")";
    }
    return os.str();
}

Report validate_group(const FiniteGroup& g)
{
    Report r;
    const int n = g.order;
    if (n < 1) {
        r.push_back({"order must be positive", {}});
        return r;
    }
    if (static_cast<int>(g.mul.size()) != n * n || static_cast<int>(g.inv.size()) != n) {
        r.push_back({"table size mismatch", {}});
        return r;
    }
    for (int a = 0; a < n * n; ++a) {
        if (g.mul[a] < 0 || g.mul[a] >= n) {
            r.push_back({"product out of range", {a / n, a % n}});
            return r;
        }
    }
    if (g.identity < 0 || g.identity >= n) {
        r.push_back({"identity out of range", {g.identity}});
        return r;
    }
    for (int a = 0; a < n; ++a) {
        if (g.m(g.identity, a) != a || g.m(a, g.identity) != a) r.push_back({"identity law fails", {a}});
        if (g.inv[a] < 0 || g.inv[a] >= n || g.m(a, g.inv[a]) != g.identity || g.m(g.inv[a], a) != g.identity)
            r.push_back({"inverse table inconsistent with multiplication", {a, g.inv[a]}});
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                if (g.m(g.m(a, b), c) != g.m(a, g.m(b, c))) {
                    r.push_back({"associativity fails", {a, b, c}});
                    return r;
                }
            }
        }
    }
    return r;
}

FiniteGroup group_from_table(int order, const std::vector<int>& mul, const std::string& label)
{
    if (order < 1 || static_cast<int>(mul.size()) != order * order)
        throw InputError("group table: expected " + std::to_string(order) + "x" + std::to_string(order) + " entries");
    FiniteGroup g;
    g.order = order;
    g.mul = mul;
    g.label = label;
    g.identity = -1;
    for (int e = 0; e < order && g.identity < 0; ++e) {
        bool ok = true;
        for (int a = 0; a < order && ok; ++a) ok = mul[e * order + a] == a && mul[a * order + e] == a;
        if (ok) g.identity = e;
    }
    if (g.identity < 0) throw InputError("group table: no identity element");
    g.inv.assign(order, -1);
    for (int a = 0; a < order; ++a) {
        for (int b = 0; b < order; ++b) {
            if (mul[a * order + b] == g.identity) {
                g.inv[a] = b;
                break;
            }
        }
        if (g.inv[a] < 0) throw InputError("group table: element " + std::to_string(a) + " has no inverse");
    }
    Report r = validate_group(g);
    if (!r.empty()) throw InputError("group table: " + describe(r.front()));
    return g;
}

FiniteGroup make_cyclic(int n)
{
    if (n < 1) throw InputError("make_cyclic: n must be positive");
    FiniteGroup g;
    g.order = n;
    g.mul.resize(n * n);
    g.inv.resize(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) g.mul[a * n + b] = (a + b) % n;
        g.inv[a] = (n - a) % n;
    }
    g.identity = 0;
    g.label = n == 1 ? "trivial" : "C" + std::to_string(n);
    return g;
}

FiniteGroup make_product(const FiniteGroup& a, const FiniteGroup& b)
{
    FiniteGroup g;
    const int na = a.order, nb = b.order, n = na * nb;
    g.order = n;
    g.mul.resize(n * n);
    g.inv.resize(n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) g.mul[x * n + y] = a.m(x / nb, y / nb) * nb + b.m(x % nb, y % nb);
        g.inv[x] = a.inverse(x / nb) * nb + b.inverse(x % nb);
    }
    g.identity = a.identity * nb + b.identity;
    g.label = a.label + "x" + b.label;
    return g;
}

FiniteGroup make_symmetric3()
{
    std::vector<std::vector<int>> perms;
    std::vector<int> p{0, 1, 2};
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::vector<int> mul(36);
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            std::vector<int> c(3);
            for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
            mul[a * 6 + b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    }
    return group_from_table(6, mul, "S3");
}

FiniteGroup make_quaternion()
{
    // index 2*u + s: unit u in {1, i, j, k}, sign s (1 = negative)
    static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<int> mul(64);
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            int ua = a / 2, ub = b / 2;
            int s = (a % 2) ^ (b % 2) ^ sign[ua][ub];
            mul[a * 8 + b] = 2 * unit[ua][ub] + s;
        }
    }
    return group_from_table(8, mul, "Q8");
}

FiniteGroup make_trivial() { return make_cyclic(1); }

FiniteGroup named_group(const std::string& name)
{
    if (name == "trivial" || name == "1") return make_trivial();
    if (name == "S3") return make_symmetric3();
    if (name == "Q8") return make_quaternion();
    size_t x = name.find('x');
    if (x != std::string::npos) {
        FiniteGroup g = make_product(named_group(name.substr(0, x)), named_group(name.substr(x + 1)));
        g.label = name;
        return g;
    }
    if (name.size() >= 2 && name[0] == 'C') {
        try {
            size_t used = 0;
            int n = std::stoi(name.substr(1), &used);
            if (used == name.size() - 1 && n >= 1 && n <= 4096) return make_cyclic(n);
        } catch (const std::exception&) {
        }
    }
    throw InputError("unknown group name '" + name + "'");
}

FiniteGroup relabel(const FiniteGroup& g, const std::vector<int>& perm)
{
    const int n = g.order;
    FiniteGroup h;
    h.order = n;
    h.mul.resize(n * n);
    h.inv.resize(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) h.mul[perm[a] * n + perm[b]] = perm[g.m(a, b)];
        h.inv[perm[a]] = perm[g.inverse(a)];
    }
    h.identity = perm[g.identity];
    h.label = g.label;
    return h;
}

Report validate_hom(const FiniteGroup& src, const FiniteGroup& dst, const std::vector<int>& map)
{
    Report r;
    if (static_cast<int>(map.size()) != src.order) {
        r.push_back({"homomorphism table size mismatch", {}});
        return r;
    }
    for (int a = 0; a < src.order; ++a) {
        if (map[a] < 0 || map[a] >= dst.order) {
            r.push_back({"homomorphism value out of range", {a}});
            return r;
        }
    }
    if (map[src.identity] != dst.identity) r.push_back({"identity not preserved", {src.identity}});
    for (int a = 0; a < src.order; ++a) {
        for (int b = 0; b < src.order; ++b) {
            if (map[src.m(a, b)] != dst.m(map[a], map[b])) {
                r.push_back({"not multiplicative", {a, b}});
                return r;
            }
        }
    }
    return r;
}

std::vector<int> identity_map(const FiniteGroup& g)
{
    std::vector<int> v(g.order);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<int> compose(const std::vector<int>& outer, const std::vector<int>& inner)
{
    std::vector<int> v(inner.size());
    for (size_t i = 0; i < inner.size(); ++i) v[i] = outer[inner[i]];
    return v;
}

std::vector<int> image_of(const std::vector<int>& map)
{
    std::vector<int> v = map;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<int> kernel_of(const std::vector<int>& map, const FiniteGroup& dst)
{
    std::vector<int> v;
    for (size_t i = 0; i < map.size(); ++i) {
        if (map[i] == dst.identity) v.push_back(static_cast<int>(i));
    }
    return v;
}

std::pair<FiniteGroup, std::vector<int>> quotient(const FiniteGroup& g, const std::vector<int>& normal,
                                                  const std::string& label)
{
    std::vector<int> proj(g.order, -1);
    std::vector<int> reps;
    for (int a = 0; a < g.order; ++a) {
        if (proj[a] >= 0) continue;
        const int c = static_cast<int>(reps.size());
        reps.push_back(a);
        for (int n : normal) {
            int b = g.m(a, n);
            if (proj[b] >= 0 && proj[b] != c) throw InputError("quotient: subgroup is not a subgroup");
            proj[b] = c;
        }
    }
    const int q = static_cast<int>(reps.size());
    if (static_cast<long>(q) * static_cast<long>(normal.size()) != g.order)
        throw InputError("quotient: subgroup is not a subgroup");
    std::vector<int> mul(q * q);
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) mul[a * q + b] = proj[g.m(reps[a], reps[b])];
    }
    FiniteGroup out = group_from_table(q, mul, label);
    if (!validate_hom(g, out, proj).empty()) throw InputError("quotient: subgroup is not normal");
    return {out, proj};
}

AbelianDecomposition::AbelianDecomposition(const FiniteGroup& g, const std::vector<int>& subgroup)
{
    elements_ = subgroup;
    std::sort(elements_.begin(), elements_.end());
    std::vector<char> member(g.order, 0);
    for (int x : elements_) member[x] = 1;
    if (!member[g.identity]) throw InputError("abelian decomposition: subgroup lacks the identity");
    for (int a : elements_) {
        for (int b : elements_) {
            if (!member[g.m(a, b)]) throw InputError("abelian decomposition: subset not closed");
            if (g.m(a, b) != g.m(b, a))
                throw InputError("abelian decomposition: elements " + std::to_string(a) + " and " +
                                 std::to_string(b) + " do not commute");
        }
    }

    // Greedy generating set.
    std::vector<int> gens;
    std::vector<char> reached(g.order, 0);
    reached[g.identity] = 1;
    std::vector<int> span{g.identity};
    for (int x : elements_) {
        if (reached[x]) continue;
        gens.push_back(x);
        std::vector<int> next = span;
        for (size_t i = 0; i < next.size(); ++i) {
            int y = g.m(next[i], x);
            if (!reached[y]) {
                reached[y] = 1;
                next.push_back(y);
            }
        }
        span = std::move(next);
    }

    zn::i64 n = 1;
    for (int x : elements_) n = zn::lcm(n, g.element_order(x));
    const int r = static_cast<int>(gens.size());
    coords_.assign(g.order, {});
    if (r == 0) {
        coords_[g.identity] = {};
        by_code_ = {g.identity};
        return;
    }

    // Words for every element, then relations vec(h) + e_t - vec(h g_t).
    std::vector<std::vector<zn::i64>> vec(g.order);
    std::vector<int> queue{g.identity};
    vec[g.identity].assign(r, 0);
    for (size_t q = 0; q < queue.size(); ++q) {
        int h = queue[q];
        for (int t = 0; t < r; ++t) {
            int y = g.m(h, gens[t]);
            if (!vec[y].empty()) continue;
            vec[y] = vec[h];
            vec[y][t] = (vec[y][t] + 1) % n;
            queue.push_back(y);
        }
    }
    std::vector<std::vector<zn::i64>> rels;
    for (int h : elements_) {
        for (int t = 0; t < r; ++t) {
            int y = g.m(h, gens[t]);
            std::vector<zn::i64> row(r);
            bool nonzero = false;
            for (int c = 0; c < r; ++c) {
                row[c] = zn::mod(vec[h][c] + (c == t ? 1 : 0) - vec[y][c], n);
                nonzero = nonzero || row[c] != 0;
            }
            if (nonzero) rels.push_back(std::move(row));
        }
    }
    zn::Mat R(static_cast<int>(rels.size()), r);
    for (size_t i = 0; i < rels.size(); ++i) {
        for (int c = 0; c < r; ++c) R(static_cast<int>(i), c) = rels[i][c];
    }
    R = zn::row_compress(R, n);
    zn::Smith s = zn::smith(R, n, false, true);
    if (R.rows == 0) s.Q = zn::Mat::identity(r);
    std::vector<int> keep;
    std::vector<zn::i64> d(r);
    for (int i = 0; i < r; ++i) {
        d[i] = i < static_cast<int>(s.diag.size()) ? s.diag[i] : n;
        if (d[i] != 1) keep.push_back(i);
    }
    for (int i : keep) factors_.push_back(d[i]);
    for (int h : elements_) {
        std::vector<zn::i64> c;
        for (int i : keep) {
            zn::i64 acc = 0;
            for (int t = 0; t < r; ++t) acc = zn::mod(acc + vec[h][t] * s.Q(t, i), n);
            c.push_back(acc % d[i]);
        }
        coords_[h] = std::move(c);
    }
    zn::i64 total = 1;
    for (auto f : factors_) total *= f;
    if (total != static_cast<zn::i64>(elements_.size()))
        throw ViolationError("abelian decomposition: order mismatch");
    by_code_.assign(total, -1);
    for (int h : elements_) by_code_[encode(coords_[h])] = h;
}

std::int64_t AbelianDecomposition::encode(const std::vector<std::int64_t>& c) const
{
    std::int64_t code = 0;
    for (size_t i = 0; i < factors_.size(); ++i) code = code * factors_[i] + zn::mod(c[i], factors_[i]);
    return code;
}

bool AbelianDecomposition::contains(int element) const
{
    return std::binary_search(elements_.begin(), elements_.end(), element);
}

const std::vector<std::int64_t>& AbelianDecomposition::coords(int element) const
{
    if (!contains(element)) throw ViolationError("abelian decomposition: element outside the subgroup");
    return coords_[element];
}

int AbelianDecomposition::element(const std::vector<std::int64_t>& c) const
{
    if (factors_.empty()) return by_code_[0];
    return by_code_[encode(c)];
}

}  // namespace xmc
