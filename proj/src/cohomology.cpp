#include "xmc/cohomology.hpp"

#include <algorithm>
#include <sstream>

#include "xmc/errors.hpp"

namespace xmc {

using zn::Mat;

Rational make_rational(i64 p, i64 q)
{
    if (q <= 0) throw InputError("rational with non-positive denominator");
    p = zn::mod(p, q);
    i64 g = zn::gcd(p, q);
    if (p == 0) return {0, 1};
    return {p / g, q / g};
}

std::string to_string(const Rational& r)
{
    return std::to_string(r.p) + "/" + std::to_string(r.q);
}

Coefficients Coefficients::finite(std::vector<i64> factors)
{
    Coefficients m;
    m.kind = Kind::Finite;
    m.factors = std::move(factors);
    return m;
}

Coefficients Coefficients::circle()
{
    Coefficients m;
    m.kind = Kind::Circle;
    return m;
}

bool Coefficients::trivial_action() const
{
    if (circle_kind()) return std::all_of(sign.begin(), sign.end(), [](int s) { return s == 1; });
    const int k = width();
    for (const auto& a : action) {
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                if (zn::mod(a[i * k + j] - (i == j ? 1 : 0), factors[i]) != 0) return false;
            }
        }
    }
    return true;
}

std::vector<i64> Coefficients::act(int g, const std::vector<i64>& x) const
{
    const int k = width();
    if (action.empty()) return x;
    std::vector<i64> y(k, 0);
    const auto& a = action[g];
    for (int i = 0; i < k; ++i) {
        __int128 acc = 0;
        for (int j = 0; j < k; ++j) acc += static_cast<__int128>(a[i * k + j]) * x[j];
        y[i] = static_cast<i64>(((acc % factors[i]) + factors[i]) % factors[i]);
    }
    return y;
}

Report validate_coefficients(const FiniteGroup& gamma, const Coefficients& m)
{
    Report r;
    const int q = gamma.order;
    if (m.circle_kind()) {
        if (m.sign.empty()) return r;
        if (static_cast<int>(m.sign.size()) != q) {
            r.push_back({"circle action: one sign per group element expected", {}});
            return r;
        }
        for (int g = 0; g < q; ++g) {
            if (m.sign[g] != 1 && m.sign[g] != -1) r.push_back({"circle action: sign must be +1 or -1", {g}});
        }
        if (!r.empty()) return r;
        for (int g = 0; g < q; ++g) {
            for (int h = 0; h < q; ++h) {
                if (m.sign[gamma.m(g, h)] != m.sign[g] * m.sign[h]) {
                    r.push_back({"circle action: not a homomorphism", {g, h}});
                    return r;
                }
            }
        }
        return r;
    }
    const int k = m.width();
    for (int i = 0; i < k; ++i) {
        if (m.factors[i] < 2) r.push_back({"invariant factors must exceed 1", {i}});
        if (i + 1 < k && m.factors[i + 1] % m.factors[i] != 0) r.push_back({"invariant factors must divide", {i}});
    }
    if (!r.empty() || m.action.empty()) return r;
    if (static_cast<int>(m.action.size()) != q) {
        r.push_back({"action: one matrix per group element expected", {}});
        return r;
    }
    for (int g = 0; g < q; ++g) {
        if (static_cast<int>(m.action[g].size()) != k * k) {
            r.push_back({"action: matrix has wrong size", {g}});
            return r;
        }
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                if ((m.action[g][i * k + j] * m.factors[j]) % m.factors[i] != 0)
                    r.push_back({"action: matrix entry not well defined on the module", {g, i, j}});
            }
        }
    }
    if (!r.empty()) return r;
    std::vector<std::vector<i64>> basis(k, std::vector<i64>(k, 0));
    for (int i = 0; i < k; ++i) basis[i][i] = 1;
    for (int i = 0; i < k; ++i) {
        if (m.act(gamma.identity, basis[i]) != basis[i]) {
            r.push_back({"action: identity does not act trivially", {gamma.identity}});
            return r;
        }
    }
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            for (int i = 0; i < k; ++i) {
                if (m.act(g, m.act(h, basis[i])) != m.act(gamma.m(g, h), basis[i])) {
                    r.push_back({"action: not a homomorphism", {g, h}});
                    return r;
                }
            }
        }
    }
    return r;
}

size_t Cochain::entries() const
{
    size_t e = 1;
    for (int i = 0; i < degree; ++i) e *= group_order;
    return e;
}

Rational Cochain::circle_value(size_t tuple) const { return make_rational(values[tuple], denom); }

bool Cochain::operator==(const Cochain& o) const
{
    return degree == o.degree && group_order == o.group_order && width == o.width && denom == o.denom &&
           values == o.values;
}

Cochain zero_cochain(const FiniteGroup& gamma, const Coefficients& m, int degree)
{
    Cochain c;
    c.degree = degree;
    c.group_order = gamma.order;
    c.width = m.width();
    c.values.assign(c.entries() * c.width, 0);
    return c;
}

size_t tuple_index(const std::vector<int>& args, int order)
{
    size_t t = 0;
    for (int a : args) t = t * order + a;
    return t;
}

std::vector<int> tuple_args(size_t index, int degree, int order)
{
    std::vector<int> a(degree);
    for (int i = degree - 1; i >= 0; --i) {
        a[i] = static_cast<int>(index % order);
        index /= order;
    }
    return a;
}

Cochain canonical(const Coefficients& m, Cochain c)
{
    if (m.circle_kind()) {
        i64 g = c.denom;
        for (auto& v : c.values) {
            v = zn::mod(v, c.denom);
            g = zn::gcd(g, v);
        }
        if (g > 1) {
            for (auto& v : c.values) v /= g;
            c.denom /= g;
        }
        return c;
    }
    const int k = c.width;
    for (size_t i = 0; i < c.values.size(); ++i) c.values[i] = zn::mod(c.values[i], m.factors[i % k]);
    return c;
}

bool is_normalized(const FiniteGroup& gamma, const Cochain& c)
{
    const size_t e = c.entries();
    for (size_t t = 0; t < e; ++t) {
        auto a = tuple_args(t, c.degree, c.group_order);
        if (std::find(a.begin(), a.end(), gamma.identity) == a.end()) continue;
        for (int i = 0; i < c.width; ++i) {
            if (c.values[t * c.width + i] != 0) return false;
        }
    }
    return true;
}

namespace {

void check_shape(const FiniteGroup& gamma, const Coefficients& m, const Cochain& c)
{
    if (c.group_order != gamma.order || c.width != m.width() || c.values.size() != c.entries() * c.width)
        throw InputError("cochain shape does not match group and module");
    if (m.circle_kind() && c.denom < 1) throw InputError("cochain denominator must be positive");
}

// Bring two circle cochains to a common denominator.
i64 common_denom(const Cochain& a, const Cochain& b) { return zn::lcm(a.denom, b.denom); }

Cochain rescale(const Cochain& c, i64 denom)
{
    Cochain out = c;
    i64 f = denom / c.denom;
    for (auto& v : out.values) v = zn::mod(v * f, denom);
    out.denom = denom;
    return out;
}

}  // namespace

Cochain add(const Coefficients& m, const Cochain& a, const Cochain& b, i64 sign_b)
{
    if (a.degree != b.degree || a.group_order != b.group_order || a.width != b.width)
        throw InputError("cochain shapes differ");
    if (m.circle_kind()) {
        i64 d = common_denom(a, b);
        Cochain x = rescale(a, d), y = rescale(b, d);
        for (size_t i = 0; i < x.values.size(); ++i) x.values[i] = x.values[i] + sign_b * y.values[i];
        return canonical(m, x);
    }
    Cochain x = a;
    for (size_t i = 0; i < x.values.size(); ++i) x.values[i] += sign_b * b.values[i];
    return canonical(m, x);
}

Cochain bar_differential(const FiniteGroup& gamma, const Coefficients& m, const Cochain& c)
{
    check_shape(gamma, m, c);
    if (!m.circle_kind() && !m.action.empty() && static_cast<int>(m.action.size()) != gamma.order)
        throw InputError("coefficient module: action missing for some group element");
    if (m.circle_kind() && !m.sign.empty() && static_cast<int>(m.sign.size()) != gamma.order)
        throw InputError("coefficient module: action missing for some group element");
    const int n = c.degree, q = gamma.order, k = c.width;
    Cochain d = c;
    d.degree = n + 1;
    d.values.assign(d.entries() * k, 0);
    std::vector<i64> acc(k), x(k);
    std::vector<int> sub(n);
    for (size_t t = 0; t < d.entries(); ++t) {
        auto a = tuple_args(t, n + 1, q);
        std::fill(acc.begin(), acc.end(), 0);
        auto value = [&](const std::vector<int>& args) {
            size_t idx = tuple_index(args, q) * k;
            for (int i = 0; i < k; ++i) x[i] = c.values[idx + i];
        };
        // g1 . c(g2, ..., g_{n+1})
        for (int i = 0; i < n; ++i) sub[i] = a[i + 1];
        value(sub);
        if (m.circle_kind()) {
            acc[0] += m.sign_of(a[0]) * x[0];
        } else {
            auto y = m.act(a[0], x);
            for (int i = 0; i < k; ++i) acc[i] += y[i];
        }
        for (int j = 1; j <= n; ++j) {
            int s = 0;
            for (int i = 0; i < n + 1; ++i) {
                if (i == j - 1) {
                    sub[s++] = gamma.m(a[i], a[i + 1]);
                    ++i;
                } else {
                    sub[s++] = a[i];
                }
            }
            value(sub);
            i64 sg = (j % 2) ? -1 : 1;
            for (int i = 0; i < k; ++i) acc[i] += sg * x[i];
        }
        for (int i = 0; i < n; ++i) sub[i] = a[i];
        value(sub);
        i64 sg = ((n + 1) % 2) ? -1 : 1;
        for (int i = 0; i < k; ++i) acc[i] += sg * x[i];
        for (int i = 0; i < k; ++i) d.values[t * k + i] = acc[i];
    }
    return canonical(m, d);
}

std::optional<std::vector<int>> cocycle_failure(const FiniteGroup& gamma, const Coefficients& m, const Cochain& z)
{
    Cochain d = bar_differential(gamma, m, z);
    for (size_t t = 0; t < d.entries(); ++t) {
        for (int i = 0; i < d.width; ++i) {
            if (d.values[t * d.width + i] != 0) return tuple_args(t, d.degree, d.group_order);
        }
    }
    return std::nullopt;
}

namespace {

// A module realized inside (Z/N)^k: y_i = scale_i * x_i, action by y-matrices.
struct LevelModule {
    i64 N = 1;
    int k = 0;
    std::vector<Mat> act;  // per element, k x k
};

LevelModule finite_level(const FiniteGroup& gamma, const Coefficients& m)
{
    LevelModule L;
    L.k = m.width();
    L.N = L.k ? m.factors.back() : 1;
    L.act.assign(gamma.order, Mat::identity(L.k));
    if (!m.action.empty()) {
        for (int g = 0; g < gamma.order; ++g) {
            Mat b(L.k, L.k);
            for (int i = 0; i < L.k; ++i) {
                for (int j = 0; j < L.k; ++j) {
                    i64 a = zn::mod(m.action[g][i * L.k + j], L.N);
                    b(i, j) = zn::mod(static_cast<i64>(static_cast<__int128>(a) * m.factors[j] / m.factors[i] % L.N), L.N);
                }
            }
            L.act[g] = b;
        }
    }
    return L;
}

std::vector<i64> finite_scales(const Coefficients& m)
{
    std::vector<i64> s;
    for (i64 d : m.factors) s.push_back(m.factors.back() / d);
    return s;
}

LevelModule circle_level(const FiniteGroup& gamma, const Coefficients& m, i64 N)
{
    LevelModule L;
    L.k = 1;
    L.N = N;
    L.act.assign(gamma.order, Mat::identity(1));
    for (int g = 0; g < gamma.order; ++g) L.act[g](0, 0) = zn::mod(m.sign_of(g), N);
    return L;
}

struct Tuples {
    std::vector<size_t> full;  // normalized position -> full index
    std::vector<int> pos;      // full index -> normalized position or -1
};

Tuples normalized_tuples(const FiniteGroup& gamma, int n)
{
    Tuples t;
    size_t total = 1;
    for (int i = 0; i < n; ++i) total *= gamma.order;
    t.pos.assign(total, -1);
    for (size_t i = 0; i < total; ++i) {
        auto a = tuple_args(i, n, gamma.order);
        if (std::find(a.begin(), a.end(), gamma.identity) != a.end()) continue;
        t.pos[i] = static_cast<int>(t.full.size());
        t.full.push_back(i);
    }
    return t;
}

// Coboundary C^n -> C^{n+1} on normalized cochains in y-coordinates.
Mat coboundary_matrix(const FiniteGroup& gamma, const LevelModule& L, int n)
{
    const int q = gamma.order, k = L.k;
    Tuples src = normalized_tuples(gamma, n), dst = normalized_tuples(gamma, n + 1);
    Mat D(static_cast<int>(dst.full.size()) * k, static_cast<int>(src.full.size()) * k);
    std::vector<int> sub(n);
    auto add_block = [&](int row, const std::vector<int>& args, const Mat* block, i64 sign) {
        int p = src.pos[tuple_index(args, q)];
        if (p < 0) return;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                i64 v = block ? (*block)(i, j) : (i == j ? 1 : 0);
                if (v == 0) continue;
                i64& e = D(row * k + i, p * k + j);
                e = zn::mod(e + sign * v, L.N);
            }
        }
    };
    for (size_t r = 0; r < dst.full.size(); ++r) {
        auto a = tuple_args(dst.full[r], n + 1, q);
        int row = static_cast<int>(r);
        for (int i = 0; i < n; ++i) sub[i] = a[i + 1];
        add_block(row, sub, &L.act[a[0]], 1);
        for (int j = 1; j <= n; ++j) {
            int s = 0;
            bool degenerate = false;
            for (int i = 0; i < n + 1; ++i) {
                if (i == j - 1) {
                    sub[s] = gamma.m(a[i], a[i + 1]);
                    degenerate = sub[s] == gamma.identity;
                    ++s;
                    ++i;
                } else {
                    sub[s++] = a[i];
                }
            }
            if (!degenerate) add_block(row, sub, nullptr, (j % 2) ? -1 : 1);
        }
        for (int i = 0; i < n; ++i) sub[i] = a[i];
        add_block(row, sub, nullptr, ((n + 1) % 2) ? -1 : 1);
    }
    return D;
}

Mat scale_columns(Mat A, const std::vector<i64>& scale, i64 N)
{
    const int k = static_cast<int>(scale.size());
    if (k == 0) return A;
    for (int r = 0; r < A.rows; ++r) {
        for (int c = 0; c < A.cols; ++c) A(r, c) = zn::mod(static_cast<i64>(static_cast<__int128>(A(r, c)) * scale[c % k] % N), N);
    }
    return A;
}

Mat hcat(const Mat& a, const Mat& b)
{
    if (a.cols == 0) return b;
    if (b.cols == 0) return a;
    Mat c(a.rows, a.cols + b.cols);
    for (int r = 0; r < a.rows; ++r) {
        for (int j = 0; j < a.cols; ++j) c(r, j) = a(r, j);
        for (int j = 0; j < b.cols; ++j) c(r, a.cols + j) = b(r, j);
    }
    return c;
}

Mat transpose(const Mat& a)
{
    Mat t(a.cols, a.rows);
    for (int r = 0; r < a.rows; ++r) {
        for (int c = 0; c < a.cols; ++c) t(c, r) = a(r, c);
    }
    return t;
}

void guard(const FiniteGroup& gamma, int width, int n, const CohomologyOptions& opt)
{
    double dim = std::max(1, width);
    for (int i = 0; i <= n; ++i) dim *= gamma.order;
    if (dim > static_cast<double>(opt.max_dim)) {
        std::ostringstream os;
        os << "cochain dimension " << static_cast<long long>(dim) << " exceeds bound " << opt.max_dim
           << " (width * |Gamma|^(n+1))";
        throw ResourceError(os.str());
    }
}

}  // namespace

struct CohomologyGroup::Level {
    LevelModule mod;
    int n = 0;
    Tuples tuples;
    std::vector<i64> zscale;
    zn::Submodule Z;
    Mat P2, P2inv;
    std::vector<int> keep;
    std::vector<i64> factors;
    std::vector<std::vector<i64>> basis;  // y-vectors of the generators
    zn::Howell reducer;
    bool trivial = false;

    std::vector<i64> coords(const std::vector<i64>& y) const
    {
        if (trivial) return {};
        if (!Z.contains(y)) throw ViolationError("cocycle lies outside the computed cocycle module");
        auto c = Z.coords(y);
        auto qv = zn::apply(P2, c, mod.N);
        std::vector<i64> out;
        for (size_t j = 0; j < keep.size(); ++j) out.push_back(qv[keep[j]] % factors[j]);
        return out;
    }
};

namespace {

using Level = CohomologyGroup::Level;

// zscale: cocycles are taken with values in scale*Z/N; bscale: coboundaries of
// cochains with values in bscale*Z/N. rep_scale > 1 confines representatives to
// multiples of rep_scale (the boundary part used for reduction is intersected).
std::shared_ptr<Level> build_level(const FiniteGroup& gamma, const LevelModule& mod, const std::vector<i64>& zscale,
                                   const std::vector<i64>& bscale, int n, i64 rep_scale)
{
    auto L = std::make_shared<Level>();
    L->mod = mod;
    L->n = n;
    L->tuples = normalized_tuples(gamma, n);
    L->zscale = zscale;
    const i64 N = mod.N;
    const int dim = static_cast<int>(L->tuples.full.size()) * mod.k;
    if (dim == 0 || N == 1) {
        L->trivial = true;
        return L;
    }
    Mat Dn = coboundary_matrix(gamma, mod, n);
    Mat K = zn::kernel(scale_columns(Dn, zscale, N), N);
    Mat zg = K;
    for (int r = 0; r < zg.rows; ++r) {
        for (int c = 0; c < zg.cols; ++c)
            zg(r, c) = zn::mod(static_cast<i64>(static_cast<__int128>(zg(r, c)) * zscale[r % mod.k] % N), N);
    }
    Mat bg(dim, 0);
    Mat Dprev;
    if (n >= 1) {
        Dprev = coboundary_matrix(gamma, mod, n - 1);
        bg = scale_columns(Dprev, bscale, N);
    }
    L->Z = zn::Submodule(hcat(zg, bg), N);
    const auto& orders = L->Z.orders();
    const int r = static_cast<int>(orders.size());
    if (r == 0) {
        L->trivial = true;
        return L;
    }
    Mat rel(r, bg.cols + r);
    for (int j = 0; j < bg.cols; ++j) {
        auto c = L->Z.coords(bg.column(j));
        for (int i = 0; i < r; ++i) rel(i, j) = c[i];
    }
    for (int i = 0; i < r; ++i) rel(i, bg.cols + i) = zn::mod(orders[i], N);
    zn::Smith s = zn::smith(rel, N, true, false);
    L->P2 = s.P;
    L->P2inv = s.Pinv;
    for (int i = 0; i < r; ++i) {
        i64 d = s.diag[i];
        if (d == 1) continue;
        L->keep.push_back(i);
        L->factors.push_back(d);
        std::vector<i64> c(r);
        for (int t = 0; t < r; ++t) c[t] = s.Pinv(t, i);
        L->basis.push_back(L->Z.element(c));
    }
    if (L->keep.empty()) {
        L->trivial = true;
        return L;
    }

    if (rep_scale > 1) {
        // Generators must come from the scaled cocycles alone.
        const int rk = static_cast<int>(L->keep.size());
        Mat cz(rk, zg.cols);
        for (int c = 0; c < zg.cols; ++c) {
            auto v = L->coords(zg.column(c));
            for (int j = 0; j < rk; ++j) cz(j, c) = v[j] * (N / L->factors[j]);
        }
        for (int j = 0; j < rk; ++j) {
            std::vector<i64> rhs(rk, 0);
            rhs[j] = N / L->factors[j];
            auto x = zn::solve(cz, rhs, N);
            if (!x) throw ViolationError("circle cohomology: class without a representative at the base level");
            L->basis[j] = zn::apply(zg, *x, N);
        }
    }

    // Boundaries used to reduce representatives to lexicographic minima.
    Mat red = bg;
    if (rep_scale > 1 && n >= 1) {
        Mat Dm = zn::Mat(Dprev.rows, Dprev.cols);
        for (size_t i = 0; i < Dprev.a.size(); ++i) Dm.a[i] = zn::mod(Dprev.a[i], rep_scale);
        Mat Kr = zn::kernel(Dm, rep_scale);
        Mat gens = hcat(Kr, Mat(Dprev.cols, 0));
        Mat lifted(Dprev.cols, gens.cols + Dprev.cols);
        for (int rr = 0; rr < Dprev.cols; ++rr) {
            for (int c = 0; c < gens.cols; ++c) lifted(rr, c) = gens(rr, c);
            lifted(rr, gens.cols + rr) = rep_scale % N;
        }
        red = zn::multiply(Dprev, lifted, N);
    }
    L->reducer = zn::Howell(transpose(red), N);
    return L;
}

std::vector<i64> to_y(const Level& L, const Cochain& z, const std::vector<i64>& scale)
{
    const int k = L.mod.k;
    std::vector<i64> y(L.tuples.full.size() * k);
    for (size_t p = 0; p < L.tuples.full.size(); ++p) {
        for (int i = 0; i < k; ++i) {
            __int128 v = static_cast<__int128>(z.values[L.tuples.full[p] * k + i]) * scale[i];
            y[p * k + i] = static_cast<i64>(((v % L.mod.N) + L.mod.N) % L.mod.N);
        }
    }
    return y;
}

// Fill a normalized cochain from y-coordinates; value = y / divisor (finite) or y / N (circle).
Cochain from_y(const FiniteGroup& gamma, const Coefficients& m, const Tuples& t, int n, int k,
               const std::vector<i64>& y, const std::vector<i64>& divisor, i64 circle_denom)
{
    Cochain c = zero_cochain(gamma, m, n);
    if (m.circle_kind()) c.denom = circle_denom;
    for (size_t p = 0; p < t.full.size(); ++p) {
        for (int i = 0; i < k; ++i) c.values[t.full[p] * k + i] = y[p * k + i] / divisor[i];
    }
    return canonical(m, c);
}

std::vector<i64> unit_scale(int k) { return std::vector<i64>(k, 1); }

}  // namespace

CohomologyGroup cohomology(const FiniteGroup& gamma, const Coefficients& m, int n, const CohomologyOptions& opt)
{
    Report rep = validate_coefficients(gamma, m);
    if (!rep.empty()) throw InputError("coefficient module: " + describe(rep.front()));
    if (n < 0 || n > 4) throw InputError("cohomology degree must lie in 0..4");
    if (m.circle_kind() && n == 0) throw InputError("degree 0 with circle coefficients is not finite");
    guard(gamma, m.width(), n, opt);

    CohomologyGroup h;
    h.gamma_ = gamma;
    h.module_ = m;
    h.opt_ = opt;
    h.n_ = n;
    if (m.circle_kind()) {
        const i64 g = gamma.order;
        auto L = build_level(gamma, circle_level(gamma, m, g * g), {g}, {1}, n, g);
        if (opt.stability_check && g > 1) {
            auto L2 = build_level(gamma, circle_level(gamma, m, g * g * g), {g * g}, {1}, n, 0);
            if (L2->factors != L->factors)
                throw ViolationError("circle cohomology is not stable under refinement of the denominator level");
        }
        h.factors_ = L->factors;
        for (size_t j = 0; j < L->basis.size(); ++j) {
            auto y = L->reducer.reduce(L->basis[j]);
            h.reps_.push_back(from_y(gamma, m, L->tuples, n, 1, y, {1}, g * g));
        }
        h.level_ = L;
        return h;
    }
    auto s = finite_scales(m);
    auto L = build_level(gamma, finite_level(gamma, m), s, s, n, 0);
    h.factors_ = L->factors;
    for (size_t j = 0; j < L->basis.size(); ++j) {
        auto y = L->reducer.reduce(L->basis[j]);
        h.reps_.push_back(from_y(gamma, m, L->tuples, n, m.width(), y, s, 1));
    }
    h.level_ = L;
    return h;
}

i64 CohomologyGroup::order() const
{
    i64 o = 1;
    for (i64 f : factors_) o *= f;
    return o;
}

std::vector<i64> CohomologyGroup::classify(const Cochain& z0) const
{
    if (z0.degree != n_) throw InputError("classify: degree mismatch");
    if (auto f = cocycle_failure(gamma_, module_, z0)) {
        std::ostringstream os;
        os << "classify: not a cocycle at (";
        for (size_t i = 0; i < f->size(); ++i) os << (i ? "," : "") << (*f)[i];
        os << ")";
        throw ViolationError(os.str());
    }
    Cochain z = is_normalized(gamma_, z0) ? canonical(module_, z0) : normalize(gamma_, module_, z0).cocycle;
    const Level& L = *level_;
    if (L.trivial) return {};
    if (!module_.circle_kind()) return L.coords(to_y(L, z, finite_scales(module_)));

    const i64 g = gamma_.order;
    const i64 lz = zn::lcm(z.denom, g);
    if (lz == g) return L.coords(to_y(L, z, {g * g / z.denom}));

    // Finer denominators: compute the same group at level lz and express z in the canonical basis.
    const i64 N2 = lz * g;
    auto F = build_level(gamma_, circle_level(gamma_, module_, N2), {g}, {1}, n_, 0);
    if (F->factors != factors_) throw ViolationError("circle cohomology changed under refinement");
    if (F->trivial) return {};
    const int r = static_cast<int>(factors_.size());
    Mat M(r, r);
    for (int j = 0; j < r; ++j) {
        auto cj = F->coords(to_y(*F, reps_[j], {N2 / reps_[j].denom}));
        for (int i = 0; i < r; ++i) M(i, j) = cj[i] * (N2 / F->factors[i]);
    }
    auto cz = F->coords(to_y(*F, z, {N2 / z.denom}));
    std::vector<i64> rhs(r);
    for (int i = 0; i < r; ++i) rhs[i] = cz[i] * (N2 / F->factors[i]);
    auto x = zn::solve(M, rhs, N2);
    if (!x) throw ViolationError("classify: basis change at finer level failed");
    std::vector<i64> out(r);
    for (int i = 0; i < r; ++i) out[i] = zn::mod((*x)[i], factors_[i]);
    return out;
}

Cochain CohomologyGroup::representative_of(const std::vector<i64>& coords) const
{
    if (coords.size() != factors_.size()) throw InputError("representative_of: wrong number of coordinates");
    const Level& L = *level_;
    if (L.trivial) {
        Cochain c = zero_cochain(gamma_, module_, n_);
        return c;
    }
    std::vector<i64> y(L.basis.empty() ? 0 : L.basis[0].size(), 0);
    for (size_t j = 0; j < coords.size(); ++j) {
        for (size_t t = 0; t < y.size(); ++t) y[t] = zn::mod(y[t] + zn::mod(coords[j], factors_[j]) * L.basis[j][t], L.mod.N);
    }
    y = L.reducer.reduce(y);
    if (module_.circle_kind()) return from_y(gamma_, module_, L.tuples, n_, 1, y, {1}, L.mod.N);
    return from_y(gamma_, module_, L.tuples, n_, module_.width(), y, finite_scales(module_), 1);
}

Normalization normalize(const FiniteGroup& gamma, const Coefficients& m, const Cochain& z0)
{
    check_shape(gamma, m, z0);
    Cochain z = canonical(m, z0);
    const int n = z.degree, q = gamma.order, k = m.width();
    Normalization out;
    out.cocycle = z;
    out.shift = zero_cochain(gamma, m, std::max(0, n - 1));
    if (m.circle_kind()) out.shift.denom = z.denom;
    if (n == 0 || is_normalized(gamma, z)) return out;

    LevelModule L = m.circle_kind() ? circle_level(gamma, m, z.denom) : finite_level(gamma, m);
    std::vector<i64> s = m.circle_kind() ? std::vector<i64>{1} : finite_scales(m);
    const i64 N = L.N;
    // Unknowns: full (n-1)-cochain b in x-coordinates. Equations: (db)(t) = z(t) on degenerate t.
    size_t cols_t = 1;
    for (int i = 0; i < n - 1; ++i) cols_t *= q;
    std::vector<size_t> rows_t;
    for (size_t t = 0; t < z.entries(); ++t) {
        auto a = tuple_args(t, n, q);
        if (std::find(a.begin(), a.end(), gamma.identity) != a.end()) rows_t.push_back(t);
    }
    Mat A(static_cast<int>(rows_t.size()) * k, static_cast<int>(cols_t) * k);
    std::vector<i64> rhs(A.rows);
    std::vector<int> sub(n - 1);
    for (size_t r = 0; r < rows_t.size(); ++r) {
        auto a = tuple_args(rows_t[r], n, q);
        auto add_block = [&](const std::vector<int>& args, const Mat* block, i64 sign) {
            size_t col = tuple_index(args, q);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) {
                    i64 v = block ? (*block)(i, j) : (i == j ? 1 : 0);
                    v = zn::mod(static_cast<i64>(static_cast<__int128>(v) * s[j] % N), N);
                    i64& e = A(static_cast<int>(r) * k + i, static_cast<int>(col) * k + j);
                    e = zn::mod(e + sign * v, N);
                }
            }
        };
        for (int i = 0; i < n - 1; ++i) sub[i] = a[i + 1];
        add_block(sub, &L.act[a[0]], 1);
        for (int j = 1; j <= n - 1; ++j) {
            int p = 0;
            for (int i = 0; i < n; ++i) {
                if (i == j - 1) {
                    sub[p++] = gamma.m(a[i], a[i + 1]);
                    ++i;
                } else {
                    sub[p++] = a[i];
                }
            }
            add_block(sub, nullptr, (j % 2) ? -1 : 1);
        }
        for (int i = 0; i < n - 1; ++i) sub[i] = a[i];
        add_block(sub, nullptr, (n % 2) ? -1 : 1);
        for (int i = 0; i < k; ++i) rhs[r * k + i] = zn::mod(z.values[rows_t[r] * k + i] * s[i], N);
    }
    auto x = zn::solve(A, rhs, N);
    if (!x) throw ViolationError("normalize: no normalizing shift exists (input is not a cocycle)");
    Cochain b = zero_cochain(gamma, m, n - 1);
    if (m.circle_kind()) b.denom = z.denom;
    for (size_t i = 0; i < b.values.size(); ++i) b.values[i] = (*x)[i];
    b = canonical(m, b);
    out.shift = b;
    out.cocycle = add(m, z, bar_differential(gamma, m, b), -1);
    if (!is_normalized(gamma, out.cocycle)) throw ViolationError("normalize: shift failed to normalize");
    return out;
}

std::optional<Cochain> is_coboundary(const FiniteGroup& gamma, const Coefficients& m, const Cochain& z0,
                                     const CohomologyOptions& opt)
{
    Report rep = validate_coefficients(gamma, m);
    if (!rep.empty()) throw InputError("coefficient module: " + describe(rep.front()));
    check_shape(gamma, m, z0);
    if (z0.degree < 1) throw InputError("is_coboundary: degree must be at least 1");
    if (auto f = cocycle_failure(gamma, m, z0)) {
        std::ostringstream os;
        os << "is_coboundary: not a cocycle at (";
        for (size_t i = 0; i < f->size(); ++i) os << (i ? "," : "") << (*f)[i];
        os << ")";
        throw ViolationError(os.str());
    }
    guard(gamma, m.width(), z0.degree - 1, opt);
    Normalization nz = normalize(gamma, m, z0);
    const Cochain& z = nz.cocycle;
    const int n = z.degree, k = m.width();
    LevelModule L;
    std::vector<i64> s, yscale;
    if (m.circle_kind()) {
        const i64 lz = zn::lcm(z.denom, gamma.order);
        L = circle_level(gamma, m, lz * gamma.order);
        s = {1};
        yscale = {L.N / z.denom};
    } else {
        L = finite_level(gamma, m);
        s = finite_scales(m);
        yscale = s;
    }
    Tuples tn = normalized_tuples(gamma, n), tp = normalized_tuples(gamma, n - 1);
    std::vector<i64> y(tn.full.size() * k);
    for (size_t p = 0; p < tn.full.size(); ++p) {
        for (int i = 0; i < k; ++i) y[p * k + i] = zn::mod(z.values[tn.full[p] * k + i] * yscale[i], L.N);
    }
    Cochain w = zero_cochain(gamma, m, n - 1);
    if (m.circle_kind()) w.denom = L.N;
    if (!tp.full.empty() && !tn.full.empty()) {
        Mat D = scale_columns(coboundary_matrix(gamma, L, n - 1), s, L.N);
        auto x = zn::solve(D, y, L.N);
        if (!x) return std::nullopt;
        for (size_t p = 0; p < tp.full.size(); ++p) {
            for (int i = 0; i < k; ++i) w.values[tp.full[p] * k + i] = (*x)[p * k + i];
        }
    } else if (std::any_of(y.begin(), y.end(), [](i64 v) { return v != 0; })) {
        return std::nullopt;
    }
    w = canonical(m, w);
    w = add(m, w, nz.shift, 1);
    Cochain check = add(m, bar_differential(gamma, m, w), z0, -1);
    if (std::any_of(check.values.begin(), check.values.end(), [](i64 v) { return v != 0; }))
        throw ViolationError("is_coboundary: witness failed verification");
    return w;
}

}  // namespace xmc
