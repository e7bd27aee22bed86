#include "xmc/obstr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "xmc/errors.hpp"

namespace xmc {

XModMorphism CentralXModExtension::morphism() const
{
    return {x0, x1, phi0, identity_map(x0.G)};
}

std::vector<int> CentralXModExtension::kernel() const { return kernel_of(phi0, x1.H); }

Report validate_extension(const CentralXModExtension& e)
{
    Report r;
    for (const auto& i : validate_xmod(e.x0)) r.push_back({"x0: " + i.what, i.witness});
    for (const auto& i : validate_xmod(e.x1)) r.push_back({"x1: " + i.what, i.witness});
    if (!(e.x0.G == e.x1.G)) r.push_back({"x0 and x1 have different G", {}});
    if (!r.empty()) return r;
    const FiniteGroup &H0 = e.x0.H, &H1 = e.x1.H, &G = e.x0.G;
    if (static_cast<int>(e.phi0.size()) != H0.order) {
        r.push_back({"phi0 table must have |H0| entries", {}});
        return r;
    }
    for (const auto& i : validate_hom(H0, H1, e.phi0)) r.push_back({"phi0: " + i.what, i.witness});
    if (!r.empty()) return r;
    if (static_cast<int>(image_of(e.phi0).size()) != H1.order) r.push_back({"phi0 is not surjective", {}});
    for (int h = 0; h < H0.order; ++h) {
        if (e.x0.bd(h) != e.x1.bd(e.phi0[h])) {
            r.push_back({"boundary0 != boundary1 o phi0", {h}});
            break;
        }
    }
    for (int g = 0; g < G.order; ++g) {
        for (int h = 0; h < H0.order; ++h) {
            if (e.phi0[e.x0.act(g, h)] != e.x1.act(g, e.phi0[h])) {
                r.push_back({"phi0 is not equivariant", {g, h}});
                g = G.order;
                break;
            }
        }
    }
    for (int k : e.kernel()) {
        for (int h = 0; h < H0.order; ++h) {
            if (H0.m(k, h) != H0.m(h, k)) {
                r.push_back({"kernel of phi0 is not central", {k, h}});
                return r;
            }
        }
    }
    return r;
}

CentralXModExtension make_extension(CrossedModule x0, CrossedModule x1, std::vector<int> phi0)
{
    CentralXModExtension e{std::move(x0), std::move(x1), std::move(phi0)};
    Report r = validate_extension(e);
    if (!r.empty()) throw InputError("extension: " + describe(r.front()));
    return e;
}

CentralXModExtension z2_z4_z2_extension(bool inversion)
{
    FiniteGroup c4 = make_cyclic(4), c2 = make_cyclic(2);
    FiniteGroup g = inversion ? c2 : make_trivial();
    std::vector<int> act0(g.order * 4), act1(g.order * 2);
    for (int a = 0; a < g.order; ++a) {
        for (int h = 0; h < 4; ++h) act0[a * 4 + h] = a == 0 ? h : (4 - h) % 4;
        for (int h = 0; h < 2; ++h) act1[a * 2 + h] = h;
    }
    CrossedModule x0 = make_xmod(c4, g, std::vector<int>(4, 0), act0);
    CrossedModule x1 = make_xmod(c2, g, std::vector<int>(2, 0), act1);
    return make_extension(x0, x1, {0, 1, 0, 1});
}

CentralXModExtension q8_extension()
{
    FiniteGroup q8 = make_quaternion();
    std::vector<int> center;
    for (int a = 0; a < q8.order; ++a) {
        bool central = true;
        for (int b = 0; b < q8.order; ++b) central = central && q8.m(a, b) == q8.m(b, a);
        if (central) center.push_back(a);
    }
    auto [inn, proj] = quotient(q8, center, "Inn(Q8)");
    // Representatives of each coset of the center.
    std::vector<int> rep(inn.order, -1);
    for (int a = 0; a < q8.order; ++a) {
        if (rep[proj[a]] < 0) rep[proj[a]] = a;
    }
    std::vector<int> act0(inn.order * q8.order), act1(inn.order * inn.order);
    for (int g = 0; g < inn.order; ++g) {
        int r = rep[g];
        for (int h = 0; h < q8.order; ++h) act0[g * q8.order + h] = q8.m(q8.m(r, h), q8.inverse(r));
        for (int h = 0; h < inn.order; ++h) act1[g * inn.order + h] = inn.m(inn.m(g, h), inn.inverse(g));
    }
    CrossedModule x0 = make_xmod(q8, inn, proj, act0);
    CrossedModule x1 = make_xmod(inn, inn, identity_map(inn), act1);
    return make_extension(x0, x1, proj);
}

InducedModule induced_module(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c)
{
    InducedModule m;
    m.kernel = AbelianDecomposition(e.x0.H, e.kernel());
    const auto& elems = m.kernel.elements();
    const int k = static_cast<int>(m.kernel.factors().size());
    m.module = Coefficients::finite(m.kernel.factors());
    bool trivial = true;
    std::vector<std::vector<i64>> mats(gamma.order);
    m.table.assign(gamma.order, {});
    for (int g = 0; g < gamma.order; ++g) {
        for (int h : elems) {
            int img = e.x0.act(c.alpha[g], h);
            if (!m.kernel.contains(img))
                throw ViolationError("induced_module: action does not preserve the kernel of phi0");
            m.table[g].push_back(img);
            trivial = trivial && img == h;
        }
        mats[g].assign(k * k, 0);
        for (int j = 0; j < k; ++j) {
            std::vector<i64> unit(k, 0);
            unit[j] = 1;
            const auto& y = m.kernel.coords(e.x0.act(c.alpha[g], m.kernel.element(unit)));
            for (int i = 0; i < k; ++i) mats[g][i * k + j] = y[i];
        }
    }
    if (!trivial) m.module.action = std::move(mats);
    return m;
}

bool ObstructionClass::zero() const
{
    return std::all_of(coordinates.begin(), coordinates.end(), [](i64 v) { return v == 0; });
}

std::vector<int> canonical_lift(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c)
{
    const int q = gamma.order;
    std::vector<int> first(e.x1.H.order, -1);
    for (int h = e.x0.H.order - 1; h >= 0; --h) first[e.phi0[h]] = h;
    first[e.x1.H.identity] = e.x0.H.identity;
    std::vector<int> v(q * q);
    for (int t = 0; t < q * q; ++t) {
        if (first[c.u[t]] < 0) throw InputError("theta: phi0 is not surjective");
        v[t] = first[c.u[t]];
    }
    return v;
}

namespace {

using Label = std::vector<std::vector<int>>;

// Cohomology groups keyed by the induced action table.
class H3Cache {
public:
    explicit H3Cache(const CohomologyOptions& opt) : opt_(opt) {}
    const CohomologyGroup& get(const FiniteGroup& gamma, const InducedModule& m)
    {
        auto it = cache_.find(m.table);
        if (it == cache_.end()) it = cache_.emplace(m.table, cohomology(gamma, m.module, 3, opt_)).first;
        return it->second;
    }

private:
    CohomologyOptions opt_;
    std::map<Label, CohomologyGroup> cache_;
};

Cochain omega_of(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c,
                 const std::vector<int>& v, const InducedModule& m)
{
    const int q = gamma.order;
    const FiniteGroup& H0 = e.x0.H;
    Cochain w = zero_cochain(gamma, m.module, 3);
    const int k = w.width;
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            for (int l = 0; l < q; ++l) {
                int hl = gamma.m(h, l), gh = gamma.m(g, h);
                int x = H0.m(e.x0.act(c.alpha[g], v[h * q + l]), v[g * q + hl]);
                x = H0.m(H0.m(x, H0.inverse(v[gh * q + l])), H0.inverse(v[g * q + h]));
                if (!m.kernel.contains(x)) {
                    std::ostringstream os;
                    os << "theta: omega(" << g << "," << h << "," << l << ") is not in the kernel of phi0";
                    throw ViolationError(os.str());
                }
                const auto& y = m.kernel.coords(x);
                size_t t = (static_cast<size_t>(g) * q + h) * q + l;
                for (int i = 0; i < k; ++i) w.values[t * k + i] = y[i];
            }
        }
    }
    return w;
}

ObstructionClass theta_core(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c,
                            const std::vector<int>& lift, H3Cache& cache)
{
    const int q = gamma.order;
    if (static_cast<int>(lift.size()) != q * q) throw InputError("theta: lift table has the wrong size");
    for (int t = 0; t < q * q; ++t) {
        if (lift[t] < 0 || lift[t] >= e.x0.H.order || e.phi0[lift[t]] != c.u[t])
            throw InputError("theta: lift does not map to u");
    }
    ObstructionClass o;
    o.cocycle = c;
    o.module = induced_module(e, gamma, c);
    o.lift = lift;
    o.representative = omega_of(e, gamma, c, lift, o.module);
    if (auto bad = cocycle_failure(gamma, o.module.module, o.representative)) {
        std::ostringstream os;
        os << "theta: omega is not a cocycle at (";
        for (size_t i = 0; i < bad->size(); ++i) os << (i ? "," : "") << (*bad)[i];
        os << ")";
        throw ViolationError(os.str());
    }
    o.h3 = cache.get(gamma, o.module);
    o.coordinates = o.h3.classify(o.representative);
    return o;
}

void check_cocycle(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c)
{
    Report r = validate_cocycle(gamma, x, c);
    if (!r.empty()) throw InputError("cocycle: " + describe(r.front()));
}

}  // namespace

ObstructionClass theta_with_lift(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c,
                                 const std::vector<int>& lift, const CohomologyOptions& opt)
{
    check_cocycle(gamma, e.x1, c);
    H3Cache cache(opt);
    return theta_core(e, gamma, c, lift, cache);
}

ObstructionClass theta(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c,
                       const CohomologyOptions& opt)
{
    return theta_with_lift(e, gamma, c, canonical_lift(e, gamma, c), opt);
}

std::vector<std::vector<i64>> lift_sweep(const CentralXModExtension& e, const FiniteGroup& gamma,
                                         const Cocycle1& c, double budget)
{
    check_cocycle(gamma, e.x1, c);
    const int q = gamma.order;
    std::vector<std::vector<int>> fib(e.x1.H.order);
    for (int h = 0; h < e.x0.H.order; ++h) fib[e.phi0[h]].push_back(h);
    double space = 1;
    for (int t = 0; t < q * q; ++t) space *= static_cast<double>(fib[c.u[t]].size());
    if (space > budget) {
        std::ostringstream os;
        os << "lift_sweep: " << space << " lifts exceed budget " << budget;
        throw ResourceError(os.str());
    }
    H3Cache cache{CohomologyOptions{}};
    std::set<std::vector<i64>> classes;
    std::vector<size_t> digit(q * q, 0);
    std::vector<int> v(q * q);
    while (true) {
        for (int t = 0; t < q * q; ++t) v[t] = fib[c.u[t]][digit[t]];
        classes.insert(theta_core(e, gamma, c, v, cache).coordinates);
        int t = 0;
        while (t < q * q && ++digit[t] == fib[c.u[t]].size()) digit[t++] = 0;
        if (t == q * q) break;
    }
    return {classes.begin(), classes.end()};
}

ObstructionClass conj_action(const CentralXModExtension& e, const FiniteGroup& gamma, int g,
                             const ObstructionClass& o, const CohomologyOptions& opt)
{
    const int q = gamma.order;
    Coboundary1Witness w{g, std::vector<int>(q, e.x1.H.identity)};
    ObstructionClass out;
    out.cocycle = transform(gamma, e.x1, o.cocycle, w);
    out.module = induced_module(e, gamma, out.cocycle);
    out.lift.resize(o.lift.size());
    for (size_t t = 0; t < o.lift.size(); ++t) out.lift[t] = e.x0.act(g, o.lift[t]);
    out.representative = o.representative;
    const int k = o.representative.width;
    std::vector<i64> y(k);
    for (size_t t = 0; t < o.representative.entries(); ++t) {
        for (int i = 0; i < k; ++i) y[i] = o.representative.values[t * k + i];
        const auto& z = out.module.kernel.coords(e.x0.act(g, o.module.kernel.element(y)));
        for (int i = 0; i < k; ++i) out.representative.values[t * k + i] = z[i];
    }
    out.h3 = cohomology(gamma, out.module.module, 3, opt);
    out.coordinates = out.h3.classify(out.representative);
    return out;
}

ConjugacySum sum_over_conjugacy(const CentralXModExtension& e, const FiniteGroup& gamma, const XModOptions& opt)
{
    const FiniteGroup& G = e.x0.G;
    ConjugacySum s;
    H1PointedSet h1 = compute_H1(gamma, e.x1, opt);
    std::map<Label, int> ids;
    std::vector<Cocycle1> witness_of;  // one cocycle per label
    for (const auto& c : h1.cocycles) {
        InducedModule m = induced_module(e, gamma, c);
        if (ids.emplace(m.table, 0).second) witness_of.push_back(c);
    }
    int next = 0;
    for (auto& [label, id] : ids) {
        id = next++;
        s.labels.push_back(label);
    }
    // Label index of the witness cocycle, in sorted label order.
    std::vector<Cocycle1> rep(s.labels.size());
    for (const auto& c : witness_of) rep[ids[induced_module(e, gamma, c).table]] = c;
    std::vector<int> parent(s.labels.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int a) { return parent[a] == a ? a : parent[a] = root(parent[a]); };
    for (size_t l = 0; l < rep.size(); ++l) {
        for (int g = 0; g < G.order; ++g) {
            Coboundary1Witness w{g, std::vector<int>(gamma.order, e.x1.H.identity)};
            int other = ids.at(induced_module(e, gamma, transform(gamma, e.x1, rep[l], w)).table);
            int a = root(static_cast<int>(l)), b = root(other);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    for (size_t l = 0; l < rep.size(); ++l) s.orbit.push_back(root(static_cast<int>(l)));
    H3Cache cache{CohomologyOptions{}};
    for (const auto& c : h1.classes) {
        ObstructionClass o = theta_core(e, gamma, c, canonical_lift(e, gamma, c), cache);
        s.class_label.push_back(ids.at(o.module.table));
        s.class_theta.push_back(o.coordinates);
        s.class_factors.push_back(o.h3.factors());
    }
    return s;
}

ExactnessReport verify_exactness(const CentralXModExtension& e, const FiniteGroup& gamma, const XModOptions& opt)
{
    Report bad = validate_extension(e);
    if (!bad.empty()) throw InputError("extension: " + describe(bad.front()));
    ExactnessReport r;
    H1PointedSet h0 = compute_H1(gamma, e.x0, opt);
    H1PointedSet h1 = compute_H1(gamma, e.x1, opt);
    r.h1_source = static_cast<int>(h0.classes.size());
    r.h1_target = static_cast<int>(h1.classes.size());
    XModMorphism m = e.morphism();

    std::set<int> image, fiber;
    for (size_t i = 0; i < h0.classes.size(); ++i) {
        int j = h1.find(pushforward(m, gamma, h0.classes[i]));
        if (j < 0) throw ViolationError("verify_exactness: pushforward left the enumerated cocycles");
        image.insert(j);
        if (j == h1.basepoint) fiber.insert(static_cast<int>(i));
    }
    H3Cache cache{CohomologyOptions{}};
    std::set<int> zero;
    for (size_t j = 0; j < h1.classes.size(); ++j) {
        const auto& c = h1.classes[j];
        if (theta_core(e, gamma, c, canonical_lift(e, gamma, c), cache).zero()) zero.insert(static_cast<int>(j));
    }
    r.image.assign(image.begin(), image.end());
    r.theta_zero.assign(zero.begin(), zero.end());
    r.fiber_of_base.assign(fiber.begin(), fiber.end());
    r.at_target = image == zero;
    for (int j : zero) {
        if (!image.count(j)) r.issues.push_back({"class with theta = 0 outside the image of H^1(x0)", {j}});
    }
    for (int j : image) {
        if (!zero.count(j)) r.issues.push_back({"class in the image of H^1(x0) with theta != 0", {j}});
    }

    // H^2(Gamma, ker) with the action of the basepoint, which is trivial.
    InducedModule km = induced_module(e, gamma, trivial_cocycle(gamma, e.x1));
    CohomologyGroup h2 = cohomology(gamma, km.module, 2);
    r.h2_order = h2.order();
    std::set<int> h2img;
    std::vector<i64> coords(h2.factors().size(), 0);
    const int q = gamma.order, k = km.module.width();
    while (true) {
        Cochain z = normalize(gamma, km.module, h2.representative_of(coords)).cocycle;
        Cocycle1 c = trivial_cocycle(gamma, e.x0);
        std::vector<i64> y(k);
        for (int t = 0; t < q * q; ++t) {
            for (int i = 0; i < k; ++i) y[i] = z.values[t * k + i];
            c.u[t] = km.kernel.element(y);
        }
        int i = h0.find(c);
        if (i < 0) throw ViolationError("verify_exactness: H^2 class did not give an enumerated cocycle");
        h2img.insert(i);
        size_t p = 0;
        while (p < coords.size() && ++coords[p] == h2.factors()[p]) coords[p++] = 0;
        if (p == coords.size()) break;
    }
    r.h2_image.assign(h2img.begin(), h2img.end());
    r.at_source = h2img == fiber;
    for (int i : fiber) {
        if (!h2img.count(i)) r.issues.push_back({"class over the basepoint outside the image of H^2", {i}});
    }
    for (int i : h2img) {
        if (!fiber.count(i)) r.issues.push_back({"image of H^2 not over the basepoint", {i}});
    }
    return r;
}

MatrixObstruction matrix_kernel_obstruction(const FiniteGroup& gamma, const std::vector<Eigen::MatrixXcd>& u,
                                            double tol, const CohomologyGroup* h3)
{
    const int q = gamma.order;
    if (static_cast<int>(u.size()) != q) throw InputError("kernel: one matrix per element of Gamma is required");
    const int n = static_cast<int>(u.front().rows());
    for (int g = 0; g < q; ++g) {
        if (u[g].rows() != n || u[g].cols() != n) throw InputError("kernel: matrices must be square of equal size");
        double err = (u[g].adjoint() * u[g] - Eigen::MatrixXcd::Identity(n, n)).norm();
        if (err > tol) {
            std::ostringstream os;
            os << "kernel: U_" << g << " is not unitary (residual " << err << ")";
            throw InputError(os.str());
        }
    }
    MatrixObstruction r;
    std::vector<double> phase(q * q);
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            Eigen::MatrixXcd d = u[g] * u[h] * u[gamma.m(g, h)].adjoint();
            std::complex<double> lambda = d.trace() / static_cast<double>(n);
            double res = (d - lambda * Eigen::MatrixXcd::Identity(n, n)).norm();
            r.defect_residual = std::max(r.defect_residual, res);
            if (res > tol || std::abs(std::abs(lambda) - 1) > tol) {
                std::ostringstream os;
                os << "kernel: U_g U_h U_gh^-1 is not scalar at (" << g << "," << h << "), residual " << res;
                throw InputError(os.str());
            }
            phase[g * q + h] = std::arg(lambda) / (2 * M_PI);
        }
    }
    Coefficients circle = Coefficients::circle();
    r.omega = zero_cochain(gamma, circle, 3);
    const i64 den = static_cast<i64>(n) * q;
    r.omega.denom = den;
    for (int g = 0; g < q; ++g) {
        for (int h = 0; h < q; ++h) {
            for (int k = 0; k < q; ++k) {
                double w = phase[h * q + k] + phase[g * q + gamma.m(h, k)] - phase[gamma.m(g, h) * q + k] -
                           phase[g * q + h];
                double scaled = w * static_cast<double>(den);
                double snapped = std::round(scaled);
                double res = std::abs(scaled - snapped) / static_cast<double>(den);
                r.snap_residual = std::max(r.snap_residual, res);
                if (res > tol) {
                    std::ostringstream os;
                    os << "kernel: omega(" << g << "," << h << "," << k << ") does not snap to a multiple of 1/" << den
                       << " (residual " << res << ")";
                    throw NumericError(os.str());
                }
                i64 v = static_cast<i64>(snapped) % den;
                r.omega.values[(static_cast<size_t>(g) * q + h) * q + k] = v < 0 ? v + den : v;
            }
        }
    }
    r.omega = canonical(circle, r.omega);
    r.h3 = h3 ? *h3 : cohomology(gamma, circle, 3);
    r.coordinates = r.h3.classify(r.omega);
    r.witness = is_coboundary(gamma, circle, r.omega);
    return r;
}

std::vector<Eigen::MatrixXcd> clock_shift_kernel(int n)
{
    const std::complex<double> zeta = std::polar(1.0, 2 * M_PI / n);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n), s = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        c(j, j) = std::pow(zeta, j);
        s((j + 1) % n, j) = 1;
    }
    std::vector<Eigen::MatrixXcd> out;
    Eigen::MatrixXcd ca = Eigen::MatrixXcd::Identity(n, n);
    for (int a = 0; a < n; ++a) {
        Eigen::MatrixXcd m = ca;
        for (int b = 0; b < n; ++b) {
            out.push_back(m);
            m = m * s;
        }
        ca = ca * c;
    }
    return out;
}

}  // namespace xmc
