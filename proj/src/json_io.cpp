#include "xmc/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "xmc/errors.hpp"

namespace xmc {

void json_fail(const std::string& ptr, const std::string& msg)
{
    throw InputError((ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

void require_keys(const json& j, const std::string& ptr, const std::set<std::string>& allowed,
                  const std::set<std::string>& required)
{
    if (!j.is_object()) json_fail(ptr, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) json_fail(ptr + "/" + it.key(), "unknown field");
    }
    for (const auto& k : required) {
        if (!j.contains(k)) json_fail(ptr + "/" + k, "missing field");
    }
}

int get_int(const json& j, const std::string& key, const std::string& ptr)
{
    if (!j.contains(key)) json_fail(ptr + "/" + key, "missing field");
    const json& v = j.at(key);
    if (!v.is_number_integer()) json_fail(ptr + "/" + key, "expected an integer");
    return v.get<int>();
}

double get_double(const json& j, const std::string& key, const std::string& ptr)
{
    if (!j.contains(key)) json_fail(ptr + "/" + key, "missing field");
    const json& v = j.at(key);
    if (!v.is_number()) json_fail(ptr + "/" + key, "expected a number");
    return v.get<double>();
}

double round12(double x)
{
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    double r = std::strtod(buf, nullptr);
    return r == 0 ? 0.0 : r;
}

json number(double x)
{
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    return round12(x);
}

namespace {

std::vector<int> int_list(const json& j, const std::string& ptr)
{
    if (!j.is_array()) json_fail(ptr, "expected an array");
    std::vector<int> out;
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) json_fail(ptr + "/" + std::to_string(i), "expected an integer");
        out.push_back(j[i].get<int>());
    }
    return out;
}

std::vector<int> int_table(const json& j, const std::string& ptr, size_t rows, size_t cols)
{
    if (!j.is_array() || j.size() != rows)
        json_fail(ptr, "expected an array of " + std::to_string(rows) + " rows");
    std::vector<int> out;
    for (size_t r = 0; r < rows; ++r) {
        auto row = int_list(j[r], ptr + "/" + std::to_string(r));
        if (row.size() != cols) json_fail(ptr + "/" + std::to_string(r), "expected " + std::to_string(cols) + " entries");
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

void check_range(const std::vector<int>& v, int n, const std::string& ptr)
{
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0 || v[i] >= n) json_fail(ptr, "entry " + std::to_string(v[i]) + " out of range");
    }
}

std::string first_issue(const Report& r) { return r.empty() ? "" : describe(r.front()); }

}  // namespace

FiniteGroup group_from_json(const json& j, const std::string& ptr)
{
    if (j.is_string()) {
        try {
            return named_group(j.get<std::string>());
        } catch (const InputError& e) {
            json_fail(ptr, e.what());
        }
    }
    require_keys(j, ptr, {"order", "mul", "label"}, {"order", "mul"});
    int n = get_int(j, "order", ptr);
    if (n < 1 || n > 4096) json_fail(ptr + "/order", "order must lie in 1..4096");
    auto mul = int_table(j.at("mul"), ptr + "/mul", n, n);
    check_range(mul, n, ptr + "/mul");
    std::string label = j.contains("label") ? j.at("label").get<std::string>() : "G" + std::to_string(n);
    FiniteGroup g;
    g.order = n;
    g.mul = mul;
    g.label = label;
    g.identity = -1;
    for (int e = 0; e < n && g.identity < 0; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = mul[e * n + a] == a && mul[a * n + e] == a;
        if (ok) g.identity = e;
    }
    g.inv.assign(n, -1);
    for (int a = 0; a < n && g.identity >= 0; ++a) {
        for (int b = 0; b < n; ++b) {
            if (mul[a * n + b] == g.identity) {
                g.inv[a] = b;
                break;
            }
        }
    }
    return g;
}

FiniteGroup valid_group_from_json(const json& j, const std::string& ptr)
{
    FiniteGroup g = group_from_json(j, ptr);
    Report r = validate_group(g);
    if (!r.empty()) json_fail(ptr, "not a group: " + first_issue(r));
    return g;
}

json group_to_json(const FiniteGroup& g)
{
    json mul = json::array();
    for (int a = 0; a < g.order; ++a) {
        json row = json::array();
        for (int b = 0; b < g.order; ++b) row.push_back(g.m(a, b));
        mul.push_back(row);
    }
    return {{"order", g.order}, {"mul", mul}, {"label", g.label}};
}

Coefficients coefficients_from_json(const json& j, const FiniteGroup& gamma, const std::string& ptr)
{
    Coefficients m;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        const std::string suffix = "-trivial";
        if (s.size() <= suffix.size() || s.compare(s.size() - suffix.size(), suffix.size(), suffix) != 0)
            json_fail(ptr, "named modules have the form Z<n>-trivial, Z<a>xZ<b>-trivial or Q/Z-trivial");
        std::string body = s.substr(0, s.size() - suffix.size());
        if (body == "Q/Z" || body == "T") return Coefficients::circle();
        std::vector<i64> f;
        size_t pos = 0;
        while (pos < body.size()) {
            size_t x = body.find('x', pos);
            std::string part = body.substr(pos, x == std::string::npos ? std::string::npos : x - pos);
            if (part.size() < 2 || part[0] != 'Z') json_fail(ptr, "bad factor '" + part + "'");
            try {
                f.push_back(std::stoll(part.substr(1)));
            } catch (const std::exception&) {
                json_fail(ptr, "bad factor '" + part + "'");
            }
            if (f.back() < 2) json_fail(ptr, "factors must be at least 2");
            pos = x == std::string::npos ? body.size() : x + 1;
        }
        m = Coefficients::finite(f);
    } else {
        require_keys(j, ptr, {"kind", "factors", "action"}, {"kind"});
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "rational-circle") {
            m = Coefficients::circle();
            if (j.contains("action")) {
                require_keys(j.at("action"), ptr + "/action", {"sign"}, {"sign"});
                m.sign = int_list(j.at("action").at("sign"), ptr + "/action/sign");
                if (static_cast<int>(m.sign.size()) != gamma.order) json_fail(ptr + "/action/sign", "one sign per element");
            }
        } else if (kind == "finite-abelian") {
            if (!j.contains("factors")) json_fail(ptr + "/factors", "missing field");
            std::vector<i64> f;
            for (int v : int_list(j.at("factors"), ptr + "/factors")) {
                if (v < 2) json_fail(ptr + "/factors", "factors must be at least 2");
                f.push_back(v);
            }
            m = Coefficients::finite(f);
            if (j.contains("action")) {
                require_keys(j.at("action"), ptr + "/action", {"matrices"}, {"matrices"});
                const json& a = j.at("action").at("matrices");
                const size_t k = f.size();
                if (!a.is_array() || static_cast<int>(a.size()) != gamma.order)
                    json_fail(ptr + "/action/matrices", "one matrix per element");
                for (size_t g = 0; g < a.size(); ++g) {
                    auto t = int_table(a[g], ptr + "/action/matrices/" + std::to_string(g), k, k);
                    m.action.emplace_back(t.begin(), t.end());
                }
            }
        } else {
            json_fail(ptr + "/kind", "expected finite-abelian or rational-circle");
        }
    }
    Report r = validate_coefficients(gamma, m);
    if (!r.empty()) json_fail(ptr, "not a module: " + first_issue(r));
    return m;
}

json coefficients_to_json(const Coefficients& m)
{
    if (m.circle_kind()) {
        json j = {{"kind", "rational-circle"}};
        if (!m.sign.empty()) j["action"] = {{"sign", m.sign}};
        return j;
    }
    json j = {{"kind", "finite-abelian"}, {"factors", m.factors}};
    if (!m.action.empty()) {
        const size_t k = m.factors.size();
        json mats = json::array();
        for (const auto& a : m.action) {
            json rows = json::array();
            for (size_t r = 0; r < k; ++r) rows.push_back(std::vector<i64>(a.begin() + r * k, a.begin() + (r + 1) * k));
            mats.push_back(rows);
        }
        j["action"] = {{"matrices", mats}};
    }
    return j;
}

Cochain cochain_from_json(const json& j, const FiniteGroup& gamma, const Coefficients& m, int degree,
                          const std::string& ptr)
{
    Cochain c = zero_cochain(gamma, m, degree);
    const int q = gamma.order, w = c.width;
    std::vector<std::pair<i64, i64>> fractions;  // circle leaves
    std::function<void(const json&, const std::string&, int, size_t)> walk = [&](const json& node,
                                                                                 const std::string& p, int depth,
                                                                                 size_t index) {
        if (depth < degree) {
            if (!node.is_array() || static_cast<int>(node.size()) != q)
                json_fail(p, "expected an array of " + std::to_string(q) + " entries");
            for (int g = 0; g < q; ++g) walk(node[g], p + "/" + std::to_string(g), depth + 1, index * q + g);
            return;
        }
        if (m.circle_kind()) {
            if (!node.is_string()) json_fail(p, "expected a rational \"p/q\"");
            std::string s = node.get<std::string>();
            size_t slash = s.find('/');
            try {
                i64 num = std::stoll(s.substr(0, slash));
                i64 den = slash == std::string::npos ? 1 : std::stoll(s.substr(slash + 1));
                if (den <= 0) json_fail(p, "denominator must be positive");
                fractions[index] = {num, den};
            } catch (const InputError&) {
                throw;
            } catch (const std::exception&) {
                json_fail(p, "expected a rational \"p/q\"");
            }
            return;
        }
        if (w == 1 && node.is_number_integer()) {
            c.values[index] = zn::mod(node.get<i64>(), m.factors[0]);
            return;
        }
        auto v = int_list(node, p);
        if (static_cast<int>(v.size()) != w) json_fail(p, "expected " + std::to_string(w) + " coordinates");
        for (int i = 0; i < w; ++i) c.values[index * w + i] = zn::mod(v[i], m.factors[i]);
    };
    if (m.circle_kind()) fractions.assign(c.entries(), {0, 1});
    walk(j, ptr, 0, 0);
    if (m.circle_kind()) {
        i64 den = 1;
        for (auto& f : fractions) den = zn::lcm(den, f.second);
        c.denom = den;
        for (size_t i = 0; i < fractions.size(); ++i) c.values[i] = zn::mod(fractions[i].first * (den / fractions[i].second), den);
    }
    return canonical(m, c);
}

json cochain_to_json(const Cochain& c, const Coefficients& m)
{
    const int q = c.group_order, w = c.width;
    std::function<json(int, size_t)> build = [&](int depth, size_t index) -> json {
        if (depth == c.degree) {
            if (m.circle_kind()) return to_string(c.circle_value(index));
            if (w == 1) return c.values[index];
            return std::vector<i64>(c.values.begin() + index * w, c.values.begin() + (index + 1) * w);
        }
        json a = json::array();
        for (int g = 0; g < q; ++g) a.push_back(build(depth + 1, index * q + g));
        return a;
    };
    return build(0, 0);
}

CrossedModule xmod_from_json(const json& j, const std::string& ptr)
{
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        try {
            if (s.rfind("id:", 0) == 0) return identity_xmod(named_group(s.substr(3)));
            size_t arrow = s.find("->");
            if (arrow != std::string::npos) {
                std::string h = s.substr(0, arrow), g = s.substr(arrow + 2);
                if (g == "1") {
                    FiniteGroup hg = named_group(h);
                    // (H -> 1) even for nonabelian H, so that validation can report it.
                    CrossedModule x;
                    x.H = hg;
                    x.G = make_trivial();
                    x.boundary.assign(hg.order, 0);
                    for (int a = 0; a < hg.order; ++a) x.action.push_back(a);
                    return x;
                }
                if (h == "1") return xmod_from_group(named_group(g));
            }
        } catch (const InputError& e) {
            json_fail(ptr, e.what());
        }
        json_fail(ptr, "named crossed modules have the form H->1, 1->G or id:G");
    }
    require_keys(j, ptr, {"H", "G", "boundary", "action"}, {"H", "G", "boundary", "action"});
    CrossedModule x;
    x.H = valid_group_from_json(j.at("H"), ptr + "/H");
    x.G = valid_group_from_json(j.at("G"), ptr + "/G");
    x.boundary = int_list(j.at("boundary"), ptr + "/boundary");
    if (static_cast<int>(x.boundary.size()) != x.H.order) json_fail(ptr + "/boundary", "one entry per element of H");
    check_range(x.boundary, x.G.order, ptr + "/boundary");
    x.action = int_table(j.at("action"), ptr + "/action", x.G.order, x.H.order);
    check_range(x.action, x.H.order, ptr + "/action");
    return x;
}

CrossedModule valid_xmod_from_json(const json& j, const std::string& ptr)
{
    CrossedModule x = xmod_from_json(j, ptr);
    Report r = validate_xmod(x);
    if (!r.empty()) json_fail(ptr, "not a crossed module: " + first_issue(r));
    return x;
}

json xmod_to_json(const CrossedModule& x)
{
    json act = json::array();
    for (int g = 0; g < x.G.order; ++g) {
        json row = json::array();
        for (int h = 0; h < x.H.order; ++h) row.push_back(x.act(g, h));
        act.push_back(row);
    }
    return {{"H", group_to_json(x.H)}, {"G", group_to_json(x.G)}, {"boundary", x.boundary}, {"action", act}};
}

CentralXModExtension extension_from_json(const json& j, const std::string& ptr)
{
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "z2-z4-z2") return z2_z4_z2_extension(false);
        if (s == "z2-z4-z2-inversion") return z2_z4_z2_extension(true);
        if (s == "q8") return q8_extension();
        json_fail(ptr, "named extensions are z2-z4-z2, z2-z4-z2-inversion and q8");
    }
    require_keys(j, ptr, {"x0", "x1", "phi0"}, {"x0", "x1", "phi0"});
    CrossedModule x0 = valid_xmod_from_json(j.at("x0"), ptr + "/x0");
    CrossedModule x1 = valid_xmod_from_json(j.at("x1"), ptr + "/x1");
    auto phi = int_list(j.at("phi0"), ptr + "/phi0");
    if (static_cast<int>(phi.size()) != x0.H.order) json_fail(ptr + "/phi0", "one entry per element of H0");
    check_range(phi, x1.H.order, ptr + "/phi0");
    try {
        return make_extension(x0, x1, phi);
    } catch (const InputError& e) {
        json_fail(ptr, e.what());
    }
}

Cocycle1 cocycle_from_json(const json& j, const FiniteGroup& gamma, const std::string& ptr)
{
    require_keys(j, ptr, {"alpha", "u"}, {"alpha", "u"});
    Cocycle1 c;
    c.alpha = int_list(j.at("alpha"), ptr + "/alpha");
    if (static_cast<int>(c.alpha.size()) != gamma.order) json_fail(ptr + "/alpha", "one entry per element of Gamma");
    c.u = int_table(j.at("u"), ptr + "/u", gamma.order, gamma.order);
    return c;
}

json cocycle_to_json(const Cocycle1& c, int q)
{
    json u = json::array();
    for (int g = 0; g < q; ++g) u.push_back(std::vector<int>(c.u.begin() + g * q, c.u.begin() + (g + 1) * q));
    return {{"alpha", c.alpha}, {"u", u}};
}

Coboundary1Witness witness_from_json(const json& j, const FiniteGroup& gamma, const std::string& ptr)
{
    require_keys(j, ptr, {"gamma", "w"}, {"gamma", "w"});
    Coboundary1Witness w;
    w.gamma = get_int(j, "gamma", ptr);
    w.w = int_list(j.at("w"), ptr + "/w");
    if (static_cast<int>(w.w.size()) != gamma.order) json_fail(ptr + "/w", "one entry per element of Gamma");
    return w;
}

json witness_to_json(const Coboundary1Witness& w) { return {{"gamma", w.gamma}, {"w", w.w}}; }

Mat matrix_from_json(const json& j, const std::string& ptr)
{
    if (!j.is_array() || j.empty()) json_fail(ptr, "expected a nonempty square array");
    const size_t n = j.size();
    Mat m(n, n);
    for (size_t r = 0; r < n; ++r) {
        const std::string pr = ptr + "/" + std::to_string(r);
        if (!j[r].is_array() || j[r].size() != n) json_fail(pr, "expected " + std::to_string(n) + " entries");
        for (size_t c = 0; c < n; ++c) {
            const json& e = j[r][c];
            const std::string pc = pr + "/" + std::to_string(c);
            if (e.is_number()) {
                m(r, c) = cplx(e.get<double>(), 0);
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                json_fail(pc, "expected [re, im]");
            }
        }
    }
    return m;
}

json matrix_to_json(const Mat& m)
{
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back({number(m(r, c).real()), number(m(r, c).imag())});
        rows.push_back(row);
    }
    return rows;
}

UnitaryPath path_from_json(const json& j, const std::string& ptr)
{
    require_keys(j, ptr, {"ts", "mats"}, {"ts", "mats"});
    UnitaryPath p;
    const json& ts = j.at("ts");
    const json& ms = j.at("mats");
    if (!ts.is_array() || !ms.is_array() || ts.size() != ms.size())
        json_fail(ptr, "ts and mats must be arrays of equal length");
    for (size_t k = 0; k < ts.size(); ++k) {
        if (!ts[k].is_number()) json_fail(ptr + "/ts/" + std::to_string(k), "expected a number");
        p.ts.push_back(ts[k].get<double>());
        p.mats.push_back(matrix_from_json(ms[k], ptr + "/mats/" + std::to_string(k)));
    }
    return p;
}

json simplicial_to_json(const TruncatedSimplicialSet& s)
{
    return {{"N", s.N}, {"counts", s.counts}, {"faces", s.face}, {"degens", s.degen}};
}

json homology_to_json(const Homology& h)
{
    json out = json::array();
    for (size_t k = 0; k < h.groups.size(); ++k) out.push_back({{"degree", k}, {"factors", h.groups[k]}});
    return out;
}

json report_to_json(const Report& r)
{
    json out = json::array();
    for (const auto& i : r) out.push_back({{"what", i.what}, {"witness", i.witness}});
    return out;
}

}  // namespace xmc
