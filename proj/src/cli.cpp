#include "xmc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xmc/duskin.hpp"
#include "xmc/errors.hpp"

namespace xmc {

const char* status_name(Status s)
{
    switch (s) {
    case Status::Ok: return "ok";
    case Status::Violation: return "violation";
    case Status::ResourceError: return "resource-error";
    case Status::InputError: return "input-error";
    }
    return "input-error";
}

int exit_code(Status s)
{
    switch (s) {
    case Status::Ok: return 0;
    case Status::Violation: return 1;
    case Status::ResourceError: return 2;
    case Status::InputError: return 3;
    }
    return 3;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

namespace {

const std::set<std::string> kCommon = {"schema", "task", "seed", "budget", "tol"};

struct Context {
    json bundle;
    std::string task;
    std::uint64_t seed = 0;
    std::optional<double> budget;
    std::optional<double> tol;
};

struct TaskResult {
    json result;
    bool violation = false;
    std::string summary;
};

std::set<std::string> with_common(std::set<std::string> keys)
{
    keys.insert(kCommon.begin(), kCommon.end());
    return keys;
}

bool get_bool(const json& j, const std::string& key, bool def)
{
    if (!j.contains(key)) return def;
    if (!j.at(key).is_boolean()) json_fail("/" + key, "expected a boolean");
    return j.at(key).get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& def)
{
    if (!j.contains(key)) return def;
    if (!j.at(key).is_string()) json_fail("/" + key, "expected a string");
    return j.at(key).get<std::string>();
}

XModOptions xmod_options(const Context& c, bool strict = false)
{
    XModOptions o;
    if (c.budget) o.budget = *c.budget;
    o.strict = strict;
    return o;
}

NerveOptions nerve_options(const Context& c)
{
    NerveOptions o;
    if (c.budget) o.budget = *c.budget;
    return o;
}

std::string join(const std::vector<i64>& v, const std::string& sep)
{
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
    return os.str();
}

std::string module_label(const Coefficients& m)
{
    if (m.circle_kind()) return std::string("Q/Z ") + (m.trivial_action() ? "trivial" : "twisted");
    if (m.factors.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < m.factors.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(m.factors[i]);
    return s + (m.trivial_action() ? " trivial" : " twisted");
}

// ---------------------------------------------------------------------------

TaskResult task_validate(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"group", "xmod", "extension"}));
    int given = b.contains("group") + b.contains("xmod") + b.contains("extension");
    if (given != 1) json_fail("", "give exactly one of group, xmod, extension");
    TaskResult t;
    Report r;
    std::string what;
    if (b.contains("group")) {
        what = "group";
        r = validate_group(group_from_json(b.at("group"), "/group"));
    } else if (b.contains("xmod")) {
        what = "xmod";
        r = validate_xmod(xmod_from_json(b.at("xmod"), "/xmod"));
    } else {
        what = "extension";
        const json& e = b.at("extension");
        if (e.is_string()) {
            r = validate_extension(extension_from_json(e, "/extension"));
        } else {
            require_keys(e, "/extension", {"x0", "x1", "phi0"}, {"x0", "x1", "phi0"});
            CentralXModExtension raw;
            raw.x0 = xmod_from_json(e.at("x0"), "/extension/x0");
            raw.x1 = xmod_from_json(e.at("x1"), "/extension/x1");
            raw.phi0 = e.at("phi0").get<std::vector<int>>();
            r = validate_extension(raw);
        }
    }
    t.result = {{"object", what}, {"valid", r.empty()}, {"issues", report_to_json(r)}};
    t.violation = !r.empty();
    t.summary = what + (r.empty() ? " valid" : " invalid: " + describe(r.front()));
    return t;
}

TaskResult task_hn(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"group", "module", "n", "cochain"}), {"group", "module", "n"});
    FiniteGroup gamma = valid_group_from_json(b.at("group"), "/group");
    Coefficients m = coefficients_from_json(b.at("module"), gamma, "/module");
    int n = get_int(b, "n", "");
    if (n < 1 || n > 4) json_fail("/n", "degree must lie in 1..4");
    CohomologyOptions opt;
    if (c.budget) opt.max_dim = static_cast<i64>(*c.budget);
    CohomologyGroup h = cohomology(gamma, m, n, opt);
    TaskResult t;
    json reps = json::array();
    for (const auto& r : h.representatives()) reps.push_back(cochain_to_json(r, m));
    t.result = {{"group", gamma.label},        {"module", coefficients_to_json(m)},
                {"module_label", module_label(m)}, {"n", n},
                {"factors", h.factors()},      {"order", h.order()},
                {"representatives", reps}};
    t.summary = "H^" + std::to_string(n) + " factors [" + join(h.factors(), ",") + "]";
    if (b.contains("cochain")) {
        Cochain z = cochain_from_json(b.at("cochain"), gamma, m, n, "/cochain");
        if (auto bad = cocycle_failure(gamma, m, z)) {
            t.result["classify"] = {{"cocycle", false}, {"failing_tuple", *bad}};
            t.violation = true;
            t.summary += "; cochain is not a cocycle";
        } else {
            auto w = is_coboundary(gamma, m, z, opt);
            t.result["classify"] = {{"cocycle", true},
                                    {"coordinates", h.classify(z)},
                                    {"coboundary_witness", w ? cochain_to_json(*w, m) : json(nullptr)}};
        }
    }
    return t;
}

TaskResult task_h1(const Context& c, bool ff)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"group", "xmod", "strict", "abelian_shift"}), {"group", "xmod"});
    FiniteGroup gamma = valid_group_from_json(b.at("group"), "/group");
    CrossedModule x = valid_xmod_from_json(b.at("xmod"), "/xmod");
    XModOptions opt = xmod_options(c, get_bool(b, "strict", false));
    H1PointedSet h = ff ? compute_H1_ff(gamma, x, opt) : compute_H1(gamma, x, opt);
    TaskResult t;
    json reps = json::array();
    for (const auto& r : h.classes) reps.push_back(cocycle_to_json(r, gamma.order));
    std::vector<bool> ffc;
    for (const auto& r : h.classes) ffc.push_back(is_ff(gamma, x, r));
    t.result = {{"group", gamma.label},
                {"cocycles", h.cocycles.size()},
                {"classes", h.classes.size()},
                {"basepoint", h.basepoint},
                {"representatives", reps},
                {"ff", ffc}};
    t.summary = std::string(ff ? "H^1_ff" : "H^1") + " has " + std::to_string(h.classes.size()) + " classes";
    if (get_bool(b, "abelian_shift", false)) {
        AbelianShift s = abelian_shift(gamma, x, opt);
        t.result["abelian_shift"] = {{"h2_factors", s.h2.factors()},
                                     {"h2_order", s.h2.order()},
                                     {"coords", s.coords},
                                     {"bijective", s.bijective}};
        t.violation = !s.bijective;
        t.summary += s.bijective ? "; shift to H^2 bijective" : "; shift to H^2 NOT bijective";
    }
    return t;
}

json obstruction_json(const ObstructionClass& o, int q)
{
    return {{"cocycle", cocycle_to_json(o.cocycle, q)},
            {"module", coefficients_to_json(o.module.module)},
            {"module_label", module_label(o.module.module)},
            {"invariant_factors", o.h3.factors()},
            {"coordinates", o.coordinates},
            {"zero", o.zero()},
            {"representative", cochain_to_json(o.representative, o.module.module)}};
}

TaskResult task_theta(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"group", "extension", "cocycle", "lift_sweep"}), {"group", "extension"});
    FiniteGroup gamma = valid_group_from_json(b.at("group"), "/group");
    CentralXModExtension e = extension_from_json(b.at("extension"), "/extension");
    bool sweep = get_bool(b, "lift_sweep", false);
    std::vector<Cocycle1> cocycles;
    if (b.contains("cocycle")) {
        Cocycle1 z = cocycle_from_json(b.at("cocycle"), gamma, "/cocycle");
        Report r = validate_cocycle(gamma, e.x1, z);
        if (!r.empty()) json_fail("/cocycle", "not a cocycle: " + describe(r.front()));
        cocycles.push_back(z);
    } else {
        cocycles = compute_H1(gamma, e.x1, xmod_options(c)).classes;
    }
    TaskResult t;
    json out = json::array();
    int nonzero = 0;
    for (const auto& z : cocycles) {
        ObstructionClass o = theta(e, gamma, z);
        json j = obstruction_json(o, gamma.order);
        nonzero += !o.zero();
        if (sweep) {
            auto classes = lift_sweep(e, gamma, z, c.budget ? *c.budget : 1e6);
            j["lift_classes"] = classes;
            if (classes.size() != 1) t.violation = true;
        }
        out.push_back(j);
    }
    t.result = {{"group", gamma.label}, {"classes", out}};
    t.summary = std::to_string(cocycles.size()) + " classes, " + std::to_string(nonzero) + " with nonzero theta";
    if (sweep) t.summary += t.violation ? "; lift dependence detected" : "; lift independent";
    return t;
}

TaskResult task_exact(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"group", "extension"}), {"group", "extension"});
    FiniteGroup gamma = valid_group_from_json(b.at("group"), "/group");
    CentralXModExtension e = extension_from_json(b.at("extension"), "/extension");
    ExactnessReport r = verify_exactness(e, gamma, xmod_options(c));
    TaskResult t;
    t.result = {{"group", gamma.label},
                {"h1_source", r.h1_source},
                {"h1_target", r.h1_target},
                {"h2_order", r.h2_order},
                {"image", r.image},
                {"theta_zero", r.theta_zero},
                {"h2_image", r.h2_image},
                {"fiber_of_base", r.fiber_of_base},
                {"exact_at_target", r.at_target},
                {"exact_at_source", r.at_source},
                {"issues", report_to_json(r.issues)},
                {"exact", r.exact()}};
    t.violation = !r.exact();
    t.summary = r.exact() ? "sequence exact" : "sequence NOT exact";
    return t;
}

TaskResult task_nerve(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"xmod", "N", "kind", "tables", "compare_ordinary", "gamma", "cocycles", "witness"}),
                 {"xmod", "N"});
    CrossedModule x = valid_xmod_from_json(b.at("xmod"), "/xmod");
    int N = get_int(b, "N", "");
    if (N < 0 || N > 8) json_fail("/N", "truncation must lie in 0..8");
    std::string kind = get_string(b, "kind", "duskin");
    if (kind != "duskin" && kind != "monoidal") json_fail("/kind", "expected duskin or monoidal");
    TaskResult t;
    if (kind == "monoidal") {
        if (b.contains("compare_ordinary") || b.contains("cocycles"))
            json_fail("/kind", "comparisons and homotopies need the Duskin nerve");
        MonoidalDiagNerve m = monoidal_diag_nerve(x, N, nerve_options(c));
        Report r = validate_simplicial(m.set);
        t.result = {{"kind", kind}, {"counts", m.set.counts}, {"valid_simplicial", r.empty()}};
        if (get_bool(b, "tables", true)) t.result["simplicial"] = simplicial_to_json(m.set);
        t.violation = !r.empty();
        t.summary = "monoidal diagonal nerve, counts [" + join(std::vector<i64>(m.set.counts.begin(), m.set.counts.end()), ",") + "]";
        return t;
    }
    DuskinNerve d = duskin_nerve(x, N, nerve_options(c));
    Report r = validate_simplicial(d.set);
    t.result = {{"kind", kind}, {"counts", d.set.counts}, {"valid_simplicial", r.empty()}};
    if (get_bool(b, "tables", true)) t.result["simplicial"] = simplicial_to_json(d.set);
    t.violation = !r.empty();
    t.summary = "Duskin nerve, counts [" + join(std::vector<i64>(d.set.counts.begin(), d.set.counts.end()), ",") + "]";
    if (get_bool(b, "compare_ordinary", false)) {
        if (x.H.order != 1) json_fail("/compare_ordinary", "needs H trivial");
        Report iso = check_isomorphism(d.set, ordinary_nerve(x.G, N), duskin_projection(d));
        t.result["ordinary_isomorphism"] = {{"isomorphic", iso.empty()}, {"issues", report_to_json(iso)}};
        t.violation = t.violation || !iso.empty();
        t.summary += iso.empty() ? "; isomorphic to the ordinary nerve" : "; NOT isomorphic to the ordinary nerve";
    }
    if (b.contains("cocycles")) {
        if (!b.contains("gamma")) json_fail("/gamma", "missing field");
        FiniteGroup gamma = valid_group_from_json(b.at("gamma"), "/gamma");
        const json& cs = b.at("cocycles");
        if (!cs.is_array() || cs.size() != 2) json_fail("/cocycles", "expected two cocycles");
        Cocycle1 a = cocycle_from_json(cs[0], gamma, "/cocycles/0");
        Cocycle1 bb = cocycle_from_json(cs[1], gamma, "/cocycles/1");
        for (int i = 0; i < 2; ++i) {
            Report cr = validate_cocycle(gamma, x, i ? bb : a);
            if (!cr.empty()) json_fail("/cocycles/" + std::to_string(i), "not a cocycle: " + describe(cr.front()));
        }
        std::optional<Coboundary1Witness> w;
        if (b.contains("witness")) {
            w = witness_from_json(b.at("witness"), gamma, "/witness");
        } else {
            w = are_cohomologous(gamma, x, a, bb, xmod_options(c));
        }
        json h;
        if (w) {
            TruncatedSimplicialSet src = ordinary_nerve(gamma, N);
            CoboundaryHomotopy ch = coboundary_to_homotopy(gamma, a, bb, *w, d, src);
            OuterRoute route = outer_route(gamma, a, bb, *w, d, src);
            h = {{"cohomologous", true},
                 {"witness", witness_to_json(*w)},
                 {"homotopy_valid", ch.issues.empty()},
                 {"issues", report_to_json(ch.issues)},
                 {"outer_route_consistent", route.consistent}};
            t.violation = t.violation || !ch.issues.empty() || !route.consistent;
            t.summary += ch.issues.empty() ? "; coboundary gives a simplicial homotopy" : "; homotopy identities fail";
        } else {
            TruncatedSimplicialSet src = ordinary_nerve(gamma, N);
            SimplicialMap f = checked_cocycle_map(gamma, a, d, src), g = checked_cocycle_map(gamma, bb, d, src);
            double budget = c.budget ? *c.budget : 1e8;
            bool fwd = find_homotopy(src, d.set, f, g, budget).has_value();
            bool back = find_homotopy(src, d.set, g, f, budget).has_value();
            h = {{"cohomologous", false}, {"homotopy_found", fwd}, {"reverse_homotopy_found", back}};
            t.summary += (fwd || back) ? "; a homotopy exists" : "; no simplicial homotopy exists";
        }
        t.result["homotopy"] = h;
    }
    return t;
}

TaskResult task_homology(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"xmod", "group", "kind", "N", "maxdeg"}), {"N", "maxdeg"});
    int N = get_int(b, "N", ""), maxdeg = get_int(b, "maxdeg", "");
    if (N < 1 || N > 8) json_fail("/N", "truncation must lie in 1..8");
    if (maxdeg < 0 || maxdeg >= N) json_fail("/maxdeg", "need 0 <= maxdeg < N");
    std::string kind = get_string(b, "kind", "duskin");
    TaskResult t;
    if (kind == "ordinary") {
        if (!b.contains("group") || b.contains("xmod")) json_fail("/group", "the ordinary nerve takes a group only");
        FiniteGroup g = valid_group_from_json(b.at("group"), "/group");
        Homology h = homology(ordinary_nerve(g, N), maxdeg);
        t.result = {{"kind", kind}, {"homology", homology_to_json(h)}};
        t.summary = "ordinary nerve homology computed";
        return t;
    }
    if (!b.contains("xmod") || b.contains("group")) json_fail("/xmod", "this kind takes a crossed module only");
    CrossedModule x = valid_xmod_from_json(b.at("xmod"), "/xmod");
    auto text = [](const Homology& h) {
        std::string s;
        for (size_t k = 0; k < h.groups.size(); ++k)
            s += (k ? " " : "") + std::string("H") + std::to_string(k) + "=[" + join(h.groups[k], ",") + "]";
        return s;
    };
    if (kind == "duskin" || kind == "monoidal") {
        Homology h = kind == "duskin" ? homology(duskin_nerve(x, N, nerve_options(c)).set, maxdeg)
                                      : homology(monoidal_diag_nerve(x, N, nerve_options(c)).set, maxdeg);
        t.result = {{"kind", kind}, {"homology", homology_to_json(h)}};
        t.summary = kind + " " + text(h);
        return t;
    }
    if (kind != "both") json_fail("/kind", "expected duskin, monoidal, both or ordinary");
    Homology hd = homology(duskin_nerve(x, N, nerve_options(c)).set, maxdeg);
    Homology hm = homology(monoidal_diag_nerve(x, N, nerve_options(c)).set, maxdeg);
    bool agree = hd.groups == hm.groups;
    t.result = {{"kind", kind}, {"duskin", homology_to_json(hd)}, {"monoidal", homology_to_json(hm)}, {"agree", agree}};
    t.violation = !agree;
    t.summary = "duskin " + text(hd) + (agree ? " agrees with" : " DIFFERS from") + " monoidal " + text(hm);
    return t;
}

TaskResult task_appendix(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"xmod", "max_n", "max_m"}), {"xmod", "max_n", "max_m"});
    CrossedModule x = valid_xmod_from_json(b.at("xmod"), "/xmod");
    AppendixOptions opt;
    if (c.budget) opt.budget = *c.budget;
    int mn = get_int(b, "max_n", ""), mm = get_int(b, "max_m", "");
    if (mn < 0 || mn > 4) json_fail("/max_n", "must lie in 0..4");
    if (mm < 1 || mm > 4) json_fail("/max_m", "must lie in 1..4");
    AppendixReport r = verify_appendix_retraction(x, mn, mm, opt);
    TaskResult t;
    t.result = {{"max_n", r.max_n},
                {"max_m", r.max_m},
                {"pseudofunctors", r.pseudofunctors},
                {"transformations", r.transformations},
                {"chains", r.chains},
                {"explicit_chains", r.explicit_chains},
                {"identities", r.identities},
                {"failures", report_to_json(r.failures)},
                {"passed", r.passed()}};
    t.violation = !r.passed();
    t.summary = std::to_string(r.identities) + " identities, " + std::to_string(r.failures.size()) + " failures";
    return t;
}

TaskResult task_kernel_ob(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"group", "matrices", "preset", "n", "perturbations"}));
    FiniteGroup gamma;
    std::vector<Mat> mats;
    if (b.contains("preset")) {
        if (get_string(b, "preset", "") != "clock-shift") json_fail("/preset", "the only preset is clock-shift");
        if (b.contains("group") || b.contains("matrices")) json_fail("/preset", "a preset fixes group and matrices");
        int n = get_int(b, "n", "");
        if (n < 2 || n > 6) json_fail("/n", "must lie in 2..6");
        gamma = make_product(make_cyclic(n), make_cyclic(n));
        mats = clock_shift_kernel(n);
    } else {
        if (!b.contains("group") || !b.contains("matrices")) json_fail("", "give a preset, or group and matrices");
        gamma = valid_group_from_json(b.at("group"), "/group");
        const json& ms = b.at("matrices");
        if (!ms.is_array() || static_cast<int>(ms.size()) != gamma.order)
            json_fail("/matrices", "one matrix per element of Gamma");
        for (size_t i = 0; i < ms.size(); ++i) mats.push_back(matrix_from_json(ms[i], "/matrices/" + std::to_string(i)));
    }
    double tol = c.tol ? *c.tol : 1e-6;
    MatrixObstruction o = matrix_kernel_obstruction(gamma, mats, tol);
    Coefficients circle = Coefficients::circle();
    TaskResult t;
    t.result = {{"module_label", "Q/Z trivial"},
                {"invariant_factors", o.h3.factors()},
                {"coordinates", o.coordinates},
                {"representative", cochain_to_json(o.omega, circle)},
                {"witness", o.witness ? cochain_to_json(*o.witness, circle) : json(nullptr)},
                {"defect_residual", number(o.defect_residual)},
                {"snap_residual", number(o.snap_residual)}};
    bool zero = std::all_of(o.coordinates.begin(), o.coordinates.end(), [](i64 v) { return v == 0; });
    t.summary = std::string("obstruction class ") + (zero ? "zero" : "nonzero") + " in H^3 [" + join(o.h3.factors(), ",") + "]";
    int pert = b.contains("perturbations") ? get_int(b, "perturbations", "") : 0;
    if (pert < 0 || pert > 10000) json_fail("/perturbations", "must lie in 0..10000");
    if (pert > 0) {
        int same = 0;
        double worst = 0;
        for (int k = 0; k < pert; ++k) {
            std::mt19937_64 rng = trial_rng(c.seed, 11, k);
            std::uniform_real_distribution<double> ud(0, 2 * 3.14159265358979323846);
            std::vector<Mat> p = mats;
            for (size_t g = 0; g < p.size(); ++g) {
                if (static_cast<int>(g) != gamma.identity) p[g] *= std::exp(cplx(0, ud(rng)));
            }
            MatrixObstruction q = matrix_kernel_obstruction(gamma, p, tol, &o.h3);
            same += q.coordinates == o.coordinates;
            worst = std::max({worst, q.defect_residual, q.snap_residual});
        }
        t.result["perturbation"] = {{"trials", pert}, {"same_class", same}, {"max_residual", number(worst)}};
        t.violation = same != pert;
        t.summary += "; " + std::to_string(same) + "/" + std::to_string(pert) + " perturbed lifts agree";
    }
    return t;
}

UnitaryTolerances unitary_tol(const Context& c)
{
    UnitaryTolerances t;
    if (c.tol) t.equality = *c.tol;
    return t;
}

json circle_json(const CircleValue& v)
{
    json j = {{"value", number(v.value)}, {"lattice", "1/" + std::to_string(v.n)}, {"shift", number(v.shift)},
              {"path_check", number(v.path_check)}};
    j["exact"] = v.snap ? json(std::to_string(v.snap->first) + "/" + std::to_string(v.snap->second)) : json(nullptr);
    return j;
}

TaskResult task_unitary(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"op", "matrix", "matrix2", "path", "quad_panels", "n", "trials", "checks"}));
    std::string op = get_string(b, "op", "properties");
    UnitaryTolerances tol = unitary_tol(c);
    TaskResult t;
    auto mat = [&](const std::string& key) {
        if (!b.contains(key)) json_fail("/" + key, "missing field");
        return matrix_from_json(b.at(key), "/" + key);
    };
    if (op == "properties") {
        UnitaryCheckOptions o;
        if (b.contains("checks")) {
            const json& k = b.at("checks");
            require_keys(k, "/checks", {"exp_pairs", "hom_pairs", "su_samples", "sandwich_pairs", "conj_samples", "max_n"});
            if (k.contains("exp_pairs")) o.exp_pairs = get_int(k, "exp_pairs", "/checks");
            if (k.contains("hom_pairs")) o.hom_pairs = get_int(k, "hom_pairs", "/checks");
            if (k.contains("su_samples")) o.su_samples = get_int(k, "su_samples", "/checks");
            if (k.contains("sandwich_pairs")) o.sandwich_pairs = get_int(k, "sandwich_pairs", "/checks");
            if (k.contains("conj_samples")) o.conj_samples = get_int(k, "conj_samples", "/checks");
            if (k.contains("max_n")) o.max_n = get_int(k, "max_n", "/checks");
            if (o.max_n < 2 || o.max_n > 16) json_fail("/checks/max_n", "must lie in 2..16");
        }
        json out = json::array();
        long long bad = 0;
        for (const auto& p : unitary_property_checks(c.seed, o)) {
            out.push_back({{"name", p.name},
                           {"trials", p.trials},
                           {"worst", number(p.worst)},
                           {"threshold", number(p.threshold)},
                           {"violations", p.violations},
                           {"passed", p.passed()}});
            bad += p.violations;
        }
        t.result = {{"op", op}, {"checks", out}};
        t.violation = bad > 0;
        t.summary = std::to_string(out.size()) + " property runs, " + std::to_string(bad) + " violations";
    } else if (op == "dlhs_delta") {
        CircleValue v = dlhs_delta(mat("matrix"), c.seed, tol);
        t.result = {{"op", op}, {"delta", circle_json(v)}};
        t.summary = "Delta = " + t.result["delta"]["value"].dump() + " mod 1/" + std::to_string(v.n);
    } else if (op == "dlhs_path") {
        if (!b.contains("path")) json_fail("/path", "missing field");
        int panels = b.contains("quad_panels") ? get_int(b, "quad_panels", "") : 0;
        TraceValue v = dlhs_path(path_from_json(b.at("path"), "/path"), panels, tol);
        t.result = {{"op", op}, {"value", number(v.value)}, {"error", number(v.error)}};
        t.summary = "path determinant " + t.result["value"].dump();
    } else if (op == "su_tau_member") {
        SuMembership m = su_tau_member(mat("matrix"), tol);
        t.result = {{"op", op}, {"member", m.member}, {"det", {number(m.det.real()), number(m.det.imag())}}};
        if (m.certificate) {
            json hs = json::array();
            for (const auto& h : m.certificate->h) hs.push_back(matrix_to_json(h));
            t.result["certificate"] = {{"h", hs},
                                       {"residual", number(m.certificate->residual)},
                                       {"trace_residual", number(m.certificate->trace_residual)}};
        }
        t.summary = m.member ? "in SU" : "not in SU";
    } else if (op == "el_tau" || op == "d_tau") {
        ExpLength e = op == "el_tau" ? el_tau(mat("matrix"), tol) : d_tau(mat("matrix"), mat("matrix2"), tol);
        t.result = {{"op", op}, {"value", number(e.value)}, {"regime", e.exact ? "exact" : "upper-bound"}};
        t.summary = op + " = " + t.result["value"].dump() + (e.exact ? "" : " (upper bound)");
    } else if (op == "exp_inequalities") {
        int n = get_int(b, "n", ""), trials = get_int(b, "trials", "");
        if (n < 1 || n > 32) json_fail("/n", "must lie in 1..32");
        if (trials < 1) json_fail("/trials", "must be positive");
        ExpInequalityReport r = check_exp_inequalities(n, trials, c.seed);
        t.result = {{"op", op},
                    {"trials", r.trials},
                    {"min_upper_slack", number(r.min_upper_slack)},
                    {"min_lower_slack", number(r.min_lower_slack)},
                    {"violations", r.violations}};
        t.violation = r.violations > 0;
        t.summary = std::to_string(r.violations) + " violations in " + std::to_string(r.trials) + " pairs";
    } else {
        json_fail("/op", "unknown op '" + op + "'");
    }
    return t;
}

TaskResult task_decompose(const Context& c)
{
    const json& b = c.bundle;
    require_keys(b, "", with_common({"path", "matrices"}), {"path"});
    PathDecomposition d = decompose_path(path_from_json(b.at("path"), "/path"), unitary_tol(c));
    TaskResult t;
    json h = json::array(), ts = json::array();
    for (double v : d.h) h.push_back(number(v));
    for (double v : d.ts) ts.push_back(number(v));
    t.result = {{"ts", ts}, {"h", h}, {"det_residual", number(d.det_residual)}, {"reconstruction", number(d.reconstruction)}};
    if (get_bool(b, "matrices", false)) {
        json g = json::array();
        for (const auto& m : d.g) g.push_back(matrix_to_json(m));
        t.result["g"] = g;
    }
    t.violation = d.det_residual > 1e-9 || d.reconstruction > 1e-9;
    t.summary = "h(1) = " + json(number(d.h.back())).dump();
    return t;
}

TaskResult dispatch(const Context& c)
{
    const std::string& k = c.task;
    if (k == "validate") return task_validate(c);
    if (k == "h-n") return task_hn(c);
    if (k == "h1") return task_h1(c, false);
    if (k == "h1-ff") return task_h1(c, true);
    if (k == "theta") return task_theta(c);
    if (k == "exact-check") return task_exact(c);
    if (k == "nerve") return task_nerve(c);
    if (k == "homology") return task_homology(c);
    if (k == "appendix-check") return task_appendix(c);
    if (k == "kernel-ob") return task_kernel_ob(c);
    if (k == "unitary-check") return task_unitary(c);
    if (k == "decompose") return task_decompose(c);
    json_fail("/task", "unknown task '" + k + "'");
}

RunResult finish(const json& task, Status s, json result, const std::string& error, const Context* c,
                 const std::string& summary)
{
    RunResult r;
    r.status = s;
    r.report = {{"task", task}, {"status", status_name(s)}};
    if (!result.is_null()) r.report["result"] = std::move(result);
    if (!error.empty()) r.report["error"] = error;
    json prov = {{"tool", "xmc"}, {"version", kToolVersion}, {"schema", kSchemaVersion}};
    prov["seed"] = c ? c->seed : 0;
    prov["budget"] = c && c->budget ? number(*c->budget) : json(nullptr);
    prov["tol"] = c && c->tol ? number(*c->tol) : json(nullptr);
    r.report["provenance"] = prov;
    std::string t = task.is_string() ? task.get<std::string>() : "?";
    r.summary = t + ": " + status_name(s) + (summary.empty() ? "" : " (" + summary + ")");
    return r;
}

}  // namespace

RunResult run_bundle(const json& bundle, const RunOverrides& ov)
{
    json task = bundle.is_object() && bundle.contains("task") ? bundle.at("task") : json(nullptr);
    Context c;
    try {
        if (!bundle.is_object()) json_fail("", "a bundle is a JSON object");
        if (!task.is_string()) json_fail("/task", "missing or not a string");
        c.bundle = bundle;
        c.task = task.get<std::string>();
        if (bundle.contains("schema") && bundle.at("schema") != kSchemaVersion)
            json_fail("/schema", "unsupported schema version");
        if (bundle.contains("seed")) {
            if (!bundle.at("seed").is_number_unsigned()) json_fail("/seed", "expected a non-negative integer");
            c.seed = bundle.at("seed").get<std::uint64_t>();
        }
        if (bundle.contains("budget")) c.budget = get_double(bundle, "budget", "");
        if (bundle.contains("tol")) c.tol = get_double(bundle, "tol", "");
        if (ov.seed) c.seed = *ov.seed;
        if (ov.budget) c.budget = *ov.budget;
        if (c.budget && !(*c.budget > 0)) json_fail("/budget", "must be positive");
        if (c.tol && !(*c.tol > 0)) json_fail("/tol", "must be positive");
        TaskResult t = dispatch(c);
        return finish(task, t.violation ? Status::Violation : Status::Ok, t.result, "", &c, t.summary);
    } catch (const InputError& e) {
        return finish(task, Status::InputError, nullptr, e.what(), &c, e.what());
    } catch (const ResourceError& e) {
        return finish(task, Status::ResourceError, nullptr, e.what(), &c, e.what());
    } catch (const ViolationError& e) {
        return finish(task, Status::Violation, nullptr, e.what(), &c, e.what());
    } catch (const NumericError& e) {
        return finish(task, Status::Violation, nullptr, std::string("numeric: ") + e.what(), &c, e.what());
    } catch (const json::exception& e) {
        return finish(task, Status::InputError, nullptr, e.what(), &c, e.what());
    } catch (const std::bad_alloc&) {
        return finish(task, Status::ResourceError, nullptr, "out of memory", &c, "out of memory");
    }
}

RunResult run_bundle_text(const std::string& text, const RunOverrides& ov)
{
    json bundle;
    try {
        bundle = json::parse(text);
    } catch (const json::parse_error& e) {
        Context c;
        if (ov.seed) c.seed = *ov.seed;
        if (ov.budget) c.budget = *ov.budget;
        return finish(nullptr, Status::InputError, nullptr, std::string("malformed JSON: ") + e.what(), &c,
                      "malformed JSON");
    }
    return run_bundle(bundle, ov);
}

namespace {

std::vector<std::string> split_lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

std::string unified_diff(const std::string& expected, const std::string& actual, const std::string& name)
{
    auto a = split_lines(expected), b = split_lines(actual);
    const size_t n = a.size(), m = b.size();
    if (n * m > 25'000'000) return "--- " + name + ".expected\n+++ " + name + ".actual\n(files too large to diff)\n";
    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (size_t i = n; i-- > 0;) {
        for (size_t j = m; j-- > 0;) {
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }
    struct Op {
        char kind;
        size_t i, j;
    };
    std::vector<Op> ops;
    size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && a[i] == b[j]) {
            ops.push_back({' ', i++, j++});
        } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
            ops.push_back({'-', i++, j});
        } else {
            ops.push_back({'+', i, j++});
        }
    }
    std::ostringstream os;
    os << "--- " << name << ".expected\n+++ " << name << ".actual\n";
    const size_t ctx = 3;
    size_t k = 0;
    while (k < ops.size()) {
        if (ops[k].kind == ' ') {
            ++k;
            continue;
        }
        size_t start = k >= ctx ? k - ctx : 0, end = k;
        // extend the hunk while changes are within 2*ctx of each other
        while (end < ops.size()) {
            size_t next = end;
            while (next < ops.size() && ops[next].kind != ' ') ++next;
            size_t gap = next;
            while (gap < ops.size() && ops[gap].kind == ' ') ++gap;
            if (gap < ops.size() && gap - next <= 2 * ctx) {
                end = gap;
            } else {
                end = std::min(ops.size(), next + ctx);
                break;
            }
        }
        size_t ai = ops[start].i, bj = ops[start].j, alen = 0, blen = 0;
        for (size_t t = start; t < end; ++t) {
            alen += ops[t].kind != '+';
            blen += ops[t].kind != '-';
        }
        os << "@@ -" << ai + (alen ? 1 : 0) << "," << alen << " +" << bj + (blen ? 1 : 0) << "," << blen << " @@\n";
        for (size_t t = start; t < end; ++t) {
            const Op& o = ops[t];
            os << o.kind << (o.kind == '+' ? b[o.j] : a[o.i]) << "\n";
        }
        k = end;
    }
    return os.str();
}

RunResult golden_verify(const std::string& dir, const RunOverrides& ov)
{
    namespace fs = std::filesystem;
    const json task = "golden";
    try {
        if (!fs::is_directory(dir)) throw InputError("golden: not a directory: " + dir);
        std::vector<fs::path> bundles;
        for (const auto& e : fs::directory_iterator(dir)) {
            std::string f = e.path().filename().string();
            const std::string suf = ".bundle.json";
            if (f.size() > suf.size() && f.compare(f.size() - suf.size(), suf.size(), suf) == 0) bundles.push_back(e.path());
        }
        std::sort(bundles.begin(), bundles.end());
        json drift = json::array(), cases = json::array();
        int matched = 0;
        for (const auto& p : bundles) {
            std::string f = p.filename().string();
            std::string stem = f.substr(0, f.size() - std::string(".bundle.json").size());
            fs::path exp = p.parent_path() / (stem + ".expected.json");
            if (!fs::exists(exp)) throw InputError("golden: missing " + exp.string());
            std::string expected = read_file(exp);
            std::string actual = dump_report(run_bundle_text(read_file(p), ov).report);
            bool same = expected == actual;
            matched += same;
            cases.push_back({{"case", stem}, {"match", same}});
            if (!same) drift.push_back({{"case", stem}, {"diff", unified_diff(expected, actual, stem)}});
        }
        json result = {{"cases", bundles.size()}, {"matched", matched}, {"results", cases}, {"drift", drift}};
        Context c;
        if (ov.seed) c.seed = *ov.seed;
        if (ov.budget) c.budget = *ov.budget;
        std::string summary = std::to_string(matched) + "/" + std::to_string(bundles.size()) + " reports match";
        return finish(task, drift.empty() ? Status::Ok : Status::Violation, result, "", &c, summary);
    } catch (const InputError& e) {
        return finish(task, Status::InputError, nullptr, e.what(), nullptr, e.what());
    }
}

}  // namespace xmc
