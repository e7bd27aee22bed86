#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xmc/cli.hpp"
#include "xmc/duskin.hpp"
#include "xmc/errors.hpp"

namespace py = pybind11;
using namespace xmc;

namespace {

json parse(const std::string& s)
{
    // bare names such as "C2" or "id:S3" need no quoting on the Python side
    try {
        return json::parse(s);
    } catch (const json::parse_error&) {
        return json(s);
    }
}

py::tuple run(const std::string& text, std::optional<std::uint64_t> seed, std::optional<double> budget)
{
    RunOverrides ov;
    ov.seed = seed;
    ov.budget = budget;
    RunResult r = run_bundle_text(text, ov);
    return py::make_tuple(status_name(r.status), dump_report(r.report));
}

std::vector<i64> cohomology_factors(const std::string& group, const std::string& module, int n)
{
    FiniteGroup g = valid_group_from_json(parse(group), "/group");
    return cohomology(g, coefficients_from_json(parse(module), g, "/module"), n).factors();
}

py::dict h1(const std::string& group, const std::string& xmod)
{
    FiniteGroup g = valid_group_from_json(parse(group), "/group");
    H1PointedSet h = compute_H1(g, valid_xmod_from_json(parse(xmod), "/xmod"));
    py::dict d;
    d["classes"] = h.classes.size();
    d["cocycles"] = h.cocycles.size();
    d["basepoint"] = h.basepoint;
    return d;
}

std::vector<int> nerve_counts(const std::string& xmod, int N, const std::string& kind)
{
    CrossedModule x = valid_xmod_from_json(parse(xmod), "/xmod");
    if (kind == "monoidal") return monoidal_diag_nerve(x, N).set.counts;
    if (kind != "duskin") throw InputError("kind must be duskin or monoidal");
    return duskin_nerve(x, N).set.counts;
}

std::vector<std::vector<i64>> nerve_homology(const std::string& xmod, int N, int maxdeg, const std::string& kind)
{
    CrossedModule x = valid_xmod_from_json(parse(xmod), "/xmod");
    const auto s = kind == "monoidal" ? monoidal_diag_nerve(x, N).set : duskin_nerve(x, N).set;
    return homology(s, maxdeg).groups;
}

py::dict decompose(const std::vector<double>& ts, const std::vector<Mat>& mats)
{
    PathDecomposition d = decompose_path(UnitaryPath{ts, mats});
    py::dict out;
    out["h"] = d.h;
    out["g"] = d.g;
    out["det_residual"] = d.det_residual;
    out["reconstruction"] = d.reconstruction;
    return out;
}

}  // namespace

PYBIND11_MODULE(_xmc, m)
{
    m.doc() = "Crossed-module cohomology, obstructions, nerves and unitary checks";
    m.attr("version") = kToolVersion;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
    py::register_exception<ViolationError>(m, "ViolationError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def("run_bundle", &run, py::arg("text"), py::arg("seed") = py::none(), py::arg("budget") = py::none(),
          "Run one JSON bundle; returns (status, report text).");
    m.def("cohomology_factors", &cohomology_factors, py::arg("group"), py::arg("module"), py::arg("n"));
    m.def("h1", &h1, py::arg("group"), py::arg("xmod"));
    m.def("nerve_counts", &nerve_counts, py::arg("xmod"), py::arg("N"), py::arg("kind") = "duskin");
    m.def("nerve_homology", &nerve_homology, py::arg("xmod"), py::arg("N"), py::arg("maxdeg"),
          py::arg("kind") = "duskin");
    m.def(
        "dlhs_delta", [](const Mat& u, std::uint64_t seed) { return dlhs_delta(u, seed).value; }, py::arg("u"),
        py::arg("seed") = 0);
    m.def(
        "el_tau",
        [](const Mat& u) {
            ExpLength e = el_tau(u);
            return py::make_tuple(e.value, e.exact);
        },
        py::arg("u"));
    m.def(
        "su_tau_member", [](const Mat& u) { return su_tau_member(u).member; }, py::arg("u"));
    m.def("decompose_path", &decompose, py::arg("ts"), py::arg("mats"));
}
