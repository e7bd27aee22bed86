/**
 * JSON forms of the library's values. Parsers throw InputError carrying a
 * JSON pointer to the offending field; emitters round floats to 12
 * significant digits and print rationals as "p/q".
 */
#ifndef XMC_JSON_IO_HPP
#define XMC_JSON_IO_HPP

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "xmc/cohomology.hpp"
#include "xmc/obstr.hpp"
#include "xmc/simplicial.hpp"
#include "xmc/unitary.hpp"
#include "xmc/xmod.hpp"

namespace xmc {

using json = nlohmann::json;

/// Throws InputError("<ptr>: <msg>").
[[noreturn]] void json_fail(const std::string& ptr, const std::string& msg);
/// Rejects keys outside the allowed set.
void require_keys(const json& j, const std::string& ptr, const std::set<std::string>& allowed,
                  const std::set<std::string>& required = {});
int get_int(const json& j, const std::string& key, const std::string& ptr);
double get_double(const json& j, const std::string& key, const std::string& ptr);

double round12(double x);
json number(double x);

/// A name ("C4", "S3", "C2xC2", "Q8") or {"order", "mul": [[..]], "label"}. Not validated.
FiniteGroup group_from_json(const json& j, const std::string& ptr);
/// As group_from_json, then every group axiom.
FiniteGroup valid_group_from_json(const json& j, const std::string& ptr);
json group_to_json(const FiniteGroup& g);

/// "Z4-trivial", "Z2xZ2-trivial", "Q/Z-trivial", or {"kind", "factors", "action"}.
Coefficients coefficients_from_json(const json& j, const FiniteGroup& gamma, const std::string& ptr);
json coefficients_to_json(const Coefficients& m);

/// Nested arrays over the canonical element order; leaves are integers, integer vectors, or "p/q".
Cochain cochain_from_json(const json& j, const FiniteGroup& gamma, const Coefficients& m, int degree,
                          const std::string& ptr);
json cochain_to_json(const Cochain& c, const Coefficients& m);

/// "C2->1", "1->S3", "id:C2", or {"H", "G", "boundary", "action": [[..]]}. Not validated.
CrossedModule xmod_from_json(const json& j, const std::string& ptr);
CrossedModule valid_xmod_from_json(const json& j, const std::string& ptr);
json xmod_to_json(const CrossedModule& x);

/// "z2-z4-z2", "z2-z4-z2-inversion", "q8", or {"x0", "x1", "phi0"}.
CentralXModExtension extension_from_json(const json& j, const std::string& ptr);

Cocycle1 cocycle_from_json(const json& j, const FiniteGroup& gamma, const std::string& ptr);
json cocycle_to_json(const Cocycle1& c, int gamma_order);
Coboundary1Witness witness_from_json(const json& j, const FiniteGroup& gamma, const std::string& ptr);
json witness_to_json(const Coboundary1Witness& w);

/// [[ [re, im], ...], ...].
Mat matrix_from_json(const json& j, const std::string& ptr);
json matrix_to_json(const Mat& m);
/// {"ts": [...], "mats": [...]}.
UnitaryPath path_from_json(const json& j, const std::string& ptr);

json simplicial_to_json(const TruncatedSimplicialSet& s);
json homology_to_json(const Homology& h);
json report_to_json(const Report& r);

}  // namespace xmc

#endif
