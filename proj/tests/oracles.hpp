/**
 * Brute-force references used only by the tests. Nothing here calls the
 * library's cohomology, Smith form or lifting code.
 */
#ifndef XMC_TESTS_ORACLES_HPP
#define XMC_TESTS_ORACLES_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "xmc/group.hpp"
#include "xmc/simplicial.hpp"

namespace oracle {

using Cochain = std::vector<int>;  // flat over Gamma^n, values in Z/N, trivial action

/// Bar differential with trivial coefficients Z/N.
Cochain differential(const xmc::FiniteGroup& g, int N, int n, const Cochain& c);

/// H^n(Gamma, Z/N) by listing every cocycle and every coboundary.
struct Brute {
    long long cocycles = 0;
    long long coboundaries = 0;
    std::vector<std::int64_t> factors;  // ascending, each divides the next
    std::set<std::string> boundary_set;
    std::vector<Cochain> cocycle_list;
};
Brute brute_cohomology(const xmc::FiniteGroup& g, int N, int n, bool normalized);
bool in_boundaries(const Brute& b, const Cochain& z);

/// Twisted Z/4 lift of a Z/2 2-cocycle, alpha acting by sign, halved: Z/2-valued 3-cochain.
Cochain bockstein_lift(const xmc::FiniteGroup& g, const std::vector<int>& sign, const Cochain& u,
                       const std::vector<int>& lift);

/// Integral homology of the full (unnormalized) chain complex, degrees 0..maxdeg; 0 stands for Z.
std::vector<std::vector<std::int64_t>> full_homology(const xmc::TruncatedSimplicialSet& s, int maxdeg);

/// Invariant factors (> 1) and rank of an integer matrix.
struct Smith {
    int rank = 0;
    std::vector<std::int64_t> torsion;
};
Smith smith(std::vector<std::vector<std::int64_t>> a);

}  // namespace oracle

#endif
