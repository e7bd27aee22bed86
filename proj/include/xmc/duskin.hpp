/**
 * Nerves of the 2-group of a crossed module: the Duskin nerve of strictly
 * unital pseudofunctors [n] -> G, the diagonal of the monoidal double nerve,
 * the simplicial maps and homotopies induced by 1-cocycles and coboundaries,
 * and checks of the retraction and deformation-retract formulas relating
 * pseudofunctors to strict functors.
 */
#ifndef XMC_DUSKIN_HPP
#define XMC_DUSKIN_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "xmc/simplicial.hpp"
#include "xmc/xmod.hpp"

namespace xmc {

struct VectorHash {
    size_t operator()(const std::vector<int>& v) const;
};

/**
 * A pseudofunctor [n] -> G, stored as full tables: alpha[i*(n+1)+j] for i < j
 * and u[(i*(n+1)+j)*(n+1)+k] for i < j < k; every other entry is the identity.
 */
struct PseudofunctorSimplex {
    int n = 0;
    std::vector<int> alpha;
    std::vector<int> u;

    int a(int i, int j) const { return alpha[i * (n + 1) + j]; }
    int w(int i, int j, int k) const { return u[(i * (n + 1) + j) * (n + 1) + k]; }
    int& a(int i, int j) { return alpha[i * (n + 1) + j]; }
    int& w(int i, int j, int k) { return u[(i * (n + 1) + j) * (n + 1) + k]; }
    bool operator==(const PseudofunctorSimplex& o) const { return n == o.n && alpha == o.alpha && u == o.u; }
    std::vector<int> key() const;
};

PseudofunctorSimplex identity_simplex(const CrossedModule& x, int n);
/// Both simplex relations.
Report validate_simplex(const CrossedModule& x, const PseudofunctorSimplex& s);
/// f^* for a monotone f: [m] -> [n] given by its values.
PseudofunctorSimplex pull_back(const CrossedModule& x, const PseudofunctorSimplex& s, const std::vector<int>& f);
PseudofunctorSimplex face(const CrossedModule& x, const PseudofunctorSimplex& s, int i);
PseudofunctorSimplex degeneracy(const CrossedModule& x, const PseudofunctorSimplex& s, int i);

struct NerveOptions {
    double budget = 1e7;  // candidates examined per dimension
};

struct DuskinNerve {
    CrossedModule x;
    TruncatedSimplicialSet set;
    std::vector<std::vector<PseudofunctorSimplex>> simplices;  // canonical order per dimension
    std::vector<std::unordered_map<std::vector<int>, int, VectorHash>> index;

    /// Index of a simplex, -1 if it is not one.
    int find(const PseudofunctorSimplex& s) const;
};

DuskinNerve duskin_nerve(const CrossedModule& x, int N, const NerveOptions& opt = {});

/// For x = (1 -> G): the projection to (alpha_01, ..., alpha_{n-1,n}) as a map to ordinary_nerve(G, N).
SimplicialMap duskin_projection(const DuskinNerve& d);

/**
 * Diagonal of the bisimplicial set (m, n) -> m-chains of morphisms in the
 * n-fold power of the monoidal category of the 2-group. A k-simplex is k
 * objects of G and a k x k table of elements of H (step-major).
 */
struct MonoidalDiagNerve {
    CrossedModule x;
    TruncatedSimplicialSet set;
};

MonoidalDiagNerve monoidal_diag_nerve(const CrossedModule& x, int N, const NerveOptions& opt = {});

/// Lemma-4.5 map: (g1..gn) -> alpha_ij = alpha_{g_{i+1}...g_j}, u_ijk = u_{g_{i+1}...g_j, g_{j+1}...g_k}.
SimplicialMap cocycle_to_simplicial_map(const FiniteGroup& gamma, const Cocycle1& c, const DuskinNerve& d);
/// Throws ViolationError if the result is not simplicial.
SimplicialMap checked_cocycle_map(const FiniteGroup& gamma, const Cocycle1& c, const DuskinNerve& d,
                                  const TruncatedSimplicialSet& source);

/**
 * The pseudofunctor C_Gamma x I -> G of a coboundary (gamma, w) from a to b,
 * restricted to nerve simplices and turned into a simplicial homotopy from the
 * map of a to the map of b.
 */
struct CoboundaryHomotopy {
    SimplicialMap from;
    SimplicialMap to;
    SimplicialHomotopy homotopy;
    Report issues;  // identity failures; empty on success
};

/// First (g, h, k) where the associativity comparison fails, if any.
std::optional<std::vector<int>> comparison_failure(const FiniteGroup& gamma, const CrossedModule& x,
                                                   const Cocycle1& a, const Cocycle1& b,
                                                   const Coboundary1Witness& w);
/// Throws ViolationError naming the failing triple when the witness is invalid.
CoboundaryHomotopy coboundary_to_homotopy(const FiniteGroup& gamma, const Cocycle1& a, const Cocycle1& b,
                                          const Coboundary1Witness& w, const DuskinNerve& d,
                                          const TruncatedSimplicialSet& source);

/**
 * Outer witnesses through the conjugation by gamma: homotopies for
 * (gamma, 1): a -> a^gamma and (e, w): a^gamma -> b, plus the direct one.
 */
struct OuterRoute {
    Cocycle1 conjugated;
    CoboundaryHomotopy to_conjugate;
    CoboundaryHomotopy inner;
    CoboundaryHomotopy direct;
    bool consistent = false;  // all three valid with matching endpoints
};

OuterRoute outer_route(const FiniteGroup& gamma, const Cocycle1& a, const Cocycle1& b,
                       const Coboundary1Witness& w, const DuskinNerve& d, const TruncatedSimplicialSet& source);

/// Components w_ij (i < j) of a natural transformation, full (n+1)^2 table.
struct NatTransform {
    int n = 0;
    std::vector<int> w;

    int at(int i, int j) const { return w[i * (n + 1) + j]; }
    int& at(int i, int j) { return w[i * (n + 1) + j]; }
    bool operator==(const NatTransform& o) const { return n == o.n && w == o.w; }
};

/// alpha1_ij = d(w_ij) alpha0_ij and w_ij alpha0_ij(w_jk) u0_ijk = u1_ijk w_ik.
Report validate_nat(const CrossedModule& x, const PseudofunctorSimplex& s, const PseudofunctorSimplex& t,
                    const NatTransform& w);
/// The target of w out of s.
PseudofunctorSimplex nat_target(const CrossedModule& x, const PseudofunctorSimplex& s, const NatTransform& w);

struct AppendixReport {
    int max_n = 0;
    int max_m = 0;
    long long pseudofunctors = 0;     // objects checked
    long long transformations = 0;    // (x0, v0) pairs checked
    long long chains = 0;             // m-chains covered, m <= max_m
    long long explicit_chains = 0;    // m-chains checked one by one
    long long identities = 0;         // individual identities evaluated
    Report failures;                  // each names the simplex index, n, k and the identity

    bool passed() const { return failures.empty(); }
};

struct AppendixOptions {
    double budget = 2e6;  // explicit chain checks per (n, m); beyond it only component checks run
};

AppendixReport verify_appendix_retraction(const CrossedModule& x, int max_n, int max_m,
                                          const AppendixOptions& opt = {});

}  // namespace xmc

#endif
