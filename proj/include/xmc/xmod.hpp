/**
 * Crossed modules H -> G, their morphisms, and the pointed sets
 * Z^1(Gamma, X), H^1(Gamma, X) and H^1_ff(Gamma, X) for finite Gamma.
 *
 * A 1-cocycle is a pair (alpha, u) with alpha: Gamma -> G and
 * u: Gamma x Gamma -> H such that
 *   alpha_g alpha_h = d(u_{g,h}) alpha_{gh},
 *   alpha_g(u_{h,k}) u_{g,hk} = u_{g,h} u_{gh,k}.
 * Only normalized cocycles (alpha_e = 1, u_{g,e} = u_{e,g} = 1) are used.
 */
#ifndef XMC_XMOD_HPP
#define XMC_XMOD_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xmc/cohomology.hpp"
#include "xmc/group.hpp"

namespace xmc {

struct CrossedModule {
    FiniteGroup H;
    FiniteGroup G;
    std::vector<int> boundary;  // H -> G
    std::vector<int> action;    // action[g * |H| + h] = g(h)

    int bd(int h) const { return boundary[h]; }
    int act(int g, int h) const { return action[g * H.order + h]; }
};

/// Table sizes only; throws InputError on mismatch.
void check_xmod_shape(const CrossedModule& x);
/// Equivariance, Peiffer identity, and that the action is by automorphisms.
Report validate_xmod(const CrossedModule& x);

/// (1 -> G).
CrossedModule xmod_from_group(const FiniteGroup& g);
/// (H -> 1); a crossed module exactly when H is abelian.
CrossedModule xmod_from_coefficients(const FiniteGroup& h);
/// (H -> G) from explicit boundary and action tables; throws InputError if invalid.
CrossedModule make_xmod(const FiniteGroup& h, const FiniteGroup& g, std::vector<int> boundary,
                        std::vector<int> action);
/// (G -id-> G) with conjugation action.
CrossedModule identity_xmod(const FiniteGroup& g);

struct XModMorphism {
    CrossedModule source;
    CrossedModule target;
    std::vector<int> phi1;  // H1 -> H2
    std::vector<int> phi2;  // G1 -> G2
};

Report validate_morphism(const XModMorphism& m);

struct Cocycle1 {
    std::vector<int> alpha;  // per element of Gamma
    std::vector<int> u;      // u[g * |Gamma| + h]

    bool operator==(const Cocycle1& o) const { return alpha == o.alpha && u == o.u; }
    bool operator<(const Cocycle1& o) const { return alpha != o.alpha ? alpha < o.alpha : u < o.u; }
};

struct CocycleHash {
    size_t operator()(const Cocycle1& c) const;
};

/// The cocycle (alpha = 1, u = 1).
Cocycle1 trivial_cocycle(const FiniteGroup& gamma, const CrossedModule& x);
/// Both cocycle equations and normalization.
Report validate_cocycle(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c);

/// gamma in G and w: Gamma -> H with w_e = 1.
struct Coboundary1Witness {
    int gamma = 0;
    std::vector<int> w;
};

/// The cocycle (d(w_g) gamma alpha_g gamma^-1, w_g gamma(alpha_g(gamma^-1(w_h)) u_{g,h}) w_{gh}^-1).
Cocycle1 transform(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c, const Coboundary1Witness& w);
/// Checks that the witness carries a to b.
Report check_witness(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& a, const Cocycle1& b,
                     const Coboundary1Witness& w);
/// Witness carrying b back to a.
Coboundary1Witness invert_witness(const FiniteGroup& gamma, const CrossedModule& x, const Coboundary1Witness& w);
/// Witness for a -> c given a -> b (first) and b -> c (second).
Coboundary1Witness compose_witness(const FiniteGroup& gamma, const CrossedModule& x, const Coboundary1Witness& first,
                                   const Coboundary1Witness& second);

struct XModOptions {
    double budget = 1e8;   // bound on the enumeration search space
    bool strict = false;   // restrict equivalence to gamma = e
};

/// All normalized cocycles in lexicographic order of (alpha, u).
std::vector<Cocycle1> enumerate_Z1(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt = {});

/// First witness in the order gamma ascending, then w lexicographic.
std::optional<Coboundary1Witness> are_cohomologous(const FiniteGroup& gamma, const CrossedModule& x,
                                                   const Cocycle1& a, const Cocycle1& b,
                                                   const XModOptions& opt = {});

struct H1PointedSet {
    std::vector<Cocycle1> classes;  // lexicographic minimum of each class, in increasing order
    int basepoint = -1;             // class of the trivial cocycle, -1 if absent (ff variant)
    std::vector<bool> ff;           // alpha_g outside d(H) for every g != e
    std::vector<Cocycle1> cocycles;  // the enumerated cocycles
    std::vector<int> class_of;       // class index per enumerated cocycle
    std::unordered_map<Cocycle1, int, CocycleHash> index;  // cocycle -> position in cocycles

    /// Class of an arbitrary normalized cocycle, -1 if not enumerated.
    int find(const Cocycle1& c) const;
};

H1PointedSet compute_H1(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt = {});
H1PointedSet compute_H1_ff(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt = {});

/// alpha_g outside d(H) for all g != e.
bool is_ff(const FiniteGroup& gamma, const CrossedModule& x, const Cocycle1& c);

/// (phi2 o alpha, phi1 o u).
Cocycle1 pushforward(const XModMorphism& m, const FiniteGroup& gamma, const Cocycle1& c);

/**
 * The bijection H^1(Gamma, (H -> 1)) <-> H^2(Gamma, H) for abelian H with
 * trivial action.
 */
struct AbelianShift {
    AbelianDecomposition decomposition;
    Coefficients module;
    CohomologyGroup h2;
    H1PointedSet h1;
    std::vector<std::vector<i64>> coords;  // H^2 coordinates per H^1 class
    bool bijective = false;
};

AbelianShift abelian_shift(const FiniteGroup& gamma, const CrossedModule& x, const XModOptions& opt = {});
/// The u-table of a cocycle over (H -> 1) as a 2-cochain in decomposition coordinates.
Cochain u_as_cochain(const FiniteGroup& gamma, const AbelianDecomposition& dec, const std::vector<int>& u);
/// Inverse of u_as_cochain (alpha = 1).
Cocycle1 cochain_as_cocycle(const FiniteGroup& gamma, const AbelianDecomposition& dec, const Cochain& z);

}  // namespace xmc

#endif
