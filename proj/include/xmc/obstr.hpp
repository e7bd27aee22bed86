/**
 * Central extensions of crossed modules H_-1 -> (H0 -> G) -> (H1 -> G), the
 * boundary map theta: H^1(Gamma, (H1 -> G)) -> H^3(Gamma, H_-1), exactness
 * checks, conjugation bookkeeping, and obstructions of projective unitary
 * kernels.
 */
#ifndef XMC_OBSTR_HPP
#define XMC_OBSTR_HPP

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "xmc/cohomology.hpp"
#include "xmc/xmod.hpp"

namespace xmc {

/// x0 = (H0 -> G), x1 = (H1 -> G) over the same G, and a surjection phi0: H0 -> H1 with central kernel.
struct CentralXModExtension {
    CrossedModule x0;
    CrossedModule x1;
    std::vector<int> phi0;

    /// The morphism x0 -> x1 given by (phi0, id).
    XModMorphism morphism() const;
    std::vector<int> kernel() const;
};

Report validate_extension(const CentralXModExtension& e);
/// Throws InputError if invalid.
CentralXModExtension make_extension(CrossedModule x0, CrossedModule x1, std::vector<int> phi0);

/// Z/2 -> Z/4 -> Z/2 with trivial boundaries; G = 1, or G = Z/2 acting by inversion.
CentralXModExtension z2_z4_z2_extension(bool inversion);
/// mu_2 -> Q8 -> Q8/mu_2 over G = Inn(Q8), boundaries the adjoint maps.
CentralXModExtension q8_extension();

/// ker(phi0) with the Gamma-action g . k = alpha_g(k).
struct InducedModule {
    AbelianDecomposition kernel;
    Coefficients module;
    std::vector<std::vector<int>> table;  // table[g][i] = alpha_g(kernel element i), in H0 indices
};

InducedModule induced_module(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c);

struct ObstructionClass {
    Cocycle1 cocycle;
    InducedModule module;
    CohomologyGroup h3;
    Cochain representative;        // omega in kernel coordinates
    std::vector<i64> coordinates;  // class of omega in h3
    std::vector<int> lift;         // v[g * |Gamma| + h] in H0

    bool zero() const;
};

/// Lift v of u with the smallest preimage of each entry (1 over 1).
std::vector<int> canonical_lift(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c);
ObstructionClass theta(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c,
                       const CohomologyOptions& opt = {});
/// theta computed from an explicit lift (any table with phi0(v) = u).
ObstructionClass theta_with_lift(const CentralXModExtension& e, const FiniteGroup& gamma, const Cocycle1& c,
                                 const std::vector<int>& lift, const CohomologyOptions& opt = {});

/// Distinct classes obtained from every lift of u, normalized or not, sorted.
std::vector<std::vector<i64>> lift_sweep(const CentralXModExtension& e, const FiniteGroup& gamma,
                                         const Cocycle1& c, double budget = 1e6);

/// gamma . o: the class of gamma(omega) for the module of (gamma alpha gamma^-1, gamma(u)).
ObstructionClass conj_action(const CentralXModExtension& e, const FiniteGroup& gamma, int g,
                             const ObstructionClass& o, const CohomologyOptions& opt = {});

/**
 * The induced-module structures realized by cocycles of (H1 -> G), identified
 * when their tables are equal, with the G-orbits under conjugation.
 */
struct ConjugacySum {
    std::vector<std::vector<std::vector<int>>> labels;  // distinct action tables
    std::vector<int> orbit;                             // orbit id per label
    std::vector<int> class_label;                       // label per H^1 class
    std::vector<std::vector<i64>> class_theta;          // theta coordinates per H^1 class
    std::vector<std::vector<i64>> class_factors;        // H^3 invariant factors per H^1 class
};

ConjugacySum sum_over_conjugacy(const CentralXModExtension& e, const FiniteGroup& gamma,
                                const XModOptions& opt = {});

struct ExactnessReport {
    int h1_source = 0;  // |H^1(Gamma, x0)|
    int h1_target = 0;  // |H^1(Gamma, x1)|
    i64 h2_order = 0;   // |H^2(Gamma, H_-1)|
    std::vector<int> image;             // classes of H^1(x1) hit by pushforward
    std::vector<int> theta_zero;        // classes of H^1(x1) with theta = 0
    std::vector<int> h2_image;          // classes of H^1(x0) hit from H^2
    std::vector<int> fiber_of_base;     // classes of H^1(x0) pushed to the basepoint
    bool at_target = false;             // image == theta_zero
    bool at_source = false;             // h2_image == fiber_of_base
    Report issues;

    bool exact() const { return at_target && at_source; }
};

ExactnessReport verify_exactness(const CentralXModExtension& e, const FiniteGroup& gamma,
                                 const XModOptions& opt = {});

/// Projective kernel: U_g with U_g U_h U_gh^-1 scalar.
struct MatrixObstruction {
    CohomologyGroup h3;
    Cochain omega;                      // circle cochain, denominator n |Gamma|
    std::vector<i64> coordinates;
    std::optional<Cochain> witness;     // d(witness) = omega when the class is zero
    double defect_residual = 0;         // max distance of U_g U_h U_gh^-1 from a scalar
    double snap_residual = 0;           // max distance of omega from the snapped rationals
};

/// h3, when given, must be H^3(gamma, Q/Z); reusing it skips the expensive part.
MatrixObstruction matrix_kernel_obstruction(const FiniteGroup& gamma, const std::vector<Eigen::MatrixXcd>& u,
                                            double tol = 1e-6, const CohomologyGroup* h3 = nullptr);
/// Clock and shift on C^n, U_(a,b) = C^a S^b over Z/n x Z/n.
std::vector<Eigen::MatrixXcd> clock_shift_kernel(int n);

}  // namespace xmc

#endif
