/**
 * Classical cohomology of a finite group with coefficients in a finite
 * abelian module or in Q/Z, computed from the normalized bar complex.
 */
#ifndef XMC_COHOMOLOGY_HPP
#define XMC_COHOMOLOGY_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xmc/group.hpp"
#include "xmc/zn.hpp"

namespace xmc {

using i64 = std::int64_t;

/// Reduced fraction p/q with 0 <= p < q, read as an element of Q/Z.
struct Rational {
    i64 p = 0;
    i64 q = 1;
    bool operator==(const Rational& o) const { return p == o.p && q == o.q; }
};

Rational make_rational(i64 p, i64 q);
std::string to_string(const Rational& r);

/**
 * A Gamma-module. Finite modules are Z/d1 + ... + Z/dk with Gamma acting by
 * integer matrices on coordinate vectors; the circle module is Q/Z with each
 * element acting by +1 or -1.
 */
struct Coefficients {
    enum class Kind { Finite, Circle };
    Kind kind = Kind::Finite;
    std::vector<i64> factors;
    std::vector<std::vector<i64>> action;  // finite: k*k row-major per element; empty = trivial
    std::vector<int> sign;                 // circle: per element; empty = trivial

    static Coefficients finite(std::vector<i64> factors);
    static Coefficients circle();

    bool circle_kind() const { return kind == Kind::Circle; }
    int width() const { return circle_kind() ? 1 : static_cast<int>(factors.size()); }
    bool trivial_action() const;
    /// Action of g on a coordinate vector (finite kind).
    std::vector<i64> act(int g, const std::vector<i64>& x) const;
    int sign_of(int g) const { return sign.empty() ? 1 : sign[g]; }
};

/// Every action map is a well-defined automorphism and g -> action is a homomorphism.
Report validate_coefficients(const FiniteGroup& gamma, const Coefficients& m);

/**
 * Inhomogeneous n-cochain stored as a full table over Gamma^n in lexicographic
 * order (first argument most significant), `width` integers per entry.
 * Circle values are values[i] / denom.
 */
struct Cochain {
    int degree = 0;
    int group_order = 1;
    int width = 1;
    i64 denom = 1;
    std::vector<i64> values;

    size_t entries() const;
    Rational circle_value(size_t tuple) const;
    bool operator==(const Cochain& o) const;
};

Cochain zero_cochain(const FiniteGroup& gamma, const Coefficients& m, int degree);
/// Tuple index of (g1, ..., gn).
size_t tuple_index(const std::vector<int>& args, int order);
std::vector<int> tuple_args(size_t index, int degree, int order);

/// Reduce entries into canonical range (and the circle denominator to lowest terms).
Cochain canonical(const Coefficients& m, Cochain c);

bool is_normalized(const FiniteGroup& gamma, const Cochain& c);
Cochain bar_differential(const FiniteGroup& gamma, const Coefficients& m, const Cochain& c);
/// First tuple where dz is nonzero, if any.
std::optional<std::vector<int>> cocycle_failure(const FiniteGroup& gamma, const Coefficients& m, const Cochain& z);

Cochain add(const Coefficients& m, const Cochain& a, const Cochain& b, i64 sign_b = 1);

/// A normalized cocycle z - db together with the shift b.
struct Normalization {
    Cochain cocycle;
    Cochain shift;
};
Normalization normalize(const FiniteGroup& gamma, const Coefficients& m, const Cochain& z);

struct CohomologyOptions {
    i64 max_dim = 10000;        // bound on width * |Gamma|^(n+1)
    bool stability_check = true;  // circle coefficients: recompute at a finer level
};

class CohomologyGroup;

CohomologyGroup cohomology(const FiniteGroup& gamma, const Coefficients& m, int n,
                           const CohomologyOptions& opt = {});

/**
 * H^n(Gamma, M) as invariant factors with lexicographically minimal
 * representative cocycles, one per factor.
 */
class CohomologyGroup {
public:
    int degree() const { return n_; }
    const std::vector<i64>& factors() const { return factors_; }
    const std::vector<Cochain>& representatives() const { return reps_; }
    i64 order() const;

    /// Coordinates of the class of z (z must be a cocycle; it need not be normalized).
    std::vector<i64> classify(const Cochain& z) const;
    /// Cocycle with the given coordinates (lexicographically minimal in its class).
    Cochain representative_of(const std::vector<i64>& coords) const;

    struct Level;

private:
    friend CohomologyGroup cohomology(const FiniteGroup&, const Coefficients&, int, const CohomologyOptions&);
    FiniteGroup gamma_;
    Coefficients module_;
    CohomologyOptions opt_;
    int n_ = 0;
    std::vector<i64> factors_;
    std::vector<Cochain> reps_;
    std::shared_ptr<const Level> level_;
};

/// Some w with dw = z, or nothing. z must be a cocycle.
std::optional<Cochain> is_coboundary(const FiniteGroup& gamma, const Coefficients& m, const Cochain& z,
                                     const CohomologyOptions& opt = {});

}  // namespace xmc

#endif
