/**
 * Finite groups given by multiplication tables, homomorphisms between them,
 * and decompositions of finite abelian groups into cyclic factors.
 *
 * Elements are indices 0..order-1. The canonical element order is index order.
 */
#ifndef XMC_GROUP_HPP
#define XMC_GROUP_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace xmc {

struct FiniteGroup {
    int order = 1;
    std::vector<int> mul{0};  // mul[a * order + b] = a*b
    int identity = 0;
    std::vector<int> inv{0};
    std::string label = "trivial";

    int m(int a, int b) const { return mul[a * order + b]; }
    int inverse(int a) const { return inv[a]; }
    bool abelian() const;
    int element_order(int a) const;
    bool operator==(const FiniteGroup& o) const { return order == o.order && mul == o.mul; }
};

/// One failed axiom, with the elements that witness it.
struct Issue {
    std::string what;
    std::vector<int> witness;
};

using Report = std::vector<Issue>;

std::string describe(const Issue& i);

/// Checks table shape, associativity, identity and inverses.
Report validate_group(const FiniteGroup& g);

/// Builds a group from a multiplication table; identity and inverses are derived.
/// Throws InputError naming the first violated axiom.
FiniteGroup group_from_table(int order, const std::vector<int>& mul, const std::string& label);

FiniteGroup make_cyclic(int n);
FiniteGroup make_product(const FiniteGroup& a, const FiniteGroup& b);
FiniteGroup make_symmetric3();
FiniteGroup make_quaternion();
FiniteGroup make_trivial();

/// C<n>, C2xC2 style products of cyclic groups, S3, Q8, trivial.
FiniteGroup named_group(const std::string& name);

/// Same group with element i renamed perm[i]; the identity may move.
FiniteGroup relabel(const FiniteGroup& g, const std::vector<int>& perm);

/// map(a*b) = map(a)*map(b) for all a, b.
Report validate_hom(const FiniteGroup& src, const FiniteGroup& dst, const std::vector<int>& map);

std::vector<int> identity_map(const FiniteGroup& g);
std::vector<int> compose(const std::vector<int>& outer, const std::vector<int>& inner);

/// Elements of the image of a map, sorted.
std::vector<int> image_of(const std::vector<int>& map);
/// Elements sent to the identity of dst, sorted.
std::vector<int> kernel_of(const std::vector<int>& map, const FiniteGroup& dst);

/// g / n for a normal subgroup n; cosets ordered by smallest member. Second is the projection.
std::pair<FiniteGroup, std::vector<int>> quotient(const FiniteGroup& g, const std::vector<int>& normal,
                                                  const std::string& label);

/**
 * An abelian group (or abelian subgroup of a larger group) identified with
 * Z/d1 + ... + Z/dk, d1 | d2 | ... | dk, all di > 1.
 */
class AbelianDecomposition {
public:
    AbelianDecomposition() = default;
    /// Subgroup of g given by its element list; must be abelian and closed.
    AbelianDecomposition(const FiniteGroup& g, const std::vector<int>& subgroup);

    const std::vector<std::int64_t>& factors() const { return factors_; }
    /// Exponent of the group (1 for the trivial group).
    std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }
    int size() const { return static_cast<int>(elements_.size()); }
    const std::vector<int>& elements() const { return elements_; }
    bool contains(int element) const;
    /// Coordinates of an element of the subgroup (indexed by parent element).
    const std::vector<std::int64_t>& coords(int element) const;
    /// Parent element with the given coordinates.
    int element(const std::vector<std::int64_t>& c) const;

private:
    std::vector<std::int64_t> factors_;
    std::vector<int> elements_;
    std::vector<std::vector<std::int64_t>> coords_;  // by parent index; empty if not a member
    std::vector<int> by_code_;
    std::int64_t encode(const std::vector<std::int64_t>& c) const;
};

}  // namespace xmc

#endif
