/**
 * Truncated simplicial sets given by face and degeneracy tables, simplicial
 * maps and homotopies between them, and integral homology of the normalized
 * chain complex.
 */
#ifndef XMC_SIMPLICIAL_HPP
#define XMC_SIMPLICIAL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "xmc/group.hpp"

namespace xmc {

/**
 * Simplices of dimension 0..N, numbered 0..counts[k]-1 in each dimension.
 * face[k][i][x] = d_i x for 1 <= k <= N, 0 <= i <= k;
 * degen[k][i][x] = s_i x for 0 <= k < N, 0 <= i <= k.
 */
struct TruncatedSimplicialSet {
    int N = 0;
    std::vector<int> counts;
    std::vector<std::vector<std::vector<int>>> face;
    std::vector<std::vector<std::vector<int>>> degen;

    int d(int k, int i, int x) const { return face[k][i][x]; }
    int s(int k, int i, int x) const { return degen[k][i][x]; }
};

/// All simplicial identities that make sense within the truncation.
Report validate_simplicial(const TruncatedSimplicialSet& s);

/// Nerve of a group: k-simplices are G^k, numbered with g1 most significant.
TruncatedSimplicialSet ordinary_nerve(const FiniteGroup& g, int N);
/// Index of (g1, ..., gk) in the ordinary nerve.
int chain_index(const FiniteGroup& g, const std::vector<int>& chain);
std::vector<int> chain_of(const FiniteGroup& g, int k, int index);

/// A dimension-wise map of simplices; map[k][x] is a k-simplex of the target.
struct SimplicialMap {
    std::vector<std::vector<int>> map;
};

/// Commutation with all faces and degeneracies.
Report check_simplicial_map(const TruncatedSimplicialSet& src, const TruncatedSimplicialSet& dst,
                            const SimplicialMap& f);
/// f is a bijection in each dimension and simplicial.
Report check_isomorphism(const TruncatedSimplicialSet& src, const TruncatedSimplicialSet& dst,
                         const SimplicialMap& f);

/**
 * Simplicial homotopy h_j: X_n -> Y_{n+1}, 0 <= j <= n, for n <= N-1, with
 * d_0 h_0 = f and d_{n+1} h_n = g.
 */
struct SimplicialHomotopy {
    std::vector<std::vector<std::vector<int>>> h;  // h[n][j][x]
};

/// Every homotopy identity that makes sense within the truncation of the target.
Report check_homotopy(const TruncatedSimplicialSet& src, const TruncatedSimplicialSet& dst, const SimplicialMap& f,
                      const SimplicialMap& g, const SimplicialHomotopy& h);

/// Exhaustive backtracking search for a homotopy from f to g; nothing if none exists.
std::optional<SimplicialHomotopy> find_homotopy(const TruncatedSimplicialSet& src,
                                                const TruncatedSimplicialSet& dst, const SimplicialMap& f,
                                                const SimplicialMap& g, double budget = 1e8);

/// Invariant factors per degree, 0 standing for a copy of Z.
struct Homology {
    std::vector<std::vector<std::int64_t>> groups;
};

/// Homology in degrees 0..maxdeg of the complex of nondegenerate simplices; needs maxdeg < N.
Homology homology(const TruncatedSimplicialSet& s, int maxdeg);

/// Which simplices of each dimension are degenerate.
std::vector<std::vector<bool>> degenerate_simplices(const TruncatedSimplicialSet& s);

}  // namespace xmc

#endif
