#pragma once

// Element-level model of a CentralPresentation: elements are pairs (v, w) in
// GF(p)^d x GF(p)^e with (v1, w1)(v2, w2) = (v1 + v2, w1 + w2 + beta(v1, v2)),
// beta(v1, v2) = sum over i > j of v1[i] v2[j] comm[i][j]. Used only for
// brute-force cross-checks on small groups.

#include <cstdint>
#include <vector>

#include "cdlat/presentation.hpp"

namespace cdlat {

struct GroupElement {
  std::vector<Residue> v;
  std::vector<Residue> w;
  bool operator==(const GroupElement&) const = default;
};

GroupElement identity(const CentralPresentation& pres);
GroupElement multiply(const CentralPresentation& pres, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const CentralPresentation& pres, const GroupElement& g);
/// g^-1 h^-1 g h.
GroupElement commutator(const CentralPresentation& pres, const GroupElement& g, const GroupElement& h);
GroupElement power(const CentralPresentation& pres, const GroupElement& g, std::uint64_t k);

/// Largest group the oracle will enumerate.
inline constexpr std::uint64_t kOracleElementBudget = std::uint64_t{1} << 14;

/// Number of elements p^(d+e); throws BudgetExceeded above the oracle budget.
std::uint64_t group_order(const CentralPresentation& pres);

/// All elements in lexicographic coordinate order.
std::vector<GroupElement> all_elements(const CentralPresentation& pres);

struct ElementCentralizer {
  std::uint64_t order = 0;
  /// {v : (v, w) commutes with every generator for some (hence every) w}.
  Subspace projection;
};

/// Scans all elements for those commuting with every generator in `generators`.
ElementCentralizer element_centralizer(const CentralPresentation& pres,
                                       const std::vector<GroupElement>& generators);

/// Generators of the preimage of U: lifts of U's basis rows plus the central generators.
std::vector<GroupElement> preimage_generators(const CentralPresentation& pres, const Subspace& u);

}  // namespace cdlat
