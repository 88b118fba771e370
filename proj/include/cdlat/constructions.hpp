#pragma once

// Builders for the double-diamond group and the two extension constructions
// (diamond extension and quasiantichain extension), each paired with the
// predicted CD lattice it should have.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdlat/presentation.hpp"
#include "cdlat/shapes.hpp"

namespace cdlat {

struct ConstructionParams {
  std::uint32_t p = 2;
  std::size_t m = 2;
  std::size_t n = 2;
  std::size_t l = 1;
  std::optional<std::pair<std::size_t, std::size_t>> split;
};

/// Predicted CD membership. members are sorted like CDLattice members.
struct ExpectedLattice {
  std::vector<NamedSubgroup> members;
  ShapeSpec expected_shape;
  /// Member indices [lo, hi] of the interval predicted to be isomorphic to the base's CD.
  std::optional<std::pair<std::size_t, std::size_t>> base_window;

  std::optional<std::size_t> find(const std::string& name) const;
  const Subspace& at(const std::string& name) const;
};

struct Construction {
  CentralPresentation presentation;
  ExpectedLattice expected;
};

/// The group of order p^0 (d = e = 0); its CD lattice is a point.
Construction trivial_construction(std::uint32_t p);

/// [x, y] = z with CD = {Z, p+1 lines, P}.
Construction heisenberg_construction(std::uint32_t p);

/// CD(abelian) = {P}.
Construction abelian_construction(std::uint32_t p, std::size_t d);

/// Wraps a user presentation whose CD lattice is known (e.g. by full search).
/// Member names default to "N0", "N1", ... when `names` is empty.
Construction from_lattice(CentralPresentation pres, std::vector<Subspace> members,
                          std::vector<std::string> names = {});

/// Generators a_1..a_2m, b_1..b_2m. Requires m > 1. With split = (n1, n2),
/// n1 + n2 = 2m, the a's and b's are divided into a first class of n1 and a
/// second class of n2 instead of by parity.
Construction build_double_diamond(std::uint32_t p, std::size_t m,
                                  std::optional<std::pair<std::size_t, std::size_t>> split = std::nullopt);

/// Throws ConstraintError unless the full space is a predicted member, all
/// members share one measure, and the member list is closed under centralizers.
void check_base_certificate(const Construction& base);

/// Diamond extension with m >= 1 blocks of n >= 2 generators each.
Construction extend_diamond(const Construction& base, std::size_t m, std::size_t n);

/// Quasiantichain extension with n >= 2.
Construction extend_qac(const Construction& base, std::size_t n);

enum class Extension { Diamond, Quasiantichain };

/// Applies the extension l >= 1 times, each output serving as the next base.
Construction iterate(Extension kind, const Construction& base, std::size_t l, std::size_t m,
                     std::size_t n);

/// Direct product; members are the direct sums of factor members and the
/// expected shape is the classification of that product lattice.
Construction direct_product(const Construction& a, const Construction& b);

/// k-fold direct product of base with itself (k >= 1).
Construction direct_power(const Construction& base, std::size_t k);

/// Joins indices into a label suffix: "12" when all are < 10, else "1_12".
std::string index_suffix(const std::vector<std::size_t>& indices);

/// Containment poset of a member list (covers by brute force, ranks = dims).
Poset member_poset(const std::vector<Subspace>& members);

}  // namespace cdlat
