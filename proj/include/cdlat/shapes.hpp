#pragma once

// Shape taxonomy for finite lattices given by cover relations: strings of
// components glued maximum-to-minimum, where each component is an m-diamond
// (Boolean lattice), a quasiantichain M_{w+2}, a chain, or something else
// identified by a canonical fingerprint.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdlat/error.hpp"

namespace cdlat {

/// A finite poset by its Hasse diagram. covers holds (upper, lower) pairs.
/// rank, when present, is log_p of the order of each element (the subspace dimension).
struct Poset {
  std::size_t size = 0;
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  std::vector<int> rank;

  /// Reflexive-transitive closure; leq[a * size + b] is a <= b.
  std::vector<bool> order_matrix() const;
};

enum class ComponentKind { Point, Diamond, Quasiantichain, Chain, Other };

struct ComponentSpec {
  ComponentKind kind = ComponentKind::Point;
  /// m for Diamond, width w for Quasiantichain, number of covers for Chain.
  std::size_t param = 0;
  /// Canonical certificate hash for Other, empty otherwise.
  std::string fingerprint;
  std::size_t element_count = 1;
  std::size_t lo = 0;
  std::size_t hi = 0;
  /// Sorted log_p indices |K:H| over the covers inside the component.
  std::vector<int> edge_indices;

  std::string name() const;
  /// "p^k" when every cover has index p^k, "p^{a,b}" for several, "" if unknown.
  std::string index_label() const;
  /// Lattice isomorphism of the component alone (indices ignored).
  bool same_shape(const ComponentSpec& o) const;
};

struct ShapeSpec {
  std::vector<ComponentSpec> components;  // bottom to top
  /// All components pairwise lattice-isomorphic.
  bool uniform = true;
  /// All covers of the whole lattice carry the same index.
  bool index_uniform = true;

  bool is_string() const { return components.size() > 1; }
  /// One-line summary, e.g. "2-string[diamond(2),diamond(2)] uniform idx=p^2".
  std::string summary() const;
  /// Multi-line block for lattice files.
  std::vector<std::string> block() const;
};

/// Assembles a ShapeSpec from components, filling the uniformity flags.
ShapeSpec make_shape(std::vector<ComponentSpec> components);

/// Expected component builders used by constructions.
ComponentSpec diamond_component(std::size_t m, int index);
ComponentSpec qac_component(std::size_t width, int index);
ComponentSpec point_component();

/// Members comparable to every member, sorted upward. Throws DomainError if
/// the poset has no unique minimum and maximum.
std::vector<std::size_t> spine(const Poset& poset);

/// Classifies the interval [lo, hi] of the poset.
ComponentSpec classify_component(const Poset& poset, std::size_t lo, std::size_t hi);

ShapeSpec classify(const Poset& poset);

/// Canonical form of a cover digraph: two posets get equal certificates iff
/// they are isomorphic. Returns nullopt if the search budget runs out.
std::optional<std::string> canonical_certificate(const Poset& poset,
                                                 std::size_t node_budget = 1'000'000);

/// Isomorphism of the two Hasse diagrams (ranks ignored).
bool isomorphic(const Poset& a, const Poset& b);

/// Sub-poset induced on the given elements (in the given order).
Poset induced(const Poset& poset, const std::vector<std::size_t>& elements);

}  // namespace cdlat
