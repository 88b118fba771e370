#pragma once

// CD lattice search over subspaces of V, verification of predicted lattices,
// structural checks, and the cdl v1 lattice file format.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdlat/constructions.hpp"
#include "cdlat/presentation.hpp"
#include "cdlat/shapes.hpp"

namespace cdlat {

enum class LatticeMode { Full, VerifiedPredicted, Predicted };

std::string to_string(LatticeMode mode);

struct CDLattice {
  std::uint32_t p = 2;
  std::size_t d = 0;
  std::size_t e = 0;
  LatticeMode mode = LatticeMode::Full;
  /// Exponent s with m*(P) = p^s.
  std::size_t max_measure = 0;
  /// Sorted by (dimension, canonical basis entries).
  std::vector<Subspace> members;
  /// Parallel to members; empty string when unnamed.
  std::vector<std::string> names;
  /// (upper, lower) member index pairs.
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  /// Expected shape summary carried from a predicted lattice, if any.
  std::string expect;

  std::optional<std::size_t> index_of(const Subspace& s) const;
  Poset poset() const;
};

struct SearchStats {
  BigCount scanned = 0;
  std::vector<std::uint64_t> per_dimension;
  double seconds = 0;
  std::size_t partitions = 0;
  std::size_t jobs = 1;
};

struct SearchOptions {
  /// Refuse full search above this many subspaces.
  BigCount budget = 500'000'000;
  /// Worker threads; 0 means hardware concurrency.
  std::size_t jobs = 1;
};

/// Exhaustive search: pass 1 finds the maximum measure, pass 2 collects the
/// subspaces attaining it. Throws BudgetExceeded above options.budget.
std::pair<CDLattice, SearchStats> compute_cd_full(const CentralPresentation& pres,
                                                  const SearchOptions& options = {});

/// Transitive reduction of containment: (i, j) with members[j] ⊂ members[i].
std::vector<std::pair<std::size_t, std::size_t>> covers(const std::vector<Subspace>& members);

/// First violated lattice property among: centralizer closure, C(C(U)) = U,
/// sum and intersection closure, modular law. Names the offending member(s).
std::optional<std::string> check_duality(const CentralPresentation& pres,
                                         const std::vector<Subspace>& members);

/// True iff the unique minimal member is the zero subspace.
bool minimum_is_center(const CDLattice& lattice);

struct VerifyOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
  std::size_t jobs = 1;
};

struct Counterexample {
  Subspace space;
  std::size_t measure = 0;
  /// "measure", "closure", "exceeds" or "missing member".
  std::string reason;
  std::string detail;
};

struct VerifyReport {
  bool pass = false;
  std::size_t measure = 0;
  std::uint64_t adversarial_checked = 0;
  std::uint64_t random_checked = 0;
  bool exhaustive = false;
  std::optional<Counterexample> counterexample;
};

/// Checks a predicted member list: common measure, closure and duality, then
/// searches codim-1 subspaces and one-step extensions of every member and
/// uniform random subspaces (or all subspaces, if there are at most
/// options.samples of them) for anything that beats or ties the common measure
/// without being predicted.
VerifyReport verify_predicted(const CentralPresentation& pres, const std::vector<Subspace>& predicted,
                              const VerifyOptions& options = {});
VerifyReport verify_predicted(const CentralPresentation& pres, const ExpectedLattice& predicted,
                              const VerifyOptions& options = {});

/// Lattice record for a predicted member list (mode predicted, names bound).
CDLattice predicted_lattice(const CentralPresentation& pres, const ExpectedLattice& expected);

/// Attaches names from a predicted list to matching members.
void bind_names(CDLattice& lattice, const ExpectedLattice& expected);

// cdl v1 text format.
std::string write_cdl(const CDLattice& lattice);
CDLattice parse_cdl(const std::string& text);

/// Number of worker threads: CDLAT_JOBS if set and positive, else `fallback`.
std::size_t jobs_from_env(std::size_t fallback);

}  // namespace cdlat
