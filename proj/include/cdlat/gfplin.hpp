#pragma once

// Exact linear algebra over a prime field GF(p) and canonical subspaces.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cdlat/error.hpp"

namespace cdlat {

using Residue = std::uint32_t;
using BigCount = boost::multiprecision::cpp_int;

/// True iff n is prime (trial division; moduli here are small).
bool is_prime(std::uint64_t n);

/// Throws DomainError unless p is a prime below 2^31.
std::uint32_t checked_prime(std::uint64_t p);

/// A residue together with its modulus.
class FieldScalar {
 public:
  FieldScalar(std::int64_t value, std::uint32_t p);

  Residue value() const { return value_; }
  std::uint32_t modulus() const { return p_; }

  FieldScalar operator+(FieldScalar o) const;
  FieldScalar operator-(FieldScalar o) const;
  FieldScalar operator*(FieldScalar o) const;
  FieldScalar operator-() const;
  FieldScalar inverse() const;
  bool operator==(const FieldScalar&) const = default;

 private:
  struct Raw {};
  FieldScalar(Raw, Residue v, std::uint32_t p) : value_(v), p_(p) {}
  void check_same(FieldScalar o) const;

  Residue value_;
  std::uint32_t p_;
};

namespace modp {
inline Residue add(Residue a, Residue b, std::uint32_t p) {
  std::uint64_t s = std::uint64_t{a} + b;
  return static_cast<Residue>(s >= p ? s - p : s);
}
inline Residue sub(Residue a, Residue b, std::uint32_t p) {
  return a >= b ? a - b : static_cast<Residue>(std::uint64_t{a} + p - b);
}
inline Residue mul(Residue a, Residue b, std::uint32_t p) {
  return static_cast<Residue>((std::uint64_t{a} * b) % p);
}
inline Residue neg(Residue a, std::uint32_t p) { return a == 0 ? 0 : p - a; }
Residue inv(Residue a, std::uint32_t p);
Residue reduce(std::int64_t a, std::uint32_t p);
}  // namespace modp

/// Dense row-major matrix over GF(p).
class FieldMatrix {
 public:
  FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t p);
  FieldMatrix(std::uint32_t p, std::size_t cols,
              const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return p_; }

  Residue at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Residue v) { data_[r * cols_ + c] = v % p_; }

  std::span<const Residue> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Residue> data() const { return data_; }

  void append_row(std::span<const Residue> values);
  /// Keeps only the first n rows.
  void truncate_rows(std::size_t n);

  bool operator==(const FieldMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::uint32_t p_;
  std::vector<Residue> data_;
};

struct RrefResult {
  FieldMatrix reduced;  // same shape as the input, zero rows at the bottom
  std::size_t rank;
  std::vector<std::size_t> pivots;
};

RrefResult rref(const FieldMatrix& m);

/// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref_in_place(FieldMatrix& m);

/// A subspace of GF(p)^d, stored as its unique RREF basis.
class Subspace {
 public:
  static Subspace zero(std::uint32_t p, std::size_t d);
  static Subspace full(std::uint32_t p, std::size_t d);
  /// Span of the rows of `generators` (any number of rows).
  static Subspace span(const FieldMatrix& generators);
  static Subspace span(std::uint32_t p, std::size_t d,
                       const std::vector<std::vector<std::int64_t>>& vectors);
  /// Adopts a basis already known to be in RREF with no zero rows.
  static Subspace from_canonical(FieldMatrix basis, std::vector<std::size_t> pivots);

  std::size_t ambient_dim() const { return basis_.cols(); }
  std::uint32_t modulus() const { return basis_.modulus(); }
  std::size_t dim() const { return basis_.rows(); }
  const FieldMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivot_cols() const { return pivots_; }

  bool contains_vector(std::span<const Residue> v) const;
  bool contains(const Subspace& other) const;

  /// Row-major basis entries; the ordering key used for canonical sorting.
  std::span<const Residue> canonical_entries() const { return basis_.data(); }

  bool operator==(const Subspace& o) const;
  /// Orders by dimension, then lexicographically by canonical basis entries.
  std::strong_ordering operator<=>(const Subspace& o) const;

  std::size_t hash() const;
  std::string to_string() const;

 private:
  Subspace(FieldMatrix basis, std::vector<std::size_t> pivots)
      : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  FieldMatrix basis_;
  std::vector<std::size_t> pivots_;
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const { return s.hash(); }
};

/// {v : m v = 0}.
Subspace kernel(const FieldMatrix& m);

Subspace subspace_sum(const Subspace& u, const Subspace& v);
Subspace subspace_intersect(const Subspace& u, const Subspace& v);
/// v ⊆ u.
bool contains(const Subspace& u, const Subspace& v);

/// Annihilator under the standard dot product: {x : <x, u> = 0 for u in U}.
Subspace annihilator(const Subspace& u);

/// Direct sum U ⊕ V inside GF(p)^(d_u + d_v).
Subspace direct_sum(const Subspace& u, const Subspace& v);

/// Image of U under a coordinate embedding GF(p)^d -> GF(p)^n (coordinate i goes to positions[i]).
Subspace embed(const Subspace& u, std::size_t n, std::span<const std::size_t> positions);

// ---------------------------------------------------------------------------
// Enumeration

/// The q-binomial coefficient [d choose k]_p.
BigCount gaussian_binomial(std::size_t d, std::size_t k, std::uint32_t p);
/// Total number of subspaces of GF(p)^d.
BigCount subspace_count(std::size_t d, std::uint32_t p);

/// Pivot columns of an RREF shape; one enumeration partition.
struct PivotPattern {
  std::vector<std::size_t> cols;
  std::size_t dim() const { return cols.size(); }
  /// Number of free entries for ambient dimension d.
  std::size_t free_entries(std::size_t d) const;
  auto operator<=>(const PivotPattern&) const = default;
};

/// All pivot patterns in enumeration order: dimension ascending, then lexicographic.
std::vector<PivotPattern> pivot_patterns(std::size_t d,
                                         std::optional<std::size_t> dim_filter = std::nullopt);

/// Visits every RREF basis with the given pivot pattern, free entries in
/// lexicographic order (first free entry most significant). The visitor sees a
/// scratch matrix that is overwritten between calls; return false to stop.
void for_each_in_pattern(std::uint32_t p, std::size_t d, const PivotPattern& pattern,
                         const std::function<bool(const FieldMatrix&)>& visit);

/// Sequential stream over every subspace of GF(p)^d in canonical order.
class SubspaceStream {
 public:
  SubspaceStream(std::uint32_t p, std::size_t d,
                 std::optional<std::size_t> dim_filter = std::nullopt);

  std::optional<Subspace> next();

 private:
  bool load_pattern();

  std::uint32_t p_;
  std::size_t d_;
  std::vector<PivotPattern> patterns_;
  std::size_t pattern_index_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> free_pos_;
  std::vector<Residue> counter_;
  bool fresh_ = true;
  bool done_ = false;
};

}  // namespace cdlat
