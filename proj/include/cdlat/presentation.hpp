#pragma once

// p-groups of class <= 2 with Φ(P) <= Z(P), modelled by their alternating
// commutator form B: V x V -> W with V = P/Z(P) and W = Z(P).
//
// Subgroups H containing W correspond to subspaces U of V, with
// |H| = p^(e + dim U) and C_P(H) the preimage of U^⊥ = {v : B(u, v) = 0 for all u in U}.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdlat/gfplin.hpp"

namespace cdlat {

/// Raw, possibly invalid presentation data. comm is d*d*e, comm[(i*d + j)*e + w].
struct PresentationData {
  std::uint32_t p = 2;
  std::vector<std::string> v_labels;
  std::vector<std::string> w_labels;
  std::vector<Residue> comm;

  std::size_t v_dim() const { return v_labels.size(); }
  std::size_t w_dim() const { return w_labels.size(); }
  /// Resizes comm to the zero table for the current labels.
  void reset_table();
  /// Sets [g_i, g_j] = value and [g_j, g_i] = -value.
  void set_comm(std::size_t i, std::size_t j, std::size_t w, std::int64_t value);
};

struct Violation {
  std::string kind;  // "modulus", "dimension", "label", "diagonal", "alternating", "range"
  std::size_t i = 0;
  std::size_t j = 0;
  std::string message;
};

/// First violated invariant, or nullopt if the data describes a valid presentation.
std::optional<Violation> validate(const PresentationData& data);

class InvalidPresentation : public Error {
 public:
  explicit InvalidPresentation(Violation v)
      : Error("invalid presentation (" + v.kind + "): " + v.message), violation_(std::move(v)) {}
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

class CentralPresentation {
 public:
  /// Validates and freezes; throws InvalidPresentation.
  explicit CentralPresentation(PresentationData data);

  std::uint32_t p() const { return data_.p; }
  std::size_t v_dim() const { return data_.v_dim(); }
  std::size_t w_dim() const { return data_.w_dim(); }
  const std::vector<std::string>& v_labels() const { return data_.v_labels; }
  const std::vector<std::string>& w_labels() const { return data_.w_labels; }
  const PresentationData& data() const { return data_; }

  /// Coordinates of [g_i, g_j] in W.
  std::span<const Residue> comm(std::size_t i, std::size_t j) const {
    return {data_.comm.data() + (i * v_dim() + j) * w_dim(), w_dim()};
  }

  /// B(u, v) as a W-vector.
  std::vector<Residue> form(std::span<const Residue> u, std::span<const Residue> v) const;

  std::optional<std::size_t> v_index(const std::string& label) const;
  std::optional<std::size_t> w_index(const std::string& label) const;

  bool operator==(const CentralPresentation& o) const {
    return data_.p == o.data_.p && data_.v_labels == o.data_.v_labels &&
           data_.w_labels == o.data_.w_labels && data_.comm == o.data_.comm;
  }

 private:
  PresentationData data_;
};

/// m(H) = p^value with value = h_exp + c_exp.
struct MeasureExponent {
  std::size_t h_exp = 0;
  std::size_t c_exp = 0;
  std::size_t value() const { return h_exp + c_exp; }
  bool operator==(const MeasureExponent&) const = default;
};

struct NamedSubgroup {
  std::string name;
  Subspace space;
};

/// The (dim U * e) x d matrix whose kernel is U^⊥.
FieldMatrix orthogonality_system(const CentralPresentation& pres, const Subspace& u);

/// U^⊥, i.e. C_P(H)/Z(P) for the preimage H of U.
Subspace centralizer(const CentralPresentation& pres, const Subspace& u);

MeasureExponent measure(const CentralPresentation& pres, const Subspace& u);

/// {v : B(v, V) = 0}; zero iff Z(P) is exactly W.
Subspace radical(const CentralPresentation& pres);

/// Fast dim U^⊥ for search loops. Same answer as centralizer(pres, U).dim(),
/// computed by an independent route (bit-packed at p = 2).
class PerpEvaluator {
 public:
  /// allow_bit_packing = false forces the generic residue path (used for cross-checks).
  explicit PerpEvaluator(const CentralPresentation& pres, bool allow_bit_packing = true);

  /// Rows of `basis` must be linearly independent.
  std::size_t perp_dim(const FieldMatrix& basis) const;
  /// 2e + dim U + dim U^⊥.
  std::size_t measure_value(const FieldMatrix& basis) const {
    return 2 * e_ + basis.rows() + perp_dim(basis);
  }
  bool bit_packed() const { return bit_packed_; }

 private:
  std::size_t perp_dim_bits(const FieldMatrix& basis) const;
  std::size_t perp_dim_generic(const FieldMatrix& basis) const;

  std::uint32_t p_;
  std::size_t d_;
  std::size_t e_;
  bool bit_packed_;
  // generic: functional[a][w] is the row vector b -> comm[a][b][w]
  std::vector<Residue> functionals_;  // d * e * d
  // p = 2: row_masks_[a * e + w] bitmask over b
  std::vector<std::uint64_t> row_masks_;
  // p = 2 and d <= 12: reduced row basis of φ(v) for every vector v
  std::vector<std::uint64_t> table_;  // 2^d * d, zero-terminated per entry
  bool tabled_ = false;
};

/// Block-diagonal product on V1 ⊕ V2 -> W1 ⊕ W2. Labels get suffixes ".1" and ".2".
CentralPresentation direct_product(const CentralPresentation& g1, const CentralPresentation& g2);

/// n-fold product with labels suffixed ".1" ... ".n".
CentralPresentation direct_product(std::span<const CentralPresentation> factors);

/// Zero commutator table on d generators g1..gd.
CentralPresentation abelian(std::uint32_t p, std::size_t d);

/// [x, y] = z.
CentralPresentation heisenberg(std::uint32_t p);

// CGP v1 text format.
CentralPresentation parse_cgp(const std::string& text);
std::string serialize_cgp(const CentralPresentation& pres);

}  // namespace cdlat
