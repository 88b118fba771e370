#pragma once

// Brute-force reference implementations for the tests. Everything here works on
// explicit vector sets and shares no code with the library beyond the
// presentation's commutator table.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "cdlat/presentation.hpp"

namespace brute {

using Vec = std::vector<std::uint32_t>;
using VecSet = std::set<Vec>;

inline std::uint64_t ipow(std::uint64_t p, std::size_t k) {
  std::uint64_t r = 1;
  while (k--) r *= p;
  return r;
}

inline Vec decode(std::uint64_t code, std::uint32_t p, std::size_t d) {
  Vec v(d);
  for (std::size_t i = d; i-- > 0;) {
    v[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  return v;
}

inline std::vector<Vec> all_vectors(std::uint32_t p, std::size_t d) {
  std::vector<Vec> out;
  for (std::uint64_t c = 0; c < ipow(p, d); ++c) out.push_back(decode(c, p, d));
  return out;
}

inline Vec add_scaled(const Vec& a, const Vec& b, std::uint32_t k, std::uint32_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<std::uint32_t>((a[i] + std::uint64_t{k} * b[i]) % p);
  return r;
}

/// Every linear combination of the generators.
inline VecSet span(const std::vector<Vec>& gens, std::uint32_t p, std::size_t d) {
  VecSet s{Vec(d, 0)};
  for (const auto& g : gens) {
    VecSet next;
    for (const auto& x : s)
      for (std::uint32_t k = 0; k < p; ++k) next.insert(add_scaled(x, g, k, p));
    s = std::move(next);
  }
  return s;
}

inline VecSet to_set(const cdlat::Subspace& u) {
  std::vector<Vec> gens;
  for (std::size_t r = 0; r < u.dim(); ++r) {
    auto row = u.basis().row(r);
    gens.emplace_back(row.begin(), row.end());
  }
  return span(gens, u.modulus(), u.ambient_dim());
}

/// log_p of the set size.
inline std::size_t dim_of(const VecSet& s, std::uint32_t p) {
  std::size_t k = 0;
  for (std::uint64_t n = s.size(); n > 1; n /= p) ++k;
  return k;
}

/// Every subspace of GF(p)^d, by closing sets under adding one more vector.
inline std::set<VecSet> all_subspaces(std::uint32_t p, std::size_t d) {
  std::set<VecSet> seen{VecSet{Vec(d, 0)}};
  std::vector<VecSet> frontier(seen.begin(), seen.end());
  auto vectors = all_vectors(p, d);
  while (!frontier.empty()) {
    std::vector<VecSet> next;
    for (const auto& s : frontier) {
      std::vector<Vec> gens(s.begin(), s.end());
      for (const auto& v : vectors) {
        if (s.count(v)) continue;
        auto g = gens;
        g.push_back(v);
        auto t = span(g, p, d);
        if (seen.insert(t).second) next.push_back(std::move(t));
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

/// Gaussian binomial by the product formula in 128-bit integers.
inline unsigned __int128 gaussian(std::size_t d, std::size_t k, std::uint64_t p) {
  unsigned __int128 num = 1, den = 1;
  for (std::size_t i = 0; i < k; ++i) {
    unsigned __int128 a = 1, b = 1;
    for (std::size_t t = 0; t < d - i; ++t) a *= p;
    for (std::size_t t = 0; t < i + 1; ++t) b *= p;
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

/// B(u, v) straight from the table: sum over i, j of u_i v_j comm[i][j].
inline Vec form(const cdlat::CentralPresentation& pres, const Vec& u, const Vec& v) {
  const std::uint32_t p = pres.p();
  Vec w(pres.w_dim(), 0);
  for (std::size_t i = 0; i < pres.v_dim(); ++i)
    for (std::size_t j = 0; j < pres.v_dim(); ++j) {
      auto c = pres.comm(i, j);
      for (std::size_t k = 0; k < pres.w_dim(); ++k)
        w[k] = static_cast<std::uint32_t>((w[k] + std::uint64_t{u[i]} * v[j] % p * c[k]) % p);
    }
  return w;
}

/// {v : B(u, v) = 0 for every u in the set}.
inline VecSet perp(const cdlat::CentralPresentation& pres, const VecSet& u) {
  VecSet out;
  const Vec zero(pres.w_dim(), 0);
  for (const auto& v : all_vectors(pres.p(), pres.v_dim())) {
    bool ok = true;
    for (const auto& x : u)
      if (form(pres, x, v) != zero) {
        ok = false;
        break;
      }
    if (ok) out.insert(v);
  }
  return out;
}

/// Members of CD by scanning every subspace, as vector sets.
inline std::set<VecSet> cd_members(const cdlat::CentralPresentation& pres, std::size_t* best_out = nullptr) {
  std::map<std::size_t, std::set<VecSet>> by_measure;
  for (const auto& s : all_subspaces(pres.p(), pres.v_dim())) {
    std::size_t m = 2 * pres.w_dim() + dim_of(s, pres.p()) + dim_of(perp(pres, s), pres.p());
    by_measure[m].insert(s);
  }
  if (best_out) *best_out = by_measure.rbegin()->first;
  return by_measure.rbegin()->second;
}

/// GF(2) row reduction on up to 64 columns with rows as bitmasks (bit c = column c).
/// Returns the reduced rows, pivot row first, zero rows dropped.
inline std::vector<std::uint64_t> rref_bits(std::vector<std::uint64_t> rows, std::size_t cols) {
  std::vector<std::uint64_t> out;
  for (std::size_t c = 0; c < cols; ++c) {
    const std::uint64_t bit = std::uint64_t{1} << c;
    auto it = std::find_if(rows.begin(), rows.end(), [&](std::uint64_t r) { return r & bit; });
    if (it == rows.end()) continue;
    std::uint64_t pivot = *it;
    rows.erase(it);
    for (auto& r : rows)
      if (r & bit) r ^= pivot;
    for (auto& r : out)
      if (r & bit) r ^= pivot;
    out.push_back(pivot);
  }
  return out;
}

/// Random presentation with an alternating table, for property sweeps.
inline cdlat::CentralPresentation random_presentation(std::mt19937_64& rng, std::uint32_t p, std::size_t d,
                                                      std::size_t e, double density = 0.5) {
  cdlat::PresentationData data;
  data.p = p;
  for (std::size_t i = 0; i < d; ++i) data.v_labels.push_back("g" + std::to_string(i + 1));
  for (std::size_t k = 0; k < e; ++k) data.w_labels.push_back("z" + std::to_string(k + 1));
  data.reset_table();
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<std::uint32_t> digit(1, p - 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = 0; k < e; ++k)
        if (coin(rng) < density) data.set_comm(i, j, k, digit(rng));
  return cdlat::CentralPresentation(std::move(data));
}

/// Random subspace spanned by a few random vectors.
inline cdlat::Subspace random_subspace(std::mt19937_64& rng, std::uint32_t p, std::size_t d) {
  std::uniform_int_distribution<std::size_t> count(0, d);
  std::uniform_int_distribution<std::uint32_t> digit(0, p - 1);
  std::vector<std::vector<std::int64_t>> rows(count(rng), std::vector<std::int64_t>(d));
  for (auto& r : rows)
    for (auto& x : r) x = digit(rng);
  return cdlat::Subspace::span(p, d, rows);
}

}  // namespace brute
