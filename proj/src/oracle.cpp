#include "cdlat/oracle.hpp"

namespace cdlat {

namespace {

void check_element(const CentralPresentation& pres, const GroupElement& g) {
  if (g.v.size() != pres.v_dim() || g.w.size() != pres.w_dim()) throw DomainError("element shape mismatch");
}

}  // namespace

GroupElement identity(const CentralPresentation& pres) {
  return {std::vector<Residue>(pres.v_dim(), 0), std::vector<Residue>(pres.w_dim(), 0)};
}

GroupElement multiply(const CentralPresentation& pres, const GroupElement& g, const GroupElement& h) {
  check_element(pres, g);
  check_element(pres, h);
  const std::uint64_t p = pres.p();
  const std::size_t d = pres.v_dim(), e = pres.w_dim();
  GroupElement out = identity(pres);
  for (std::size_t i = 0; i < d; ++i) out.v[i] = static_cast<Residue>((std::uint64_t{g.v[i]} + h.v[i]) % p);
  std::vector<std::uint64_t> acc(e);
  for (std::size_t k = 0; k < e; ++k) acc[k] = std::uint64_t{g.w[k]} + h.w[k];
  for (std::size_t i = 0; i < d; ++i) {
    if (!g.v[i]) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (!h.v[j]) continue;
      const std::uint64_t coeff = std::uint64_t{g.v[i]} * h.v[j] % p;
      auto c = pres.comm(i, j);
      for (std::size_t k = 0; k < e; ++k) acc[k] = (acc[k] + coeff * c[k]) % p;
    }
  }
  for (std::size_t k = 0; k < e; ++k) out.w[k] = static_cast<Residue>(acc[k] % p);
  return out;
}

GroupElement inverse(const CentralPresentation& pres, const GroupElement& g) {
  check_element(pres, g);
  const std::uint32_t p = pres.p();
  // (v, w)^-1 = (-v, -w + beta(v, v))
  GroupElement neg_v = identity(pres);
  for (std::size_t i = 0; i < g.v.size(); ++i) neg_v.v[i] = (p - g.v[i]) % p;
  GroupElement vv = multiply(pres, GroupElement{g.v, std::vector<Residue>(g.w.size(), 0)},
                             GroupElement{g.v, std::vector<Residue>(g.w.size(), 0)});
  for (std::size_t k = 0; k < g.w.size(); ++k) neg_v.w[k] = (vv.w[k] + p - g.w[k]) % p;
  return neg_v;
}

GroupElement commutator(const CentralPresentation& pres, const GroupElement& g, const GroupElement& h) {
  return multiply(pres, multiply(pres, inverse(pres, g), inverse(pres, h)), multiply(pres, g, h));
}

GroupElement power(const CentralPresentation& pres, const GroupElement& g, std::uint64_t k) {
  GroupElement out = identity(pres);
  for (std::uint64_t i = 0; i < k; ++i) out = multiply(pres, out, g);
  return out;
}

std::uint64_t group_order(const CentralPresentation& pres) {
  std::uint64_t order = 1;
  for (std::size_t i = 0; i < pres.v_dim() + pres.w_dim(); ++i) {
    order *= pres.p();
    if (order > kOracleElementBudget)
      throw BudgetExceeded("group has more than " + std::to_string(kOracleElementBudget) + " elements");
  }
  return order;
}

std::vector<GroupElement> all_elements(const CentralPresentation& pres) {
  const std::uint64_t n = group_order(pres);
  const std::uint32_t p = pres.p();
  const std::size_t d = pres.v_dim(), e = pres.w_dim();
  std::vector<GroupElement> out;
  out.reserve(n);
  std::vector<Residue> digits(d + e, 0);
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    out.push_back({std::vector<Residue>(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(d)),
                   std::vector<Residue>(digits.begin() + static_cast<std::ptrdiff_t>(d), digits.end())});
    for (std::size_t pos = d + e; pos-- > 0;) {
      if (++digits[pos] < p) break;
      digits[pos] = 0;
    }
  }
  return out;
}

ElementCentralizer element_centralizer(const CentralPresentation& pres, const std::vector<GroupElement>& generators) {
  ElementCentralizer out{0, Subspace::zero(pres.p(), pres.v_dim())};
  FieldMatrix projections(0, pres.v_dim(), pres.p());
  for (const auto& x : all_elements(pres)) {
    bool central = true;
    for (const auto& g : generators)
      if (multiply(pres, x, g) != multiply(pres, g, x)) {
        central = false;
        break;
      }
    if (!central) continue;
    ++out.order;
    projections.append_row(x.v);
  }
  out.projection = Subspace::span(projections);
  return out;
}

std::vector<GroupElement> preimage_generators(const CentralPresentation& pres, const Subspace& u) {
  if (u.ambient_dim() != pres.v_dim()) throw DomainError("subspace dimension mismatch");
  std::vector<GroupElement> out;
  for (std::size_t r = 0; r < u.dim(); ++r) {
    auto row = u.basis().row(r);
    out.push_back({std::vector<Residue>(row.begin(), row.end()), std::vector<Residue>(pres.w_dim(), 0)});
  }
  for (std::size_t k = 0; k < pres.w_dim(); ++k) {
    auto z = identity(pres);
    z.w[k] = 1;
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace cdlat
