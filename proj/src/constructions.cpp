#include "cdlat/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

namespace cdlat {

std::optional<std::size_t> ExpectedLattice::find(const std::string& name) const {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i].name == name) return i;
  return std::nullopt;
}

const Subspace& ExpectedLattice::at(const std::string& name) const {
  auto i = find(name);
  if (!i) throw DomainError("no predicted member named " + name);
  return members[*i].space;
}

std::string index_suffix(const std::vector<std::size_t>& indices) {
  bool small = std::all_of(indices.begin(), indices.end(), [](std::size_t i) { return i < 10; });
  std::string s;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k && !small) s += '_';
    s += std::to_string(indices[k]);
  }
  return s;
}

Poset member_poset(const std::vector<Subspace>& members) {
  const std::size_t n = members.size();
  std::vector<bool> leq(n * n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      leq[i * n + j] = i == j || (members[i].dim() < members[j].dim() && members[j].contains(members[i]));
  Poset poset;
  poset.size = n;
  for (const auto& s : members) poset.rank.push_back(static_cast<int>(s.dim()));
  for (std::size_t hi = 0; hi < n; ++hi)
    for (std::size_t lo = 0; lo < n; ++lo) {
      if (hi == lo || !leq[lo * n + hi]) continue;
      bool between = false;
      for (std::size_t k = 0; k < n && !between; ++k)
        between = k != hi && k != lo && leq[lo * n + k] && leq[k * n + hi];
      if (!between) poset.covers.emplace_back(hi, lo);
    }
  return poset;
}

namespace {

// Sorts members canonically and drops later duplicates (the first name wins).
std::vector<NamedSubgroup> canonical_members(std::vector<NamedSubgroup> in) {
  std::vector<NamedSubgroup> out;
  for (auto& m : in) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const NamedSubgroup& o) { return o.space == m.space; });
    if (!dup) out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const NamedSubgroup& a, const NamedSubgroup& b) { return a.space < b.space; });
  return out;
}

ShapeSpec shape_of(const std::vector<NamedSubgroup>& members) {
  std::vector<Subspace> spaces;
  for (const auto& m : members) spaces.push_back(m.space);
  return classify(member_poset(spaces));
}

// Collects labels, renaming on collision with a ".2", ".3", ... suffix.
class LabelSet {
 public:
  std::string fresh(const std::string& label) {
    std::string out = label;
    for (int k = 2; used_.count(out); ++k) out = label + "." + std::to_string(k);
    used_.insert(out);
    return out;
  }

 private:
  std::set<std::string> used_;
};

Subspace coordinate_span(std::uint32_t p, std::size_t d, const std::vector<std::size_t>& coords) {
  FieldMatrix m(0, d, p);
  std::vector<Residue> row(d);
  for (auto c : coords) {
    std::fill(row.begin(), row.end(), 0);
    row[c] = 1;
    m.append_row(row);
  }
  return Subspace::span(m);
}

Subspace rows_span(std::uint32_t p, std::size_t d, const std::vector<std::vector<Residue>>& rows) {
  FieldMatrix m(0, d, p);
  for (const auto& r : rows) m.append_row(r);
  return Subspace::span(m);
}

std::string delta_name(const std::vector<std::size_t>& delta) {
  std::string s = "{";
  for (std::size_t i = 0; i < delta.size(); ++i) s += (i ? "," : "") + std::to_string(delta[i]);
  return s + "}";
}

std::size_t find_index(const std::vector<NamedSubgroup>& members, const Subspace& s) {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i].space == s) return i;
  throw DomainError("member not found");
}

// Shared skeleton of both extensions: V = x's | a's | b's, W = base | Z_N | Z_A | Z_B.
struct ExtensionLayout {
  std::size_t r = 0, z = 0, blocks = 0, n = 0;
  std::size_t a_at(std::size_t i, std::size_t j) const { return r + i * n + j; }
  std::size_t b_at(std::size_t i, std::size_t j) const { return r + blocks * n + i * n + j; }
  std::size_t d() const { return r + 2 * blocks * n; }
};

}  // namespace

Construction trivial_construction(std::uint32_t p) {
  Construction c{abelian(p, 0), {}};
  c.expected.members = {{"P", Subspace::zero(p, 0)}};
  c.expected.expected_shape = make_shape({point_component()});
  return c;
}

Construction abelian_construction(std::uint32_t p, std::size_t d) {
  Construction c{abelian(p, d), {}};
  c.expected.members = {{"P", Subspace::full(p, d)}};
  c.expected.expected_shape = make_shape({point_component()});
  return c;
}

Construction heisenberg_construction(std::uint32_t p) {
  Construction c{heisenberg(p), {}};
  std::vector<NamedSubgroup> members{{"ZP", Subspace::zero(p, 2)}, {"P", Subspace::full(p, 2)}};
  for (std::uint32_t k = 0; k < p; ++k)
    members.push_back({"L_" + std::to_string(k), Subspace::span(p, 2, {{1, k}})});
  members.push_back({"L_" + std::to_string(p), Subspace::span(p, 2, {{0, 1}})});
  c.expected.members = canonical_members(std::move(members));
  c.expected.expected_shape = make_shape({qac_component(p + 1, 1)});
  return c;
}

Construction from_lattice(CentralPresentation pres, std::vector<Subspace> members,
                          std::vector<std::string> names) {
  if (!names.empty() && names.size() != members.size()) throw DomainError("name count mismatch");
  std::vector<NamedSubgroup> named;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].ambient_dim() != pres.v_dim()) throw DomainError("member dimension mismatch");
    named.push_back({names.empty() || names[i].empty() ? "N" + std::to_string(i) : names[i], members[i]});
  }
  Construction c{std::move(pres), {}};
  c.expected.members = canonical_members(std::move(named));
  c.expected.expected_shape = shape_of(c.expected.members);
  return c;
}

Construction build_double_diamond(std::uint32_t p, std::size_t m,
                                  std::optional<std::pair<std::size_t, std::size_t>> split) {
  checked_prime(p);
  if (m <= 1) throw ConstraintError("m > 1 required");
  const std::size_t g = 2 * m;
  std::size_t n1 = m, n2 = m;
  if (split) {
    std::tie(n1, n2) = *split;
    if (n1 < 2 || n2 < 2 || n1 + n2 != g)
      throw ConstraintError("split (n1, n2) needs n1, n2 >= 2 and n1 + n2 = 2m");
  }
  // class 0 / class 1; by parity in the symmetric case (a_1 is odd)
  auto cls = [&](std::size_t i) -> int { return split ? (i < n1 ? 0 : 1) : static_cast<int>(i % 2); };
  auto linked = [&](std::size_t i, std::size_t j) { return split ? cls(i) == cls(j) : cls(i) != cls(j); };

  PresentationData data;
  data.p = p;
  for (std::size_t i = 0; i < g; ++i) data.v_labels.push_back("a" + std::to_string(i + 1));
  for (std::size_t i = 0; i < g; ++i) data.v_labels.push_back("b" + std::to_string(i + 1));
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j)
      if (linked(i, j)) {
        rel.emplace_back(i, g + j, data.w_labels.size());
        data.w_labels.push_back("z_a" + std::to_string(i + 1) + "b" + std::to_string(j + 1));
      }
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i + 1; j < g; ++j) {
      rel.emplace_back(g + i, g + j, data.w_labels.size());
      data.w_labels.push_back("z_b" + std::to_string(i + 1) + "b" + std::to_string(j + 1));
    }
  data.reset_table();
  for (auto [i, j, w] : rel) data.set_comm(i, j, w, 1);
  CentralPresentation pres(std::move(data));

  const std::size_t d = 2 * g;
  std::vector<std::size_t> a1, a2, b1, b2, all_a;
  for (std::size_t i = 0; i < g; ++i) {
    (cls(i) == 0 ? a1 : a2).push_back(i);
    (cls(i) == 0 ? b1 : b2).push_back(g + i);
    all_a.push_back(i);
  }
  auto join = [](std::vector<std::size_t> x, const std::vector<std::size_t>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  std::vector<NamedSubgroup> members{
      {"ZP", Subspace::zero(p, d)},
      {"A_1", coordinate_span(p, d, a1)},
      {"A_2", coordinate_span(p, d, a2)},
      {"A", coordinate_span(p, d, all_a)},
      {"AB_1", coordinate_span(p, d, join(all_a, b1))},
      {"AB_2", coordinate_span(p, d, join(all_a, b2))},
      {"P", Subspace::full(p, d)},
  };
  Construction c{std::move(pres), {}};
  c.expected.members = canonical_members(std::move(members));
  auto diamond = diamond_component(2, 0);
  diamond.edge_indices = {static_cast<int>(n1), static_cast<int>(n1), static_cast<int>(n2),
                          static_cast<int>(n2)};
  std::sort(diamond.edge_indices.begin(), diamond.edge_indices.end());
  c.expected.expected_shape = make_shape({diamond, diamond});
  return c;
}

void check_base_certificate(const Construction& base) {
  const auto& pres = base.presentation;
  const auto& members = base.expected.members;
  if (members.empty()) throw ConstraintError("base lattice has no members");
  if (radical(pres).dim() != 0)
    throw ConstraintError("base presentation has central generators outside W (nonzero radical)");
  const auto full = Subspace::full(pres.p(), pres.v_dim());
  if (std::none_of(members.begin(), members.end(), [&](const NamedSubgroup& m) { return m.space == full; }))
    throw ConstraintError("base full space is not a CD member");
  const auto s = measure(pres, full).value();
  for (const auto& m : members) {
    if (m.space.ambient_dim() != pres.v_dim()) throw ConstraintError("base member " + m.name + " has wrong dimension");
    if (measure(pres, m.space).value() != s)
      throw ConstraintError("base member " + m.name + " does not attain the common measure");
    auto c = centralizer(pres, m.space);
    if (std::none_of(members.begin(), members.end(), [&](const NamedSubgroup& o) { return o.space == c; }))
      throw ConstraintError("centralizer of base member " + m.name + " is not a member");
  }
}

namespace {

// Writes base comm, Z_N and Z_B relations; returns the layout and the data with Z_A labels pending.
struct ExtensionDraft {
  ExtensionLayout layout;
  PresentationData data;
  LabelSet labels;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> rel;
};

ExtensionDraft start_extension(const CentralPresentation& base, std::size_t blocks, std::size_t n) {
  ExtensionDraft x;
  auto& L = x.layout;
  L.r = base.v_dim();
  L.z = base.w_dim();
  L.blocks = blocks;
  L.n = n;
  x.data.p = base.p();
  for (const auto& s : base.v_labels()) x.data.v_labels.push_back(x.labels.fresh(s));
  for (const auto& s : base.w_labels()) x.data.w_labels.push_back(x.labels.fresh(s));
  for (std::size_t i = 0; i < blocks; ++i)
    for (std::size_t j = 0; j < n; ++j) x.data.v_labels.push_back(x.labels.fresh("a" + index_suffix({i + 1, j + 1})));
  for (std::size_t i = 0; i < blocks; ++i)
    for (std::size_t j = 0; j < n; ++j) x.data.v_labels.push_back(x.labels.fresh("b" + index_suffix({i + 1, j + 1})));
  // Z_N: [x_k, b_ij] = z_ijk
  for (std::size_t i = 0; i < blocks; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < L.r; ++k) {
        x.rel.emplace_back(k, L.b_at(i, j), x.data.w_labels.size());
        x.data.w_labels.push_back(x.labels.fresh("z_" + index_suffix({i + 1, j + 1, k + 1})));
      }
  return x;
}

void finish_extension_b(ExtensionDraft& x) {
  const auto& L = x.layout;
  // Z_B: [b_u, b_v] = zB_u_v for u < v lexicographically
  for (std::size_t u = 0; u < L.blocks * L.n; ++u)
    for (std::size_t v = u + 1; v < L.blocks * L.n; ++v) {
      auto us = index_suffix({u / L.n + 1, u % L.n + 1});
      auto vs = index_suffix({v / L.n + 1, v % L.n + 1});
      x.rel.emplace_back(L.b_at(u / L.n, u % L.n), L.b_at(v / L.n, v % L.n), x.data.w_labels.size());
      x.data.w_labels.push_back(x.labels.fresh("zB_" + us + "_" + vs));
    }
}

CentralPresentation assemble(ExtensionDraft& x, const CentralPresentation& base) {
  auto& data = x.data;
  data.reset_table();
  const std::size_t d = data.v_dim(), e = data.w_dim();
  for (std::size_t i = 0; i < base.v_dim(); ++i)
    for (std::size_t j = 0; j < base.v_dim(); ++j) {
      auto c = base.comm(i, j);
      for (std::size_t w = 0; w < base.w_dim(); ++w) data.comm[(i * d + j) * e + w] = c[w];
    }
  for (auto [i, j, w] : x.rel) data.set_comm(i, j, w, 1);
  return CentralPresentation(std::move(data));
}

// Base members lifted to U ⊕ span(a's).
std::vector<NamedSubgroup> embedded_base(const Construction& base, const ExtensionLayout& L,
                                         std::uint32_t p) {
  std::vector<std::size_t> pos(L.r);
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<std::size_t> a_coords;
  for (std::size_t i = 0; i < L.blocks; ++i)
    for (std::size_t j = 0; j < L.n; ++j) a_coords.push_back(L.a_at(i, j));
  auto a_span = coordinate_span(p, L.d(), a_coords);
  std::vector<NamedSubgroup> out;
  for (const auto& m : base.expected.members)
    out.push_back({"N." + m.name, subspace_sum(embed(m.space, L.d(), pos), a_span)});
  return out;
}

std::vector<ComponentSpec> middle_components(const Construction& base) {
  const auto& comps = base.expected.expected_shape.components;
  if (comps.size() == 1 && comps.front().kind == ComponentKind::Point) return {};
  return comps;
}

void finish_expected(Construction& c, std::vector<NamedSubgroup> outer, std::vector<NamedSubgroup> inner,
                     const Subspace& lo, const Subspace& hi, std::vector<ComponentSpec> comps) {
  for (auto& m : inner) outer.push_back(std::move(m));
  c.expected.members = canonical_members(std::move(outer));
  c.expected.base_window = std::make_pair(find_index(c.expected.members, lo), find_index(c.expected.members, hi));
  c.expected.expected_shape = make_shape(std::move(comps));
}

}  // namespace

Construction extend_diamond(const Construction& base, std::size_t m, std::size_t n) {
  if (m < 1) throw ConstraintError("m >= 1 required");
  if (n < 2) throw ConstraintError("n >= 2 required");
  check_base_certificate(base);
  const std::uint32_t p = base.presentation.p();
  auto x = start_extension(base.presentation, m, n);
  const auto L = x.layout;
  // Z_A: [a_ti, b_tj] = zt_ijt
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t t = 0; t < m; ++t) {
        x.rel.emplace_back(L.a_at(t, i), L.b_at(t, j), x.data.w_labels.size());
        x.data.w_labels.push_back(x.labels.fresh("zt_" + index_suffix({i + 1, j + 1, t + 1})));
      }
  finish_extension_b(x);
  Construction c{assemble(x, base.presentation), {}};
  const std::size_t d = L.d();

  std::vector<std::size_t> x_coords(L.r);
  std::iota(x_coords.begin(), x_coords.end(), 0);
  std::vector<NamedSubgroup> outer;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::size_t> delta, a_coords, top = x_coords;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) top.push_back(L.a_at(i, j));
      if (mask >> i & 1) {
        delta.push_back(i + 1);
        for (std::size_t j = 0; j < n; ++j) a_coords.push_back(L.a_at(i, j));
      }
    }
    for (std::size_t i = 0; i < m; ++i)
      if (!(mask >> i & 1))
        for (std::size_t j = 0; j < n; ++j) top.push_back(L.b_at(i, j));
    std::string bottom_name = delta.empty() ? "ZP" : delta.size() == m ? "Atilde" : "Atilde_Delta" + delta_name(delta);
    std::string top_name = delta.empty() ? "P" : delta.size() == m ? "Ntilde" : "Btilde_Delta" + delta_name(delta);
    outer.push_back({bottom_name, coordinate_span(p, d, a_coords)});
    outer.push_back({top_name, coordinate_span(p, d, top)});
  }
  auto lo = outer[2 * ((std::size_t{1} << m) - 1)].space;
  auto hi = outer[2 * ((std::size_t{1} << m) - 1) + 1].space;
  std::vector<ComponentSpec> comps{diamond_component(m, static_cast<int>(n))};
  for (auto& comp : middle_components(base)) comps.push_back(comp);
  comps.push_back(diamond_component(m, static_cast<int>(n)));
  finish_expected(c, std::move(outer), embedded_base(base, L, p), lo, hi, std::move(comps));
  return c;
}

Construction extend_qac(const Construction& base, std::size_t n) {
  if (n < 2) throw ConstraintError("n >= 2 required");
  check_base_certificate(base);
  const std::uint32_t p = base.presentation.p();
  auto x = start_extension(base.presentation, 2, n);
  const auto L = x.layout;
  // Z_A: [a_1i, b_1j] = [a_2i, b_2j] = zt_ij
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t w = x.data.w_labels.size();
      x.data.w_labels.push_back(x.labels.fresh("zt_" + index_suffix({i + 1, j + 1})));
      x.rel.emplace_back(L.a_at(0, i), L.b_at(0, j), w);
      x.rel.emplace_back(L.a_at(1, i), L.b_at(1, j), w);
    }
  finish_extension_b(x);
  Construction c{assemble(x, base.presentation), {}};
  const std::size_t d = L.d();

  std::vector<std::size_t> ntilde_coords(L.r);
  std::iota(ntilde_coords.begin(), ntilde_coords.end(), 0);
  std::vector<std::size_t> a_coords;
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t j = 0; j < n; ++j) a_coords.push_back(L.a_at(t, j));
  ntilde_coords.insert(ntilde_coords.end(), a_coords.begin(), a_coords.end());
  const auto atilde = coordinate_span(p, d, a_coords);
  const auto ntilde = coordinate_span(p, d, ntilde_coords);

  std::vector<NamedSubgroup> outer{{"ZP", Subspace::zero(p, d)},
                                   {"Atilde", atilde},
                                   {"Ntilde", ntilde},
                                   {"P", Subspace::full(p, d)}};
  for (std::uint32_t k = 0; k <= p; ++k) {
    std::vector<std::vector<Residue>> a_rows, c_rows;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Residue> a(d, 0), b(d, 0);
      if (k < p) {
        a[L.a_at(0, j)] = 1;
        a[L.a_at(1, j)] = k;
        b[L.b_at(0, j)] = k;
        b[L.b_at(1, j)] = modp::neg(1, p);
      } else {
        a[L.a_at(1, j)] = 1;
        b[L.b_at(0, j)] = 1;
      }
      a_rows.push_back(std::move(a));
      c_rows.push_back(std::move(b));
    }
    outer.push_back({"A_" + std::to_string(k), rows_span(p, d, a_rows)});
    outer.push_back({"C(A_" + std::to_string(k) + ")", subspace_sum(rows_span(p, d, c_rows), ntilde)});
  }
  std::vector<ComponentSpec> comps{qac_component(p + 1, static_cast<int>(n))};
  for (auto& comp : middle_components(base)) comps.push_back(comp);
  comps.push_back(qac_component(p + 1, static_cast<int>(n)));
  finish_expected(c, std::move(outer), embedded_base(base, L, p), atilde, ntilde, std::move(comps));
  return c;
}

Construction iterate(Extension kind, const Construction& base, std::size_t l, std::size_t m,
                     std::size_t n) {
  if (l < 1) throw ConstraintError("l >= 1 required");
  Construction cur = base;
  for (std::size_t round = 0; round < l; ++round)
    cur = kind == Extension::Diamond ? extend_diamond(cur, m, n) : extend_qac(cur, n);
  return cur;
}

namespace {

Construction product_of(CentralPresentation pres, const std::vector<const Construction*>& factors) {
  std::vector<NamedSubgroup> members{{"", Subspace::zero(pres.p(), 0)}};
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::vector<NamedSubgroup> next;
    for (const auto& left : members)
      for (const auto& right : factors[f]->expected.members)
        next.push_back({left.name + (f ? "," : "") + right.name, direct_sum(left.space, right.space)});
    members = std::move(next);
  }
  for (auto& m : members) m.name = "(" + m.name + ")";
  Construction c{std::move(pres), {}};
  c.expected.members = canonical_members(std::move(members));
  c.expected.expected_shape = shape_of(c.expected.members);
  return c;
}

}  // namespace

Construction direct_product(const Construction& a, const Construction& b) {
  return product_of(direct_product(a.presentation, b.presentation), {&a, &b});
}

Construction direct_power(const Construction& base, std::size_t k) {
  if (k < 1) throw ConstraintError("k >= 1 required");
  if (k == 1) return base;
  std::vector<CentralPresentation> copies(k, base.presentation);
  return product_of(direct_product(std::span<const CentralPresentation>(copies)),
                    std::vector<const Construction*>(k, &base));
}

}  // namespace cdlat
