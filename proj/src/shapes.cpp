#include "cdlat/shapes.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace cdlat {

std::vector<bool> Poset::order_matrix() const {
  const std::size_t n = size;
  std::vector<bool> leq(n * n, false);
  std::vector<std::vector<std::size_t>> up(n);
  for (auto [hi, lo] : covers) {
    if (hi >= n || lo >= n) throw DomainError("cover index out of range");
    up[lo].push_back(hi);
  }
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    leq[s * n + s] = true;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto y : up[x])
        if (!leq[s * n + y]) {
          leq[s * n + y] = true;
          stack.push_back(y);
        }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && leq[a * n + b] && leq[b * n + a]) throw DomainError("cover relation has a cycle");
  return leq;
}

// ---------------------------------------------------------------------------

std::string ComponentSpec::name() const {
  switch (kind) {
    case ComponentKind::Point: return "point";
    case ComponentKind::Diamond: return "diamond(" + std::to_string(param) + ")";
    case ComponentKind::Quasiantichain: return "qac(" + std::to_string(param) + ")";
    case ComponentKind::Chain: return "chain(" + std::to_string(param) + ")";
    case ComponentKind::Other: return "other(" + fingerprint + ")";
  }
  return "?";
}

std::string ComponentSpec::index_label() const {
  std::set<int> distinct(edge_indices.begin(), edge_indices.end());
  if (distinct.empty()) return "";
  if (distinct.size() == 1) return "p^" + std::to_string(*distinct.begin());
  std::string s = "p^{";
  bool first = true;
  for (int k : distinct) {
    s += (first ? "" : ",") + std::to_string(k);
    first = false;
  }
  return s + "}";
}

bool ComponentSpec::same_shape(const ComponentSpec& o) const {
  return kind == o.kind && param == o.param && fingerprint == o.fingerprint;
}

std::string ShapeSpec::summary() const {
  if (components.empty()) return "empty";
  std::string s;
  if (components.size() == 1) {
    s = components.front().name();
  } else {
    s = std::to_string(components.size()) + "-string[";
    for (std::size_t i = 0; i < components.size(); ++i) s += (i ? "," : "") + components[i].name();
    s += uniform ? "] uniform" : "] mixed";
  }
  bool known = std::any_of(components.begin(), components.end(),
                           [](const ComponentSpec& c) { return !c.edge_indices.empty(); });
  if (!known) return s;
  if (index_uniform) return s + " idx=" + components.front().index_label();
  s += " idx=[";
  for (std::size_t i = 0; i < components.size(); ++i) {
    auto l = components[i].index_label();
    s += (i ? "," : "") + (l.empty() ? std::string("-") : l);
  }
  return s + "]";
}

std::vector<std::string> ShapeSpec::block() const {
  std::vector<std::string> out;
  out.push_back("shape " + summary());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    auto idx = c.index_label();
    out.push_back("component " + std::to_string(i) + " " + c.name() + " count " +
                  std::to_string(c.element_count) + " lo " + std::to_string(c.lo) + " hi " +
                  std::to_string(c.hi) + " idx " + (idx.empty() ? "-" : idx));
  }
  return out;
}

ShapeSpec make_shape(std::vector<ComponentSpec> components) {
  ShapeSpec s;
  s.components = std::move(components);
  s.uniform = std::all_of(s.components.begin(), s.components.end(),
                          [&](const ComponentSpec& c) { return c.same_shape(s.components.front()); });
  std::set<int> all;
  for (const auto& c : s.components) all.insert(c.edge_indices.begin(), c.edge_indices.end());
  s.index_uniform = all.size() <= 1;
  return s;
}

ComponentSpec diamond_component(std::size_t m, int index) {
  ComponentSpec c;
  c.kind = ComponentKind::Diamond;
  c.param = m;
  c.element_count = std::size_t{1} << m;
  c.edge_indices.assign(m << (m - 1), index);
  return c;
}

ComponentSpec qac_component(std::size_t width, int index) {
  ComponentSpec c;
  c.kind = ComponentKind::Quasiantichain;
  c.param = width;
  c.element_count = width + 2;
  c.edge_indices.assign(2 * width, index);
  return c;
}

ComponentSpec point_component() { return ComponentSpec{}; }

// ---------------------------------------------------------------------------

Poset induced(const Poset& poset, const std::vector<std::size_t>& elements) {
  Poset out;
  out.size = elements.size();
  std::map<std::size_t, std::size_t> where;
  for (std::size_t i = 0; i < elements.size(); ++i) where[elements[i]] = i;
  for (auto [hi, lo] : poset.covers) {
    auto a = where.find(hi), b = where.find(lo);
    if (a != where.end() && b != where.end()) out.covers.emplace_back(a->second, b->second);
  }
  if (!poset.rank.empty())
    for (auto e : elements) out.rank.push_back(poset.rank[e]);
  return out;
}

namespace {

using Partition = std::vector<std::vector<std::size_t>>;

struct Adjacency {
  std::vector<std::vector<std::size_t>> up, down;
  explicit Adjacency(const Poset& p) : up(p.size), down(p.size) {
    for (auto [hi, lo] : p.covers) {
      up[lo].push_back(hi);
      down[hi].push_back(lo);
    }
  }
};

void refine(Partition& cells, const Adjacency& g) {
  const std::size_t n = g.up.size();
  std::vector<std::size_t> cell_of(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (auto v : cells[c]) cell_of[v] = c;
    Partition next;
    next.reserve(cells.size());
    for (const auto& cell : cells) {
      if (cell.size() == 1) {
        next.push_back(cell);
        continue;
      }
      // signature: sorted (neighbour cell, direction) multiset
      std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
      for (auto v : cell) {
        std::vector<std::size_t> sig;
        for (auto u : g.up[v]) sig.push_back(2 * cell_of[u]);
        for (auto u : g.down[v]) sig.push_back(2 * cell_of[u] + 1);
        std::sort(sig.begin(), sig.end());
        groups[sig].push_back(v);
      }
      if (groups.size() > 1) changed = true;
      for (auto& [sig, members] : groups) next.push_back(std::move(members));
    }
    cells = std::move(next);
  }
}

struct CanonSearch {
  const Adjacency& g;
  std::size_t budget;
  std::size_t nodes = 0;
  bool exhausted = false;
  std::optional<std::vector<std::pair<std::size_t, std::size_t>>> best;

  void leaf(const Partition& cells) {
    std::vector<std::size_t> pos(g.up.size());
    for (std::size_t c = 0; c < cells.size(); ++c) pos[cells[c].front()] = c;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t v = 0; v < g.up.size(); ++v)
      for (auto u : g.up[v]) edges.emplace_back(pos[v], pos[u]);
    std::sort(edges.begin(), edges.end());
    if (!best || edges < *best) best = std::move(edges);
  }

  void search(Partition cells) {
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    refine(cells, g);
    std::size_t target = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (cells[c].size() > 1) {
        target = c;
        break;
      }
    if (target == cells.size()) {
      leaf(cells);
      return;
    }
    for (auto v : cells[target]) {
      Partition child;
      child.reserve(cells.size() + 1);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c != target) {
          child.push_back(cells[c]);
          continue;
        }
        child.push_back({v});
        std::vector<std::size_t> rest;
        for (auto u : cells[c])
          if (u != v) rest.push_back(u);
        child.push_back(std::move(rest));
      }
      search(std::move(child));
      if (exhausted) return;
    }
  }
};

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ComponentSpec classify_interval(const Poset& poset, const std::vector<bool>& leq, std::size_t lo,
                                std::size_t hi) {
  const std::size_t n = poset.size;
  ComponentSpec c;
  c.lo = lo;
  c.hi = hi;
  std::vector<std::size_t> elems;
  for (std::size_t x = 0; x < n; ++x)
    if (leq[lo * n + x] && leq[x * n + hi]) elems.push_back(x);
  if (elems.empty()) throw DomainError("classify_component: lo is not below hi");
  c.element_count = elems.size();
  std::vector<bool> inside(n, false);
  for (auto x : elems) inside[x] = true;
  for (auto [u, l] : poset.covers)
    if (inside[u] && inside[l] && !poset.rank.empty()) c.edge_indices.push_back(poset.rank[u] - poset.rank[l]);
  std::sort(c.edge_indices.begin(), c.edge_indices.end());
  if (lo == hi) {
    c.kind = ComponentKind::Point;
    return c;
  }

  // m-diamond: x -> {atoms below x} is an order-isomorphism onto the subsets of the atoms
  std::vector<std::size_t> atoms;
  for (auto [u, l] : poset.covers)
    if (l == lo && inside[u]) atoms.push_back(u);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  const std::size_t m = atoms.size();
  if (m < 63 && elems.size() == (std::size_t{1} << m)) {
    std::vector<std::uint64_t> below(n, 0);
    for (auto x : elems)
      for (std::size_t a = 0; a < m; ++a)
        if (leq[atoms[a] * n + x]) below[x] |= std::uint64_t{1} << a;
    bool iso = true;
    std::set<std::uint64_t> images;
    for (auto x : elems) images.insert(below[x]);
    iso = images.size() == elems.size();
    for (std::size_t i = 0; iso && i < elems.size(); ++i)
      for (std::size_t j = 0; iso && j < elems.size(); ++j) {
        bool subset = (below[elems[i]] & ~below[elems[j]]) == 0;
        if (subset != leq[elems[i] * n + elems[j]]) iso = false;
      }
    if (iso) {
      c.kind = ComponentKind::Diamond;
      c.param = m;
      return c;
    }
  }

  std::vector<std::size_t> middle;
  for (auto x : elems)
    if (x != lo && x != hi) middle.push_back(x);
  bool antichain = true, chain = true;
  for (std::size_t i = 0; i < middle.size(); ++i)
    for (std::size_t j = i + 1; j < middle.size(); ++j) {
      bool comparable = leq[middle[i] * n + middle[j]] || leq[middle[j] * n + middle[i]];
      if (comparable) antichain = false;
      else chain = false;
    }
  if (antichain && middle.size() >= 2) {
    c.kind = ComponentKind::Quasiantichain;
    c.param = middle.size();
    return c;
  }
  if (chain) {
    c.kind = ComponentKind::Chain;
    c.param = elems.size() - 1;
    return c;
  }
  c.kind = ComponentKind::Other;
  Poset sub = induced(poset, elems);
  if (auto cert = canonical_certificate(sub)) {
    c.fingerprint = hex64(fnv1a(*cert));
  } else {
    // search budget exhausted: fall back to a refinement invariant
    Adjacency g(sub);
    Partition cells{std::vector<std::size_t>(sub.size)};
    for (std::size_t i = 0; i < sub.size; ++i) cells[0][i] = i;
    refine(cells, g);
    std::string inv;
    for (const auto& cell : cells) inv += std::to_string(cell.size()) + ",";
    c.fingerprint = "approx-" + hex64(fnv1a(inv));
  }
  return c;
}

}  // namespace

std::optional<std::string> canonical_certificate(const Poset& poset, std::size_t node_budget) {
  Adjacency g(poset);
  CanonSearch s{g, node_budget, 0, false, std::nullopt};
  Partition cells;
  if (poset.size > 0) {
    cells.emplace_back(poset.size);
    for (std::size_t i = 0; i < poset.size; ++i) cells[0][i] = i;
    s.search(cells);
    if (s.exhausted) return std::nullopt;
  }
  std::ostringstream os;
  os << poset.size << ':';
  if (s.best)
    for (auto [a, b] : *s.best) os << a << '<' << b << ';';
  return os.str();
}

bool isomorphic(const Poset& a, const Poset& b) {
  if (a.size != b.size || a.covers.size() != b.covers.size()) return false;
  auto ca = canonical_certificate(a);
  auto cb = canonical_certificate(b);
  if (!ca || !cb) throw DomainError("isomorphism search budget exhausted");
  return *ca == *cb;
}

std::vector<std::size_t> spine(const Poset& poset) {
  const std::size_t n = poset.size;
  if (n == 0) throw DomainError("empty lattice");
  auto leq = poset.order_matrix();
  std::size_t mins = 0, maxs = 0;
  for (std::size_t x = 0; x < n; ++x) {
    bool is_min = true, is_max = true;
    for (std::size_t y = 0; y < n; ++y) {
      if (!leq[x * n + y]) is_min = false;
      if (!leq[y * n + x]) is_max = false;
    }
    mins += is_min;
    maxs += is_max;
  }
  if (mins != 1 || maxs != 1) throw DomainError("lattice has no unique minimum and maximum");
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < n; ++x) {
    bool all = true;
    for (std::size_t y = 0; y < n && all; ++y) all = leq[x * n + y] || leq[y * n + x];
    if (all) out.push_back(x);
  }
  auto below = [&](std::size_t x) {
    std::size_t k = 0;
    for (std::size_t y = 0; y < n; ++y) k += leq[y * n + x];
    return k;
  };
  std::sort(out.begin(), out.end(), [&](auto a, auto b) { return below(a) < below(b); });
  return out;
}

ComponentSpec classify_component(const Poset& poset, std::size_t lo, std::size_t hi) {
  return classify_interval(poset, poset.order_matrix(), lo, hi);
}

ShapeSpec classify(const Poset& poset) {
  auto sp = spine(poset);
  auto leq = poset.order_matrix();
  std::vector<ComponentSpec> comps;
  if (sp.size() == 1) {
    comps.push_back(classify_interval(poset, leq, sp[0], sp[0]));
  } else {
    for (std::size_t i = 0; i + 1 < sp.size(); ++i)
      comps.push_back(classify_interval(poset, leq, sp[i], sp[i + 1]));
  }
  return make_shape(std::move(comps));
}

}  // namespace cdlat
