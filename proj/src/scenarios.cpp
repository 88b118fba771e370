#include "cdlat/scenarios.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "cdlat/cdengine.hpp"

namespace cdlat {

bool ScenarioReport::pass() const {
  return !claims.empty() && std::all_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.pass; });
}

std::string ScenarioReport::render() const {
  std::ostringstream os;
  os << "scenario " << name << "\n";
  for (const auto& c : claims) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.claim;
    if (!c.detail.empty()) os << " [" << c.detail << "]";
    os << "\n";
  }
  os << name << ": " << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry{
      {"double-diamond", "thm1.1", "double-diamond group at p=2, m=2: full search, 7 members, 2-string of 2-diamonds"},
      {"diamond-extension", "thm2.1-small", "diamond extension of the Heisenberg group (m=1, n=2): mixed 3-string"},
      {"diamond-string", "cor2.5-l2", "two diamond extensions of the trivial group: 4-string of 1-diamonds"},
      {"qac-extension", "thm3.1", "quasiantichain extension of the Heisenberg group (n=2, d=10): verified 3-string"},
      {"qac-centralizers", "lem3.3", "centralizers of the A_k in quasiantichain extensions, p in {2,3}, n in {2,3}"},
      {"qac-string", "cor3.6-l1", "quasiantichain extension of the trivial group: 2-string of M_5"},
      {"direct-product", "bw2012-product", "CD of Heisenberg x Heisenberg is the product of the factor lattices"},
      {"asymmetric-split", "remark1-asymmetric", "double-diamond with unequal classes (2,4): verified 2-string"},
      {"order-formulas", "orders", "group order exponents of the constructions over a parameter grid"},
  };
  return registry;
}

std::optional<std::string> resolve_scenario(const std::string& name) {
  for (const auto& s : scenario_registry())
    if (s.name == name || s.alias == name) return s.name;
  return std::nullopt;
}

namespace {

class Checker {
 public:
  explicit Checker(ScenarioReport& r) : r_(r) {}
  bool claim(std::string text, bool ok, std::string detail = "") {
    r_.claims.push_back({std::move(text), ok, std::move(detail)});
    return ok;
  }

 private:
  ScenarioReport& r_;
};

std::vector<Subspace> spaces(const ExpectedLattice& e) {
  std::vector<Subspace> out;
  for (const auto& m : e.members) out.push_back(m.space);
  std::sort(out.begin(), out.end());
  return out;
}

std::string exps(const CentralPresentation& pres) {
  return "|P|=" + std::to_string(pres.p()) + "^" + std::to_string(pres.v_dim() + pres.w_dim()) +
         " |Z|=" + std::to_string(pres.p()) + "^" + std::to_string(pres.w_dim());
}

// Full search of c, then the standard member / shape / duality / minimum claims.
CDLattice full_checks(Checker& ck, const Construction& c, const ScenarioOptions& o, std::size_t count,
                      const std::string& shape) {
  SearchOptions so;
  so.jobs = o.jobs;
  auto [lat, stats] = compute_cd_full(c.presentation, so);
  bind_names(lat, c.expected);
  const auto total = subspace_count(c.presentation.v_dim(), c.presentation.p());
  ck.claim("full search scans every subspace of V", stats.scanned == total,
           stats.scanned.str() + " of " + total.str() + ", d=" + std::to_string(c.presentation.v_dim()));
  ck.claim("CD has exactly " + std::to_string(count) + " members", lat.members.size() == count,
           std::to_string(lat.members.size()) + " found");
  ck.claim("members equal the predicted list", lat.members == spaces(c.expected));
  ck.claim("shape is " + shape, classify(lat.poset()).summary() == shape, classify(lat.poset()).summary());
  auto fault = check_duality(c.presentation, lat.members);
  ck.claim("centralizer duality, sum/intersection closure and modular law hold on members", !fault,
           fault.value_or(""));
  ck.claim("minimum member is Z(P)", minimum_is_center(lat));
  ck.claim("common measure equals |P||Z(P)|",
           lat.max_measure == c.presentation.v_dim() + 2 * c.presentation.w_dim(),
           "p^" + std::to_string(lat.max_measure));
  return lat;
}

void verify_checks(Checker& ck, const Construction& c, const ScenarioOptions& o) {
  VerifyOptions vo;
  vo.jobs = o.jobs;
  vo.seed = o.seed;
  vo.samples = o.samples;
  auto r = verify_predicted(c.presentation, c.expected, vo);
  std::string detail = std::to_string(r.adversarial_checked) + " neighbours, " + std::to_string(r.random_checked) +
                       (r.exhaustive ? " (exhaustive)" : " random");
  if (r.counterexample) detail += "; " + r.counterexample->reason + ": " + r.counterexample->space.to_string();
  ck.claim("verification finds no subspace beating or tying the predicted members", r.pass, detail);
}

bool window_matches_base(const Construction& c, const Construction& base) {
  if (!c.expected.base_window) return false;
  auto [lo, hi] = *c.expected.base_window;
  auto poset = member_poset(spaces(c.expected));
  auto leq = poset.order_matrix();
  std::vector<std::size_t> elems;
  for (std::size_t x = 0; x < poset.size; ++x)
    if (leq[lo * poset.size + x] && leq[x * poset.size + hi]) elems.push_back(x);
  return isomorphic(induced(poset, elems), member_poset(spaces(base.expected)));
}

void double_diamond(Checker& ck, const ScenarioOptions& o) {
  auto c = build_double_diamond(2, 2);
  ck.claim("orders |P| = p^22 and |Z(P)| = p^14 at m=2", exps(c.presentation) == "|P|=2^22 |Z|=2^14",
           exps(c.presentation));
  auto lat = full_checks(ck, c, o, 7, "2-string[diamond(2),diamond(2)] uniform idx=p^2");
  std::vector<std::string> names(lat.names);
  std::sort(names.begin(), names.end());
  ck.claim("members are ZP, A_1, A_2, A, AB_1, AB_2, P",
           names == std::vector<std::string>{"A", "AB_1", "AB_2", "A_1", "A_2", "P", "ZP"});
  const auto& e = c.expected;
  ck.claim("C(A_1) = AB_1 and C(A_2) = AB_2",
           centralizer(c.presentation, e.at("A_1")) == e.at("AB_1") &&
               centralizer(c.presentation, e.at("A_2")) == e.at("AB_2"));
  ck.claim("Hasse diagram has 8 covers", lat.covers.size() == 8, std::to_string(lat.covers.size()));
  try {
    build_double_diamond(2, 1);
    ck.claim("m = 1 is rejected", false);
  } catch (const ConstraintError& err) {
    ck.claim("m = 1 is rejected", std::string(err.what()) == "m > 1 required", err.what());
  }
}

void diamond_extension(Checker& ck, const ScenarioOptions& o) {
  auto base = heisenberg_construction(2);
  auto c = extend_diamond(base, 1, 2);
  // r = 2, z = 1, m = 1, n = 2
  ck.claim("V has dimension 2mn + r = 6", c.presentation.v_dim() == 6);
  ck.claim("Z(P) has dimension mn(2n + 2r + mn - 1)/2 + z = 10", c.presentation.w_dim() == 10);
  full_checks(ck, c, o, 7, "3-string[diamond(1),qac(3),diamond(1)] mixed idx=[p^2,p^1,p^2]");
  ck.claim("middle component is isomorphic to CD of the base", window_matches_base(c, base));
}

void diamond_string(Checker& ck, const ScenarioOptions& o) {
  auto c = iterate(Extension::Diamond, trivial_construction(2), 2, 1, 2);
  ck.claim("V has dimension 8", c.presentation.v_dim() == 8);
  auto lat = full_checks(ck, c, o, 5, "4-string[diamond(1),diamond(1),diamond(1),diamond(1)] uniform idx=p^2");
  bool idx = std::all_of(lat.covers.begin(), lat.covers.end(), [&](auto cv) {
    return lat.members[cv.first].dim() - lat.members[cv.second].dim() == 2;
  });
  ck.claim("every cover H < K has |K:H| = p^2", idx);
}

void qac_string(Checker& ck, const ScenarioOptions& o) {
  auto c = extend_qac(trivial_construction(2), 2);
  ck.claim("V has dimension 4n + r = 8", c.presentation.v_dim() == 8);
  ck.claim("Z(P) has dimension 2nr + n^2 + n(2n-1) + z = 10", c.presentation.w_dim() == 10);
  full_checks(ck, c, o, 9, "2-string[qac(3),qac(3)] uniform idx=p^2");
}

void qac_extension(Checker& ck, const ScenarioOptions& o) {
  auto base = heisenberg_construction(2);
  auto c = extend_qac(base, 2);
  ck.claim("V has dimension 4n + r = 10", c.presentation.v_dim() == 10);
  ck.claim("predicted lattice has 13 members", c.expected.members.size() == 13,
           std::to_string(c.expected.members.size()));
  auto fault = check_duality(c.presentation, spaces(c.expected));
  ck.claim("duality and closure hold on predicted members", !fault, fault.value_or(""));
  verify_checks(ck, c, o);
  auto pred = predicted_lattice(c.presentation, c.expected);
  auto shape = classify(pred.poset()).summary();
  ck.claim("predicted shape is a 3-string of M_5 with cover indices p^2, p^1, p^2",
           shape == "3-string[qac(3),qac(3),qac(3)] uniform idx=[p^2,p^1,p^2]", shape);
  ck.claim("middle component is isomorphic to CD of the base", window_matches_base(c, base));
  if (o.heavy) full_checks(ck, c, o, 13, shape);
}

void qac_centralizers(Checker& ck, const ScenarioOptions&) {
  for (std::uint32_t p : {2u, 3u})
    for (std::size_t n : {2u, 3u})
      for (bool heis : {false, true}) {
        auto c = extend_qac(heis ? heisenberg_construction(p) : trivial_construction(p), n);
        const auto& pres = c.presentation;
        const std::size_t d = pres.v_dim();
        auto idx = [&](const std::string& l) { return *pres.v_index(l); };
        // Ntilde: every coordinate except the b's
        FieldMatrix nt(0, d, p);
        std::vector<Residue> row(d);
        for (std::size_t i = 0; i < d; ++i) {
          if (pres.v_labels()[i][0] == 'b') continue;
          std::fill(row.begin(), row.end(), 0);
          row[i] = 1;
          nt.append_row(row);
        }
        bool ok = true;
        std::string bad;
        for (std::uint32_t k = 0; k <= p; ++k) {
          FieldMatrix a(0, d, p), cm = nt;
          for (std::size_t j = 1; j <= n; ++j) {
            std::fill(row.begin(), row.end(), 0);
            if (k < p) {
              row[idx("a1" + std::to_string(j))] = 1;
              row[idx("a2" + std::to_string(j))] = k;
            } else {
              row[idx("a2" + std::to_string(j))] = 1;
            }
            a.append_row(row);
            std::fill(row.begin(), row.end(), 0);
            if (k == 0) {
              row[idx("b2" + std::to_string(j))] = 1;
            } else if (k == p) {
              row[idx("b1" + std::to_string(j))] = 1;
            } else {
              row[idx("b1" + std::to_string(j))] = k;
              row[idx("b2" + std::to_string(j))] = p - 1;
            }
            cm.append_row(row);
          }
          if (centralizer(pres, Subspace::span(a)) != Subspace::span(cm)) {
            ok = false;
            bad = "k=" + std::to_string(k);
          }
        }
        ck.claim("C(A_k) matches for all 0 <= k <= p at p=" + std::to_string(p) + ", n=" + std::to_string(n) +
                     ", base " + (heis ? "Heisenberg" : "trivial"),
                 ok, bad);
      }
}

void direct_product_law(Checker& ck, const ScenarioOptions& o) {
  auto h = heisenberg_construction(2);
  auto c = direct_product(h, h);
  SearchOptions so;
  so.jobs = o.jobs;
  auto [lat, stats] = compute_cd_full(c.presentation, so);
  ck.claim("full search scans 67 subspaces of GF(2)^4", stats.scanned == 67, stats.scanned.str());
  ck.claim("CD has exactly 25 members", lat.members.size() == 25, std::to_string(lat.members.size()));
  std::vector<Subspace> sums;
  for (const auto& u : h.expected.members)
    for (const auto& v : h.expected.members) sums.push_back(direct_sum(u.space, v.space));
  std::sort(sums.begin(), sums.end());
  ck.claim("members are exactly the direct sums of factor members", lat.members == sums);
  bool additive = true;
  for (const auto& u : h.expected.members)
    for (const auto& v : h.expected.members)
      additive = additive && measure(c.presentation, direct_sum(u.space, v.space)).value() ==
                                 measure(h.presentation, u.space).value() + measure(h.presentation, v.space).value();
  ck.claim("measure is additive over the factors", additive);
  auto fault = check_duality(c.presentation, lat.members);
  ck.claim("duality and closure hold on members", !fault, fault.value_or(""));
}

void asymmetric_split(Checker& ck, const ScenarioOptions& o) {
  auto c = build_double_diamond(2, 3, std::make_pair<std::size_t, std::size_t>(2, 4));
  const auto& e = c.expected;
  ck.claim("A_1 and A_2 have different orders", e.at("A_1").dim() != e.at("A_2").dim(),
           std::to_string(e.at("A_1").dim()) + " vs " + std::to_string(e.at("A_2").dim()));
  ck.claim("C(A_1) = A B_2 and C(A_2) = A B_1",
           centralizer(c.presentation, e.at("A_1")) == e.at("AB_2") &&
               centralizer(c.presentation, e.at("A_2")) == e.at("AB_1"));
  auto fault = check_duality(c.presentation, spaces(e));
  ck.claim("duality and closure hold on predicted members", !fault, fault.value_or(""));
  verify_checks(ck, c, o);
  auto shape = classify(predicted_lattice(c.presentation, e).poset()).summary();
  ck.claim("predicted shape is a 2-string of 2-diamonds",
           shape.rfind("2-string[diamond(2),diamond(2)] uniform", 0) == 0, shape);
  try {
    build_double_diamond(2, 2, std::make_pair<std::size_t, std::size_t>(1, 3));
    ck.claim("a class of size 1 is rejected", false);
  } catch (const ConstraintError&) {
    ck.claim("a class of size 1 is rejected", true);
  }
}

void order_formulas(Checker& ck, const ScenarioOptions&) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (std::size_t m : {2u, 3u}) {
      auto c = build_double_diamond(p, m);
      const std::size_t d = c.presentation.v_dim(), e = c.presentation.w_dim();
      ck.claim("double diamond p=" + std::to_string(p) + ", m=" + std::to_string(m) + ": |P| = p^(4m^2+3m), |Z| = p^(4m^2-m)",
               d + e == 4 * m * m + 3 * m && e == 4 * m * m - m, exps(c.presentation));
    }
  for (std::uint32_t p : {2u, 3u})
    for (std::size_t m : {1u, 2u})
      for (std::size_t n : {2u, 3u})
        for (bool heis : {false, true}) {
          auto base = heis ? heisenberg_construction(p) : trivial_construction(p);
          auto c = extend_diamond(base, m, n);
          const std::size_t r = base.presentation.v_dim(), z = base.presentation.w_dim();
          ck.claim("diamond extension p=" + std::to_string(p) + ", m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                       ", r=" + std::to_string(r) + ": V = 2mn + r, Z = mn(2n+2r+mn-1)/2 + z",
                   c.presentation.v_dim() == 2 * m * n + r &&
                       2 * (c.presentation.w_dim() - z) == m * n * (2 * n + 2 * r + m * n - 1),
                   exps(c.presentation));
        }
}

}  // namespace

ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options) {
  auto canonical = resolve_scenario(name);
  if (!canonical) throw DomainError("unknown scenario '" + name + "'");
  static const std::vector<std::pair<std::string, std::function<void(Checker&, const ScenarioOptions&)>>> table{
      {"double-diamond", double_diamond},     {"diamond-extension", diamond_extension},
      {"diamond-string", diamond_string},     {"qac-extension", qac_extension},
      {"qac-centralizers", qac_centralizers}, {"qac-string", qac_string},
      {"direct-product", direct_product_law}, {"asymmetric-split", asymmetric_split},
      {"order-formulas", order_formulas},
  };
  ScenarioReport report;
  report.name = *canonical;
  Checker ck(report);
  for (const auto& [n, fn] : table)
    if (n == *canonical) fn(ck, options);
  return report;
}

}  // namespace cdlat
