#include "doctest.h"

#include "brute.hpp"
#include "cdlat/constructions.hpp"
#include "cdlat/presentation.hpp"

using namespace cdlat;

namespace {

PresentationData two_by_one(std::uint32_t p) {
  PresentationData d;
  d.p = p;
  d.v_labels = {"x", "y"};
  d.w_labels = {"z"};
  d.reset_table();
  return d;
}

Subspace line(std::uint32_t p, std::size_t d, std::size_t i) {
  std::vector<std::int64_t> v(d, 0);
  v[i] = 1;
  return Subspace::span(p, d, {v});
}

std::vector<CentralPresentation> property_grid() {
  std::vector<CentralPresentation> out{heisenberg(2), heisenberg(3), heisenberg(5), abelian(3, 2),
                                       direct_product(heisenberg(2), heisenberg(2))};
  std::mt19937_64 rng(21);
  for (int i = 0; i < 6; ++i) out.push_back(brute::random_presentation(rng, 2, 5, 3));
  for (int i = 0; i < 4; ++i) out.push_back(brute::random_presentation(rng, 3, 4, 2));
  out.push_back(build_double_diamond(2, 2).presentation);
  return out;
}

}  // namespace

TEST_SUITE("presentation") {

TEST_CASE("validate") {
  auto d = two_by_one(2);
  d.set_comm(0, 1, 0, 1);
  CHECK_FALSE(validate(d).has_value());

  auto diag = two_by_one(2);
  diag.comm[0] = 1;
  REQUIRE(validate(diag).has_value());
  CHECK(validate(diag)->kind == "diagonal");

  auto skew = two_by_one(3);
  skew.comm[1] = 1;  // [x, y] = z
  skew.comm[2] = 1;  // [y, x] = z, should be 2
  REQUIRE(validate(skew).has_value());
  CHECK(validate(skew)->kind == "alternating");
  CHECK(validate(skew)->i == 0);
  CHECK(validate(skew)->j == 1);

  auto dup = two_by_one(2);
  dup.v_labels = {"x", "x"};
  CHECK(validate(dup)->kind == "label");

  auto composite = two_by_one(4);
  CHECK(validate(composite)->kind == "modulus");

  auto short_table = two_by_one(2);
  short_table.comm.pop_back();
  CHECK(validate(short_table)->kind == "dimension");

  CHECK_THROWS_AS(CentralPresentation{diag}, InvalidPresentation);
}

TEST_CASE("centralizer examples") {
  auto h = heisenberg(2);
  CHECK(centralizer(h, Subspace::zero(2, 2)) == Subspace::full(2, 2));
  auto x = line(2, 2, 0);
  CHECK(centralizer(h, x) == x);
  // scan all 4 vectors
  CHECK(brute::to_set(centralizer(h, x)) == brute::perp(h, brute::to_set(x)));

  auto dd = build_double_diamond(2, 2);
  const auto& e = dd.expected;
  CHECK(centralizer(dd.presentation, e.at("A_1")) == e.at("AB_1"));
  CHECK(centralizer(dd.presentation, e.at("A_2")) == e.at("AB_2"));
  CHECK(centralizer(dd.presentation, e.at("A")) == e.at("A"));
  CHECK_THROWS_AS(centralizer(h, Subspace::zero(2, 3)), DomainError);
}

TEST_CASE("measure examples") {
  auto h = heisenberg(3);
  auto m0 = measure(h, Subspace::zero(3, 2));
  CHECK(m0.h_exp == 1);
  CHECK(m0.c_exp == 3);
  CHECK(m0.value() == 4);

  for (std::uint32_t p : {2u, 3u}) {
    for (std::size_t m : {2u, 3u}) {
      auto dd = build_double_diamond(p, m);
      const std::size_t z = 4 * m * m - m;
      auto ma = measure(dd.presentation, dd.expected.at("A"));
      CHECK(ma.h_exp == 2 * m + z);
      CHECK(ma.c_exp == 2 * m + z);
    }
  }
  auto dd = build_double_diamond(2, 2);
  CHECK(measure(dd.presentation, Subspace::zero(2, 8)).value() == 36);
  CHECK(measure(dd.presentation, Subspace::full(2, 8)).value() == 36);
}

TEST_CASE("abelian") {
  auto t = abelian(5, 0);
  CHECK(t.v_dim() == 0);
  CHECK(t.w_dim() == 0);
  auto a = abelian(2, 3);
  CHECK(a.v_labels() == std::vector<std::string>{"g1", "g2", "g3"});
  // zero form: every subspace is centralized by all of V
  SubspaceStream s(2, 3);
  while (auto u = s.next()) CHECK(centralizer(a, *u) == Subspace::full(2, 3));
  // measure grows with dim U here, since e = 0 leaves no room for a larger centre
  auto a3 = abelian(3, 2);
  CHECK(measure(a3, Subspace::zero(3, 2)).value() == 2);
  CHECK(measure(a3, Subspace::full(3, 2)).value() == 4);
}

TEST_CASE("radical") {
  CHECK(radical(heisenberg(2)) == Subspace::zero(2, 2));
  CHECK(radical(abelian(2, 3)) == Subspace::full(2, 3));
  auto prod = direct_product(heisenberg(3), abelian(3, 1));
  CHECK(radical(prod) == line(3, 3, 2));
}

TEST_CASE("direct products") {
  auto h = heisenberg(2);
  auto hh = direct_product(h, h);
  CHECK(hh.v_dim() == 4);
  CHECK(hh.w_dim() == 2);
  CHECK(hh.v_labels() == std::vector<std::string>{"x.1", "y.1", "x.2", "y.2"});
  CHECK(hh.w_labels() == std::vector<std::string>{"z.1", "z.2"});
  auto ht = direct_product(h, abelian(2, 0));
  CHECK(ht.v_dim() == 2);
  CHECK(ht.w_dim() == 1);
  CHECK(ht.data().comm == h.data().comm);
  CHECK_THROWS_AS(direct_product(h, heisenberg(3)), DomainError);
  std::vector<CentralPresentation> three{h, h, h};
  auto h3 = direct_product(std::span<const CentralPresentation>(three));
  CHECK(h3.v_dim() == 6);
  CHECK(h3.v_labels().back() == "y.3");

  // measure additivity over U1 ⊕ U2
  std::mt19937_64 rng(22);
  auto g1 = brute::random_presentation(rng, 3, 3, 2);
  auto g2 = heisenberg(3);
  auto g = direct_product(g1, g2);
  for (int i = 0; i < 50; ++i) {
    auto u1 = brute::random_subspace(rng, 3, 3);
    auto u2 = brute::random_subspace(rng, 3, 2);
    CHECK(measure(g, direct_sum(u1, u2)).value() == measure(g1, u1).value() + measure(g2, u2).value());
  }
}

TEST_CASE("CGP parse and serialize") {
  const std::string doc =
      "cgp 1\n"
      "p 2\n"
      "noncentral x y\n"
      "central z\n"
      "comm x y = z\n";
  auto h = parse_cgp(doc);
  CHECK(h == heisenberg(2));
  CHECK(serialize_cgp(h) == doc);
  CHECK(parse_cgp(serialize_cgp(h)) == h);

  auto commuting = parse_cgp("cgp 1\np 3\nnoncentral a b c\ncentral z w\ncomm a b = z^2 * w\n");
  CHECK(commuting.comm(0, 2)[0] == 0);
  CHECK(commuting.comm(1, 2)[1] == 0);
  CHECK(commuting.comm(0, 1)[0] == 2);
  CHECK(commuting.comm(1, 0)[0] == 1);
  CHECK(commuting.comm(0, 1)[1] == 1);

  auto comments = parse_cgp("# heisenberg\ncgp 1\np 2  # prime\nnoncentral x y\ncentral z\n\ncomm x y = z^3\n");
  CHECK(comments == heisenberg(2));

  auto bad = [](const std::string& text) { CHECK_THROWS_AS(parse_cgp(text), ParseError); };
  bad("cgp 1\np 2\nnoncentral x y\ncentral z\ncomm x q = z\n");
  bad("cgp 1\np 2\nnoncentral x y\ncentral z\ncomm x y = q\n");
  bad("cgp 2\np 2\nnoncentral x y\ncentral z\n");
  bad("cgp 1\np 2\nnoncentral x y\ncentral z\ncomm y x = z\n");
  bad("cgp 1\np 2\nnoncentral x y\ncentral z\ncomm x y z\n");
  bad("cgp 1\np 2\nnoncentral x y\ncentral z\nbogus\n");
  try {
    parse_cgp("cgp 1\np 2\nnoncentral x y\ncentral z\ncomm x q = z\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(parse_cgp("cgp 1\np 4\nnoncentral x y\ncentral z\n"), Error);
  CHECK_THROWS_AS(parse_cgp("cgp 1\np 2\nnoncentral x x\ncentral z\n"), Error);

  std::mt19937_64 rng(23);
  for (int i = 0; i < 30; ++i) {
    auto g = brute::random_presentation(rng, i % 2 ? 5 : 2, 1 + i % 6, i % 4);
    CHECK(parse_cgp(serialize_cgp(g)) == g);
    CHECK(serialize_cgp(parse_cgp(serialize_cgp(g))) == serialize_cgp(g));
  }
  auto dd = build_double_diamond(3, 2).presentation;
  CHECK(parse_cgp(serialize_cgp(dd)) == dd);
}

TEST_CASE("property: antitone, double complement, measure symmetry") {
  std::mt19937_64 rng(24);
  for (const auto& g : property_grid()) {
    const auto p = g.p();
    const auto d = g.v_dim();
    for (int i = 0; i < 40; ++i) {
      auto u = brute::random_subspace(rng, p, d);
      auto v = subspace_sum(u, brute::random_subspace(rng, p, d));
      auto cu = centralizer(g, u);
      auto cv = centralizer(g, v);
      CHECK(contains(cu, cv));
      auto ccu = centralizer(g, cu);
      CHECK(contains(ccu, u));
      if (ccu == u) CHECK(measure(g, u).value() == measure(g, cu).value());
      CHECK(measure(g, u).value() == 2 * g.w_dim() + u.dim() + cu.dim());
    }
  }
}

TEST_CASE("property: centralizer matches the vector-scan oracle") {
  std::mt19937_64 rng(25);
  for (const auto& g : property_grid()) {
    if (brute::ipow(g.p(), g.v_dim()) > 4096) continue;
    for (int i = 0; i < 10; ++i) {
      auto u = brute::random_subspace(rng, g.p(), g.v_dim());
      CHECK(brute::to_set(centralizer(g, u)) == brute::perp(g, brute::to_set(u)));
    }
  }
}

TEST_CASE("property: bit-packed and generic perp evaluators agree") {
  std::mt19937_64 rng(26);
  std::vector<CentralPresentation> grid = property_grid();
  grid.push_back(brute::random_presentation(rng, 2, 14, 6));  // above the table threshold
  grid.push_back(build_double_diamond(2, 3).presentation);
  for (const auto& g : grid) {
    PerpEvaluator fast(g), slow(g, false);
    CHECK_FALSE(slow.bit_packed());
    if (g.p() == 2) CHECK(fast.bit_packed());
    for (int i = 0; i < 100; ++i) {
      auto u = brute::random_subspace(rng, g.p(), g.v_dim());
      const auto want = centralizer(g, u).dim();
      CHECK(fast.perp_dim(u.basis()) == want);
      CHECK(slow.perp_dim(u.basis()) == want);
      CHECK(fast.measure_value(u.basis()) == measure(g, u).value());
    }
  }
}

}  // TEST_SUITE
