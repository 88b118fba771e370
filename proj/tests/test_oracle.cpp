#include "doctest.h"

#include "brute.hpp"
#include "cdlat/constructions.hpp"
#include "cdlat/oracle.hpp"

using namespace cdlat;

namespace {

GroupElement elem(std::vector<Residue> v, std::vector<Residue> w) { return {std::move(v), std::move(w)}; }

// d = 4, e = 3 at p = 2: a1, a2, b1, b2 with [a1,b2], [a2,b1], [b1,b2] nontrivial.
CentralPresentation small_double_diamond() {
  PresentationData d;
  d.p = 2;
  d.v_labels = {"a1", "a2", "b1", "b2"};
  d.w_labels = {"z_a1b2", "z_a2b1", "z_b1b2"};
  d.reset_table();
  d.set_comm(0, 3, 0, 1);
  d.set_comm(1, 2, 1, 1);
  d.set_comm(2, 3, 2, 1);
  return CentralPresentation(std::move(d));
}

std::vector<CentralPresentation> oracle_grid() {
  std::vector<CentralPresentation> out{heisenberg(2), heisenberg(3), heisenberg(5), small_double_diamond(),
                                       direct_product(heisenberg(2), heisenberg(2)),
                                       extend_diamond(trivial_construction(2), 1, 2).presentation,
                                       abelian(3, 3)};
  std::mt19937_64 rng(51);
  for (int i = 0; i < 4; ++i) out.push_back(brute::random_presentation(rng, 2, 5, 3));
  for (int i = 0; i < 2; ++i) out.push_back(brute::random_presentation(rng, 3, 4, 2));
  return out;
}

GroupElement random_element(std::mt19937_64& rng, const CentralPresentation& g) {
  GroupElement x = identity(g);
  for (auto& c : x.v) c = static_cast<Residue>(rng() % g.p());
  for (auto& c : x.w) c = static_cast<Residue>(rng() % g.p());
  return x;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("Heisenberg arithmetic") {
  auto h = heisenberg(2);
  auto x = elem({1, 0}, {0}), y = elem({0, 1}, {0}), z = elem({0, 0}, {1});
  CHECK(multiply(h, x, identity(h)) == x);
  CHECK(multiply(h, identity(h), y) == y);
  CHECK(commutator(h, x, y) == z);
  auto xy = multiply(h, x, y);
  CHECK(power(h, xy, 2) == z);
  CHECK(power(h, xy, 4) == identity(h));
  CHECK(power(h, x, 2) == identity(h));
  CHECK(multiply(h, xy, inverse(h, xy)) == identity(h));
  CHECK(multiply(h, inverse(h, xy), xy) == identity(h));
  // elements of order 4 lie over x + y
  std::size_t order4 = 0;
  for (const auto& g : all_elements(h))
    if (power(h, g, 2) != identity(h)) ++order4;
  CHECK(order4 == 2);
  CHECK(all_elements(h).size() == 8);
  CHECK(group_order(h) == 8);
}

TEST_CASE("commutators follow the form") {
  for (const auto& g : oracle_grid()) {
    std::mt19937_64 rng(52);
    for (int i = 0; i < 100; ++i) {
      auto a = random_element(rng, g), b = random_element(rng, g), c = random_element(rng, g);
      auto ab = commutator(g, a, b);
      CHECK(ab.v == std::vector<Residue>(g.v_dim(), 0));
      CHECK(ab.w == g.form(a.v, b.v));
      // [a, bc] = [a, b][a, c]
      CHECK(commutator(g, a, multiply(g, b, c)) == multiply(g, ab, commutator(g, a, c)));
    }
  }
}

TEST_CASE("property: associativity, inverses, exponent") {
  for (const auto& g : oracle_grid()) {
    std::mt19937_64 rng(53);
    const int triples = g.p() == 2 && g.v_dim() <= 4 ? 10'000 : 2'000;
    for (int i = 0; i < triples; ++i) {
      auto a = random_element(rng, g), b = random_element(rng, g), c = random_element(rng, g);
      REQUIRE(multiply(g, multiply(g, a, b), c) == multiply(g, a, multiply(g, b, c)));
    }
    for (int i = 0; i < 200; ++i) {
      auto a = random_element(rng, g);
      CHECK(multiply(g, a, inverse(g, a)) == identity(g));
      CHECK(power(g, a, std::uint64_t{g.p()} * g.p()) == identity(g));
    }
  }
}

TEST_CASE("element centralizer examples") {
  auto h = heisenberg(2);
  auto whole = element_centralizer(h, {});
  CHECK(whole.order == 8);
  CHECK(whole.projection == Subspace::full(2, 2));
  auto cx = element_centralizer(h, {elem({1, 0}, {0})});
  CHECK(cx.order == 4);
  CHECK(cx.projection == Subspace::span(2, 2, {{1, 0}}));

  auto g = small_double_diamond();
  std::mt19937_64 rng(54);
  for (int i = 0; i < 16; ++i) {
    auto u = brute::random_subspace(rng, 2, 4);
    CHECK(element_centralizer(g, preimage_generators(g, u)).projection == centralizer(g, u));
  }
}

TEST_CASE("property: element scan agrees with the subspace centralizer") {
  std::size_t checked = 0;
  for (const auto& g : oracle_grid()) {
    REQUIRE(group_order(g) <= kOracleElementBudget);
    std::mt19937_64 rng(55);
    for (int i = 0; i < 200; ++i) {
      auto u = brute::random_subspace(rng, g.p(), g.v_dim());
      auto ec = element_centralizer(g, preimage_generators(g, u));
      auto cu = centralizer(g, u);
      CHECK(ec.projection == cu);
      CHECK(ec.order == brute::ipow(g.p(), g.w_dim() + cu.dim()));
      ++checked;
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("budget") {
  auto dd = build_double_diamond(2, 2).presentation;
  CHECK_THROWS_AS(group_order(dd), BudgetExceeded);
  CHECK_THROWS_AS(all_elements(dd), BudgetExceeded);
  CHECK_THROWS_AS(multiply(heisenberg(2), elem({1}, {0}), elem({1, 0}, {0})), DomainError);
}

}  // TEST_SUITE
