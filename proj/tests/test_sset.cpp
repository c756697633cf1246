#include <doctest.h>

#include <random>

#include "ohs/error.hpp"
#include "ohs/homology.hpp"
#include "ohs/sset_constructions.hpp"

using namespace ohs;

namespace {

// binomial(n, k)
Index choose(int n, int k) {
  Index r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<Index>(n - k + i) / static_cast<Index>(i);
  return r;
}

std::vector<SSetPtr> zoo() {
  return {point(3),
          sphere0(3),
          standard_simplex(2, 3),
          discrete(4, 2, Index{1}),
          nerve(FiniteMonoid::cyclic(3), 3),
          nerve(FiniteMonoid::symmetric_group(3), 2),
          nerve(FiniteMonoid::naturals(3), 3),
          nerve(FiniteGroupoid::translation(FiniteMonoid::cyclic(2)), 3),
          product(standard_simplex(1, 3), standard_simplex(1, 3)).set,
          smash(sphere0(2), nerve(FiniteMonoid::cyclic(2), 2)).set(),
          diagonal(BisimplicialSet::external_product(standard_simplex(1, 2), sphere0(2)), 2)};
}

} // namespace

TEST_CASE("standard simplex counts monotone maps") {
  for (int n = 0; n <= 3; ++n) {
    auto d = standard_simplex(n, 3);
    for (int q = 0; q <= 3; ++q) CHECK(d->size(q) == choose(n + q + 1, q + 1));
    CHECK(d->nondegenerate(n).size() == 1);
    if (n < 3) CHECK(d->nondegenerate(n + 1).empty());
  }
}

TEST_CASE("every construction satisfies the simplicial identities") {
  for (const auto &x : zoo()) {
    INFO(x->label());
    CHECK_FALSE(check_simplicial_identities(*x).has_value());
  }
}

TEST_CASE("Eilenberg-Zilber decomposition round-trips") {
  for (const auto &x : zoo())
    for (int q = 0; q <= x->dim_bound(); ++q)
      for (Index s = 0; s < x->size(q); ++s) {
        const auto &dec = x->decomposition(q, s);
        REQUIRE(x->from_decomposition(q, dec) == s);
        CHECK(x->is_degenerate(dec.base_dim(q), dec.base) == false);
      }
}

TEST_CASE("nerve of a group of order n has n^q simplices in level q") {
  for (int n = 1; n <= 4; ++n) {
    auto b = nerve(FiniteMonoid::cyclic(n), 3);
    Index expect = 1;
    for (int q = 0; q <= 3; ++q, expect *= static_cast<Index>(n)) CHECK(b->size(q) == expect);
  }
}

TEST_CASE("product levels multiply and projections are simplicial") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int a = static_cast<int>(rng() % 3), b = static_cast<int>(rng() % 3) + 1;
    auto x = standard_simplex(a, 2), y = nerve(FiniteMonoid::cyclic(b), 2);
    auto p = product(x, y);
    for (int q = 0; q <= 2; ++q) {
      CHECK(p.set->size(q) == x->size(q) * y->size(q));
      for (Index s = 0; s < p.set->size(q); ++s) {
        const auto parts = p.decode(q, s);
        CHECK(p.encode(q, parts) == s);
      }
    }
    CHECK_FALSE(p.projection(0).verify().has_value());
    CHECK_FALSE(p.projection(1).verify().has_value());
  }
}

TEST_CASE("components") {
  CHECK(pi0(*discrete(5, 1)).count() == 5);
  CHECK(pi0(*standard_simplex(2, 1)).count() == 1);
  CHECK(pi0(*product(sphere0(1), discrete(3, 1)).set).count() == 6);
  CHECK(pi0(*nerve(FiniteMonoid::cyclic(3), 1)).count() == 1);
}

TEST_CASE("collapsing the boundary of the 1-simplex gives a circle") {
  auto d1 = standard_simplex(1, 3);
  auto q = collapse(d1, [&](int k, Index c) { return d1->decomposition(k, c).base_dim(k) == 0; });
  auto h = homology_through(*q.set, 2);
  CHECK(h[0].to_string() == "Z");
  CHECK(h[1].to_string() == "Z");
  CHECK(h[2].to_string() == "0");
}

TEST_CASE("smash with S0 is the identity up to isomorphism") {
  auto x = nerve(FiniteMonoid::cyclic(2), 3);
  auto s = smash(sphere0(3), x);
  for (int q = 0; q <= 3; ++q) CHECK(s.set()->size(q) == x->size(q));
}

TEST_CASE("orbit quotient of a free action") {
  // Z/2 swapping the two points of S0 x S0 diagonally
  auto p = product(sphere0(2), sphere0(2));
  auto q = orbit_quotient(p.set, 2, [&](int k, Index c, int g) {
    if (g == 0) return c;
    auto parts = p.decode(k, c);
    const Index flipped[2] = {1 - parts[0], 1 - parts[1]};
    return p.encode(k, flipped);
  });
  CHECK(q.set->size(0) == 2);
  CHECK_FALSE(q.projection.verify().has_value());
}

TEST_CASE("quotient saturates under faces") {
  auto d2 = standard_simplex(2, 2);
  // identify the edges [0,1] and [1,2]; the vertices follow
  const Index top = d2->nondegenerate(2)[0];
  const Index e01 = d2->face(2, 2, top), e12 = d2->face(2, 0, top);
  auto q = quotient(d2, {{Cell{1, e01}, Cell{1, e12}}});
  CHECK(q.set->size(0) == 1);
  CHECK_FALSE(q.projection.verify().has_value());
}

TEST_CASE("monoid tables are validated") {
  FiniteMonoid bad;
  bad.table = {{0, 1}, {1, 1}};
  CHECK_NOTHROW(bad.validate());
  bad.table = {{0, 1, 2}, {1, 2, 0}, {2, 2, 2}};
  CHECK_THROWS_AS(bad.validate(), LawViolation);
  FiniteMonoid nonassoc;
  nonassoc.table = {{0, 1, 2}, {1, 0, 0}, {2, 1, 0}};
  try {
    nonassoc.validate();
    FAIL("expected a law violation");
  } catch (const LawViolation &e) {
    CHECK(std::string(e.what()).find("witness triple") != std::string::npos);
  }
}

TEST_CASE("diagonal of an external product is the product") {
  auto x = standard_simplex(1, 2), y = nerve(FiniteMonoid::cyclic(2), 2);
  auto d = diagonal(BisimplicialSet::external_product(x, y), 2);
  auto p = product(x, y);
  for (int q = 0; q <= 2; ++q) CHECK(d->size(q) == p.set->size(q));
  auto hd = homology_through(*d, 1), hp = homology_through(*p.set, 1);
  for (int q = 0; q <= 1; ++q) CHECK(hd[q].isomorphic_to(hp[q]));
}

TEST_CASE("weights do not increase under faces") {
  auto x = std::make_shared<SimplicialSet>(*standard_simplex(1, 2));
  CHECK_THROWS(x->set_weights([](int q, Index) { return q; }));
  CHECK_NOTHROW(x->set_weights([](int, Index) { return 2; }));
  CHECK(x->weight(1, 0) == 2);
}

TEST_CASE("levels beyond the truncation are rejected") {
  auto x = point(2);
  CHECK_THROWS_AS(x->require_dim(3, "test"), TruncationError);
  CHECK_THROWS_AS(homology(*x, 2), TruncationError);
}
