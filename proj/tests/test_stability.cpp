#include <doctest.h>

#include "ohs/error.hpp"
#include "ohs/stability.hpp"

using namespace ohs;

TEST_CASE("OHS verdicts") {
  auto as = as_operad(4, 2);
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 4, 2, {1});
  auto com = trivially_graded(com_operad(4, 2));

  const auto ra = check_ohs(*a, canonical_mu(as, a->operad), {});
  CHECK(ra.is_ohs);
  CHECK(ra.arities.size() == 3);

  const auto rc = check_ohs(*com, canonical_mu(as, com->operad), {});
  CHECK(rc.is_ohs);

  auto p = graded_product(a, com);
  const auto rp = check_ohs(*p, canonical_mu(as, p->operad), {});
  CHECK(rp.is_ohs);

  auto ga = trivially_graded(as);
  const auto rs = check_ohs(*ga, identity_map(as), {});
  CHECK_FALSE(rs.is_ohs);
  CHECK_FALSE(rs.inconclusive);
  REQUIRE(rs.witness.has_value());
  CHECK(rs.witness->find("arity 2, H_0") != std::string::npos);
  CHECK(rs.arities[0].status == "iso");
  CHECK(rs.arities[1].status == "not-iso");
  REQUIRE_FALSE(rs.arities[1].degrees.empty());
  CHECK(rs.arities[1].degrees[0].source == "Z^2");
  CHECK(rs.arities[1].degrees[0].target == "Z");
}

TEST_CASE("every ladder square commutes") {
  auto as = as_operad(3, 2);
  auto a = self_graded_abelian(FiniteMonoid::cyclic(3), 3, 2, {1});
  const auto prop = make_propagator(*a, canonical_mu(as, a->operad));
  for (int n = 1; n <= 3; ++n) {
    LadderBuilder b(*a, prop, n);
    for (int t = 0; t < 5; ++t) CHECK_FALSE(b.check_square(t).has_value());
    const auto snap = b.snapshot();
    CHECK(snap.arity == n);
    CHECK(snap.maps.size() == 5);
  }
}

TEST_CASE("a short ladder is inconclusive, not a failure") {
  auto as = as_operad(3, 2);
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 3, 2, {1});
  OHSParams p;
  p.G = 1;
  const auto r = check_ohs(*a, canonical_mu(as, a->operad), p);
  CHECK_FALSE(r.is_ohs);
  CHECK(r.inconclusive);
  CHECK(r.arities[0].status == "not-stabilized");
}

TEST_CASE("group completion of the symmetric groups") {
  const auto r = group_completion_homology(symmetric_group_telescope(6, 2), 5, 1, 2);
  CHECK(r.stabilized);
  CHECK(r.degrees[0].group.to_string() == "Z");
  CHECK(r.degrees[1].group.to_string() == "Z/2");
  CHECK(r.degrees[1].reached_at <= 4);
}

TEST_CASE("group completion of a group is the group") {
  // grouplike: the telescope is constant
  const auto r = group_completion_homology(FiniteMonoid::cyclic(3), {1}, 4, 1, 2);
  CHECK(r.stabilized);
  CHECK(r.degrees[0].group.to_string() == "Z");
  REQUIRE(r.pi0.has_value());
  CHECK(r.pi0->match);
  CHECK(r.pi0->grothendieck_size == 3);
}

TEST_CASE("Grothendieck groups") {
  // {0, 1} under max: K is trivial, and the colimit of shifts is one point
  FiniteMonoid m;
  m.table = {{0, 1}, {1, 1}};
  const auto k = grothendieck_check(m, {1});
  CHECK(k.commutative);
  CHECK(k.colimit_size == 1);
  CHECK(k.grothendieck_size == 1);
  CHECK(k.match);
  const auto z4 = grothendieck_check(FiniteMonoid::cyclic(4), {1});
  CHECK(z4.grothendieck_size == 4);
  CHECK(z4.match);
}

TEST_CASE("discrete N: the identity component is a point") {
  const auto r = group_completion_homology(FiniteMonoid::naturals(6), {1}, 5, 1, 2);
  CHECK(r.stabilized);
  CHECK(r.degrees[0].group.to_string() == "Z");
  CHECK(r.degrees[1].group.is_trivial());
}

TEST_CASE("group completion through the rectification") {
  auto as = as_operad(3, 2);
  auto fa = free_algebra(as, sphere0(2), {3, 3, 2});
  const auto rect = rectify(as, free_oalgebra(fa), {2, {3, 3, 2}});
  // the generator: image of the non-base point of S0
  const Index g = rect.rho(0, 1);
  const auto r = group_completion_homology(rectified_telescope(rect, g), 3, 0, 2);
  CHECK(r.degrees[0].group.to_string() == "Z");
}

TEST_CASE("sigma sets") {
  auto f = free_orbit(3, 1);
  CHECK(f.set->size(0) == 6);
  // a left action: (st) . y = s . (t . y)
  const auto &p = all_permutations(3);
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t)
      for (Index y = 0; y < 6; ++y)
        CHECK(f.act(0, y, permutation_rank(p[s] * p[t])) == f.act(0, f.act(0, y, t), s));
  auto sm = smash_power(sphere0(1), 3);
  CHECK(sm.set->size(0) == 2);
  auto sm2 = smash_power(discrete(3, 1, Index{0}), 2);
  CHECK(sm2.set->size(0) == 5);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      for (Index y = 0; y < 5; ++y)
        CHECK(sm2.act(0, y, permutation_rank(all_permutations(2)[s] * all_permutations(2)[t])) ==
              sm2.act(0, sm2.act(0, y, t), s));
  CHECK_THROWS(smash_power(discrete(2, 1), 2));
}

TEST_CASE("splitting for the abelian monoid operad of Z/2") {
  const int D = 3;
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 3, D, {1});
  auto be = barratt_eccles(3, D);
  auto g = graded_product(a, trivially_graded(be));
  const auto r = splitting_check(
      *g, canonical_mu(as_operad(3, D), g->operad), product_projection(g->operad, be, 1),
      [&](int n) {
        return std::vector<SigmaSet>{trivial_sigma(n, point(D)), free_orbit(n, D), smash_power(sphere0(D), n)};
      },
      {});
  INFO(r.witness.value_or(""));
  CHECK(r.pass);
  CHECK(r.cases.size() == 15);
  for (const auto &c : r.cases) CHECK(c.status == "iso");
}

TEST_CASE("splitting needs an operad map") {
  const int D = 2;
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 2, D, {1});
  auto be = barratt_eccles(2, D);
  auto g = graded_product(a, trivially_graded(be));
  // constant in arity 2, so not equivariant
  OperadMap bad{"bad", g->operad, be, [be](int q, int n, Index) { return be->level(n)->degenerate_to(0, n == 2 ? 1 : 0, q); }};
  CHECK_THROWS_AS(splitting_check(*g, canonical_mu(as_operad(2, D), g->operad), bad,
                                  [&](int n) { return std::vector<SigmaSet>{free_orbit(n, D)}; }, {2, 1, 3, 2}),
                  LawViolation);
}
