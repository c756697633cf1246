#include <doctest.h>

#include "ohs/algebra.hpp"
#include "ohs/error.hpp"

using namespace ohs;

namespace {

std::string groups(const SimplicialSet &x, int q_max) {
  std::string s;
  for (const auto &g : homology_through(x, q_max)) s += g.to_string() + " ";
  return s;
}

} // namespace

TEST_CASE("free algebras on S0") {
  auto s0 = sphere0(2);
  // Com(S0) is the free commutative monoid on one generator: one point per weight
  auto c = free_algebra(com_operad(4, 2), s0, {4, 4, 2});
  CHECK(c->exact());
  CHECK(pi0(*c->set()).count() == 5);
  CHECK(c->set()->size(0) == 5);
  // As(S0): the generator in weight k comes with Sigma_k / Sigma_k, so still
  // one component per weight
  auto a = free_algebra(as_operad(4, 2), s0, {4, 4, 2});
  CHECK(pi0(*a->set()).count() == 5);
  // the monoid operad of Z/2 has arity <= 1
  auto m = free_algebra(monoid_operad(FiniteMonoid::cyclic(2), 3, 2), s0, {3, 3, 2});
  CHECK(m->exact());
  CHECK(m->set()->size(0) == 3);
}

TEST_CASE("normal forms absorb basepoints and sort orbits") {
  auto com = com_operad(3, 1);
  auto x = discrete(3, 1, Index{0});
  auto fa = free_algebra(com, x, {3, -1, 1});
  const auto k1 = fa->normalize(0, 2, 0, {1, 2});
  const auto k2 = fa->normalize(0, 2, 0, {2, 1});
  CHECK(k1 == k2);
  const auto with_base = fa->normalize(0, 3, 0, {1, 0, 2});
  CHECK(with_base == k1);
  CHECK(fa->normalize(0, 2, 0, {0, 0}) == fa->normalize(0, 0, 0, {}));
}

TEST_CASE("truncation is disclosed") {
  auto com = com_operad(2, 1);
  auto fa = free_algebra(com, discrete(3, 1, Index{0}), {2, -1, 1});
  CHECK_FALSE(fa->exact());
  CHECK_FALSE(fa->exactness_note().empty());
  CHECK_FALSE(fa->find(0, 3, 0, {1, 1, 2}).has_value());
  CHECK_THROWS_AS(fa->at(0, 3, 0, {1, 1, 2}), TruncationError);
}

TEST_CASE("monad laws") {
  for (const auto &o : {com_operad(3, 1), as_operad(3, 1)}) {
    const auto mc = monad_structure(o, sphere0(1), {3, 3, 1});
    INFO(o->name() << ": " << mc.witness.value_or(""));
    CHECK(mc.pass());
  }
}

TEST_CASE("free algebras are algebras") {
  auto a = free_algebra(as_operad(3, 1), sphere0(1), {3, 3, 1});
  const auto r = free_oalgebra(a).verify(1);
  INFO(r.witness.value_or(""));
  CHECK(r.pass);
  CHECK(point_algebra(com_operad(3, 1), 1).verify(1).pass);
}

TEST_CASE("the filtration subquotients") {
  auto s0 = sphere0(2);
  auto a = free_algebra(as_operad(3, 2), s0, {3, 3, 2});
  auto c = free_algebra(com_operad(3, 2), s0, {3, 3, 2});
  for (int n = 0; n <= 3; ++n) {
    const auto sa = filtration_subquotient(*a, n);
    const auto sc = filtration_subquotient(*c, n);
    INFO("n = " << n << " " << sa.detail << " / " << sc.detail);
    CHECK(sa.isomorphic);
    CHECK(sc.isomorphic);
  }
}

TEST_CASE("bar construction retracts onto the algebra") {
  auto s0 = sphere0(3);
  FreeAlgebraBounds fb{3, 3, 3};
  for (const auto &o : {monoid_operad(FiniteMonoid::cyclic(2), 4, 3), com_operad(4, 3)}) {
    const auto pt = point_algebra(o, 3);
    const auto fx = free_oalgebra(free_algebra(o, s0, fb));
    for (const OAlgebra *x : {&pt, &fx}) {
      const auto b = bar(identity_map(o), *x, {3, fb});
      INFO(o->name());
      CHECK(b.exact);
      CHECK(groups(*b.diagonal, 2) == groups(*x->carrier, 2));
    }
  }
}

TEST_CASE("rectification of the free As-algebra on S0") {
  auto as = as_operad(3, 2);
  auto fa = free_algebra(as, sphere0(2), {3, 3, 2});
  const auto r = rectify(as, free_oalgebra(fa), {2, {3, 3, 2}});
  CHECK(r.strictly_associative);
  const auto pm = pi0_monoid(r);
  CHECK(pm.components == 4);
  CHECK(pm.is_truncated_naturals);
  CHECK(pm.weight_of[static_cast<std::size_t>(pm.unit)] == 0);
  CHECK_FALSE(r.rho.verify().has_value());
}

TEST_CASE("rectification needs an augmentation") {
  auto com = com_operad(3, 1);
  CHECK_THROWS_AS(rectify(as_operad(3, 1), point_algebra(com, 1), {1, {3, -1, 1}}), Error);
}

TEST_CASE("classifying spaces of simplicial monoids") {
  auto z2 = FiniteMonoid::cyclic(2);
  const auto direct = classifying_space(z2, 3);
  SimplicialMonoid m{discrete(2, 3, Index{0}), [](int, Index a, Index b) { return a ^ b; }, 0};
  const auto via = classifying_space(m, 3);
  CHECK(groups(*direct, 2) == groups(*via, 2));
  SimplicialMonoid bad{discrete(3, 2, Index{0}), [](int, Index a, Index b) { return (a + 2 * b) % 3; }, 0};
  CHECK_THROWS_AS(classifying_space(bad, 2), LawViolation);
}
