#include <doctest.h>

#include "ohs/error.hpp"
#include "ohs/homology.hpp"
#include "ohs/operad.hpp"
#include "ohs/stability.hpp"

using namespace ohs;

namespace {

void require_pass(const AxiomReport &r) {
  for (const auto &f : r.families) {
    INFO(f.family << ": " << f.witness.value_or(""));
    CHECK(f.pass);
  }
  CHECK(r.pass);
}

} // namespace

TEST_CASE("permutation conventions") {
  const auto &s3 = all_permutations(3);
  REQUIRE(s3.size() == 6);
  for (std::size_t i = 0; i < s3.size(); ++i) CHECK(permutation_rank(s3[i]) == static_cast<int>(i));
  const Permutation a({1, 2, 0}), b({1, 0, 2});
  CHECK((a * b)(0) == a(b(0)));
  CHECK((a * a.inverse()).is_identity());
  // block permutation of the identity is the identity
  const int sizes[3] = {2, 0, 1};
  CHECK(block_permutation(Permutation::identity(3), sizes).is_identity());
}

TEST_CASE("builtin operads satisfy the axioms") {
  require_pass(check_operad_axioms(*as_operad(4, 1), 4, 1));
  require_pass(check_operad_axioms(*com_operad(5, 1), 5, 1));
  require_pass(check_operad_axioms(*abelian_monoid_operad(FiniteMonoid::cyclic(2), 3, 1), 3, 1));
  require_pass(check_operad_axioms(*monoid_operad(FiniteMonoid::symmetric_group(3), 3, 1), 3, 1));
  require_pass(check_operad_axioms(*barratt_eccles(3, 2), 3, 2));
}

TEST_CASE("products of operads") {
  auto as = as_operad(3, 1), com = com_operad(3, 1);
  auto p = product(as, com);
  require_pass(check_operad_axioms(*p, 3, 1));
  for (int n = 0; n <= 3; ++n) CHECK(p->size(n, 0) == as->size(n, 0));
  auto pa = product_projection(p, as, 0);
  auto pc = product_projection(p, com, 1);
  CHECK(pa.verify(3, 1).pass);
  CHECK(pc.verify(3, 1).pass);

  // As x_As P is P for P augmented over As
  auto ab = product(as, barratt_eccles(3, 1));
  auto po = product_over_as(as, ab);
  require_pass(check_operad_axioms(*po, 3, 1));
  for (int n = 0; n <= 3; ++n) CHECK(po->size(n, 0) == ab->size(n, 0));
  CHECK_THROWS_AS(product_over_as(as, barratt_eccles(3, 1)), Error);
}

TEST_CASE("corrupted As fails with a witness") {
  const auto r = check_operad_axioms(*corrupted_as(3), 3, 1);
  CHECK_FALSE(r.pass);
  REQUIRE(r.witness.has_value());
  CHECK_FALSE(r.witness->empty());
}

TEST_CASE("Barratt-Eccles levels have the homology of a point") {
  auto be = barratt_eccles(3, 4);
  for (int n = 0; n <= 3; ++n) {
    const auto h = homology_through(*be->level(n), 3);
    CHECK(h[0].to_string() == "Z");
    for (int q = 1; q <= 3; ++q) CHECK(h[q].is_trivial());
  }
}

TEST_CASE("abelian monoid operads need commutative tables") {
  FiniteMonoid s3 = FiniteMonoid::symmetric_group(3);
  CHECK_THROWS_AS(abelian_monoid_operad(s3, 3, 1), LawViolation);
}

TEST_CASE("D collapses every input") {
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 3, 1, {1});
  for (int n = 1; n <= 3; ++n)
    for (int g = 0; g < 2; ++g) {
      const auto d = D_map(*a, n, {g});
      CHECK(d.is_isomorphism());
    }
  auto as = trivially_graded(as_operad(3, 1));
  CHECK(D_map(*as, 2, {}).source().size(0) == 2);
  CHECK_FALSE(is_homology_iso(D_map(*as, 2, {}), 0)[0].iso);
}

TEST_CASE("gradings") {
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 3, 1, {1});
  CHECK(audit_grading(*a, 3).pass);
  CHECK(a->grading.to_string(a->grading.generator_sum()) == "1");
  auto c = trivially_graded(com_operad(3, 1));
  auto p = graded_product(a, c);
  CHECK(audit_grading(*p, 3).pass);
  CHECK(p->piece(2, p->grading.zero()).set->size(0) == 1);
}

TEST_CASE("htpycom") {
  auto as = as_operad(3, 1);
  // the map must land in the graded operad itself
  CHECK_THROWS(check_htpycom(canonical_mu(as, com_operad(3, 1)), *trivially_graded(com_operad(3, 1))));
  auto com = com_operad(3, 1);
  CHECK(check_htpycom(canonical_mu(as, com), *trivially_graded(com)).pass);
  auto be = barratt_eccles(3, 1);
  CHECK(check_htpycom(canonical_mu(as, be), *trivially_graded(be)).pass);
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 3, 1, {1});
  CHECK(check_htpycom(canonical_mu(as, a->operad), *a).pass);
  CHECK_FALSE(check_htpycom(identity_map(as), *trivially_graded(as)).pass);
}

TEST_CASE("operad maps") {
  auto as = as_operad(3, 2);
  for (const auto &o : {com_operad(3, 2), barratt_eccles(3, 2)}) {
    const auto mu = canonical_mu(as, o);
    const auto r = mu.verify(3, 2);
    INFO(o->name() << ": " << r.witness.value_or(""));
    CHECK(r.pass);
  }
  CHECK(identity_map(as).verify(3, 1).pass);
}

TEST_CASE("propagator") {
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 3, 1, {1});
  auto as = as_operad(3, 1);
  const auto mu = canonical_mu(as, a->operad);
  const auto p = make_propagator(*a, mu);
  CHECK(a->grade_of(1, 0, p.s_tilde) == p.s);
  // the identity of Z/2 has grade 0, not s = 1
  CHECK_THROWS_AS(make_propagator(*a, mu, Index{0}), Error);
  CHECK_THROWS_AS(make_propagator(*trivially_graded(as), identity_map(as)), LawViolation);
}

TEST_CASE("sampled checks disclose themselves") {
  CheckBudget tiny{10, 50, 3};
  const auto r = check_operad_axioms(*as_operad(3, 1), 3, 1, tiny);
  CHECK(r.sampled);
  CHECK(r.pass);
  bool noted = false;
  for (const auto &f : r.families) noted = noted || f.note.find("sampled") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("arity budget") {
  CHECK_THROWS_AS(as_operad(9, 1), Error);
  auto as = as_operad(2, 1);
  const int js[2] = {2, 1};
  const Index ds[2] = {0, 0};
  CHECK_THROWS_AS(as->gamma(0, 0, js, ds), BudgetExceeded);
}
