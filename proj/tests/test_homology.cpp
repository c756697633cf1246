#include <doctest.h>

#include <random>

#include "ohs/homology.hpp"
#include "ohs/snf.hpp"
#include "ohs/sset_constructions.hpp"

using namespace ohs;

namespace {

IntMatrix random_matrix(std::mt19937 &rng, std::size_t r, std::size_t c, int spread) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = static_cast<long>(rng() % (2 * spread + 1)) - spread;
  return m;
}

// Hand-written complex Z <-0- Z <-2- Z <-0- Z <-2- Z <-0- Z: the cellular
// chains of RP^5, which agree with B(Z/2) through degree 4.
ChainComplex rp_complex(int top) {
  ChainComplex c;
  c.top = top;
  c.boundary.resize(static_cast<std::size_t>(top + 1));
  c.boundary[0].rows = 0;
  c.boundary[0].cols.resize(1);
  for (int q = 1; q <= top; ++q) {
    auto &m = c.boundary[static_cast<std::size_t>(q)];
    m.rows = 1;
    m.cols.resize(1);
    if (q % 2 == 0) m.cols[0].push_back({0, Integer(2)});
  }
  return c;
}

} // namespace

TEST_CASE("Smith normal form of known matrices") {
  const IntMatrix m{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  const auto s = smith_normal_form(m);
  CHECK(verify_snf(m, s));
  const auto d = s.diagonal();
  REQUIRE(d.size() == 3);
  CHECK(d[0] == 2);
  CHECK(d[1] == 6);
  CHECK(d[2] == 12);

  const IntMatrix z(3, 2);
  CHECK(smith_normal_form(z).rank == 0);
}

TEST_CASE("Smith normal form invariants on random matrices") {
  std::mt19937 rng(20240);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    const auto m = random_matrix(rng, r, c, 5);
    const auto s = smith_normal_form(m);
    REQUIRE(verify_snf(m, s));
    // |det| is the product of the invariant factors
    if (r == c) {
      Integer prod = 1;
      const auto d = s.diagonal();
      for (std::size_t i = 0; i < r; ++i) prod *= i < d.size() ? d[i] : Integer(0);
      CHECK(abs(m.determinant()) == prod);
    }
    CHECK(smith_normal_form(m, false).diagonal() == s.diagonal());
  }
}

TEST_CASE("homology of small objects") {
  auto h = homology_through(*point(4), 3);
  CHECK(h[0].to_string() == "Z");
  for (int q = 1; q <= 3; ++q) CHECK(h[q].is_trivial());
  CHECK(homology(*sphere0(2), 0).to_string() == "Z^2");
  CHECK(homology(*standard_simplex(3, 4), 2).is_trivial());
}

TEST_CASE("nerve of Z/2 against the hand complex") {
  auto b = nerve(FiniteMonoid::cyclic(2), 5);
  const char *expect[] = {"Z", "Z/2", "0", "Z/2", "0"};
  const auto hand = rp_complex(5);
  CHECK(hand.boundary_squares_to_zero());
  const auto h = homology_through(*b, 4);
  for (int q = 0; q <= 4; ++q) {
    CHECK(h[q].to_string() == expect[q]);
    CHECK(homology(hand, q).isomorphic_to(h[q]));
  }
}

TEST_CASE("nerves of cyclic and symmetric groups") {
  for (int n = 2; n <= 5; ++n) {
    const auto h = homology_through(*nerve(FiniteMonoid::cyclic(n), 4), 3);
    CHECK(h[1].to_string() == "Z/" + std::to_string(n));
    CHECK(h[2].is_trivial());
    CHECK(h[3].to_string() == "Z/" + std::to_string(n));
  }
  // H_1(B Sigma_3) is the abelianisation Z/2, H_2 vanishes
  const auto s3 = homology_through(*nerve(FiniteMonoid::symmetric_group(3), 3), 2);
  CHECK(s3[1].to_string() == "Z/2");
  CHECK(s3[2].is_trivial());
}

TEST_CASE("Euler characteristic of the chains equals that of homology") {
  std::vector<SSetPtr> xs = {nerve(FiniteMonoid::cyclic(3), 4),
                             product(sphere0(4), standard_simplex(2, 4)).set,
                             smash(sphere0(4), nerve(FiniteMonoid::cyclic(2), 4)).set(),
                             nerve(FiniteMonoid::naturals(2), 4)};
  for (const auto &x : xs) {
    INFO(x->label());
    // N(2) has no nondegenerate simplices above 2, the others are checked
    // through degree 3 with the top cut off consistently
    const auto c = normalized_chains(*x, 4);
    CHECK(c.boundary_squares_to_zero());
  }
  auto n2 = nerve(FiniteMonoid::naturals(2), 4);
  const auto c = normalized_chains(*n2, 4);
  long chi_c = 0, chi_h = 0;
  for (int q = 0; q <= 3; ++q) chi_c += (q % 2 ? -1 : 1) * static_cast<long>(c.rank(q));
  for (const auto &g : homology_through(*n2, 3)) chi_h += (g.degree % 2 ? -1 : 1) * g.rank;
  CHECK(n2->nondegenerate(3).empty());
  CHECK(chi_c == chi_h);
}

TEST_CASE("induced maps") {
  auto b = nerve(FiniteMonoid::cyclic(2), 3);
  const auto id = SimplicialMap::identity(b);
  for (const auto &v : is_homology_iso(id, 2)) CHECK(v.iso);
  // collapsing to a point kills H_1
  auto pt = point(3);
  const auto c = SimplicialMap::from_function(b, pt, [](int, Index) { return Index{0}; });
  const auto v = is_homology_iso(c, 1);
  CHECK(v[0].iso);
  CHECK_FALSE(v[1].iso);
  CHECK(induced_map(c, 1).is_zero());
}

TEST_CASE("colimit of a constant ladder stabilizes immediately") {
  auto b = nerve(FiniteMonoid::cyclic(2), 3);
  const auto id = SimplicialMap::identity(b);
  const auto r = homology_colimit([&](int) { return id; }, 5, 2, 2);
  for (const auto &c : r) {
    CHECK(c.stabilized);
    CHECK(c.stable_from == 0);
    CHECK(c.reached_at == 2);
  }
  CHECK(r[1].group.to_string() == "Z/2");
}

TEST_CASE("too few stages for the window is reported") {
  auto x = point(2);
  const auto id = SimplicialMap::identity(x);
  CHECK_THROWS(homology_colimit([&](int) { return id; }, 1, 0, 2));
}

TEST_CASE("homology classes of explicit cycles") {
  auto b = nerve(FiniteMonoid::cyclic(2), 3);
  const auto h1 = homology(*b, 1);
  REQUIRE(h1.generator_count() == 1);
  // the 1-simplex [g] generates; twice it is a boundary
  const auto eng = HomologyEngine::of(*b, 1);
  const auto pos = eng->complex().position(1, 1);
  REQUIRE(pos.has_value());
  Chain g{{*pos, Integer(1)}};
  CHECK(h1.coordinates(g)[0] == 1);
  Chain g2{{*pos, Integer(2)}};
  CHECK(h1.coordinates(g2)[0] == 0);
}
