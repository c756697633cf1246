#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ohs/homology.hpp"
#include "ohs/operad.hpp"
#include "ohs/sset.hpp"
#include "ohs/sset_constructions.hpp"

namespace ohs {

// An O-algebra: a based simplicial set with theta(q, n, c, x_1..x_n).
struct OAlgebra {
  OperadPtr operad;
  SSetPtr carrier;
  int n_max = 0; // theta is available in arities <= n_max
  std::function<Index(int q, int n, Index c, std::span<const Index> xs)> theta;

  // Associativity, unit and equivariance of theta, plus theta(*) = *.
  AxiomReport verify(int q_max, const CheckBudget &budget = {}) const;
};

// The trivial algebra on a point.
OAlgebra point_algebra(const OperadPtr &o, int dim_bound);

struct FreeAlgebraBounds {
  int n_max = 3;  // arity cut-off
  int w_max = -1; // weight cut-off; -1 for none
  int q_max = 1;  // simplicial dimension bound
};

// O(X) = (coprod_n O(n) x_{Sigma_n} X^n)/~, truncated by arity and weight.
// A q-simplex is named by its normal form [m, c, x_1, ..., x_m]: no x_i is
// the basepoint and (c, x) is the least pair in its Sigma_m-orbit.
class FreeAlgebra {
public:
  FreeAlgebra(OperadPtr o, SSetPtr x, FreeAlgebraBounds b);

  const OperadPtr &operad() const { return o_; }
  const SSetPtr &base() const { return x_; }
  const SSetPtr &set() const { return keyed_.set; }
  const FreeAlgebraBounds &bounds() const { return b_; }
  const Key &key(int q, Index s) const { return keyed_.keys[static_cast<std::size_t>(q)][s]; }
  int arity(int q, Index s) const { return static_cast<int>(key(q, s)[0]); }

  // True when the truncation loses nothing in weights <= w_max.
  bool exact() const { return exact_; }
  const std::string &exactness_note() const { return note_; }

  // Normal form of (c; xs) with c in level m; basepoints are absorbed.
  Key normalize(int q, int m, Index c, std::vector<Index> xs) const;
  // The simplex of (c; xs), or nothing if it lies outside the truncation.
  std::optional<Index> find(int q, int m, Index c, std::vector<Index> xs) const;
  // As find, but throws TruncationError instead of returning nothing.
  Index at(int q, int m, Index c, std::vector<Index> xs) const;

  // eta : X -> O(X), x |-> (1; x).
  SimplicialMap unit() const;
  // F_n, the simplices of arity <= n.
  SubSet filtration(int n) const;
  std::vector<std::size_t> counts() const;

private:
  OperadPtr o_;
  SSetPtr x_;
  FreeAlgebraBounds b_;
  KeyedSet keyed_;
  bool exact_ = false;
  std::string note_;
};

using FreeAlgebraPtr = std::shared_ptr<const FreeAlgebra>;

FreeAlgebraPtr free_algebra(const OperadPtr &o, const SSetPtr &x, FreeAlgebraBounds b);
// O(X) as an O-algebra, theta given by flattening with gamma.
OAlgebra free_oalgebra(const FreeAlgebraPtr &fa);

// P(f) : P(A) -> P(B) for a based map f : A -> B.
SimplicialMap apply_functor(const FreeAlgebra &src, const FreeAlgebra &dst, const SimplicialMap &f);
// P(O(A)) -> P(A): push the O-layer through delta : O -> P, then compose in P.
// With delta the identity this is the monad multiplication.
SimplicialMap flatten(const FreeAlgebra &outer, const FreeAlgebra &inner, const FreeAlgebra &target,
                      const OperadMap &delta);
// O(X) -> X from an algebra structure.
SimplicialMap structure_map(const FreeAlgebra &ox, const OAlgebra &x);

struct MonadCheck {
  FreeAlgebraPtr ox, oox, ooox;
  SimplicialMap eta, mu;
  bool unit_left = false, unit_right = false, associative = false;
  std::optional<std::string> witness;
  bool pass() const { return unit_left && unit_right && associative; }
};

// Builds O(X), O(O(X)), O(O(O(X))) and checks the monad laws cellwise.
MonadCheck monad_structure(const OperadPtr &o, const SSetPtr &x, FreeAlgebraBounds b);

// ---------------------------------------------------------------------------
// Bar construction B(P, O, X) with row p = P(O^p X).

struct BarBounds {
  int p_max = 3;
  FreeAlgebraBounds free;
};

struct BarObject {
  BisimplicialSet bisimplicial;
  std::vector<FreeAlgebraPtr> tower;                // O^j X for j = 1..p_max (index j - 1)
  std::vector<FreeAlgebraPtr> rows;                // P(O^p X)
  SSetPtr diagonal;
  bool exact = true;
  std::string provenance;
};

BarObject bar(const OperadMap &delta, const OAlgebra &x, BarBounds b);

// ---------------------------------------------------------------------------
// Rectification M = B(As, A, X).

struct Rectification {
  BarObject bar;
  SimplicialMap rho; // X -> diagonal
  // Levelwise product on the diagonal (q, a, b) -> ab, and its unit.
  std::function<std::optional<Index>(int q, Index a, Index b)> multiply;
  Index unit_vertex = 0;
  bool strictly_associative = false;
  std::uint64_t associativity_cases = 0;
  std::optional<std::string> witness;
};

Rectification rectify(const OperadPtr &as, const OAlgebra &x, BarBounds b);

struct Pi0Monoid {
  int components = 0;
  std::vector<int> weight_of;                // per component
  std::vector<std::vector<int>> table;       // -1 where the product leaves the truncation
  int unit = 0;
  // Matches N truncated at the weight bound: one component per weight,
  // weights add.
  bool is_truncated_naturals = false;
};

Pi0Monoid pi0_monoid(const Rectification &r);

// ---------------------------------------------------------------------------

// Nerve of a discrete monoid.
SSetPtr classifying_space(const FiniteMonoid &m, int dim_bound);

// A simplicial monoid given by its product.
struct SimplicialMonoid {
  SSetPtr set;
  std::function<Index(int q, Index a, Index b)> multiply;
  Index unit = 0; // vertex
};

// Diagonal of the bisimplicial nerve; throws LawViolation if the product is
// not associative or unital within bounds.
SSetPtr classifying_space(const SimplicialMonoid &m, int dim_bound);

// F_n/F_{n-1} from the filtration and level(n) |x_{Sigma_n} X^{^n} built
// directly, with an isomorphism check between them.
struct Subquotient {
  SSetPtr from_filtration;
  SSetPtr direct;
  bool isomorphic = false;
  std::string detail;
};

Subquotient filtration_subquotient(const FreeAlgebra &fa, int n);

} // namespace ohs
