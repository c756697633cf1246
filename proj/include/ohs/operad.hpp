#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ohs/permutation.hpp"
#include "ohs/sset.hpp"
#include "ohs/sset_constructions.hpp"

namespace ohs {

// Structure functions act levelwise on q-simplices. gamma takes c in level k
// (k = js.size()) and d_i in level js[i]; act is the right action c . s.
struct OperadData {
  std::string name;
  int arity_bound = 0;
  int dim_bound = 1;
  std::vector<SSetPtr> levels; // 0..arity_bound
  std::function<Index(int q, Index c, std::span<const int> js, std::span<const Index> ds)> gamma;
  std::function<Index(int q, int n, Index c, const Permutation &s)> act;
  Index unit = 0;                  // vertex of level 1
  std::optional<Index> basepoint;  // vertex of level 0
  int max_arity = -1;              // levels above are empty; -1 if unbounded
  // Canonical map from As (sigma given by rank), when there is one.
  std::function<Index(int q, int n, int sigma_rank)> from_as;
  // Augmentation to As (rank of the image), when there is one.
  std::function<int(int q, int n, Index c)> to_as;
  // For products: projection onto each factor.
  std::vector<std::function<Index(int q, int n, Index c)>> factor_projections;
};

class Operad {
public:
  explicit Operad(OperadData d);

  const std::string &name() const { return d_.name; }
  int arity_bound() const { return d_.arity_bound; }
  int dim_bound() const { return d_.dim_bound; }
  int max_arity() const { return d_.max_arity; }
  const SSetPtr &level(int n) const;
  Index size(int n, int q) const { return level(n)->size(q); }

  // Throws BudgetExceeded if the output arity exceeds the arity bound.
  Index gamma(int q, Index c, std::span<const int> js, std::span<const Index> ds) const;
  Index act(int q, int n, Index c, const Permutation &s) const;
  Index unit(int q) const;
  std::optional<Index> basepoint(int q) const;
  // gamma(c; 1, ..., *, ..., 1) with * in slot i; lands in level n - 1.
  Index insert_basepoint(int q, int n, Index c, int i) const;
  // gamma(c; *, ..., *).
  Index collapse_to_zero(int q, int n, Index c) const;

  SimplicialMap action_map(int n, const Permutation &s) const;
  bool has_from_as() const { return static_cast<bool>(d_.from_as); }
  bool has_to_as() const { return static_cast<bool>(d_.to_as); }
  Index from_as(int q, int n, int sigma_rank) const;
  int to_as(int q, int n, Index c) const;
  const OperadData &data() const { return d_; }

private:
  OperadData d_;
};

using OperadPtr = std::shared_ptr<const Operad>;

// ---------------------------------------------------------------------------
// Builtins. Levels are truncated at dimension `dim_bound` (at least 1).

OperadPtr as_operad(int arity_bound, int dim_bound = 1);
OperadPtr com_operad(int arity_bound, int dim_bound = 1);
// Level n is E Sigma_n: q-simplices are (q+1)-tuples of permutations.
OperadPtr barratt_eccles(int arity_bound, int dim_bound);
// M(0) = *, M(1) = M, empty above.
OperadPtr monoid_operad(const FiniteMonoid &m, int arity_bound, int dim_bound = 1);
// Every level is A, gamma multiplies all inputs, Sigma_n acts trivially.
OperadPtr abelian_monoid_operad(const FiniteMonoid &a, int arity_bound, int dim_bound = 1);
// Levelwise product with diagonal action; bounds are the smaller ones.
OperadPtr product(const OperadPtr &o, const OperadPtr &p);
// Levelwise pullback over the augmentations to As.
OperadPtr product_over_as(const OperadPtr &o, const OperadPtr &p);

// ---------------------------------------------------------------------------
// Axiom checks

struct CheckBudget {
  std::uint64_t max_cases = 20'000'000; // per family; above this, sample
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

struct FamilyResult {
  std::string family;
  bool pass = true;
  bool sampled = false;
  std::uint64_t cases = 0;
  std::string note;
  std::optional<std::string> witness;
};

struct AxiomReport {
  bool pass = true;
  bool sampled = false;
  std::vector<FamilyResult> families;
  std::optional<std::string> witness; // first failure
};

AxiomReport check_operad_axioms(const Operad &o, int n_max, int q_max, const CheckBudget &budget = {});

// A copy of As whose gamma gives a wrong answer on one input, for negative
// controls.
OperadPtr corrupted_as(int arity_bound);

// ---------------------------------------------------------------------------
// Gradings

// A finitely generated commutative monoid, as a product of factors that are
// either free (N) or finite tables. Elements are one int per factor.
class GradingMonoid {
public:
  using Element = std::vector<int>;

  struct Factor {
    bool free = true;           // N, generated by 1
    FiniteMonoid table;         // when !free
    std::vector<int> generators; // when !free
  };

  static GradingMonoid trivial();
  static GradingMonoid naturals();
  static GradingMonoid from_table(FiniteMonoid table, std::vector<int> generators);
  static GradingMonoid product(const GradingMonoid &a, const GradingMonoid &b);

  Element zero() const;
  Element add(const Element &a, const Element &b) const;
  Element multiple(const Element &a, int t) const;
  // s: the sum of all generators.
  Element generator_sum() const;
  bool is_trivial() const;
  std::string to_string(const Element &e) const;
  // Commutativity and associativity of table factors, exhaustively.
  void validate() const;
  const std::vector<Factor> &factors() const { return factors_; }

private:
  std::vector<Factor> factors_;
};

struct GradedOperad {
  OperadPtr operad;
  GradingMonoid grading;
  std::vector<Components> components;               // per level
  std::vector<std::vector<GradingMonoid::Element>> grade; // [n][component]

  const GradingMonoid::Element &grade_of(int n, int q, Index c) const;
  // O_g(n) as a sub-simplicial set of level n.
  SubSet piece(int n, const GradingMonoid::Element &g) const;
};

using GradedOperadPtr = std::shared_ptr<const GradedOperad>;

// Every component in grade 0.
GradedOperadPtr trivially_graded(const OperadPtr &o);
// `grade(n, vertex)` assigns grades to components through a vertex.
GradedOperadPtr graded(const OperadPtr &o, GradingMonoid g,
                       const std::function<GradingMonoid::Element(int n, Index vertex)> &grade);
// Grades in I x I'.
GradedOperadPtr graded_product(const GradedOperadPtr &a, const GradedOperadPtr &b);
// An abelian monoid operad graded by A itself (grade of a is a).
GradedOperadPtr self_graded_abelian(const FiniteMonoid &a, int arity_bound, int dim_bound,
                                    std::vector<int> generators);

// Basepoint and unit in grade 0, gamma additive on components, actions
// preserving grade, and the maps sigma_i preserving grade.
struct GradingAudit {
  bool pass = true;
  std::uint64_t cases = 0;
  std::optional<std::string> witness;
};
GradingAudit audit_grading(const GradedOperad &g, int n_max);

// ---------------------------------------------------------------------------
// Operad maps

struct OperadMap {
  std::string name;
  OperadPtr source, target;
  std::function<Index(int q, int n, Index c)> apply;

  SimplicialMap level_map(int n) const;
  // Simplicial in each level, unit, basepoint, equivariance, compatibility
  // with gamma.
  AxiomReport verify(int n_max, int q_max, const CheckBudget &budget = {}) const;
};

OperadMap identity_map(const OperadPtr &o);
// The canonical mu : As -> O, when O provides one.
OperadMap canonical_mu(const OperadPtr &as, const OperadPtr &o);
// The projection of a product onto one factor.
OperadMap product_projection(const OperadPtr &prod, const OperadPtr &factor, int which);

// The image of As(2) lies in grade 0 and in a single path component of O_0(2).
struct HtpycomVerdict {
  bool pass = false;
  std::string detail;
};
HtpycomVerdict check_htpycom(const OperadMap &mu, const GradedOperad &o);

} // namespace ohs
