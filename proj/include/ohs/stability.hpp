#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ohs/algebra.hpp"
#include "ohs/homology.hpp"
#include "ohs/operad.hpp"

namespace ohs {

// s~ = gamma(mu0; s~0, 1), an arity-1 vertex of grade s.
struct Propagator {
  Index mu0 = 0;      // vertex of level 2, image of the identity of As(2)
  Index s_tilde0 = 0; // vertex of level 0 of grade s
  Index s_tilde = 0;  // vertex of level 1
  GradingMonoid::Element s;
  int component = 0;  // of s~ in level 1
};

// Picks the first vertex of grade s when `s_tilde0` is not given. Throws
// LawViolation if htpycom fails and Error if s~0 has the wrong grade.
Propagator make_propagator(const GradedOperad &g, const OperadMap &mu, std::optional<Index> s_tilde0 = {});

// D = gamma(-; *, ..., *) from O_grade(n) to O_grade(0), on the pieces.
SimplicialMap D_map(const GradedOperad &g, int n, const GradingMonoid::Element &grade);

// Stage t is O_{t s}(n); the maps are gamma(s~; -).
struct StabilityLadder {
  int arity = 0;
  std::vector<SSetPtr> stages;
  std::vector<SimplicialMap> maps;   // stage t -> t+1
  std::vector<SimplicialMap> D;      // stage t of arity n -> stage t of arity 0
  bool squares_commute = true;
  std::optional<std::string> witness;
};

class LadderBuilder {
public:
  LadderBuilder(const GradedOperad &g, const Propagator &p, int arity);
  const SSetPtr &stage(int t);
  const SimplicialMap &map(int t);
  // The arity-0 ladder O_{t s}(0) -> O_{(t+1) s}(0).
  const SimplicialMap &zero_map(int t);
  const SimplicialMap &D(int t);
  // The square D o s~ = s~ o D between stages t and t+1, cellwise.
  std::optional<std::string> check_square(int t);
  StabilityLadder snapshot() const;

private:
  const GradedOperad &g_;
  Propagator p_;
  int n_;
  std::deque<SubSet> src_, dst_;
  std::deque<SimplicialMap> maps_, zero_maps_, D_;
  const SubSet &piece(std::deque<SubSet> &v, int arity, int t);
};

struct OHSParams {
  int n_max = 3;
  int G = 6;
  int q_max = 1;
  int window = 2;
  std::optional<Index> s_tilde0; // first vertex of grade s when unset
};

struct ArityVerdict {
  int arity = 0;
  std::string status; // "iso", "not-iso", "not-stabilized"
  int stable_stage = -1;
  std::vector<IsoVerdict> degrees;
  bool squares_commute = true;
  std::optional<std::string> witness;
};

struct OHSReport {
  bool is_ohs = false;
  bool inconclusive = false;
  HtpycomVerdict htpycom;
  GradingAudit audit;
  Propagator propagator;
  std::vector<ArityVerdict> arities;
  OHSParams params;
  std::optional<std::string> witness;
};

OHSReport check_ohs(const GradedOperad &g, const OperadMap &mu, const OHSParams &params);

// ---------------------------------------------------------------------------
// Group completion through the telescope M -> M -> ... (left multiplication
// by s), restricted to the component of s^t at stage t.

struct Telescope {
  std::string name;
  int max_stage = 0; // stages beyond this lie outside the truncation
  std::function<SSetPtr(int t)> stage;
  std::function<SimplicialMap(const SSetPtr &from, const SSetPtr &to, int t)> step;
};

Telescope discrete_telescope(const FiniteMonoid &m, std::vector<int> generators);
// M = coprod_n B Sigma_n with block sum, s the point of B Sigma_1.
Telescope symmetric_group_telescope(int max_n, int dim_bound);
Telescope simplicial_monoid_telescope(const SimplicialMonoid &m, Index generator, int max_stage);
// An A-infinity algebra via its rectification.
Telescope rectified_telescope(const Rectification &r, Index generator_vertex);

struct Pi0Localization {
  bool commutative = false;
  int colimit_size = 0;     // components of the colimit of pi0 M under s
  int grothendieck_size = 0; // |K(pi0 M)| from pairs modulo the usual relation
  bool match = false;
};

struct GroupCompletionResult {
  std::string name;
  std::vector<ColimitResult> degrees;
  bool stabilized = false;
  std::optional<Pi0Localization> pi0;
  std::string centrality = "pi0 central in H_*(M): asserted by the caller, not checked";
};

GroupCompletionResult group_completion_homology(const Telescope &t, int stages, int q_max, int window = 2);
// Adds the Grothendieck cross-check for a discrete monoid with a total table.
GroupCompletionResult group_completion_homology(const FiniteMonoid &m, std::vector<int> generators, int stages,
                                                int q_max, int window = 2);
Pi0Localization grothendieck_check(const FiniteMonoid &m, std::vector<int> generators);

// ---------------------------------------------------------------------------
// Splitting: O_oo(n) x_{Sigma_n} Y -> O_oo(0) x (E(n) x_{Sigma_n} Y).

// A simplicial set with a left Sigma_n action s . y (s given by rank).
struct SigmaSet {
  std::string name;
  int n = 0;
  SSetPtr set;
  std::function<Index(int q, Index y, int s)> act;
};

SigmaSet trivial_sigma(int n, const SSetPtr &y);
SigmaSet free_orbit(int n, int dim_bound, bool add_basepoint = false);
// X^{^n} with Sigma_n permuting the factors; X must be based.
SigmaSet smash_power(const SSetPtr &x, int n);

struct SplittingCase {
  int arity = 0;
  std::string y;
  bool half_smash = false;
  std::string status; // "iso", "not-iso", "not-stabilized"
  std::vector<IsoVerdict> degrees;
};

struct SplittingReport {
  bool pass = true;
  bool inconclusive = false;
  std::vector<SplittingCase> cases;
  std::optional<std::string> witness;
};

struct SplittingParams {
  int n_max = 3;
  int q_max = 2;
  int G = 4;
  int window = 2;
};

// `pi` maps O to the Barratt-Eccles operad; `ys(n)` lists the Sigma_n-sets to
// test in arity n. Based Y are also tested in half-smash form.
SplittingReport splitting_check(const GradedOperad &g, const OperadMap &mu, const OperadMap &pi,
                                const std::function<std::vector<SigmaSet>(int n)> &ys, const SplittingParams &params);

} // namespace ohs
