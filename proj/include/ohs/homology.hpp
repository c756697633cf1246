#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ohs/snf.hpp"
#include "ohs/sset.hpp"

namespace ohs {

// A chain: basis position -> coefficient. Zero coefficients are never stored.
using Chain = std::map<Index, Integer>;

// Free chain complex with bases in degrees 0..top; boundary[q] : C_q -> C_{q-1}.
struct ChainComplex {
  int top = -1;
  std::vector<SparseMatrix> boundary;
  // For complexes of simplicial sets: basis position -> simplex id, ascending.
  std::vector<std::vector<Index>> cells;

  std::size_t rank(int q) const { return boundary[static_cast<std::size_t>(q)].ncols(); }
  Chain apply_boundary(int q, const Chain &c) const;
  // True iff every composite boundary[q-1] * boundary[q] vanishes.
  bool boundary_squares_to_zero() const;
  // Basis position of a nondegenerate simplex, if it is one.
  std::optional<Index> position(int q, Index simplex) const;
};

// Normalized chains on nondegenerate simplices in degrees 0..top, with
// degenerate faces dropped. Needs x.dim_bound() >= top.
ChainComplex normalized_chains(const SimplicialSet &x, int top);

class HomologyEngine;

// H_q as Z^rank + sum Z/torsion[i], torsion[0] | torsion[1] | ... .
// Generators are listed torsion first, then free; each is a cycle in the
// original chain basis.
struct HomologyGroup {
  int degree = 0;
  int rank = 0;
  std::vector<Integer> torsion;
  std::vector<Chain> generators;

  std::size_t generator_count() const { return torsion.size() + static_cast<std::size_t>(rank); }
  bool is_trivial() const { return rank == 0 && torsion.empty(); }
  bool isomorphic_to(const HomologyGroup &o) const { return rank == o.rank && torsion == o.torsion; }
  // "0", "Z", "Z^2 + Z/2", ...
  std::string to_string() const;

  // Coordinates of the class of a cycle in the generator basis, torsion
  // entries reduced into [0, d). Throws if the chain is not a cycle.
  std::vector<Integer> coordinates(const Chain &cycle) const;

  std::shared_ptr<const HomologyEngine> engine;
};

// Reduces a chain complex once (unit-pivot elimination, then Smith normal
// form on what is left) and answers homology queries in degrees < top.
class HomologyEngine : public std::enable_shared_from_this<HomologyEngine> {
public:
  static std::shared_ptr<const HomologyEngine> create(ChainComplex c);
  // Chains of x through degree q_max + 1.
  static std::shared_ptr<const HomologyEngine> of(const SimplicialSet &x, int q_max);

  const ChainComplex &complex() const { return complex_; }
  int max_degree() const { return complex_.top - 1; }
  // Throws "degree out of range" unless 0 <= q < top.
  HomologyGroup group(int q) const;

  // Sizes of the reduced complex, for diagnostics.
  std::size_t reduced_rank(int q) const;

  struct Step;
  struct Solver;

  ~HomologyEngine();

private:
  HomologyEngine();
  void reduce();
  Chain project(int q, const Chain &c) const;
  Chain lift(int q, Chain c) const;
  friend struct HomologyGroup;

  ChainComplex complex_;
  std::vector<Step> steps_;
  std::vector<std::vector<Index>> survivors_;
  std::vector<IntMatrix> reduced_boundary_;
  mutable std::vector<std::shared_ptr<const Solver>> solvers_;
};

// Homology of a simplicial set in one degree; x must reach dimension q + 1.
HomologyGroup homology(const SimplicialSet &x, int q);
// Homology in all degrees 0..q_max from one engine.
std::vector<HomologyGroup> homology_through(const SimplicialSet &x, int q_max);
HomologyGroup homology(const ChainComplex &c, int q);

// Induced map in generator bases: column j is the image of source generator j.
struct HomologyMap {
  int degree = 0;
  IntMatrix matrix;
  HomologyGroup source, target;

  bool is_isomorphism() const;
  bool is_surjective() const;
  bool is_zero() const;
};

// The chain map of f on normalized chains; throws with a witness cell if it
// fails to commute with the boundary in degrees <= q + 1.
Chain push_forward(const SimplicialMap &f, int q, const ChainComplex &src, const ChainComplex &tgt,
                   const Chain &c);
HomologyMap induced_map(const SimplicialMap &f, const HomologyGroup &source, const HomologyGroup &target);
HomologyMap induced_map(const SimplicialMap &f, int q);

struct IsoVerdict {
  int degree = 0;
  bool iso = false;
  std::string source, target;
};
std::vector<IsoVerdict> is_homology_iso(const SimplicialMap &f, int q_max);

// ---------------------------------------------------------------------------
// Filtered colimits of homology along a ladder X_0 -> X_1 -> ... -> X_G.

struct ColimitResult {
  int degree = 0;
  bool stabilized = false;
  int stable_from = -1;  // first stage g with maps g .. g+window-1 all isos
  int reached_at = -1;   // stable_from + window
  HomologyGroup group;   // H_q at stage stable_from (or the last stage built)
  std::vector<HomologyGroup> stages;
  std::vector<bool> map_is_iso;
  std::string message;
};

// ladder(g) is the map X_g -> X_{g+1}, for g < stages. Stages are built
// lazily; construction stops once every degree has stabilized.
std::vector<ColimitResult> homology_colimit(const std::function<SimplicialMap(int g)> &ladder, int stages,
                                            int q_max, int window = 2);
// As above, but a ladder shorter than the window reports every degree as
// not stabilized instead of throwing.
std::vector<ColimitResult> guarded_colimit(const std::function<SimplicialMap(int g)> &ladder, int stages, int q_max,
                                           int window = 2);
ColimitResult homology_colimit_degree(const std::function<SimplicialMap(int g)> &ladder, int stages, int q,
                                      int window = 2);

} // namespace ohs
