#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ohs {

using Index = std::uint32_t;

// A q-simplex of some simplicial set, identified by its index in level q.
struct Cell {
  int dim = 0;
  Index id = 0;
  friend bool operator==(const Cell &, const Cell &) = default;
};

// Eilenberg-Zilber normal form of a simplex x in level q:
//   x = s_{j_1} ... s_{j_k} base,  j_1 > ... > j_k,
// where `base` is nondegenerate of dimension q - k. Bit j of `mask` is set
// iff j occurs among the j_i (equivalently iff x lies in the image of s_j).
struct Decomposition {
  Index base = 0;
  std::uint32_t mask = 0;

  int base_dim(int q) const;
  // Degeneracy indices j_1 > ... > j_k.
  std::vector<int> word() const;
};

// A simplicial set truncated at dimension `dim_bound`. Every simplex of every
// level q <= dim_bound is stored (degenerate ones included) together with the
// full face and degeneracy tables, so all operators are O(1) lookups.
// Values are immutable once built and may be shared across threads.
class SimplicialSet {
public:
  // Generator of the level data; simplices of level q are 0 .. count(q)-1.
  struct Model {
    int dim_bound = 0;
    std::function<Index(int q)> count;
    std::function<Index(int q, int i, Index x)> face;       // q >= 1, 0 <= i <= q
    std::function<Index(int q, int i, Index x)> degeneracy; // q < dim_bound
  };

  SimplicialSet() = default;
  static SimplicialSet from_model(const Model &model, std::optional<Index> basepoint = {});

  int dim_bound() const { return dim_bound_; }
  Index size(int q) const;

  Index face(int q, int i, Index x) const;
  Index degeneracy(int q, int i, Index x) const;
  // Applies the face maps leaving only vertex k of a q-simplex.
  Index vertex(int q, Index x, int k) const;
  // s_0^{q-p} applied to a p-simplex, landing in level q.
  Index degenerate_to(int p, Index x, int q) const;

  bool is_degenerate(int q, Index x) const { return decomposition(q, x).mask != 0; }
  const Decomposition &decomposition(int q, Index x) const;
  std::span<const Index> nondegenerate(int q) const;
  // Rebuilds x from its normal form; equal to x by construction.
  Index from_decomposition(int q, const Decomposition &d) const;

  std::optional<Index> basepoint() const { return basepoint_; }
  bool is_based() const { return basepoint_.has_value(); }
  // The (totally degenerate) basepoint simplex in level q.
  Index basepoint_simplex(int q) const;
  bool is_basepoint(int q, Index x) const;

  // Weight of a simplex: used to truncate free constructions. Defaults to 0
  // on basepoint simplices and 1 elsewhere unless explicit weights are set.
  int weight(int q, Index x) const;
  bool has_explicit_weights() const { return !weights_.empty(); }
  // `w(q, x)` must not increase under faces and must be preserved by
  // degeneracies; this is checked.
  void set_weights(const std::function<int(int q, Index x)> &w);

  void set_basepoint(Index vertex);
  const std::string &label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  // Throws TruncationError unless level q is available.
  void require_dim(int q, const char *context) const;

  // Total number of stored simplices across all levels.
  std::size_t total_simplices() const;

private:
  struct Level {
    Index size = 0;
    std::vector<std::vector<Index>> faces;  // faces[i][x], only for q >= 1
    std::vector<std::vector<Index>> degens; // degens[i][x], only for q < dim_bound
    std::vector<Decomposition> decomposition;
    std::vector<Index> nondegenerate;
    Index basepoint = 0;
  };

  void finalize();

  int dim_bound_ = -1;
  std::vector<Level> levels_;
  std::optional<Index> basepoint_;
  std::vector<std::vector<int>> weights_;
  std::string label_;
};

using SSetPtr = std::shared_ptr<const SimplicialSet>;

template <class... Args> SSetPtr make_sset(Args &&...args) {
  return std::make_shared<const SimplicialSet>(std::forward<Args>(args)...);
}

// Describes the first place where a claimed identity fails.
struct Witness {
  std::string message;
};

// A degreewise map of simplicial sets, stored on every simplex.
class SimplicialMap {
public:
  SimplicialMap() = default;
  SimplicialMap(SSetPtr source, SSetPtr target, std::vector<std::vector<Index>> images);

  static SimplicialMap from_function(SSetPtr source, SSetPtr target,
                                     const std::function<Index(int q, Index x)> &f);
  static SimplicialMap identity(SSetPtr x);
  // g after f.
  static SimplicialMap compose(const SimplicialMap &g, const SimplicialMap &f);

  Index operator()(int q, Index x) const;
  const SimplicialSet &source() const { return *source_; }
  const SimplicialSet &target() const { return *target_; }
  const SSetPtr &source_ptr() const { return source_; }
  const SSetPtr &target_ptr() const { return target_; }
  int dim_bound() const;

  // Commutation with faces and degeneracies up to the common bound, and
  // basepoint preservation when both ends are based.
  std::optional<Witness> verify() const;
  // Bijective in every level (and simplicial).
  bool is_isomorphism() const;

private:
  SSetPtr source_, target_;
  std::vector<std::vector<Index>> images_;
};

// Exhaustive check of the simplicial identities up to the dimension bound.
std::optional<Witness> check_simplicial_identities(const SimplicialSet &x);

} // namespace ohs
