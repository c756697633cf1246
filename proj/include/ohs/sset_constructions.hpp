#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ohs/sset.hpp"

namespace ohs {

// ---------------------------------------------------------------------------
// Small standard objects

SSetPtr point(int dim_bound);
SSetPtr standard_simplex(int n, int dim_bound);
// Two points, based at vertex 0.
SSetPtr sphere0(int dim_bound);
// `count` points; every higher simplex is degenerate.
SSetPtr discrete(Index count, int dim_bound, std::optional<Index> basepoint = {});
SSetPtr truncate(const SSetPtr &x, int dim_bound);

// ---------------------------------------------------------------------------
// Keyed models: simplices named by integer tuples, deduplicated by hashing.

using Key = std::vector<std::uint32_t>;

struct KeyHash {
  std::size_t operator()(const Key &k) const noexcept;
};

struct KeyedSet {
  SSetPtr set;
  std::vector<std::vector<Key>> keys; // keys[q][x]
  std::vector<std::unordered_map<Key, Index, KeyHash>> index;

  std::optional<Index> find(int q, const Key &k) const;
  Index at(int q, const Key &k) const;
};

struct KeyedModel {
  int dim_bound = 0;
  std::function<std::vector<Key>(int q)> enumerate;
  std::function<Key(int q, int i, const Key &)> face;
  std::function<Key(int q, int i, const Key &)> degeneracy;
  std::optional<Key> basepoint;
  std::string label;
};

// Throws if a face or degeneracy leaves the enumerated simplices.
KeyedSet build_keyed(const KeyedModel &model);

// ---------------------------------------------------------------------------
// Path components

struct Components {
  std::vector<int> of_vertex;          // component id of each vertex
  std::vector<Index> representatives;  // smallest vertex of each component
  int count() const { return static_cast<int>(representatives.size()); }
  int of_simplex(const SimplicialSet &x, int q, Index c) const;
};

// Components are numbered by their smallest vertex. Needs dim_bound >= 1.
Components pi0(const SimplicialSet &x);

// ---------------------------------------------------------------------------
// Products. Level q of X_1 x ... x X_m is indexed in mixed radix with the
// last factor varying fastest.

struct ProductSet {
  SSetPtr set;
  std::vector<SSetPtr> factors;

  Index encode(int q, std::span<const Index> parts) const;
  std::vector<Index> decode(int q, Index x) const;
  SimplicialMap projection(std::size_t factor) const;
};

// Factors must share a dimension bound unless `dim_bound` is supplied (and no
// larger than every factor's bound).
ProductSet product(const std::vector<SSetPtr> &factors, std::optional<int> dim_bound = {});
ProductSet product(const SSetPtr &x, const SSetPtr &y, std::optional<int> dim_bound = {});

// ---------------------------------------------------------------------------
// Subobjects, quotients, smash products

struct SubSet {
  SSetPtr set;
  SimplicialMap inclusion;
  std::vector<std::vector<std::optional<Index>>> to_sub; // per level: ambient -> sub
};

// `keep` must select a sub-simplicial set (closed under faces and
// degeneracies); violations throw.
SubSet subset(const SSetPtr &x, const std::function<bool(int q, Index c)> &keep);
SubSet restrict_to_components(const SSetPtr &x, const Components &comps,
                              const std::vector<bool> &keep_component);

struct Quotient {
  SSetPtr set;
  SimplicialMap projection;
};

// Quotient by the simplicial equivalence relation generated by `pairs`.
// The relation is saturated under faces, degeneracies and transitivity by a
// worklist. Pairs relating cells of different dimensions are rejected.
Quotient quotient(const SSetPtr &x, const std::vector<std::pair<Cell, Cell>> &pairs);

// X/A for a sub-simplicial set A (given by membership); the collapsed class
// is the basepoint. For empty A a disjoint basepoint is added.
Quotient collapse(const SSetPtr &x, const std::function<bool(int q, Index c)> &in_sub);

// Quotient by a group action given as act(q, x, g), g = 0..group_order-1.
// Classes are canonicalised by their smallest member.
Quotient orbit_quotient(const SSetPtr &x, int group_order,
                        const std::function<Index(int q, Index c, int g)> &act);

struct SmashResult {
  ProductSet product;
  Quotient quotient;
  const SSetPtr &set() const { return quotient.set; }
};

// X ^ Y = (X x Y)/(X v Y); both must be based.
SmashResult smash(const SSetPtr &x, const SSetPtr &y);
// Y |x Z = (Y x Z)/(Y x *); Z must be based.
SmashResult half_smash(const SSetPtr &y, const SSetPtr &z);

struct DisjointUnion {
  SSetPtr set;
  std::vector<std::vector<Index>> offsets; // offsets[part][q]
};
DisjointUnion disjoint_union(const std::vector<SSetPtr> &parts);

// ---------------------------------------------------------------------------
// Nerves

// A finite monoid by multiplication table. Entries equal to -1 mark products
// outside a weight truncation; with `weights` set, the nerve keeps only
// strings of total weight <= weight_bound.
struct FiniteMonoid {
  std::vector<std::vector<int>> table;
  int identity = 0;
  std::vector<int> weights;
  int weight_bound = -1;
  std::string label;

  int order() const { return static_cast<int>(table.size()); }
  std::optional<int> multiply(int a, int b) const;
  // Throws LawViolation with a witness triple on failure.
  void validate() const;
  bool is_commutative() const;
  bool is_group() const;

  static FiniteMonoid cyclic(int n);
  static FiniteMonoid trivial();
  static FiniteMonoid symmetric_group(int n);
  // {0, ..., bound} under addition, truncated: a + b > bound is undefined.
  static FiniteMonoid naturals(int bound);
};

SSetPtr nerve(const FiniteMonoid &m, int dim_bound);

// A finite groupoid (or category) with explicit composition.
struct FiniteGroupoid {
  int objects = 0;
  std::vector<int> source, target;             // per morphism
  std::vector<int> identity;                   // per object
  std::vector<std::vector<int>> compose;       // compose[g][f] = g o f, -1 if not composable
  static FiniteGroupoid translation(const FiniteMonoid &group);
};

SSetPtr nerve(const FiniteGroupoid &g, int dim_bound);

// ---------------------------------------------------------------------------
// Bisimplicial sets: rows in the horizontal direction p, each row a
// simplicial set in the vertical direction q.

struct BisimplicialSet {
  std::vector<SSetPtr> rows;                          // p = 0..P
  std::vector<std::vector<SimplicialMap>> hface;      // hface[p][i]: row p -> row p-1
  std::vector<std::vector<SimplicialMap>> hdegen;     // hdegen[p][i]: row p -> row p+1

  int row_bound() const { return static_cast<int>(rows.size()) - 1; }
  // Each horizontal operator is a simplicial map (the two directions commute)
  // and the horizontal simplicial identities hold.
  std::optional<Witness> verify() const;

  // Constant in p.
  static BisimplicialSet constant(const SSetPtr &x, int row_bound);
  // (X ⊠ Y)_{p,q} = X_p x Y_q.
  static BisimplicialSet external_product(const SSetPtr &x, const SSetPtr &y);
};

// Level n is row n in vertical degree n, with d_i = d_i^h d_i^v.
SSetPtr diagonal(const BisimplicialSet &b, int dim_bound);

} // namespace ohs
