#include "ohs/sset_constructions.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ohs/error.hpp"
#include "ohs/permutation.hpp"

namespace ohs {

namespace {

std::uint64_t checked_power(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<Index>::max() / base)
      throw BudgetExceeded("level would exceed 2^32 simplices");
    r *= base;
  }
  return r;
}

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), Index{0}); }
  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

private:
  std::vector<Index> parent_;
};

} // namespace

// ---------------------------------------------------------------------------

SSetPtr discrete(Index count, int dim_bound, std::optional<Index> basepoint) {
  SimplicialSet::Model m;
  m.dim_bound = dim_bound;
  m.count = [count](int) { return count; };
  m.face = [](int, int, Index x) { return x; };
  m.degeneracy = [](int, int, Index x) { return x; };
  auto s = SimplicialSet::from_model(m, basepoint);
  s.set_label("discrete(" + std::to_string(count) + ")");
  return make_sset(std::move(s));
}

SSetPtr point(int dim_bound) {
  auto s = SimplicialSet::from_model({dim_bound, [](int) { return Index{1}; },
                                      [](int, int, Index) { return Index{0}; },
                                      [](int, int, Index) { return Index{0}; }},
                                     Index{0});
  s.set_label("point");
  return make_sset(std::move(s));
}

SSetPtr sphere0(int dim_bound) {
  auto s = SimplicialSet::from_model({dim_bound, [](int) { return Index{2}; },
                                      [](int, int, Index x) { return x; },
                                      [](int, int, Index x) { return x; }},
                                     Index{0});
  s.set_label("S0");
  return make_sset(std::move(s));
}

SSetPtr standard_simplex(int n, int dim_bound) {
  // q-simplices are weakly increasing maps [q] -> [n].
  KeyedModel km;
  km.dim_bound = dim_bound;
  km.label = "Delta" + std::to_string(n);
  km.enumerate = [n](int q) {
    std::vector<Key> out;
    Key cur(static_cast<std::size_t>(q) + 1, 0);
    std::function<void(int, std::uint32_t)> rec = [&](int pos, std::uint32_t lo) {
      if (pos == q + 1) {
        out.push_back(cur);
        return;
      }
      for (std::uint32_t v = lo; v <= static_cast<std::uint32_t>(n); ++v) {
        cur[pos] = v;
        rec(pos + 1, v);
      }
    };
    rec(0, 0);
    return out;
  };
  km.face = [](int, int i, const Key &k) {
    Key r = k;
    r.erase(r.begin() + i);
    return r;
  };
  km.degeneracy = [](int, int i, const Key &k) {
    Key r = k;
    r.insert(r.begin() + i, k[i]);
    return r;
  };
  return build_keyed(km).set;
}

SSetPtr truncate(const SSetPtr &x, int dim_bound) {
  if (dim_bound > x->dim_bound())
    throw TruncationError("cannot truncate " + x->label() + " above its bound " +
                          std::to_string(x->dim_bound()));
  if (dim_bound == x->dim_bound()) return x;
  auto s = SimplicialSet::from_model(
      {dim_bound, [x](int q) { return x->size(q); },
       [x](int q, int i, Index c) { return x->face(q, i, c); },
       [x](int q, int i, Index c) { return x->degeneracy(q, i, c); }},
      x->basepoint());
  if (x->has_explicit_weights()) s.set_weights([x](int q, Index c) { return x->weight(q, c); });
  s.set_label(x->label());
  return make_sset(std::move(s));
}

// ---------------------------------------------------------------------------

std::size_t KeyHash::operator()(const Key &k) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto v : k) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::optional<Index> KeyedSet::find(int q, const Key &k) const {
  auto it = index[static_cast<std::size_t>(q)].find(k);
  if (it == index[static_cast<std::size_t>(q)].end()) return std::nullopt;
  return it->second;
}

Index KeyedSet::at(int q, const Key &k) const {
  auto r = find(q, k);
  if (!r) throw Error("key not present in level " + std::to_string(q));
  return *r;
}

KeyedSet build_keyed(const KeyedModel &model) {
  KeyedSet ks;
  const int D = model.dim_bound;
  ks.keys.resize(static_cast<std::size_t>(D) + 1);
  ks.index.resize(static_cast<std::size_t>(D) + 1);
  for (int q = 0; q <= D; ++q) {
    ks.keys[q] = model.enumerate(q);
    if (ks.keys[q].size() > std::numeric_limits<Index>::max() / 2)
      throw BudgetExceeded("level too large");
    ks.index[q].reserve(ks.keys[q].size());
    for (Index x = 0; x < ks.keys[q].size(); ++x)
      if (!ks.index[q].emplace(ks.keys[q][x], x).second)
        throw Error("duplicate simplex in keyed model " + model.label);
  }
  auto lookup = [&ks, &model](int q, const Key &k, const char *op) {
    auto it = ks.index[q].find(k);
    if (it == ks.index[q].end())
      throw Error(std::string("keyed model ") + model.label + ": " + op +
                  " leaves the enumerated simplices in level " + std::to_string(q));
    return it->second;
  };
  SimplicialSet::Model m;
  m.dim_bound = D;
  m.count = [&ks](int q) { return static_cast<Index>(ks.keys[q].size()); };
  m.face = [&](int q, int i, Index x) { return lookup(q - 1, model.face(q, i, ks.keys[q][x]), "face"); };
  m.degeneracy = [&](int q, int i, Index x) {
    return lookup(q + 1, model.degeneracy(q, i, ks.keys[q][x]), "degeneracy");
  };
  std::optional<Index> bp;
  if (model.basepoint) bp = lookup(0, *model.basepoint, "basepoint");
  auto s = SimplicialSet::from_model(m, bp);
  s.set_label(model.label);
  ks.set = make_sset(std::move(s));
  return ks;
}

// ---------------------------------------------------------------------------

int Components::of_simplex(const SimplicialSet &x, int q, Index c) const {
  return of_vertex[x.vertex(q, c, 0)];
}

Components pi0(const SimplicialSet &x) {
  if (x.dim_bound() < 1)
    throw TruncationError("pi0: insufficient dimensions (need simplices through dimension 1)");
  UnionFind uf(x.size(0));
  for (Index e = 0; e < x.size(1); ++e) uf.unite(x.face(1, 0, e), x.face(1, 1, e));
  Components c;
  c.of_vertex.assign(x.size(0), -1);
  std::vector<int> id_of_root(x.size(0), -1);
  for (Index v = 0; v < x.size(0); ++v) {
    Index r = uf.find(v);
    if (id_of_root[r] < 0) {
      id_of_root[r] = c.count();
      c.representatives.push_back(v);
    }
    c.of_vertex[v] = id_of_root[r];
  }
  return c;
}

// ---------------------------------------------------------------------------

Index ProductSet::encode(int q, std::span<const Index> parts) const {
  std::uint64_t x = 0;
  for (std::size_t f = 0; f < factors.size(); ++f) x = x * factors[f]->size(q) + parts[f];
  return static_cast<Index>(x);
}

std::vector<Index> ProductSet::decode(int q, Index x) const {
  std::vector<Index> parts(factors.size());
  for (std::size_t f = factors.size(); f-- > 0;) {
    const Index n = factors[f]->size(q);
    parts[f] = x % n;
    x /= n;
  }
  return parts;
}

SimplicialMap ProductSet::projection(std::size_t factor) const {
  return SimplicialMap::from_function(set, factors.at(factor),
                                      [this, factor](int q, Index x) { return decode(q, x)[factor]; });
}

ProductSet product(const std::vector<SSetPtr> &factors, std::optional<int> dim_bound) {
  if (factors.empty()) throw Error("product of no factors");
  int lo = factors[0]->dim_bound(), hi = lo;
  for (const auto &f : factors) {
    lo = std::min(lo, f->dim_bound());
    hi = std::max(hi, f->dim_bound());
  }
  if (!dim_bound && lo != hi)
    throw TruncationError("product: factors are truncated at different dimensions; the limiting bound is " +
                          std::to_string(lo));
  const int D = dim_bound.value_or(lo);
  if (D > lo)
    throw TruncationError("product: requested dimension " + std::to_string(D) +
                          " exceeds the limiting bound " + std::to_string(lo));
  ProductSet ps;
  ps.factors = factors;
  std::vector<Index> counts(static_cast<std::size_t>(D) + 1);
  for (int q = 0; q <= D; ++q) {
    std::uint64_t n = 1;
    for (const auto &f : factors) {
      n *= f->size(q);
      if (n > std::numeric_limits<Index>::max() / 2) throw BudgetExceeded("product level too large");
    }
    counts[q] = static_cast<Index>(n);
  }
  auto apply = [&ps](int q, int qt, Index x, const std::function<Index(const SimplicialSet &, Index)> &op) {
    auto parts = ps.decode(q, x);
    for (std::size_t f = 0; f < parts.size(); ++f) parts[f] = op(*ps.factors[f], parts[f]);
    return ps.encode(qt, parts);
  };
  SimplicialSet::Model m;
  m.dim_bound = D;
  m.count = [&counts](int q) { return counts[q]; };
  m.face = [&](int q, int i, Index x) {
    return apply(q, q - 1, x, [q, i](const SimplicialSet &s, Index c) { return s.face(q, i, c); });
  };
  m.degeneracy = [&](int q, int i, Index x) {
    return apply(q, q + 1, x, [q, i](const SimplicialSet &s, Index c) { return s.degeneracy(q, i, c); });
  };
  std::optional<Index> bp;
  bool based = std::all_of(factors.begin(), factors.end(), [](const SSetPtr &f) { return f->is_based(); });
  if (based) {
    std::vector<Index> parts;
    for (const auto &f : factors) parts.push_back(*f->basepoint());
    bp = ps.encode(0, parts);
  }
  auto s = SimplicialSet::from_model(m, bp);
  std::string label;
  for (const auto &f : factors) label += (label.empty() ? "" : " x ") + f->label();
  s.set_label(label);
  ps.set = make_sset(std::move(s));
  return ps;
}

ProductSet product(const SSetPtr &x, const SSetPtr &y, std::optional<int> dim_bound) {
  return product(std::vector<SSetPtr>{x, y}, dim_bound);
}

// ---------------------------------------------------------------------------

SubSet subset(const SSetPtr &x, const std::function<bool(int q, Index c)> &keep) {
  const int D = x->dim_bound();
  SubSet sub;
  sub.to_sub.resize(static_cast<std::size_t>(D) + 1);
  std::vector<std::vector<Index>> from_sub(static_cast<std::size_t>(D) + 1);
  for (int q = 0; q <= D; ++q) {
    sub.to_sub[q].assign(x->size(q), std::nullopt);
    for (Index c = 0; c < x->size(q); ++c)
      if (keep(q, c)) {
        sub.to_sub[q][c] = static_cast<Index>(from_sub[q].size());
        from_sub[q].push_back(c);
      }
  }
  auto map_into = [&sub](int q, Index c, const char *op) {
    const auto &r = sub.to_sub[q][c];
    if (!r) throw Error(std::string("subset is not closed under ") + op);
    return *r;
  };
  SimplicialSet::Model m;
  m.dim_bound = D;
  m.count = [&](int q) { return static_cast<Index>(from_sub[q].size()); };
  m.face = [&](int q, int i, Index c) { return map_into(q - 1, x->face(q, i, from_sub[q][c]), "faces"); };
  m.degeneracy = [&](int q, int i, Index c) {
    return map_into(q + 1, x->degeneracy(q, i, from_sub[q][c]), "degeneracies");
  };
  std::optional<Index> bp;
  if (x->basepoint() && sub.to_sub[0][*x->basepoint()]) bp = sub.to_sub[0][*x->basepoint()];
  auto s = SimplicialSet::from_model(m, bp);
  if (x->has_explicit_weights())
    s.set_weights([&](int q, Index c) { return x->weight(q, from_sub[q][c]); });
  s.set_label(x->label() + "|sub");
  sub.set = make_sset(std::move(s));
  sub.inclusion = SimplicialMap(sub.set, x, std::move(from_sub));
  return sub;
}

SubSet restrict_to_components(const SSetPtr &x, const Components &comps,
                              const std::vector<bool> &keep_component) {
  return subset(x, [&](int q, Index c) { return keep_component[comps.of_simplex(*x, q, c)]; });
}

namespace {

Quotient quotient_from_classes(const SSetPtr &x, std::vector<std::vector<Index>> cls,
                               std::optional<Index> basepoint_vertex, const std::string &label) {
  // cls[q][c] is any member-invariant label; renumber densely in order of
  // first appearance.
  const int D = x->dim_bound();
  std::vector<std::vector<Index>> reps(static_cast<std::size_t>(D) + 1);
  for (int q = 0; q <= D; ++q) {
    std::unordered_map<Index, Index> dense;
    for (Index c = 0; c < x->size(q); ++c) {
      auto [it, fresh] = dense.emplace(cls[q][c], static_cast<Index>(reps[q].size()));
      if (fresh) reps[q].push_back(c);
      cls[q][c] = it->second;
    }
  }
  SimplicialSet::Model m;
  m.dim_bound = D;
  m.count = [&](int q) { return static_cast<Index>(reps[q].size()); };
  m.face = [&](int q, int i, Index c) { return cls[q - 1][x->face(q, i, reps[q][c])]; };
  m.degeneracy = [&](int q, int i, Index c) { return cls[q + 1][x->degeneracy(q, i, reps[q][c])]; };
  std::optional<Index> bp;
  if (basepoint_vertex) bp = cls[0][*basepoint_vertex];
  auto s = SimplicialSet::from_model(m, bp);
  s.set_label(label);
  Quotient out;
  out.set = make_sset(std::move(s));
  // Well-definedness: operators on any member land in the class of the
  // operator on the representative.
  for (int q = 1; q <= D; ++q)
    for (Index c = 0; c < x->size(q); ++c)
      for (int i = 0; i <= q; ++i)
        if (cls[q - 1][x->face(q, i, c)] != out.set->face(q, i, cls[q][c]))
          throw Error("quotient relation is not compatible with faces");
  out.projection = SimplicialMap(x, out.set, std::move(cls));
  return out;
}

} // namespace

Quotient quotient(const SSetPtr &x, const std::vector<std::pair<Cell, Cell>> &pairs) {
  const int D = x->dim_bound();
  std::vector<UnionFind> uf;
  for (int q = 0; q <= D; ++q) uf.emplace_back(x->size(q));
  std::vector<std::pair<Cell, Cell>> work;
  for (const auto &[a, b] : pairs) {
    if (a.dim != b.dim)
      throw Error("quotient: relation identifies cells of different dimensions (" + std::to_string(a.dim) +
                  " and " + std::to_string(b.dim) + ")");
    x->require_dim(a.dim, "quotient");
    work.push_back({a, b});
  }
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    const int q = a.dim;
    if (!uf[q].unite(a.id, b.id)) continue;
    for (int i = 0; q >= 1 && i <= q; ++i)
      work.push_back({{q - 1, x->face(q, i, a.id)}, {q - 1, x->face(q, i, b.id)}});
    for (int i = 0; q < D && i <= q; ++i)
      work.push_back({{q + 1, x->degeneracy(q, i, a.id)}, {q + 1, x->degeneracy(q, i, b.id)}});
  }
  std::vector<std::vector<Index>> cls(static_cast<std::size_t>(D) + 1);
  for (int q = 0; q <= D; ++q) {
    cls[q].resize(x->size(q));
    for (Index c = 0; c < x->size(q); ++c) cls[q][c] = uf[q].find(c);
  }
  return quotient_from_classes(x, std::move(cls), x->basepoint(), x->label() + "/~");
}

Quotient collapse(const SSetPtr &x, const std::function<bool(int q, Index c)> &in_sub) {
  const int D = x->dim_bound();
  std::optional<Index> ref;
  for (Index v = 0; v < x->size(0) && !ref; ++v)
    if (in_sub(0, v)) ref = v;
  if (!ref) {
    auto du = disjoint_union({x, point(D)});
    auto s = std::make_shared<SimplicialSet>(*du.set);
    s->set_basepoint(du.offsets[1][0]);
    SSetPtr based = s;
    Quotient out;
    out.set = based;
    out.projection = SimplicialMap::from_function(x, based, [](int, Index c) { return c; });
    return out;
  }
  std::vector<std::pair<Cell, Cell>> pairs;
  for (int q = 0; q <= D; ++q) {
    const Index r = x->degenerate_to(0, *ref, q);
    for (Index c = 0; c < x->size(q); ++c)
      if (in_sub(q, c) && c != r) pairs.push_back({{q, c}, {q, r}});
  }
  // quotient() keeps x's basepoint; rebase at the collapsed class.
  auto q = quotient(x, pairs);
  auto s = std::make_shared<SimplicialSet>(*q.set);
  s->set_basepoint(q.projection(0, *ref));
  Quotient out;
  out.set = s;
  out.projection = SimplicialMap::from_function(x, out.set, [&q](int d, Index c) { return q.projection(d, c); });
  return out;
}

Quotient orbit_quotient(const SSetPtr &x, int group_order,
                        const std::function<Index(int q, Index c, int g)> &act) {
  const int D = x->dim_bound();
  std::vector<std::vector<Index>> cls(static_cast<std::size_t>(D) + 1);
  for (int q = 0; q <= D; ++q) {
    cls[q].resize(x->size(q));
    for (Index c = 0; c < x->size(q); ++c) {
      Index best = c;
      for (int g = 0; g < group_order; ++g) best = std::min(best, act(q, c, g));
      cls[q][c] = best;
    }
  }
  return quotient_from_classes(x, std::move(cls), x->basepoint(), x->label() + "/G");
}

SmashResult smash(const SSetPtr &x, const SSetPtr &y) {
  if (!x->is_based() || !y->is_based()) throw Error("smash: both factors must be based");
  SmashResult r{product(x, y), {}};
  const auto &ps = r.product;
  r.quotient = collapse(ps.set, [&ps, &x, &y](int q, Index c) {
    auto p = ps.decode(q, c);
    return x->is_basepoint(q, p[0]) || y->is_basepoint(q, p[1]);
  });
  return r;
}

SmashResult half_smash(const SSetPtr &y, const SSetPtr &z) {
  if (!z->is_based()) throw Error("half_smash: the second factor must be based");
  SmashResult r{product(y, z), {}};
  const auto &ps = r.product;
  if (y->size(0) == 0) {
    auto pt = point(ps.set->dim_bound());
    r.quotient.set = pt;
    r.quotient.projection = SimplicialMap::from_function(ps.set, pt, [](int, Index) { return Index{0}; });
    return r;
  }
  r.quotient = collapse(ps.set, [&ps, &z](int q, Index c) { return z->is_basepoint(q, ps.decode(q, c)[1]); });
  return r;
}

DisjointUnion disjoint_union(const std::vector<SSetPtr> &parts) {
  if (parts.empty()) throw Error("disjoint union of no parts");
  const int D = parts[0]->dim_bound();
  for (const auto &p : parts)
    if (p->dim_bound() != D) throw TruncationError("disjoint_union: mismatched truncations");
  DisjointUnion du;
  du.offsets.assign(parts.size(), std::vector<Index>(static_cast<std::size_t>(D) + 1, 0));
  std::vector<Index> totals(static_cast<std::size_t>(D) + 1, 0);
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (int q = 0; q <= D; ++q) {
      du.offsets[k][q] = totals[q];
      totals[q] += parts[k]->size(q);
    }
  auto locate = [&](int q, Index x) {
    std::size_t k = parts.size() - 1;
    while (du.offsets[k][q] > x || parts[k]->size(q) == 0) --k;
    return std::pair<std::size_t, Index>{k, x - du.offsets[k][q]};
  };
  SimplicialSet::Model m;
  m.dim_bound = D;
  m.count = [&](int q) { return totals[q]; };
  m.face = [&](int q, int i, Index x) {
    auto [k, c] = locate(q, x);
    return du.offsets[k][q - 1] + parts[k]->face(q, i, c);
  };
  m.degeneracy = [&](int q, int i, Index x) {
    auto [k, c] = locate(q, x);
    return du.offsets[k][q + 1] + parts[k]->degeneracy(q, i, c);
  };
  auto s = SimplicialSet::from_model(m);
  s.set_label("disjoint union");
  du.set = make_sset(std::move(s));
  return du;
}

// ---------------------------------------------------------------------------

std::optional<int> FiniteMonoid::multiply(int a, int b) const {
  int v = table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  if (v < 0) return std::nullopt;
  return v;
}

void FiniteMonoid::validate() const {
  const int n = order();
  if (n == 0) throw LawViolation("monoid has no elements");
  for (const auto &row : table)
    if (static_cast<int>(row.size()) != n) throw LawViolation("multiplication table is not square");
  for (const auto &row : table)
    for (int v : row)
      if (v < -1 || v >= n) throw LawViolation("multiplication table entry out of range");
  if (identity < 0 || identity >= n) throw LawViolation("identity out of range");
  for (int a = 0; a < n; ++a)
    if (multiply(identity, a) != a || multiply(a, identity) != a)
      throw LawViolation("identity law fails for element " + std::to_string(a));
  if (!weights.empty() && static_cast<int>(weights.size()) != n) throw LawViolation("weights length mismatch");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        auto ab = multiply(a, b), bc = multiply(b, c);
        std::optional<int> l = ab ? multiply(*ab, c) : std::nullopt;
        std::optional<int> r = bc ? multiply(a, *bc) : std::nullopt;
        if (l != r)
          throw LawViolation("multiplication is not associative: witness triple (" + std::to_string(a) + ", " +
                             std::to_string(b) + ", " + std::to_string(c) + ")");
      }
}

bool FiniteMonoid::is_commutative() const {
  for (int a = 0; a < order(); ++a)
    for (int b = 0; b < order(); ++b)
      if (multiply(a, b) != multiply(b, a)) return false;
  return true;
}

bool FiniteMonoid::is_group() const {
  for (int a = 0; a < order(); ++a) {
    bool inv = false;
    for (int b = 0; b < order() && !inv; ++b) inv = multiply(a, b) == identity && multiply(b, a) == identity;
    if (!inv) return false;
  }
  return true;
}

FiniteMonoid FiniteMonoid::cyclic(int n) {
  FiniteMonoid m;
  m.table.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.table[a][b] = (a + b) % n;
  m.label = "Z/" + std::to_string(n);
  return m;
}

FiniteMonoid FiniteMonoid::trivial() {
  FiniteMonoid m = cyclic(1);
  m.label = "trivial";
  return m;
}

FiniteMonoid FiniteMonoid::symmetric_group(int n) {
  const auto &perms = all_permutations(n);
  FiniteMonoid m;
  const int k = static_cast<int>(perms.size());
  m.table.assign(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k)));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) m.table[a][b] = permutation_rank(perms[a] * perms[b]);
  m.identity = 0;
  m.label = "Sigma_" + std::to_string(n);
  return m;
}

FiniteMonoid FiniteMonoid::naturals(int bound) {
  FiniteMonoid m;
  const int n = bound + 1;
  m.table.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.table[a][b] = a + b <= bound ? a + b : -1;
  m.weights.resize(static_cast<std::size_t>(n));
  std::iota(m.weights.begin(), m.weights.end(), 0);
  m.weight_bound = bound;
  m.label = "N<=" + std::to_string(bound);
  return m;
}

SSetPtr nerve(const FiniteMonoid &mon, int dim_bound) {
  mon.validate();
  const int n = mon.order();
  const bool partial = !mon.weights.empty();
  if (!partial) {
    for (const auto &row : mon.table)
      for (int v : row)
        if (v < 0) throw Error("nerve: a partial multiplication table needs weights");
    for (int q = 0; q <= dim_bound; ++q) checked_power(static_cast<std::uint64_t>(n), q);
    // q-simplices (a_1..a_q) are encoded as sum a_{i+1} n^i.
    auto digits = [n](int q, Index x) {
      std::vector<int> a(static_cast<std::size_t>(q));
      for (int i = 0; i < q; ++i) {
        a[i] = static_cast<int>(x % static_cast<Index>(n));
        x /= static_cast<Index>(n);
      }
      return a;
    };
    auto encode = [n](const std::vector<int> &a) {
      Index x = 0;
      for (std::size_t i = a.size(); i-- > 0;) x = x * static_cast<Index>(n) + static_cast<Index>(a[i]);
      return x;
    };
    SimplicialSet::Model m;
    m.dim_bound = dim_bound;
    m.count = [n](int q) { return static_cast<Index>(checked_power(static_cast<std::uint64_t>(n), q)); };
    m.face = [&](int q, int i, Index x) {
      auto a = digits(q, x);
      if (i == 0)
        a.erase(a.begin());
      else if (i == q)
        a.pop_back();
      else {
        a[i - 1] = *mon.multiply(a[i - 1], a[i]);
        a.erase(a.begin() + i);
      }
      return encode(a);
    };
    m.degeneracy = [&](int q, int i, Index x) {
      auto a = digits(q, x);
      a.insert(a.begin() + i, mon.identity);
      return encode(a);
    };
    auto s = SimplicialSet::from_model(m, Index{0});
    s.set_label("N(" + mon.label + ")");
    return make_sset(std::move(s));
  }
  KeyedModel km;
  km.dim_bound = dim_bound;
  km.label = "N(" + mon.label + ")";
  km.enumerate = [&mon, n](int q) {
    std::vector<Key> out;
    Key cur(static_cast<std::size_t>(q));
    std::function<void(int, int)> rec = [&](int pos, int w) {
      if (pos == q) {
        out.push_back(cur);
        return;
      }
      for (int a = 0; a < n; ++a) {
        int wa = w + mon.weights[a];
        if (mon.weight_bound >= 0 && wa > mon.weight_bound) continue;
        cur[pos] = static_cast<std::uint32_t>(a);
        rec(pos + 1, wa);
      }
    };
    rec(0, 0);
    return out;
  };
  km.face = [&mon](int q, int i, const Key &k) {
    Key a = k;
    if (i == 0)
      a.erase(a.begin());
    else if (i == q)
      a.pop_back();
    else {
      auto prod = mon.multiply(static_cast<int>(a[i - 1]), static_cast<int>(a[i]));
      if (!prod) throw BudgetExceeded("nerve: product outside the monoid truncation");
      a[i - 1] = static_cast<std::uint32_t>(*prod);
      a.erase(a.begin() + i);
    }
    return a;
  };
  km.degeneracy = [&mon](int, int i, const Key &k) {
    Key a = k;
    a.insert(a.begin() + i, static_cast<std::uint32_t>(mon.identity));
    return a;
  };
  km.basepoint = Key{};
  auto ks = build_keyed(km);
  auto s = std::make_shared<SimplicialSet>(*ks.set);
  s->set_weights([&](int q, Index x) {
    int w = 0;
    for (auto a : ks.keys[q][x]) w += mon.weights[a];
    return w;
  });
  return s;
}

FiniteGroupoid FiniteGroupoid::translation(const FiniteMonoid &group) {
  group.validate();
  if (!group.is_group()) throw LawViolation("translation groupoid needs a group");
  const int m = group.order();
  FiniteGroupoid g;
  g.objects = m;
  // morphism (h, x): x -> h x, numbered h * m + x.
  for (int h = 0; h < m; ++h)
    for (int x = 0; x < m; ++x) {
      g.source.push_back(x);
      g.target.push_back(*group.multiply(h, x));
    }
  for (int x = 0; x < m; ++x) g.identity.push_back(group.identity * m + x);
  const int k = m * m;
  g.compose.assign(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k), -1));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (g.source[a] == g.target[b]) g.compose[a][b] = *group.multiply(a / m, b / m) * m + (b % m);
  return g;
}

SSetPtr nerve(const FiniteGroupoid &g, int dim_bound) {
  const int nm = static_cast<int>(g.source.size());
  // Key of a q-simplex: [object] for q = 0, the composable string f_1..f_q
  // (f_{i+1} starts where f_i ends) for q >= 1.
  KeyedModel km;
  km.dim_bound = dim_bound;
  km.label = "N(groupoid)";
  km.enumerate = [&g, nm](int q) {
    std::vector<Key> out;
    if (q == 0) {
      for (int o = 0; o < g.objects; ++o) out.push_back({static_cast<std::uint32_t>(o)});
      return out;
    }
    Key cur(static_cast<std::size_t>(q));
    std::function<void(int)> rec = [&](int pos) {
      if (pos == q) {
        out.push_back(cur);
        return;
      }
      for (int f = 0; f < nm; ++f) {
        if (pos > 0 && g.source[f] != g.target[cur[pos - 1]]) continue;
        cur[pos] = static_cast<std::uint32_t>(f);
        rec(pos + 1);
      }
    };
    rec(0);
    return out;
  };
  km.face = [&g](int q, int i, const Key &k) {
    if (q == 1) return Key{static_cast<std::uint32_t>(i == 0 ? g.target[k[0]] : g.source[k[0]])};
    Key a = k;
    if (i == 0)
      a.erase(a.begin());
    else if (i == q)
      a.pop_back();
    else {
      a[i - 1] = static_cast<std::uint32_t>(g.compose[k[i]][k[i - 1]]);
      a.erase(a.begin() + i);
    }
    return a;
  };
  km.degeneracy = [&g](int q, int i, const Key &k) {
    if (q == 0) return Key{static_cast<std::uint32_t>(g.identity[k[0]])};
    const int obj = i < q ? g.source[k[i]] : g.target[k[q - 1]];
    Key a = k;
    a.insert(a.begin() + i, static_cast<std::uint32_t>(g.identity[obj]));
    return a;
  };
  return build_keyed(km).set;
}

// ---------------------------------------------------------------------------

std::optional<Witness> BisimplicialSet::verify() const {
  const int P = row_bound();
  for (int p = 1; p <= P; ++p)
    for (int i = 0; i <= p; ++i)
      if (auto w = hface[p][i].verify())
        return Witness{"horizontal face d_" + std::to_string(i) + " on row " + std::to_string(p) + ": " + w->message};
  for (int p = 0; p < P; ++p)
    for (int i = 0; i <= p; ++i)
      if (auto w = hdegen[p][i].verify())
        return Witness{"horizontal degeneracy s_" + std::to_string(i) + " on row " + std::to_string(p) + ": " +
                       w->message};
  auto fail = [](const std::string &what, int p, int q, Index c) {
    return Witness{"horizontal identity " + what + " fails at (" + std::to_string(p) + "," + std::to_string(q) +
                   ") simplex " + std::to_string(c)};
  };
  for (int p = 0; p <= P; ++p) {
    const int Q = rows[p]->dim_bound();
    for (int q = 0; q <= Q; ++q)
      for (Index c = 0; c < rows[p]->size(q); ++c) {
        for (int j = 1; p >= 2 && j <= p; ++j)
          for (int i = 0; i < j; ++i)
            if (hface[p - 1][i](q, hface[p][j](q, c)) != hface[p - 1][j - 1](q, hface[p][i](q, c)))
              return fail("d_i d_j", p, q, c);
        for (int j = 0; p + 2 <= P && j <= p; ++j)
          for (int i = 0; i <= j; ++i)
            if (hdegen[p + 1][i](q, hdegen[p][j](q, c)) != hdegen[p + 1][j + 1](q, hdegen[p][i](q, c)))
              return fail("s_i s_j", p, q, c);
        for (int j = 0; p < P && j <= p; ++j) {
          const Index sc = hdegen[p][j](q, c);
          for (int i = 0; i <= p + 1; ++i) {
            const Index lhs = hface[p + 1][i](q, sc);
            Index rhs;
            if (i == j || i == j + 1)
              rhs = c;
            else if (i < j)
              rhs = hdegen[p - 1][j - 1](q, hface[p][i](q, c));
            else
              rhs = hdegen[p - 1][j](q, hface[p][i - 1](q, c));
            if (lhs != rhs) return fail("d_i s_j", p, q, c);
          }
        }
      }
  }
  return std::nullopt;
}

BisimplicialSet BisimplicialSet::constant(const SSetPtr &x, int row_bound) {
  BisimplicialSet b;
  b.rows.assign(static_cast<std::size_t>(row_bound) + 1, x);
  b.hface.resize(b.rows.size());
  b.hdegen.resize(b.rows.size());
  auto id = SimplicialMap::identity(x);
  for (int p = 0; p <= row_bound; ++p) {
    if (p >= 1) b.hface[p].assign(static_cast<std::size_t>(p) + 1, id);
    if (p < row_bound) b.hdegen[p].assign(static_cast<std::size_t>(p) + 1, id);
  }
  return b;
}

BisimplicialSet BisimplicialSet::external_product(const SSetPtr &x, const SSetPtr &y) {
  BisimplicialSet b;
  const int P = x->dim_bound();
  std::vector<ProductSet> prods;
  for (int p = 0; p <= P; ++p) {
    prods.push_back(product(discrete(x->size(p), y->dim_bound()), y));
    b.rows.push_back(prods.back().set);
  }
  b.hface.resize(b.rows.size());
  b.hdegen.resize(b.rows.size());
  for (int p = 0; p <= P; ++p) {
    for (int i = 0; p >= 1 && i <= p; ++i)
      b.hface[p].push_back(SimplicialMap::from_function(b.rows[p], b.rows[p - 1], [&, p, i](int q, Index c) {
        auto parts = prods[p].decode(q, c);
        parts[0] = x->face(p, i, parts[0]);
        return prods[p - 1].encode(q, parts);
      }));
    for (int i = 0; p < P && i <= p; ++i)
      b.hdegen[p].push_back(SimplicialMap::from_function(b.rows[p], b.rows[p + 1], [&, p, i](int q, Index c) {
        auto parts = prods[p].decode(q, c);
        parts[0] = x->degeneracy(p, i, parts[0]);
        return prods[p + 1].encode(q, parts);
      }));
  }
  return b;
}

SSetPtr diagonal(const BisimplicialSet &b, int dim_bound) {
  if (b.row_bound() < dim_bound)
    throw TruncationError("diagonal: bar direction only reaches " + std::to_string(b.row_bound()) +
                          ", need " + std::to_string(dim_bound));
  for (int n = 0; n <= dim_bound; ++n)
    if (b.rows[n]->dim_bound() < std::min(n + 1, dim_bound))
      throw TruncationError("diagonal: row " + std::to_string(n) + " is truncated too low");
  SimplicialSet::Model m;
  m.dim_bound = dim_bound;
  m.count = [&](int n) { return b.rows[n]->size(n); };
  m.face = [&](int n, int i, Index x) { return b.hface[n][i](n - 1, b.rows[n]->face(n, i, x)); };
  m.degeneracy = [&](int n, int i, Index x) { return b.hdegen[n][i](n + 1, b.rows[n]->degeneracy(n, i, x)); };
  auto s = SimplicialSet::from_model(m, b.rows[0]->basepoint());
  bool weighted = true;
  for (int n = 0; n <= dim_bound; ++n) weighted = weighted && b.rows[n]->has_explicit_weights();
  if (weighted) s.set_weights([&](int n, Index x) { return b.rows[n]->weight(n, x); });
  s.set_label("diag");
  return make_sset(std::move(s));
}

} // namespace ohs
