#include "ohs/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "case_runner.hpp"
#include "ohs/error.hpp"

namespace ohs {

namespace {

// Least (c.s, (x_{s(j)})_j) over s in Sigma_m; this pair names the orbit.
std::pair<Index, std::vector<Index>> orbit_min(const Operad &o, int q, int m, Index c, const std::vector<Index> &xs) {
  if (m <= 1) return {c, xs};
  std::pair<Index, std::vector<Index>> best{c, xs};
  std::vector<Index> ys(xs.size());
  for (const auto &s : all_permutations(m)) {
    const Index cs = o.act(q, m, c, s);
    if (cs > best.first) continue;
    for (int j = 0; j < m; ++j) ys[j] = xs[s(j)];
    if (cs < best.first || ys < best.second) best = {cs, ys};
  }
  return best;
}

// Cases whose values leave a truncation are outside the checked range.
detail::Check within_truncation(detail::Check c) {
  return [c = std::move(c)](const detail::Values &v) -> std::optional<std::string> {
    try {
      return c(v);
    } catch (const TruncationError &) {
      return std::nullopt;
    } catch (const BudgetExceeded &) {
      return std::nullopt;
    }
  };
}

std::vector<Index> tail(const Key &k, std::size_t from) { return {k.begin() + static_cast<long>(from), k.end()}; }

std::optional<std::string> same_map(const SimplicialMap &f, const SimplicialMap &g, const std::string &what) {
  for (int q = 0; q <= f.dim_bound(); ++q)
    for (Index s = 0; s < f.source().size(q); ++s)
      if (f(q, s) != g(q, s))
        return what + " fails on simplex " + std::to_string(s) + " in dimension " + std::to_string(q);
  return std::nullopt;
}

} // namespace

// ---------------------------------------------------------------------------

FreeAlgebra::FreeAlgebra(OperadPtr o, SSetPtr x, FreeAlgebraBounds b) : o_(std::move(o)), x_(std::move(x)), b_(b) {
  if (!x_->is_based()) throw Error("free algebra: X must be based");
  if (!o_->basepoint(0)) throw Error("free algebra: operad " + o_->name() + " has no basepoint in arity 0");
  if (b_.n_max < 0 || b_.n_max > o_->arity_bound())
    throw TruncationError("free algebra: arity bound " + std::to_string(b_.n_max) + " exceeds the operad's " +
                          std::to_string(o_->arity_bound()));
  if (b_.q_max > o_->dim_bound() || b_.q_max > x_->dim_bound())
    throw TruncationError("free algebra: dimension bound " + std::to_string(b_.q_max) +
                          " exceeds the operad or the space");

  auto weight = [this](int q, std::span<const Index> xs) {
    int w = 0;
    for (Index v : xs) w += x_->weight(q, v);
    return w;
  };
  KeyedModel m;
  m.dim_bound = b_.q_max;
  m.label = o_->name() + "(" + x_->label() + ")";
  m.basepoint = Key{0, *o_->basepoint(0)};
  m.enumerate = [&](int q) {
    std::vector<Key> out;
    std::vector<Index> nb;
    for (Index v = 0; v < x_->size(q); ++v)
      if (!x_->is_basepoint(q, v)) nb.push_back(v);
    for (int ar = 0; ar <= b_.n_max; ++ar) {
      const Index oc = o_->size(ar, q);
      if (oc == 0 || (ar > 0 && nb.empty())) continue;
      std::vector<std::size_t> pos(static_cast<std::size_t>(ar), 0);
      std::vector<Index> xs(static_cast<std::size_t>(ar));
      while (true) {
        for (int i = 0; i < ar; ++i) xs[i] = nb[pos[i]];
        if (b_.w_max < 0 || weight(q, xs) <= b_.w_max)
          for (Index c = 0; c < oc; ++c) {
            auto [mc, mx] = orbit_min(*o_, q, ar, c, xs);
            if (mc != c || mx != xs) continue;
            Key k{static_cast<std::uint32_t>(ar), c};
            k.insert(k.end(), xs.begin(), xs.end());
            out.push_back(std::move(k));
          }
        int i = ar - 1;
        while (i >= 0 && ++pos[i] == nb.size()) pos[i--] = 0;
        if (i < 0) break;
      }
    }
    return out;
  };
  m.face = [&](int q, int i, const Key &k) {
    const int ar = static_cast<int>(k[0]);
    std::vector<Index> xs = tail(k, 2);
    for (auto &v : xs) v = x_->face(q, i, v);
    return normalize(q - 1, ar, o_->level(ar)->face(q, i, k[1]), std::move(xs));
  };
  m.degeneracy = [&](int q, int i, const Key &k) {
    const int ar = static_cast<int>(k[0]);
    std::vector<Index> xs = tail(k, 2);
    for (auto &v : xs) v = x_->degeneracy(q, i, v);
    return normalize(q + 1, ar, o_->level(ar)->degeneracy(q, i, k[1]), std::move(xs));
  };
  keyed_ = build_keyed(m);
  auto s = std::make_shared<SimplicialSet>(*keyed_.set);
  s->set_weights([&](int q, Index c) {
    const Key &k = key(q, c);
    int w = 0;
    for (std::size_t i = 2; i < k.size(); ++i) w += x_->weight(q, k[i]);
    return w;
  });
  keyed_.set = s;

  bool trivial = true, positive = true;
  for (int q = 0; q <= b_.q_max; ++q)
    for (Index v = 0; v < x_->size(q); ++v)
      if (!x_->is_basepoint(q, v)) {
        trivial = false;
        positive = positive && x_->weight(q, v) >= 1;
      }
  if (trivial) {
    exact_ = true;
    note_ = "X is a point, so only arity 0 occurs";
  } else if (o_->max_arity() >= 0 && o_->max_arity() <= b_.n_max) {
    exact_ = true;
    note_ = "the operad vanishes above arity " + std::to_string(o_->max_arity());
  } else if (b_.w_max >= 0 && positive && b_.n_max >= b_.w_max) {
    exact_ = true;
    note_ = "arity is bounded by weight " + std::to_string(b_.w_max);
  } else {
    note_ = "truncated at arity " + std::to_string(b_.n_max);
  }
}

Key FreeAlgebra::normalize(int q, int m, Index c, std::vector<Index> xs) const {
  for (int i = m - 1; i >= 0; --i)
    if (x_->is_basepoint(q, xs[i])) {
      c = o_->insert_basepoint(q, m, c, i);
      xs.erase(xs.begin() + i);
      --m;
    }
  auto [mc, mx] = orbit_min(*o_, q, m, c, xs);
  Key k{static_cast<std::uint32_t>(m), mc};
  k.insert(k.end(), mx.begin(), mx.end());
  return k;
}

std::optional<Index> FreeAlgebra::find(int q, int m, Index c, std::vector<Index> xs) const {
  return keyed_.find(q, normalize(q, m, c, std::move(xs)));
}

Index FreeAlgebra::at(int q, int m, Index c, std::vector<Index> xs) const {
  const Key k = normalize(q, m, c, std::move(xs));
  if (auto r = keyed_.find(q, k)) return *r;
  int w = 0;
  for (std::size_t i = 2; i < k.size(); ++i) w += x_->weight(q, k[i]);
  throw TruncationError("free algebra " + keyed_.set->label() + ": element of arity " + std::to_string(k[0]) +
                        " and weight " + std::to_string(w) + " lies outside the truncation");
}

SimplicialMap FreeAlgebra::unit() const {
  if (b_.n_max < 1) throw TruncationError("free algebra: the unit needs arity 1");
  return SimplicialMap::from_function(x_, set(), [this](int q, Index v) { return at(q, 1, o_->unit(q), {v}); });
}

SubSet FreeAlgebra::filtration(int n) const {
  return subset(set(), [this, n](int q, Index c) { return arity(q, c) <= n; });
}

std::vector<std::size_t> FreeAlgebra::counts() const {
  std::vector<std::size_t> out;
  for (int q = 0; q <= b_.q_max; ++q) out.push_back(set()->size(q));
  return out;
}

FreeAlgebraPtr free_algebra(const OperadPtr &o, const SSetPtr &x, FreeAlgebraBounds b) {
  return std::make_shared<const FreeAlgebra>(o, x, b);
}

OAlgebra free_oalgebra(const FreeAlgebraPtr &fa) {
  OAlgebra a;
  a.operad = fa->operad();
  a.carrier = fa->set();
  a.n_max = fa->bounds().n_max;
  a.theta = [fa](int q, int n, Index c, std::span<const Index> ys) {
    std::vector<int> ms;
    std::vector<Index> ds, zs;
    for (Index y : ys) {
      const Key &k = fa->key(q, y);
      ms.push_back(static_cast<int>(k[0]));
      ds.push_back(k[1]);
      zs.insert(zs.end(), k.begin() + 2, k.end());
    }
    const int J = std::accumulate(ms.begin(), ms.end(), 0);
    if (J > fa->operad()->arity_bound())
      throw TruncationError("free algebra: composite arity " + std::to_string(J) + " exceeds the arity bound");
    (void)n;
    return fa->at(q, J, fa->operad()->gamma(q, c, ms, ds), zs);
  };
  return a;
}

OAlgebra point_algebra(const OperadPtr &o, int dim_bound) {
  auto p = std::make_shared<SimplicialSet>(*point(dim_bound));
  p->set_basepoint(0);
  OAlgebra a;
  a.operad = o;
  a.carrier = p;
  a.n_max = o->arity_bound();
  a.theta = [](int, int, Index, std::span<const Index>) { return Index{0}; };
  return a;
}

AxiomReport OAlgebra::verify(int q_max, const CheckBudget &budget) const {
  using namespace detail;
  const Operad &o = *operad;
  const SimplicialSet &X = *carrier;
  q_max = std::min({q_max, o.dim_bound(), X.dim_bound()});
  const int N = std::min(n_max, o.arity_bound());
  AxiomReport rep;
  auto add = [&](FamilyResult r) {
    if (!r.pass && rep.pass) rep.witness = r.witness;
    rep.pass = rep.pass && r.pass;
    rep.sampled = rep.sampled || r.sampled;
    rep.families.push_back(std::move(r));
  };
  {
    std::vector<Case> cases;
    for (int q = 0; q <= q_max; ++q)
      cases.push_back({{1}, [&, q](const Values &) -> std::optional<std::string> {
                         if (o.basepoint(q) && theta(q, 0, *o.basepoint(q), {}) != X.basepoint_simplex(q))
                           return "theta(*) is not the basepoint in dimension " + std::to_string(q);
                         return std::nullopt;
                       }});
    if (N >= 1)
      for (int q = 0; q <= q_max; ++q)
        cases.push_back({{X.size(q)}, [&, q](const Values &v) -> std::optional<std::string> {
                           const Index xs[1] = {v[0]};
                           if (theta(q, 1, o.unit(q), xs) != v[0])
                             return "theta(1; x) != x for x=" + std::to_string(v[0]);
                           return std::nullopt;
                         }});
    for (auto &c : cases) c.check = within_truncation(std::move(c.check));
    add(run_family("unit", cases, budget, 201));
  }
  {
    std::vector<Case> cases;
    for (int m = 0; m <= N; ++m)
      for (int q = 0; q <= q_max; ++q) {
        std::vector<std::uint64_t> sz{o.size(m, q), all_permutations(m).size()};
        for (int i = 0; i < m; ++i) sz.push_back(X.size(q));
        cases.push_back({sz, [&, m, q](const Values &v) -> std::optional<std::string> {
                           const auto &s = all_permutations(m)[v[1]];
                           Values xs(v.begin() + 2, v.end()), sx(xs.size());
                           for (int i = 0; i < m; ++i) sx[i] = xs[s.inverse()(i)];
                           if (theta(q, m, o.act(q, m, v[0], s), xs) != theta(q, m, v[0], sx))
                             return "theta(c.s; x) != theta(c; s.x) at " + join(v);
                           return std::nullopt;
                         }});
      }
    for (auto &c : cases) c.check = within_truncation(std::move(c.check));
    add(run_family("equivariance", cases, budget, 202));
  }
  {
    std::vector<Case> cases;
    for (int k = 0; k <= N; ++k)
      for (auto &js : compositions(k, N))
        for (int q = 0; q <= q_max; ++q) {
          const int J = std::accumulate(js.begin(), js.end(), 0);
          std::vector<std::uint64_t> sz{o.size(k, q)};
          for (int j : js) sz.push_back(o.size(j, q));
          for (int i = 0; i < J; ++i) sz.push_back(X.size(q));
          cases.push_back({sz, [&, js, k, J, q](const Values &v) -> std::optional<std::string> {
                             Values ds(v.begin() + 1, v.begin() + 1 + k), xs(v.begin() + 1 + k, v.end()), inner;
                             int off = 0;
                             for (int i = 0; i < k; ++i) {
                               inner.push_back(theta(q, js[i], ds[i], std::span<const Index>(xs).subspan(
                                                                         static_cast<std::size_t>(off),
                                                                         static_cast<std::size_t>(js[i]))));
                               off += js[i];
                             }
                             if (theta(q, J, o.gamma(q, v[0], js, ds), xs) != theta(q, k, v[0], inner))
                               return "theta(gamma(c; d); x) != theta(c; theta(d_i; x)) at " + join(v);
                             return std::nullopt;
                           }});
        }
    for (auto &c : cases) c.check = within_truncation(std::move(c.check));
    add(run_family("associativity", cases, budget, 203));
  }
  return rep;
}

// ---------------------------------------------------------------------------

SimplicialMap apply_functor(const FreeAlgebra &src, const FreeAlgebra &dst, const SimplicialMap &f) {
  if (f.source_ptr() != src.base() || f.target_ptr() != dst.base())
    throw Error("apply_functor: map does not match the free algebras");
  if (src.operad() != dst.operad()) throw Error("apply_functor: free algebras over different operads");
  return SimplicialMap::from_function(src.set(), dst.set(), [&](int q, Index s) {
    const Key &k = src.key(q, s);
    std::vector<Index> ys = tail(k, 2);
    for (auto &y : ys) y = f(q, y);
    return dst.at(q, static_cast<int>(k[0]), k[1], std::move(ys));
  });
}

SimplicialMap flatten(const FreeAlgebra &outer, const FreeAlgebra &inner, const FreeAlgebra &target,
                      const OperadMap &delta) {
  if (outer.base() != inner.set() || target.base() != inner.base())
    throw Error("flatten: free algebras are not nested");
  if (delta.source != inner.operad() || delta.target != outer.operad() || target.operad() != outer.operad())
    throw Error("flatten: operad map does not match the free algebras");
  const Operad &P = *outer.operad();
  return SimplicialMap::from_function(outer.set(), target.set(), [&](int q, Index s) {
    const Key &k = outer.key(q, s);
    std::vector<int> ms;
    std::vector<Index> ds, zs;
    for (std::size_t i = 2; i < k.size(); ++i) {
      const Key &ik = inner.key(q, k[i]);
      ms.push_back(static_cast<int>(ik[0]));
      ds.push_back(delta.apply(q, ms.back(), ik[1]));
      zs.insert(zs.end(), ik.begin() + 2, ik.end());
    }
    const int J = std::accumulate(ms.begin(), ms.end(), 0);
    if (J > P.arity_bound())
      throw TruncationError("flatten: composite arity " + std::to_string(J) + " exceeds the arity bound of " +
                            P.name());
    return target.at(q, J, P.gamma(q, k[1], ms, ds), std::move(zs));
  });
}

SimplicialMap structure_map(const FreeAlgebra &ox, const OAlgebra &x) {
  if (ox.base() != x.carrier || ox.operad() != x.operad) throw Error("structure_map: algebra does not match");
  return SimplicialMap::from_function(ox.set(), x.carrier, [&](int q, Index s) {
    const Key &k = ox.key(q, s);
    const std::vector<Index> xs = tail(k, 2);
    return x.theta(q, static_cast<int>(k[0]), k[1], xs);
  });
}

MonadCheck monad_structure(const OperadPtr &o, const SSetPtr &x, FreeAlgebraBounds b) {
  MonadCheck mc;
  mc.ox = free_algebra(o, x, b);
  mc.oox = free_algebra(o, mc.ox->set(), b);
  mc.ooox = free_algebra(o, mc.oox->set(), b);
  const auto id = identity_map(o);
  mc.eta = mc.ox->unit();
  mc.mu = flatten(*mc.oox, *mc.ox, *mc.ox, id);
  const auto id_ox = SimplicialMap::identity(mc.ox->set());
  auto note = [&](std::optional<std::string> w) {
    if (w && !mc.witness) mc.witness = w;
    return !w;
  };
  mc.unit_left = note(same_map(SimplicialMap::compose(mc.mu, mc.oox->unit()), id_ox, "mu . eta_OX = id"));
  mc.unit_right =
      note(same_map(SimplicialMap::compose(mc.mu, apply_functor(*mc.ox, *mc.oox, mc.eta)), id_ox, "mu . O(eta) = id"));
  const auto mu_ox = flatten(*mc.ooox, *mc.oox, *mc.oox, id);
  mc.associative = note(same_map(SimplicialMap::compose(mc.mu, apply_functor(*mc.ooox, *mc.oox, mc.mu)),
                                 SimplicialMap::compose(mc.mu, mu_ox), "mu . O(mu) = mu . mu_O"));
  return mc;
}

// ---------------------------------------------------------------------------

BarObject bar(const OperadMap &delta, const OAlgebra &x, BarBounds b) {
  const OperadPtr &O = delta.source, &P = delta.target;
  if (x.operad != O) throw Error("bar: the algebra is not over the source of the operad map");
  if (b.p_max < 0) throw Error("bar: negative bar degree");
  const int pm = b.p_max;
  BarObject out;
  std::vector<SSetPtr> A{x.carrier};
  std::vector<FreeAlgebraPtr> T{nullptr};
  for (int j = 1; j <= pm; ++j) {
    T.push_back(free_algebra(O, A.back(), b.free));
    A.push_back(T.back()->set());
    out.tower.push_back(T.back());
  }
  for (int p = 0; p <= pm; ++p) out.rows.push_back(free_algebra(P, A[p], b.free));
  const auto idO = identity_map(O);
  // A[j+1] -> A[j]
  auto down = [&](int j) {
    return j == 0 ? structure_map(*T[1], x) : flatten(*T[j + 1], *T[j], *T[j], idO);
  };
  // O^k applied to a map A[a] -> A[a +- 1]
  auto lift = [&](SimplicialMap h, int a, int c, int k) {
    for (int t = 1; t <= k; ++t) h = apply_functor(*T[a + t], *T[c + t], h);
    return h;
  };
  auto &bs = out.bisimplicial;
  for (const auto &r : out.rows) bs.rows.push_back(r->set());
  bs.hface.resize(static_cast<std::size_t>(pm) + 1);
  bs.hdegen.resize(static_cast<std::size_t>(pm) + 1);
  const auto &R = out.rows;
  for (int p = 1; p <= pm; ++p) {
    bs.hface[p].push_back(flatten(*R[p], *T[p], *R[p - 1], delta));
    for (int i = 1; i <= p; ++i)
      bs.hface[p].push_back(apply_functor(*R[p], *R[p - 1], lift(down(p - i), p - i + 1, p - i, i - 1)));
  }
  for (int p = 0; p < pm; ++p)
    for (int i = 0; i <= p; ++i)
      bs.hdegen[p].push_back(apply_functor(*R[p], *R[p + 1], lift(T[p - i + 1]->unit(), p - i, p - i + 1, i)));
  if (auto w = bs.verify()) throw LawViolation("bar construction: " + w->message);
  out.diagonal = diagonal(bs, std::min(pm, b.free.q_max));
  for (const auto &t : T)
    if (t) out.exact = out.exact && t->exact();
  for (const auto &r : R) out.exact = out.exact && r->exact();
  out.provenance = "B(" + P->name() + ", " + O->name() + ", " + x.carrier->label() + ")";
  return out;
}

// ---------------------------------------------------------------------------

Rectification rectify(const OperadPtr &as, const OAlgebra &x, BarBounds b) {
  const OperadPtr &A = x.operad;
  if (!A->has_to_as()) throw Error("rectify: missing augmentation to As on " + A->name());
  if (as->arity_bound() < 2) throw TruncationError("rectify: As needs arity 2 for the product");
  OperadMap delta{"delta", A, as, [A, as](int q, int n, Index c) { return as->from_as(q, n, A->to_as(q, n, c)); }};
  Rectification r;
  r.bar = bar(delta, x, b);
  const auto rows = r.bar.rows;
  const SSetPtr diag = r.bar.diagonal;
  r.multiply = [rows, as](int q, Index a, Index bb) -> std::optional<Index> {
    const Key &ka = rows[q]->key(q, a), &kb = rows[q]->key(q, bb);
    const int ms[2] = {static_cast<int>(ka[0]), static_cast<int>(kb[0])};
    if (ms[0] + ms[1] > as->arity_bound()) return std::nullopt;
    const Index ds[2] = {ka[1], kb[1]};
    std::vector<Index> xs = tail(ka, 2);
    xs.insert(xs.end(), kb.begin() + 2, kb.end());
    return rows[q]->find(q, ms[0] + ms[1], as->gamma(q, as->from_as(q, 2, 0), ms, ds), std::move(xs));
  };
  r.unit_vertex = *diag->basepoint();
  const auto &bs = r.bar.bisimplicial;
  r.rho = SimplicialMap::from_function(x.carrier, diag, [&](int q, Index v) {
    Index s = rows[0]->at(q, 1, as->unit(q), {v});
    for (int p = 0; p < q; ++p) s = bs.hdegen[p][0](q, s);
    return s;
  });
  if (auto w = r.rho.verify()) throw LawViolation("rectify: rho is not simplicial: " + w->message);

  std::mt19937_64 rng(0x5eed);
  r.strictly_associative = true;
  auto check = [&](int q, Index a, Index bb, Index c) -> std::optional<std::string> {
    ++r.associativity_cases;
    const Index u = diag->degenerate_to(0, r.unit_vertex, q);
    if (r.multiply(q, u, a) != a || r.multiply(q, a, u) != a)
      return "unit law fails for simplex " + std::to_string(a) + " in dimension " + std::to_string(q);
    auto ab = r.multiply(q, a, bb), bc = r.multiply(q, bb, c);
    if (!ab || !bc) return std::nullopt;
    auto l = r.multiply(q, *ab, c), rr = r.multiply(q, a, *bc);
    if (l != rr)
      return "(ab)c != a(bc) for simplices " + std::to_string(a) + ", " + std::to_string(bb) + ", " +
             std::to_string(c) + " in dimension " + std::to_string(q);
    return std::nullopt;
  };
  for (int q = 0; q <= diag->dim_bound() && !r.witness; ++q) {
    const std::uint64_t n = diag->size(q);
    if (n * n * n <= 2'000'000) {
      for (Index a = 0; a < n && !r.witness; ++a)
        for (Index bb = 0; bb < n && !r.witness; ++bb)
          for (Index c = 0; c < n && !r.witness; ++c) r.witness = check(q, a, bb, c);
    } else {
      std::uniform_int_distribution<Index> pick(0, static_cast<Index>(n - 1));
      for (int s = 0; s < 200'000 && !r.witness; ++s) r.witness = check(q, pick(rng), pick(rng), pick(rng));
    }
  }
  r.strictly_associative = !r.witness;
  return r;
}

Pi0Monoid pi0_monoid(const Rectification &r) {
  const auto &diag = *r.bar.diagonal;
  const auto comps = pi0(diag);
  Pi0Monoid m;
  m.components = comps.count();
  for (Index v : comps.representatives) m.weight_of.push_back(diag.weight(0, v));
  m.table.assign(static_cast<std::size_t>(m.components), std::vector<int>(static_cast<std::size_t>(m.components), -1));
  for (int i = 0; i < m.components; ++i)
    for (int j = 0; j < m.components; ++j)
      if (auto p = r.multiply(0, comps.representatives[i], comps.representatives[j]))
        m.table[i][j] = comps.of_vertex[*p];
  m.unit = comps.of_vertex[r.unit_vertex];
  const int W = m.weight_of.empty() ? -1 : *std::max_element(m.weight_of.begin(), m.weight_of.end());
  std::vector<int> sorted = m.weight_of;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(static_cast<std::size_t>(W + 1));
  std::iota(expect.begin(), expect.end(), 0);
  bool ok = sorted == expect && m.weight_of[m.unit] == 0;
  for (int i = 0; i < m.components && ok; ++i)
    for (int j = 0; j < m.components && ok; ++j) {
      const int w = m.weight_of[i] + m.weight_of[j];
      if (w <= W) ok = m.table[i][j] >= 0 && m.weight_of[m.table[i][j]] == w;
    }
  m.is_truncated_naturals = ok;
  return m;
}

// ---------------------------------------------------------------------------

SSetPtr classifying_space(const FiniteMonoid &m, int dim_bound) { return nerve(m, dim_bound); }

SSetPtr classifying_space(const SimplicialMonoid &m, int dim_bound) {
  const auto &M = *m.set;
  if (M.dim_bound() < dim_bound) throw TruncationError("classifying space: monoid is truncated too low");
  std::mt19937_64 rng(0x5eed);
  for (int q = 0; q <= dim_bound; ++q) {
    const std::uint64_t n = M.size(q);
    const Index u = M.degenerate_to(0, m.unit, q);
    auto check = [&](Index a, Index b, Index c) {
      if (m.multiply(q, u, a) != a || m.multiply(q, a, u) != a)
        throw LawViolation("classifying space: unit law fails at simplex " + std::to_string(a));
      if (m.multiply(q, m.multiply(q, a, b), c) != m.multiply(q, a, m.multiply(q, b, c)))
        throw LawViolation("classifying space: product is not associative at (" + std::to_string(a) + ", " +
                           std::to_string(b) + ", " + std::to_string(c) + ") in dimension " + std::to_string(q));
    };
    if (n * n * n <= 2'000'000) {
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
          for (Index c = 0; c < n; ++c) check(a, b, c);
    } else {
      std::uniform_int_distribution<Index> pick(0, static_cast<Index>(n - 1));
      for (int s = 0; s < 200'000; ++s) check(pick(rng), pick(rng), pick(rng));
    }
  }
  const SSetPtr mt = truncate(m.set, dim_bound);
  std::vector<ProductSet> rows;
  BisimplicialSet bs;
  bs.rows.push_back(point(dim_bound));
  rows.push_back({});
  for (int p = 1; p <= dim_bound; ++p) {
    rows.push_back(product(std::vector<SSetPtr>(static_cast<std::size_t>(p), mt)));
    bs.rows.push_back(rows.back().set);
  }
  auto decode = [&](int p, int q, Index s) { return p == 0 ? std::vector<Index>{} : rows[p].decode(q, s); };
  auto encode = [&](int p, int q, const std::vector<Index> &v) { return p == 0 ? Index{0} : rows[p].encode(q, v); };
  bs.hface.resize(static_cast<std::size_t>(dim_bound) + 1);
  bs.hdegen.resize(static_cast<std::size_t>(dim_bound) + 1);
  for (int p = 1; p <= dim_bound; ++p)
    for (int i = 0; i <= p; ++i)
      bs.hface[p].push_back(SimplicialMap::from_function(bs.rows[p], bs.rows[p - 1], [&, p, i](int q, Index s) {
        auto v = decode(p, q, s);
        if (i == 0) v.erase(v.begin());
        else if (i == p) v.pop_back();
        else {
          v[i - 1] = m.multiply(q, v[i - 1], v[i]);
          v.erase(v.begin() + i);
        }
        return encode(p - 1, q, v);
      }));
  for (int p = 0; p < dim_bound; ++p)
    for (int i = 0; i <= p; ++i)
      bs.hdegen[p].push_back(SimplicialMap::from_function(bs.rows[p], bs.rows[p + 1], [&, p, i](int q, Index s) {
        auto v = decode(p, q, s);
        v.insert(v.begin() + i, M.degenerate_to(0, m.unit, q));
        return encode(p + 1, q, v);
      }));
  if (auto w = bs.verify()) throw LawViolation("classifying space: " + w->message);
  return diagonal(bs, dim_bound);
}

// ---------------------------------------------------------------------------

Subquotient filtration_subquotient(const FreeAlgebra &fa, int n) {
  const auto &b = fa.bounds();
  if (n < 0 || n > b.n_max) throw TruncationError("filtration subquotient: arity outside the free algebra");
  const Operad &o = *fa.operad();
  const SimplicialSet &X = *fa.base();
  Subquotient out;

  const SubSet F = fa.filtration(n);
  const Quotient Q = collapse(F.set, [&](int q, Index c) { return fa.arity(q, F.inclusion(q, c)) < n; });
  out.from_filtration = Q.set;

  KeyedModel m;
  m.dim_bound = b.q_max;
  m.label = o.name() + "(" + std::to_string(n) + ") |x X^" + std::to_string(n);
  m.basepoint = Key{};
  auto canon = [&](int q, Index c, std::vector<Index> xs) {
    for (Index v : xs)
      if (X.is_basepoint(q, v)) return Key{};
    auto [mc, mx] = orbit_min(o, q, n, c, xs);
    Key k{mc};
    k.insert(k.end(), mx.begin(), mx.end());
    return k;
  };
  m.enumerate = [&](int q) {
    std::vector<Key> out_keys{Key{}};
    std::vector<Index> nb;
    for (Index v = 0; v < X.size(q); ++v)
      if (!X.is_basepoint(q, v)) nb.push_back(v);
    if (n > 0 && nb.empty()) return out_keys;
    std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
    std::vector<Index> xs(static_cast<std::size_t>(n));
    while (true) {
      int w = 0;
      for (int i = 0; i < n; ++i) {
        xs[i] = nb[pos[i]];
        w += X.weight(q, xs[i]);
      }
      if (b.w_max < 0 || w <= b.w_max)
        for (Index c = 0; c < o.size(n, q); ++c) {
          Key k = canon(q, c, xs);
          if (k[0] == c && std::equal(xs.begin(), xs.end(), k.begin() + 1)) out_keys.push_back(std::move(k));
        }
      int i = n - 1;
      while (i >= 0 && ++pos[i] == nb.size()) pos[i--] = 0;
      if (i < 0) break;
    }
    return out_keys;
  };
  m.face = [&](int q, int i, const Key &k) {
    if (k.empty()) return k;
    std::vector<Index> xs = tail(k, 1);
    for (auto &v : xs) v = X.face(q, i, v);
    return canon(q - 1, o.level(n)->face(q, i, k[0]), xs);
  };
  m.degeneracy = [&](int q, int i, const Key &k) {
    if (k.empty()) return k;
    std::vector<Index> xs = tail(k, 1);
    for (auto &v : xs) v = X.degeneracy(q, i, v);
    return canon(q + 1, o.level(n)->degeneracy(q, i, k[0]), xs);
  };
  const KeyedSet direct = build_keyed(m);
  out.direct = direct.set;

  std::vector<std::vector<std::optional<Index>>> section(static_cast<std::size_t>(b.q_max) + 1);
  for (int q = 0; q <= b.q_max; ++q) {
    section[q].resize(Q.set->size(q));
    for (Index t = 0; t < F.set->size(q); ++t) {
      auto &slot = section[q][Q.projection(q, t)];
      if (!slot) slot = t;
    }
  }
  const auto f = SimplicialMap::from_function(Q.set, direct.set, [&](int q, Index s) {
    const auto &t = section[q][s];
    if (!t || Q.set->is_basepoint(q, s)) return direct.set->basepoint_simplex(q);
    const Key &k = fa.key(q, F.inclusion(q, *t));
    if (static_cast<int>(k[0]) < n) return direct.set->basepoint_simplex(q);
    return direct.at(q, Key(k.begin() + 1, k.end()));
  });
  const auto w = f.verify();
  out.isomorphic = !w && f.is_isomorphism();
  std::string counts;
  for (int q = 0; q <= b.q_max; ++q)
    counts += (q ? "," : "") + std::to_string(Q.set->size(q)) + "/" + std::to_string(direct.set->size(q));
  out.detail = w ? w->message : (out.isomorphic ? "isomorphic" : "not bijective") + std::string("; cells per dimension ") + counts;
  return out;
}

} // namespace ohs
