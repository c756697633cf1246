#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ohs/error.hpp"
#include "ohs/operad.hpp"
#include "case_runner.hpp"

namespace ohs {

namespace detail {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t case_count(const Case &c) {
  std::uint64_t t = 1;
  for (auto s : c.sizes) t = sat_mul(t, s);
  return t;
}

} // namespace

std::string join(const Values &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

FamilyResult run_family(const std::string &name, const std::vector<Case> &cases, const CheckBudget &budget,
                        std::uint64_t salt) {
  FamilyResult r;
  r.family = name;
  std::uint64_t total = 0;
  for (const auto &c : cases) {
    const auto n = case_count(c);
    total = total > std::numeric_limits<std::uint64_t>::max() - n ? std::numeric_limits<std::uint64_t>::max()
                                                                   : total + n;
  }
  auto fail = [&](const std::string &w) {
    r.pass = false;
    r.witness = name + ": " + w;
  };
  if (total <= budget.max_cases) {
    for (const auto &c : cases) {
      if (case_count(c) == 0) continue;
      Values v(c.sizes.size(), 0);
      while (true) {
        ++r.cases;
        if (auto w = c.check(v)) {
          fail(*w);
          return r;
        }
        std::size_t i = v.size();
        while (i > 0) {
          --i;
          if (++v[i] < c.sizes[i]) break;
          v[i] = 0;
          if (i == 0) {
            i = std::numeric_limits<std::size_t>::max();
            break;
          }
        }
        if (v.empty() || i == std::numeric_limits<std::size_t>::max()) break;
      }
    }
    return r;
  }
  r.sampled = true;
  std::mt19937_64 rng(budget.seed ^ (salt * 0x9e3779b97f4a7c15ull));
  std::vector<double> weights;
  for (const auto &c : cases) weights.push_back(static_cast<double>(case_count(c)));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  for (std::uint64_t s = 0; s < budget.samples; ++s) {
    const auto &c = cases[pick(rng)];
    Values v(c.sizes.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = static_cast<Index>(std::uniform_int_distribution<std::uint64_t>(0, c.sizes[i] - 1)(rng));
    ++r.cases;
    if (auto w = c.check(v)) {
      fail(*w);
      return r;
    }
  }
  r.note = "sampled " + std::to_string(budget.samples) + " of " + std::to_string(total) + " cases";
  return r;
}

std::vector<std::vector<int>> compositions(int k, int max_sum) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur.push_back(v);
      rec(left - v);
      cur.pop_back();
    }
  };
  rec(max_sum);
  return out;
}

} // namespace detail

namespace {

using namespace detail;

std::string join_ints(std::span<const int> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

int sum(std::span<const int> v) { return std::accumulate(v.begin(), v.end(), 0); }

int fact(int n) {
  int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Every simplex through q_max is determined by its vertex tuple. Two
// simplicial maps into such a set agree once they agree on vertices. This
// covers discrete sets, 0-coskeletal sets, and products and subsets of them.
bool vertex_determined(const SimplicialSet &x, int q_max) {
  for (int q = 1; q <= std::min(q_max, x.dim_bound()); ++q) {
    std::set<std::vector<Index>> seen;
    for (Index c = 0; c < x.size(q); ++c) {
      std::vector<Index> vs;
      for (int t = 0; t <= q; ++t) vs.push_back(x.vertex(q, c, t));
      if (!seen.insert(std::move(vs)).second) return false;
    }
  }
  return true;
}

bool vertex_determined(const Operad &o, int n_max, int q_max) {
  for (int n = 0; n <= n_max; ++n)
    if (!vertex_determined(*o.level(n), q_max)) return false;
  return true;
}

const char *kVertexNote = "simplices are determined by their vertices; equations checked on vertices";

Permutation perm(int n, Index r) { return all_permutations(n)[r]; }

struct Shape {
  std::vector<int> js;
};

std::vector<Shape> gamma_shapes(int n_max) {
  std::vector<Shape> out;
  for (int k = 0; k <= n_max; ++k)
    for (auto &js : compositions(k, n_max)) out.push_back({js});
  return out;
}

} // namespace

// ---------------------------------------------------------------------------

AxiomReport check_operad_axioms(const Operad &o, int n_max, int q_max, const CheckBudget &budget) {
  n_max = std::min(n_max, o.arity_bound());
  q_max = std::min(q_max, o.dim_bound());
  if (n_max < 0 || q_max < 0) throw Error("check_operad_axioms: bounds must be non-negative");
  const bool reduce = vertex_determined(o, n_max, q_max);
  const std::string why = kVertexNote;
  const int q_eq = reduce ? 0 : q_max;
  AxiomReport rep;
  auto L = [&](int n) -> const SimplicialSet & { return *o.level(n); };
  std::uint64_t salt = 0;
  auto add = [&](FamilyResult r) {
    if (!r.pass && rep.pass) rep.witness = r.witness;
    rep.pass = rep.pass && r.pass;
    rep.sampled = rep.sampled || r.sampled;
    rep.families.push_back(std::move(r));
  };

  // levels
  {
    FamilyResult r;
    r.family = "levels";
    for (int n = 0; n <= n_max && r.pass; ++n) {
      ++r.cases;
      if (auto w = check_simplicial_identities(L(n))) {
        r.pass = false;
        r.witness = "levels: arity " + std::to_string(n) + ": " + w->message;
      }
    }
    add(std::move(r));
  }

  // action: group law and simpliciality
  {
    std::vector<Case> cases;
    for (int n = 0; n <= n_max; ++n) {
      const auto f = static_cast<std::uint64_t>(fact(n));
      for (int q = 0; q <= q_eq; ++q)
        cases.push_back({{L(n).size(q), f, f}, [&, n, q](const Values &v) -> std::optional<std::string> {
                           const auto s = perm(n, v[1]), t = perm(n, v[2]);
                           if (o.act(q, n, o.act(q, n, v[0], s), t) != o.act(q, n, v[0], s * t))
                             return "(c.s).t != c.(st) at arity " + std::to_string(n) + " q=" + std::to_string(q) +
                                    " c=" + std::to_string(v[0]) + " s=" + s.to_string() + " t=" + t.to_string();
                           if (v[1] == 0 && o.act(q, n, v[0], s) != v[0])
                             return "c.1 != c at arity " + std::to_string(n) + " c=" + std::to_string(v[0]);
                           return std::nullopt;
                         }});
      for (int q = 1; q <= q_max; ++q)
        cases.push_back({{L(n).size(q), f}, [&, n, q](const Values &v) -> std::optional<std::string> {
                           const auto s = perm(n, v[1]);
                           const Index cs = o.act(q, n, v[0], s);
                           for (int i = 0; i <= q; ++i)
                             if (L(n).face(q, i, cs) != o.act(q - 1, n, L(n).face(q, i, v[0]), s))
                               return "action does not commute with d" + std::to_string(i) + " at arity " +
                                      std::to_string(n) + " q=" + std::to_string(q) + " c=" + std::to_string(v[0]);
                           if (q < o.dim_bound())
                             for (int i = 0; i <= q; ++i)
                               if (L(n).degeneracy(q, i, cs) != o.act(q + 1, n, L(n).degeneracy(q, i, v[0]), s))
                                 return "action does not commute with s" + std::to_string(i) + " at arity " +
                                        std::to_string(n) + " q=" + std::to_string(q);
                           return std::nullopt;
                         }});
    }
    auto r = run_family("action", cases, budget, ++salt);
    if (reduce && r.note.empty()) r.note = why;
    add(std::move(r));
  }

  const auto shapes = gamma_shapes(n_max);

  // simpliciality of gamma
  {
    std::vector<Case> cases;
    for (const auto &sh : shapes) {
      const int k = static_cast<int>(sh.js.size());
      const int J = sum(sh.js);
      for (int q = 1; q <= q_max; ++q) {
        std::vector<std::uint64_t> sizes{L(k).size(q)};
        for (int j : sh.js) sizes.push_back(L(j).size(q));
        cases.push_back({sizes, [&, js = sh.js, k, J, q](const Values &v) -> std::optional<std::string> {
                           Values ds(v.begin() + 1, v.end()), fd(ds.size());
                           const Index g = o.gamma(q, v[0], js, ds);
                           for (int i = 0; i <= q; ++i) {
                             for (int m = 0; m < k; ++m) fd[m] = L(js[m]).face(q, i, ds[m]);
                             if (L(J).face(q, i, g) != o.gamma(q - 1, L(k).face(q, i, v[0]), js, fd))
                               return "gamma does not commute with d" + std::to_string(i) + " at q=" +
                                      std::to_string(q) + " arities " + join_ints(js) + " inputs " + join(v);
                           }
                           if (q < o.dim_bound())
                             for (int i = 0; i <= q; ++i) {
                               for (int m = 0; m < k; ++m) fd[m] = L(js[m]).degeneracy(q, i, ds[m]);
                               if (L(J).degeneracy(q, i, g) !=
                                   o.gamma(q + 1, L(k).degeneracy(q, i, v[0]), js, fd))
                                 return "gamma does not commute with s" + std::to_string(i) + " at q=" +
                                        std::to_string(q) + " arities " + join_ints(js) + " inputs " + join(v);
                             }
                           return std::nullopt;
                         }});
      }
    }
    add(run_family("gamma-simplicial", cases, budget, ++salt));
  }

  // unit
  if (n_max >= 1) {
    std::vector<Case> cases;
    for (int q = 0; q <= q_eq; ++q)
      for (int n = 0; n <= n_max; ++n) {
        cases.push_back({{L(n).size(q)}, [&, n, q](const Values &v) -> std::optional<std::string> {
                           const int js[1] = {n};
                           const Index ds[1] = {v[0]};
                           if (o.gamma(q, o.unit(q), js, ds) != v[0])
                             return "gamma(1; d) != d at arity " + std::to_string(n) + " q=" + std::to_string(q) +
                                    " d=" + std::to_string(v[0]);
                           std::vector<int> ones(static_cast<std::size_t>(n), 1);
                           std::vector<Index> us(static_cast<std::size_t>(n), o.unit(q));
                           const Index got = o.gamma(q, v[0], ones, us);
                           if (got != v[0])
                             return "gamma(c; 1, ..., 1) != c at arity " + std::to_string(n) + " q=" +
                                    std::to_string(q) + " c=" + std::to_string(v[0]) + " got " + std::to_string(got);
                           return std::nullopt;
                         }});
      }
    auto r = run_family("unit", cases, budget, ++salt);
    if (reduce && r.note.empty()) r.note = why;
    add(std::move(r));
  }

  // equivariance
  {
    std::vector<Case> cases;
    for (const auto &sh : shapes) {
      const int k = static_cast<int>(sh.js.size());
      for (int q = 0; q <= q_eq; ++q) {
        std::vector<std::uint64_t> a{L(k).size(q), static_cast<std::uint64_t>(fact(k))};
        for (int j : sh.js) a.push_back(L(j).size(q));
        cases.push_back({a, [&, js = sh.js, k, q](const Values &v) -> std::optional<std::string> {
                           const auto s = perm(k, v[1]);
                           Values ds(v.begin() + 2, v.end());
                           const auto si = s.inverse();
                           std::vector<int> pjs(static_cast<std::size_t>(k));
                           Values pds(static_cast<std::size_t>(k));
                           for (int i = 0; i < k; ++i) {
                             pjs[i] = js[si(i)];
                             pds[i] = ds[si(i)];
                           }
                           const Index lhs = o.gamma(q, o.act(q, k, v[0], s), js, ds);
                           const Index rhs =
                               o.act(q, sum(js), o.gamma(q, v[0], pjs, pds), block_permutation(s, js));
                           if (lhs != rhs)
                             return "gamma(c.s; d) != gamma(c; s.d).s<js> at q=" + std::to_string(q) + " arities " +
                                    join_ints(js) + " c=" + std::to_string(v[0]) + " s=" + s.to_string() +
                                    " d=" + join(ds);
                           return std::nullopt;
                         }});
        std::vector<std::uint64_t> b{L(k).size(q)};
        for (int j : sh.js) b.push_back(L(j).size(q));
        for (int j : sh.js) b.push_back(static_cast<std::uint64_t>(fact(j)));
        cases.push_back({b, [&, js = sh.js, k, q](const Values &v) -> std::optional<std::string> {
                           Values ds(v.begin() + 1, v.begin() + 1 + k), tds(static_cast<std::size_t>(k));
                           std::vector<Permutation> ts;
                           for (int i = 0; i < k; ++i) {
                             ts.push_back(perm(js[i], v[1 + k + i]));
                             tds[i] = o.act(q, js[i], ds[i], ts.back());
                           }
                           const Index lhs = o.gamma(q, v[0], js, tds);
                           const Index rhs = o.act(q, sum(js), o.gamma(q, v[0], js, ds), block_sum(ts));
                           if (lhs != rhs)
                             return "gamma(c; d.t) != gamma(c; d).(t_1 + ... + t_k) at q=" + std::to_string(q) +
                                    " arities " + join_ints(js) + " inputs " + join(v);
                           return std::nullopt;
                         }});
      }
    }
    auto r = run_family("equivariance", cases, budget, ++salt);
    if (reduce && r.note.empty()) r.note = why;
    add(std::move(r));
  }

  // associativity
  {
    std::vector<Case> cases;
    for (const auto &sh : shapes) {
      const int k = static_cast<int>(sh.js.size());
      const int J = sum(sh.js);
      for (auto &ls : compositions(J, n_max)) {
        for (int q = 0; q <= q_eq; ++q) {
          std::vector<std::uint64_t> sizes{L(k).size(q)};
          for (int j : sh.js) sizes.push_back(L(j).size(q));
          for (int l : ls) sizes.push_back(L(l).size(q));
          cases.push_back({sizes, [&, js = sh.js, ls, k, J, q](const Values &v) -> std::optional<std::string> {
                             Values ds(v.begin() + 1, v.begin() + 1 + k), es(v.begin() + 1 + k, v.end());
                             const Index lhs = o.gamma(q, o.gamma(q, v[0], js, ds), ls, es);
                             std::vector<int> inner(static_cast<std::size_t>(k));
                             Values mids(static_cast<std::size_t>(k));
                             int off = 0;
                             for (int i = 0; i < k; ++i) {
                               std::span<const int> bl(ls.data() + off, static_cast<std::size_t>(js[i]));
                               std::span<const Index> be(es.data() + off, static_cast<std::size_t>(js[i]));
                               inner[i] = sum(bl);
                               mids[i] = o.gamma(q, ds[i], bl, be);
                               off += js[i];
                             }
                             (void)J;
                             const Index rhs = o.gamma(q, v[0], inner, mids);
                             if (lhs != rhs)
                               return "gamma(gamma(c; d); e) != gamma(c; gamma(d_i; e)) at q=" + std::to_string(q) +
                                      " arities " + join_ints(js) + " / " + join_ints(ls) + " inputs " + join(v);
                             return std::nullopt;
                           }});
        }
      }
    }
    auto r = run_family("associativity", cases, budget, ++salt);
    if (reduce && r.note.empty()) r.note = why;
    add(std::move(r));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Gradings

GradingMonoid GradingMonoid::trivial() { return {}; }

GradingMonoid GradingMonoid::naturals() {
  GradingMonoid g;
  g.factors_.push_back(Factor{});
  return g;
}

GradingMonoid GradingMonoid::from_table(FiniteMonoid table, std::vector<int> generators) {
  GradingMonoid g;
  Factor f;
  f.free = false;
  f.table = std::move(table);
  f.generators = std::move(generators);
  g.factors_.push_back(std::move(f));
  g.validate();
  return g;
}

GradingMonoid GradingMonoid::product(const GradingMonoid &a, const GradingMonoid &b) {
  GradingMonoid g = a;
  g.factors_.insert(g.factors_.end(), b.factors_.begin(), b.factors_.end());
  return g;
}

GradingMonoid::Element GradingMonoid::zero() const {
  Element e;
  for (const auto &f : factors_) e.push_back(f.free ? 0 : f.table.identity);
  return e;
}

GradingMonoid::Element GradingMonoid::add(const Element &a, const Element &b) const {
  if (a.size() != factors_.size() || b.size() != factors_.size()) throw Error("grading: element of wrong shape");
  Element e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (factors_[i].free) {
      e[i] = a[i] + b[i];
    } else {
      auto m = factors_[i].table.multiply(a[i], b[i]);
      if (!m) throw TruncationError("grading: sum outside the tabulated range");
      e[i] = *m;
    }
  }
  return e;
}

GradingMonoid::Element GradingMonoid::multiple(const Element &a, int t) const {
  Element e = zero();
  for (int i = 0; i < t; ++i) e = add(e, a);
  return e;
}

GradingMonoid::Element GradingMonoid::generator_sum() const {
  Element e;
  for (const auto &f : factors_) {
    if (f.free) {
      e.push_back(1);
      continue;
    }
    int v = f.table.identity;
    for (int g : f.generators) v = *f.table.multiply(v, g);
    e.push_back(v);
  }
  return e;
}

bool GradingMonoid::is_trivial() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor &f) { return !f.free && f.table.order() == 1; });
}

std::string GradingMonoid::to_string(const Element &e) const {
  if (e.empty()) return "0";
  if (e.size() == 1) return std::to_string(e[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + ")";
}

void GradingMonoid::validate() const {
  for (const auto &f : factors_) {
    if (f.free) continue;
    f.table.validate();
    if (!f.table.is_commutative()) throw LawViolation("grading monoid " + f.table.label + " is not commutative");
    for (int g : f.generators)
      if (g < 0 || g >= f.table.order()) throw Error("grading monoid: generator out of range");
  }
}

const GradingMonoid::Element &GradedOperad::grade_of(int n, int q, Index c) const {
  const auto &comps = components[static_cast<std::size_t>(n)];
  return grade[static_cast<std::size_t>(n)][static_cast<std::size_t>(comps.of_simplex(*operad->level(n), q, c))];
}

SubSet GradedOperad::piece(int n, const GradingMonoid::Element &g) const {
  const auto &gs = grade[static_cast<std::size_t>(n)];
  std::vector<bool> keep(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) keep[i] = gs[i] == g;
  return restrict_to_components(operad->level(n), components[static_cast<std::size_t>(n)], keep);
}

GradedOperadPtr graded(const OperadPtr &o, GradingMonoid g,
                       const std::function<GradingMonoid::Element(int n, Index vertex)> &grade) {
  auto out = std::make_shared<GradedOperad>();
  out->operad = o;
  out->grading = std::move(g);
  for (int n = 0; n <= o->arity_bound(); ++n) {
    out->components.push_back(pi0(*o->level(n)));
    std::vector<GradingMonoid::Element> gs;
    for (Index v : out->components.back().representatives) gs.push_back(grade(n, v));
    out->grade.push_back(std::move(gs));
  }
  return out;
}

GradedOperadPtr trivially_graded(const OperadPtr &o) {
  return graded(o, GradingMonoid::trivial(), [](int, Index) { return GradingMonoid::Element{}; });
}

GradedOperadPtr graded_product(const GradedOperadPtr &a, const GradedOperadPtr &b) {
  auto p = product(a->operad, b->operad);
  const auto proj = p->data().factor_projections;
  return graded(p, GradingMonoid::product(a->grading, b->grading), [a, b, proj](int n, Index v) {
    auto e = a->grade_of(n, 0, proj[0](0, n, v));
    const auto &f = b->grade_of(n, 0, proj[1](0, n, v));
    e.insert(e.end(), f.begin(), f.end());
    return e;
  });
}

GradedOperadPtr self_graded_abelian(const FiniteMonoid &a, int arity_bound, int dim_bound,
                                    std::vector<int> generators) {
  return graded(abelian_monoid_operad(a, arity_bound, dim_bound), GradingMonoid::from_table(a, std::move(generators)),
                [](int, Index v) { return GradingMonoid::Element{static_cast<int>(v)}; });
}

GradingAudit audit_grading(const GradedOperad &g, int n_max) {
  const Operad &o = *g.operad;
  n_max = std::min(n_max, o.arity_bound());
  GradingAudit a;
  const auto zero = g.grading.zero();
  auto fail = [&](std::string w) {
    a.pass = false;
    a.witness = std::move(w);
    return a;
  };
  if (auto bp = o.basepoint(0)) {
    ++a.cases;
    if (g.grade_of(0, 0, *bp) != zero) return fail("basepoint has grade " + g.grading.to_string(g.grade_of(0, 0, *bp)));
  }
  if (n_max >= 1) {
    ++a.cases;
    if (g.grade_of(1, 0, o.unit(0)) != zero) return fail("unit has grade " + g.grading.to_string(g.grade_of(1, 0, o.unit(0))));
  }
  for (int n = 0; n <= n_max; ++n)
    for (Index v : g.components[n].representatives)
      for (const auto &s : all_permutations(n)) {
        ++a.cases;
        if (g.grade_of(n, 0, o.act(0, n, v, s)) != g.grade_of(n, 0, v))
          return fail("action by " + s.to_string() + " moves vertex " + std::to_string(v) + " of arity " +
                      std::to_string(n) + " to another grade");
      }
  for (int k = 0; k <= n_max; ++k)
    for (auto &js : compositions(k, n_max)) {
      std::vector<const std::vector<Index> *> reps;
      reps.push_back(&g.components[k].representatives);
      for (int j : js) reps.push_back(&g.components[j].representatives);
      std::vector<std::size_t> pos(reps.size(), 0);
      bool any = std::all_of(reps.begin(), reps.end(), [](auto *r) { return !r->empty(); });
      while (any) {
        ++a.cases;
        const Index c = (*reps[0])[pos[0]];
        std::vector<Index> ds;
        auto expect = g.grade_of(k, 0, c);
        for (int i = 0; i < k; ++i) {
          ds.push_back((*reps[i + 1])[pos[i + 1]]);
          expect = g.grading.add(expect, g.grade_of(js[i], 0, ds.back()));
        }
        const auto &got = g.grade_of(sum(js), 0, o.gamma(0, c, js, ds));
        if (got != expect)
          return fail("gamma is not additive on grades: arities " + join_ints(js) + " expected " +
                      g.grading.to_string(expect) + " got " + g.grading.to_string(got));
        std::size_t i = pos.size();
        while (i > 0) {
          --i;
          if (++pos[i] < reps[i]->size()) break;
          pos[i] = 0;
          if (i == 0) any = false;
        }
      }
    }
  return a;
}

// ---------------------------------------------------------------------------
// Operad maps

SimplicialMap OperadMap::level_map(int n) const {
  auto f = apply;
  return SimplicialMap::from_function(source->level(n), target->level(n),
                                      [f, n](int q, Index c) { return f(q, n, c); });
}

AxiomReport OperadMap::verify(int n_max, int q_max, const CheckBudget &budget) const {
  const Operad &S = *source, &T = *target;
  n_max = std::min({n_max, S.arity_bound(), T.arity_bound()});
  q_max = std::min({q_max, S.dim_bound(), T.dim_bound()});
  const int q_eq = vertex_determined(T, n_max, q_max) ? 0 : q_max;
  AxiomReport rep;
  auto add = [&](FamilyResult r) {
    if (!r.pass && rep.pass) rep.witness = r.witness;
    rep.pass = rep.pass && r.pass;
    rep.sampled = rep.sampled || r.sampled;
    rep.families.push_back(std::move(r));
  };
  {
    FamilyResult r;
    r.family = "simplicial";
    for (int n = 0; n <= n_max && r.pass; ++n) {
      ++r.cases;
      if (auto w = level_map(n).verify()) {
        r.pass = false;
        r.witness = "simplicial: arity " + std::to_string(n) + ": " + w->message;
      }
    }
    add(std::move(r));
  }
  {
    FamilyResult r;
    r.family = "unit";
    if (n_max >= 1) {
      ++r.cases;
      if (apply(0, 1, S.unit(0)) != T.unit(0)) {
        r.pass = false;
        r.witness = "unit: unit is not sent to the unit";
      }
    }
    if (S.basepoint(0) && T.basepoint(0)) {
      ++r.cases;
      if (apply(0, 0, *S.basepoint(0)) != *T.basepoint(0)) {
        r.pass = false;
        r.witness = "unit: basepoint is not sent to the basepoint";
      }
    }
    add(std::move(r));
  }
  {
    std::vector<Case> cases;
    for (int n = 0; n <= n_max; ++n)
      for (int q = 0; q <= q_eq; ++q)
        cases.push_back({{S.size(n, q), static_cast<std::uint64_t>(fact(n))},
                         [&, n, q](const Values &v) -> std::optional<std::string> {
                           const auto s = perm(n, v[1]);
                           if (apply(q, n, S.act(q, n, v[0], s)) != T.act(q, n, apply(q, n, v[0]), s))
                             return "f(c.s) != f(c).s at arity " + std::to_string(n) + " c=" + std::to_string(v[0]) +
                                    " s=" + s.to_string();
                           return std::nullopt;
                         }});
    add(run_family("equivariance", cases, budget, 101));
  }
  {
    std::vector<Case> cases;
    for (const auto &sh : gamma_shapes(n_max)) {
      const int k = static_cast<int>(sh.js.size());
      for (int q = 0; q <= q_eq; ++q) {
        std::vector<std::uint64_t> sizes{S.size(k, q)};
        for (int j : sh.js) sizes.push_back(S.size(j, q));
        cases.push_back({sizes, [&, js = sh.js, k, q](const Values &v) -> std::optional<std::string> {
                           Values ds(v.begin() + 1, v.end()), fds(ds.size());
                           for (int i = 0; i < k; ++i) fds[i] = apply(q, js[i], ds[i]);
                           if (apply(q, sum(js), S.gamma(q, v[0], js, ds)) != T.gamma(q, apply(q, k, v[0]), js, fds))
                             return "f(gamma(c; d)) != gamma(f c; f d) at arities " + join_ints(js) + " inputs " +
                                    join(v);
                           return std::nullopt;
                         }});
      }
    }
    add(run_family("gamma", cases, budget, 102));
  }
  return rep;
}

OperadMap identity_map(const OperadPtr &o) {
  return {"id", o, o, [](int, int, Index c) { return c; }};
}

OperadMap canonical_mu(const OperadPtr &as, const OperadPtr &o) {
  if (!o->has_from_as()) throw Error("operad " + o->name() + " has no canonical map from As");
  return {"mu", as, o, [as, o](int q, int n, Index c) { return o->from_as(q, n, as->to_as(q, n, c)); }};
}

OperadMap product_projection(const OperadPtr &prod, const OperadPtr &factor, int which) {
  const auto &proj = prod->data().factor_projections;
  if (which < 0 || which >= static_cast<int>(proj.size())) throw Error("product projection: not a product factor");
  return {"pr" + std::to_string(which), prod, factor, proj[static_cast<std::size_t>(which)]};
}

HtpycomVerdict check_htpycom(const OperadMap &mu, const GradedOperad &o) {
  HtpycomVerdict v;
  if (mu.target.get() != o.operad.get()) throw Error("htpycom: the map does not land in the graded operad");
  if (mu.source->arity_bound() < 2 || o.operad->arity_bound() < 2) {
    v.detail = "arity 2 is outside the truncation";
    return v;
  }
  const auto zero = o.grading.zero();
  std::optional<int> comp;
  for (Index s = 0; s < mu.source->size(2, 0); ++s) {
    const Index img = mu.apply(0, 2, s);
    const auto &g = o.grade_of(2, 0, img);
    if (g != zero) {
      v.detail = "image of vertex " + std::to_string(s) + " of As(2) has grade " + o.grading.to_string(g);
      return v;
    }
    const int c = o.components[2].of_simplex(*o.operad->level(2), 0, img);
    if (comp && *comp != c) {
      v.detail = "images of As(2) lie in different components of O_0(2)";
      return v;
    }
    comp = c;
  }
  v.pass = true;
  v.detail = "As(2) maps into one component of O_0(2)";
  return v;
}

} // namespace ohs
