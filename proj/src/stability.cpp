#include "ohs/stability.hpp"

#include <map>
#include <numeric>
#include <set>

#include "ohs/error.hpp"

namespace ohs {

namespace {

SimplicialMap restrict_map(const SubSet &a, const SubSet &b, const std::function<Index(int, Index)> &f,
                           const std::string &what) {
  return SimplicialMap::from_function(a.set, b.set, [&](int q, Index c) {
    const Index img = f(q, a.inclusion(q, c));
    const auto &r = b.to_sub[static_cast<std::size_t>(q)][img];
    if (!r) throw LawViolation(what + " leaves the target grade");
    return *r;
  });
}

// Without the htpycom precondition, so that check_ohs can still report the
// arity verdicts when htpycom fails.
Propagator build_propagator(const GradedOperad &g, const OperadMap &mu, std::optional<Index> s_tilde0) {
  const Operad &o = *g.operad;
  Propagator p;
  p.s = g.grading.generator_sum();
  p.mu0 = mu.apply(0, 2, 0);
  if (s_tilde0) {
    if (*s_tilde0 >= o.size(0, 0)) throw Error("propagator: s~0 is not a vertex of arity 0");
    const auto &gr = g.grade_of(0, 0, *s_tilde0);
    if (gr != p.s)
      throw Error("propagator: s~0 has grade " + g.grading.to_string(gr) + " but s = " + g.grading.to_string(p.s));
    p.s_tilde0 = *s_tilde0;
  } else {
    bool found = false;
    for (Index v = 0; v < o.size(0, 0) && !found; ++v)
      if (g.grade_of(0, 0, v) == p.s) {
        p.s_tilde0 = v;
        found = true;
      }
    if (!found) throw Error("propagator: no vertex of grade " + g.grading.to_string(p.s) + " in arity 0");
  }
  const int js[2] = {0, 1};
  const Index ds[2] = {p.s_tilde0, o.unit(0)};
  p.s_tilde = o.gamma(0, p.mu0, js, ds);
  if (g.grade_of(1, 0, p.s_tilde) != p.s) throw LawViolation("propagator: s~ does not have grade s");
  p.component = g.components[1].of_vertex[p.s_tilde];
  return p;
}

} // namespace

Propagator make_propagator(const GradedOperad &g, const OperadMap &mu, std::optional<Index> s_tilde0) {
  const auto h = check_htpycom(mu, g);
  if (!h.pass) throw LawViolation("propagator: htpycom fails: " + h.detail);
  return build_propagator(g, mu, s_tilde0);
}

SimplicialMap D_map(const GradedOperad &g, int n, const GradingMonoid::Element &grade) {
  const SubSet a = g.piece(n, grade), b = g.piece(0, grade);
  const Operad &o = *g.operad;
  return restrict_map(a, b, [&](int q, Index c) { return o.collapse_to_zero(q, n, c); }, "D");
}

// ---------------------------------------------------------------------------

LadderBuilder::LadderBuilder(const GradedOperad &g, const Propagator &p, int arity) : g_(g), p_(p), n_(arity) {}

const SubSet &LadderBuilder::piece(std::deque<SubSet> &v, int arity, int t) {
  while (static_cast<int>(v.size()) <= t)
    v.push_back(g_.piece(arity, g_.grading.multiple(p_.s, static_cast<int>(v.size()))));
  return v[static_cast<std::size_t>(t)];
}

const SSetPtr &LadderBuilder::stage(int t) { return piece(src_, n_, t).set; }

const SimplicialMap &LadderBuilder::map(int t) {
  const Operad &o = *g_.operad;
  while (static_cast<int>(maps_.size()) <= t) {
    const int k = static_cast<int>(maps_.size());
    const SubSet &b = piece(src_, n_, k + 1);
    const SubSet &a = piece(src_, n_, k);
    maps_.push_back(restrict_map(a, b,
                                 [&](int q, Index c) {
                                   const int js[1] = {n_};
                                   const Index ds[1] = {c};
                                   return o.gamma(q, o.level(1)->degenerate_to(0, p_.s_tilde, q), js, ds);
                                 },
                                 "s~ . -"));
  }
  return maps_[static_cast<std::size_t>(t)];
}

const SimplicialMap &LadderBuilder::zero_map(int t) {
  const Operad &o = *g_.operad;
  while (static_cast<int>(zero_maps_.size()) <= t) {
    const int k = static_cast<int>(zero_maps_.size());
    const SubSet &b = piece(dst_, 0, k + 1);
    const SubSet &a = piece(dst_, 0, k);
    zero_maps_.push_back(restrict_map(a, b,
                                      [&](int q, Index c) {
                                        const int js[1] = {0};
                                        const Index ds[1] = {c};
                                        return o.gamma(q, o.level(1)->degenerate_to(0, p_.s_tilde, q), js, ds);
                                      },
                                      "s~ . -"));
  }
  return zero_maps_[static_cast<std::size_t>(t)];
}

const SimplicialMap &LadderBuilder::D(int t) {
  const Operad &o = *g_.operad;
  while (static_cast<int>(D_.size()) <= t) {
    const int k = static_cast<int>(D_.size());
    const SubSet &b = piece(dst_, 0, k);
    const SubSet &a = piece(src_, n_, k);
    D_.push_back(restrict_map(a, b, [&](int q, Index c) { return o.collapse_to_zero(q, n_, c); }, "D"));
  }
  return D_[static_cast<std::size_t>(t)];
}

std::optional<std::string> LadderBuilder::check_square(int t) {
  const auto &f = map(t), &f0 = zero_map(t), &d0 = D(t), &d1 = D(t + 1);
  for (int q = 0; q <= f.dim_bound(); ++q)
    for (Index c = 0; c < f.source().size(q); ++c)
      if (d1(q, f(q, c)) != f0(q, d0(q, c)))
        return "D(s~ c) != s~ D(c) at stage " + std::to_string(t) + " for simplex " + std::to_string(c) +
               " in dimension " + std::to_string(q);
  return std::nullopt;
}

StabilityLadder LadderBuilder::snapshot() const {
  StabilityLadder l;
  l.arity = n_;
  for (const auto &s : src_) l.stages.push_back(s.set);
  l.maps.assign(maps_.begin(), maps_.end());
  l.D.assign(D_.begin(), D_.end());
  return l;
}

// ---------------------------------------------------------------------------

OHSReport check_ohs(const GradedOperad &g, const OperadMap &mu, const OHSParams &params) {
  OHSReport r;
  r.params = params;
  r.htpycom = check_htpycom(mu, g);
  r.audit = audit_grading(g, params.n_max);
  r.propagator = build_propagator(g, mu, params.s_tilde0);
  bool all_iso = true;
  for (int n = 1; n <= std::min(params.n_max, g.operad->arity_bound()); ++n) {
    ArityVerdict v;
    v.arity = n;
    LadderBuilder b(g, r.propagator, n);
    const auto src = guarded_colimit([&](int t) { return b.map(t); }, params.G, params.q_max, params.window);
    const auto dst = guarded_colimit([&](int t) { return b.zero_map(t); }, params.G, params.q_max, params.window);
    int stage = 0;
    bool stable = true;
    for (const auto *side : {&src, &dst})
      for (const auto &c : *side) {
        stable = stable && c.stabilized;
        stage = std::max(stage, c.stable_from);
      }
    for (int t = 0; t < stage + 1 && v.squares_commute; ++t)
      if (auto w = b.check_square(t)) {
        v.squares_commute = false;
        v.witness = *w;
      }
    if (!stable) {
      v.status = "not-stabilized";
      for (const auto *side : {&src, &dst})
        for (const auto &c : *side)
          if (!c.stabilized && !v.witness) v.witness = c.message;
    } else {
      v.stable_stage = stage;
      v.degrees = is_homology_iso(b.D(stage), params.q_max);
      bool iso = true;
      for (const auto &d : v.degrees)
        if (!d.iso) {
          iso = false;
          if (!v.witness)
            v.witness = "arity " + std::to_string(n) + ", H_" + std::to_string(d.degree) + ": " + d.source +
                        " -> " + d.target + " is not an isomorphism";
        }
      v.status = iso ? "iso" : "not-iso";
    }
    if (v.status != "iso" || !v.squares_commute) {
      all_iso = false;
      if (!r.witness && v.status != "not-stabilized") r.witness = v.witness;
    }
    r.arities.push_back(std::move(v));
  }
  if (!r.witness && !r.htpycom.pass) r.witness = "htpycom: " + r.htpycom.detail;
  if (!r.witness && !r.audit.pass) r.witness = "grading: " + r.audit.witness.value_or("");
  bool failed = !r.audit.pass || !r.htpycom.pass;
  bool unstable = false;
  for (const auto &v : r.arities) {
    failed = failed || v.status == "not-iso" || !v.squares_commute;
    unstable = unstable || v.status == "not-stabilized";
  }
  r.is_ohs = all_iso && !failed;
  r.inconclusive = !failed && unstable;
  if (r.inconclusive && !r.witness)
    for (const auto &v : r.arities)
      if (v.status == "not-stabilized" && !r.witness) r.witness = v.witness;
  return r;
}

// ---------------------------------------------------------------------------
// Telescopes

namespace {

// The component of s^t inside a simplicial monoid with a partial product.
Telescope component_telescope(std::string name, SSetPtr set,
                              std::function<std::optional<Index>(int q, Index a, Index b)> multiply, Index s,
                              Index unit, int max_stage) {
  struct State {
    SSetPtr set;
    Components comps;
    std::vector<Index> powers; // s^t
    std::map<int, SubSet> subs;
    std::function<std::optional<Index>(int, Index, Index)> mul;
    Index s;
  };
  auto st = std::make_shared<State>();
  st->set = set;
  st->comps = pi0(*set);
  st->mul = std::move(multiply);
  st->s = s;
  st->powers.push_back(unit);
  for (int t = 1; t <= max_stage; ++t) {
    auto p = st->mul(0, s, st->powers.back());
    if (!p) {
      max_stage = t - 1;
      break;
    }
    st->powers.push_back(*p);
  }
  Telescope tel;
  tel.name = std::move(name);
  tel.max_stage = max_stage;
  auto sub = [st](int t) -> const SubSet & {
    auto it = st->subs.find(t);
    if (it == st->subs.end()) {
      std::vector<bool> keep(static_cast<std::size_t>(st->comps.count()), false);
      keep[static_cast<std::size_t>(st->comps.of_vertex[st->powers.at(static_cast<std::size_t>(t))])] = true;
      it = st->subs.emplace(t, restrict_to_components(st->set, st->comps, keep)).first;
    }
    return it->second;
  };
  tel.stage = [sub](int t) { return sub(t).set; };
  tel.step = [st, sub](const SSetPtr &, const SSetPtr &, int t) {
    const SubSet &a = sub(t);
    const SubSet &b = sub(t + 1);
    return restrict_map(a, b,
                        [&](int q, Index c) {
                          auto p = st->mul(q, st->set->degenerate_to(0, st->s, q), c);
                          if (!p) throw TruncationError("telescope: product leaves the truncation");
                          return *p;
                        },
                        "s . -");
  };
  return tel;
}

int sigma_rank_plus_one(int t, int a) {
  // rank of 1 + sigma in Sigma_{t+1}, sigma of rank a in Sigma_t
  const Permutation blocks[2] = {Permutation::identity(1), all_permutations(t)[static_cast<std::size_t>(a)]};
  return permutation_rank(block_sum(blocks));
}

} // namespace

Telescope discrete_telescope(const FiniteMonoid &m, std::vector<int> generators) {
  m.validate();
  int s = m.identity;
  for (int g : generators) {
    auto p = m.multiply(s, g);
    if (!p) throw TruncationError("discrete telescope: product of generators is outside the table");
    s = *p;
  }
  auto set = discrete(static_cast<Index>(m.order()), 2, Index(m.identity));
  return component_telescope(
      "discrete " + m.label, set,
      [m](int, Index a, Index b) -> std::optional<Index> {
        auto p = m.multiply(static_cast<int>(a), static_cast<int>(b));
        if (!p) return std::nullopt;
        return static_cast<Index>(*p);
      },
      static_cast<Index>(s), static_cast<Index>(m.identity), 64);
}

Telescope symmetric_group_telescope(int max_n, int dim_bound) {
  auto cache = std::make_shared<std::map<int, SSetPtr>>();
  Telescope tel;
  tel.name = "coprod B Sigma_n";
  tel.max_stage = max_n;
  tel.stage = [cache, dim_bound](int t) {
    auto it = cache->find(t);
    if (it == cache->end()) it = cache->emplace(t, nerve(FiniteMonoid::symmetric_group(t), dim_bound)).first;
    return it->second;
  };
  tel.step = [](const SSetPtr &from, const SSetPtr &to, int t) {
    const Index a = static_cast<Index>(all_permutations(t).size());
    const Index b = static_cast<Index>(all_permutations(t + 1).size());
    std::vector<Index> plus(a);
    for (Index r = 0; r < a; ++r) plus[r] = static_cast<Index>(sigma_rank_plus_one(t, static_cast<int>(r)));
    return SimplicialMap::from_function(from, to, [&](int q, Index x) {
      Index out = 0, mul = 1;
      for (int i = 0; i < q; ++i) {
        out += plus[x % a] * mul;
        x /= a;
        mul *= b;
      }
      return out;
    });
  };
  return tel;
}

Telescope simplicial_monoid_telescope(const SimplicialMonoid &m, Index generator, int max_stage) {
  auto mul = m.multiply;
  return component_telescope(
      "simplicial monoid", m.set, [mul](int q, Index a, Index b) -> std::optional<Index> { return mul(q, a, b); },
      generator, m.unit, max_stage);
}

Telescope rectified_telescope(const Rectification &r, Index generator_vertex) {
  return component_telescope("rectification " + r.bar.provenance, r.bar.diagonal, r.multiply, generator_vertex,
                             r.unit_vertex, 64);
}

GroupCompletionResult group_completion_homology(const Telescope &t, int stages, int q_max, int window) {
  GroupCompletionResult res;
  res.name = t.name;
  stages = std::min(stages, t.max_stage);
  if (stages < window) {
    for (int q = 0; q <= q_max; ++q) {
      ColimitResult c;
      c.degree = q;
      c.message = "not stabilized: the truncation allows only " + std::to_string(stages) + " maps";
      res.degrees.push_back(c);
    }
    return res;
  }
  std::map<int, SSetPtr> cache;
  auto get = [&](int g) -> const SSetPtr & {
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, t.stage(g)).first;
    return it->second;
  };
  res.degrees = homology_colimit([&](int g) { return t.step(get(g), get(g + 1), g); }, stages, q_max, window);
  res.stabilized = true;
  for (const auto &c : res.degrees) res.stabilized = res.stabilized && c.stabilized;
  return res;
}

Pi0Localization grothendieck_check(const FiniteMonoid &m, std::vector<int> generators) {
  m.validate();
  const int n = m.order();
  for (const auto &row : m.table)
    for (int v : row)
      if (v < 0) throw Error("Grothendieck check needs a total multiplication table");
  Pi0Localization p;
  p.commutative = m.is_commutative();
  int s = m.identity;
  for (int g : generators) s = *m.multiply(s, g);
  // colimit of M -s-> M -s-> ...: the eventual image
  std::set<int> img;
  for (int x = 0; x < n; ++x) img.insert(x);
  while (true) {
    std::set<int> next;
    for (int x : img) next.insert(*m.multiply(s, x));
    if (next == img) break;
    img = std::move(next);
  }
  p.colimit_size = static_cast<int>(img.size());
  // pairs (a, b) ~ (c, d) iff a + d + k = b + c + k for some k
  std::vector<int> parent(static_cast<std::size_t>(n * n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto mul = [&](int a, int b) { return *m.multiply(a, b); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const int l = mul(a, d), r = mul(b, c);
          bool rel = false;
          for (int k = 0; k < n && !rel; ++k) rel = mul(l, k) == mul(r, k);
          if (rel) parent[find(a * n + b)] = find(c * n + d);
        }
  std::set<int> roots;
  for (int x = 0; x < n * n; ++x) roots.insert(find(x));
  p.grothendieck_size = static_cast<int>(roots.size());
  p.match = p.commutative && p.colimit_size == p.grothendieck_size;
  return p;
}

GroupCompletionResult group_completion_homology(const FiniteMonoid &m, std::vector<int> generators, int stages,
                                                int q_max, int window) {
  auto res = group_completion_homology(discrete_telescope(m, generators), stages, q_max, window);
  bool total = true;
  for (const auto &row : m.table)
    for (int v : row) total = total && v >= 0;
  if (total) res.pi0 = grothendieck_check(m, generators);
  return res;
}

} // namespace ohs
