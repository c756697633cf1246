#include <deque>
#include <map>

#include "ohs/error.hpp"
#include "ohs/stability.hpp"

namespace ohs {

namespace {

// A simplicial set given as a quotient of an ambient one, with a section.
struct Presented {
  SSetPtr ambient;
  SSetPtr set;
  SimplicialMap project;
  std::vector<std::vector<Index>> section;
};

Presented present(const SSetPtr &ambient, const SimplicialMap &project) {
  Presented p{ambient, project.target_ptr(), project, {}};
  const int d = project.dim_bound();
  p.section.resize(static_cast<std::size_t>(d + 1));
  for (int q = 0; q <= d; ++q) {
    auto &sec = p.section[static_cast<std::size_t>(q)];
    sec.assign(p.set->size(q), static_cast<Index>(-1));
    for (Index x = ambient->size(q); x-- > 0;) sec[project(q, x)] = x;
  }
  return p;
}

Presented then_collapse(const Presented &p, const std::function<bool(int q, Index ambient)> &in_sub) {
  const Quotient c = collapse(p.set, [&](int q, Index x) { return in_sub(q, p.section[static_cast<std::size_t>(q)][x]); });
  return present(p.ambient, SimplicialMap::compose(c.projection, p.project));
}

// The map of quotients induced by f on the ambient sets.
SimplicialMap descend(const Presented &a, const Presented &b, const std::function<Index(int q, Index x)> &f) {
  return SimplicialMap::from_function(a.set, b.set, [&](int q, Index x) {
    return b.project(q, f(q, a.section[static_cast<std::size_t>(q)][x]));
  });
}

// (A x Y)/Sigma_n for A a Sigma-stable piece of a level with right action,
// via s . (a, y) = (a s^-1, s y).
struct Borel {
  ProductSet product;
  Presented quotient;
};

Borel borel(const SSetPtr &a, const std::function<Index(int q, Index c, const Permutation &s)> &act_a,
            const SigmaSet &y, int dim) {
  Borel b{product(a, y.set, dim), {}};
  const auto &perms = all_permutations(y.n);
  const Quotient q = orbit_quotient(b.product.set, static_cast<int>(perms.size()), [&](int q, Index x, int g) {
    const auto parts = b.product.decode(q, x);
    const Index out[2] = {act_a(q, parts[0], perms[static_cast<std::size_t>(g)].inverse()), y.act(q, parts[1], g)};
    return b.product.encode(q, out);
  });
  b.quotient = present(b.product.set, q.projection);
  return b;
}

struct Side {
  std::vector<Presented> full, half;
};

} // namespace

SigmaSet trivial_sigma(int n, const SSetPtr &y) {
  return {"trivial " + (y->label().empty() ? std::string("Y") : y->label()), n, y,
          [](int, Index x, int) { return x; }};
}

SigmaSet free_orbit(int n, int dim_bound, bool add_basepoint) {
  const auto &perms = all_permutations(n);
  const Index k = static_cast<Index>(perms.size());
  SigmaSet s;
  s.n = n;
  s.name = add_basepoint ? "free orbit with basepoint" : "free orbit";
  s.set = add_basepoint ? discrete(k + 1, dim_bound, k) : discrete(k, dim_bound);
  auto set = s.set;
  s.act = [set, k, n](int q, Index x, int g) {
    const Index v = set->vertex(q, x, 0);
    if (v == k) return x;
    const auto &p = all_permutations(n);
    const Index img = static_cast<Index>(permutation_rank(p[static_cast<std::size_t>(g)] * p[v]));
    return set->degenerate_to(0, img, q);
  };
  return s;
}

SigmaSet smash_power(const SSetPtr &x, int n) {
  if (!x->is_based()) throw Error("smash power: the simplicial set must be based");
  const int d = x->dim_bound();
  // keys: [0] for the basepoint, [1, x_1, ..., x_n] with no x_i basepoint
  KeyedModel m;
  m.dim_bound = d;
  m.basepoint = Key{0};
  m.label = x->label() + "^" + std::to_string(n);
  m.enumerate = [x, n](int q) {
    std::vector<Key> out{Key{0}};
    std::vector<Index> live;
    for (Index s = 0; s < x->size(q); ++s)
      if (!x->is_basepoint(q, s)) live.push_back(s);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    if (live.empty() && n > 0) return out;
    while (true) {
      Key k{1};
      for (auto i : idx) k.push_back(static_cast<std::uint32_t>(live[i]));
      out.push_back(std::move(k));
      int pos = n - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == live.size()) idx[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
    return out;
  };
  auto op = [x](bool face) {
    return [x, face](int q, int i, const Key &k) {
      if (k[0] == 0) return k;
      Key out{1};
      for (std::size_t j = 1; j < k.size(); ++j) {
        const Index y = face ? x->face(q, i, k[j]) : x->degeneracy(q, i, k[j]);
        if (x->is_basepoint(face ? q - 1 : q + 1, y)) return Key{0};
        out.push_back(static_cast<std::uint32_t>(y));
      }
      return out;
    };
  };
  m.face = op(true);
  m.degeneracy = op(false);
  auto keyed = std::make_shared<KeyedSet>(build_keyed(m));
  SigmaSet s;
  s.name = m.label;
  s.n = n;
  s.set = keyed->set;
  s.act = [keyed, n](int q, Index y, int g) {
    const Key &k = keyed->keys[static_cast<std::size_t>(q)][y];
    if (k[0] == 0) return y;
    const auto &sigma = all_permutations(n)[static_cast<std::size_t>(g)];
    Key out(k.size());
    out[0] = 1;
    // (s . x)_{s(i)} = x_i
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(sigma(i) + 1)] = k[static_cast<std::size_t>(i + 1)];
    return keyed->at(q, out);
  };
  return s;
}

SplittingReport splitting_check(const GradedOperad &g, const OperadMap &mu, const OperadMap &pi,
                                const std::function<std::vector<SigmaSet>(int n)> &ys, const SplittingParams &params) {
  const Operad &o = *g.operad;
  if (pi.source.get() != &o) throw Error("splitting: pi must start at the graded operad");
  const int n_max = std::min({params.n_max, o.arity_bound(), pi.target->arity_bound()});
  const auto pv = pi.verify(n_max, std::min(params.q_max, 1));
  if (!pv.pass) throw LawViolation("splitting: pi is not an operad map: " + pv.witness.value_or(""));
  const Propagator prop = make_propagator(g, mu);
  const int dim = std::min({params.q_max + 1, o.dim_bound(), pi.target->dim_bound()});

  SplittingReport rep;
  for (int n = 1; n <= n_max; ++n) {
    for (const SigmaSet &y : ys(n)) {
      if (y.n != n) throw Error("splitting: " + y.name + " is not a Sigma_" + std::to_string(n) + "-set");
      const int yd = std::min(dim, y.set->dim_bound());
      const SSetPtr &e = pi.target->level(n);
      const Operad &be = *pi.target;
      const Borel ez = borel(e, [&](int q, Index c, const Permutation &s) { return be.act(q, n, c, s); }, y, yd);
      const auto y_is_base = [&](const ProductSet &p, int q, Index x) {
        return y.set->is_based() && y.set->is_basepoint(q, p.decode(q, x)[1]);
      };

      // cached stages, so consecutive ladder maps share their ends
      std::deque<SubSet> pn, p0;
      std::deque<Borel> src;
      std::deque<ProductSet> tgt;
      std::deque<Presented> src_full, src_half, tgt_full, tgt_half;
      const bool based = y.set->is_based();
      auto build = [&](int t) {
        while (static_cast<int>(src.size()) <= t) {
          const int k = static_cast<int>(src.size());
          const auto grade = g.grading.multiple(prop.s, k);
          pn.push_back(g.piece(n, grade));
          p0.push_back(g.piece(0, grade));
          const SubSet &a = pn.back();
          src.push_back(borel(a.set,
                              [&a, &o, n](int q, Index c, const Permutation &s) {
                                return *a.to_sub[static_cast<std::size_t>(q)][o.act(q, n, a.inclusion(q, c), s)];
                              },
                              y, yd));
          tgt.push_back(product(p0.back().set, ez.quotient.set, yd));
          const Borel &b = src.back();
          const ProductSet &tp = tgt.back();
          src_full.push_back(b.quotient);
          tgt_full.push_back(present(tp.set, SimplicialMap::identity(tp.set)));
          if (based) {
            src_half.push_back(then_collapse(b.quotient, [&](int q, Index x) { return y_is_base(b.product, q, x); }));
            tgt_half.push_back(then_collapse(tgt_full.back(), [&](int q, Index x) {
              const Index z = tp.decode(q, x)[1];
              return y_is_base(ez.product, q, ez.quotient.section[static_cast<std::size_t>(q)][z]);
            }));
          }
        }
      };
      // (c, y) |-> (D c, [pi c, y]) on ambient simplices
      auto split = [&](int t) {
        return [&, t](int q, Index x) {
          const auto parts = src[static_cast<std::size_t>(t)].product.decode(q, x);
          const Index c = pn[static_cast<std::size_t>(t)].inclusion(q, parts[0]);
          const auto &to0 = p0[static_cast<std::size_t>(t)].to_sub[static_cast<std::size_t>(q)];
          const Index d = *to0[o.collapse_to_zero(q, n, c)];
          const Index ey[2] = {pi.apply(q, n, c), parts[1]};
          const Index z = ez.quotient.project(q, ez.product.encode(q, ey));
          const Index out[2] = {d, z};
          return tgt[static_cast<std::size_t>(t)].encode(q, out);
        };
      };
      auto shift = [&](int q, const SubSet &from, const SubSet &to, Index c, int arity) {
        const int js[1] = {arity};
        const Index ds[1] = {from.inclusion(q, c)};
        const Index img = o.gamma(q, o.level(1)->degenerate_to(0, prop.s_tilde, q), js, ds);
        const auto &r = to.to_sub[static_cast<std::size_t>(q)][img];
        if (!r) throw LawViolation("splitting: s~ . - leaves the target grade");
        return *r;
      };
      auto src_step = [&](int t) {
        return [&, t](int q, Index x) {
          const auto parts = src[static_cast<std::size_t>(t)].product.decode(q, x);
          const Index out[2] = {shift(q, pn[static_cast<std::size_t>(t)], pn[static_cast<std::size_t>(t + 1)], parts[0], n),
                                parts[1]};
          return src[static_cast<std::size_t>(t + 1)].product.encode(q, out);
        };
      };
      auto tgt_step = [&](int t) {
        return [&, t](int q, Index x) {
          const auto parts = tgt[static_cast<std::size_t>(t)].decode(q, x);
          const Index out[2] = {shift(q, p0[static_cast<std::size_t>(t)], p0[static_cast<std::size_t>(t + 1)], parts[0], 0),
                                parts[1]};
          return tgt[static_cast<std::size_t>(t + 1)].encode(q, out);
        };
      };

      for (bool half : {false, true}) {
        if (half && !based) continue;
        auto &S = half ? src_half : src_full;
        auto &T = half ? tgt_half : tgt_full;
        SplittingCase sc;
        sc.arity = n;
        sc.y = y.name;
        sc.half_smash = half;
        std::vector<std::optional<SimplicialMap>> sm, tm;
        auto ladder = [&](std::deque<Presented> &side, bool source) {
          return [&, source](int t) {
            build(t + 1);
            auto &cache = source ? sm : tm;
            if (static_cast<int>(cache.size()) <= t) cache.resize(static_cast<std::size_t>(t + 1));
            auto &slot = cache[static_cast<std::size_t>(t)];
            if (!slot) {
              const auto step = source ? std::function<Index(int, Index)>(src_step(t))
                                       : std::function<Index(int, Index)>(tgt_step(t));
              slot = descend(side[static_cast<std::size_t>(t)], side[static_cast<std::size_t>(t + 1)], step);
            }
            return *slot;
          };
        };
        const int qd = std::min(params.q_max, yd - 1);
        const auto hs = guarded_colimit(ladder(S, true), params.G, qd, params.window);
        const auto ht = guarded_colimit(ladder(T, false), params.G, qd, params.window);
        int stage = 0;
        bool stable = true;
        for (const auto *side : {&hs, &ht})
          for (const auto &c : *side) {
            stable = stable && c.stabilized;
            stage = std::max(stage, c.stable_from);
          }
        if (!stable) {
          sc.status = "not-stabilized";
          rep.inconclusive = true;
        } else {
          build(stage);
          const auto f = descend(S[static_cast<std::size_t>(stage)], T[static_cast<std::size_t>(stage)], split(stage));
          if (auto w = f.verify()) throw LawViolation("splitting map is not simplicial: " + w->message);
          sc.degrees = is_homology_iso(f, qd);
          bool iso = true;
          for (const auto &d : sc.degrees)
            if (!d.iso) {
              iso = false;
              if (!rep.witness)
                rep.witness = "arity " + std::to_string(n) + ", Y = " + y.name + (half ? " (half-smash)" : "") +
                              ", H_" + std::to_string(d.degree) + ": " + d.source + " -> " + d.target;
            }
          sc.status = iso ? "iso" : "not-iso";
          if (!iso) rep.pass = false;
        }
        rep.cases.push_back(std::move(sc));
      }
    }
  }
  if (rep.inconclusive && rep.pass) rep.pass = false;
  return rep;
}

} // namespace ohs
