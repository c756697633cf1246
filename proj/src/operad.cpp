#include "ohs/operad.hpp"

#include <array>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "ohs/error.hpp"

namespace ohs {

namespace {

int factorial(int n) {
  int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// gamma in As on ranks, tabulated per arity profile. Entry index is
// c, then d_1, ..., d_k in mixed radix (k!, j_1!, ..., j_k!).
class AsGammaTables {
public:
  const std::vector<int> &table(std::span<const int> js) {
    // Arities are at most 8, so the profile fits in base 10 digits.
    std::uint64_t code = js.size();
    for (int j : js) code = code * 10 + static_cast<std::uint64_t>(j);
    thread_local std::unordered_map<std::uint64_t, const std::vector<int> *> local;
    if (auto hit = local.find(code); hit != local.end()) return *hit->second;
    const auto &t = build(js);
    local.emplace(code, &t);
    return t;
  }

private:
  const std::vector<int> &build(std::span<const int> js) {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<int> key(js.begin(), js.end());
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    const int k = static_cast<int>(js.size());
    std::size_t total = static_cast<std::size_t>(factorial(k));
    for (int j : js) total *= static_cast<std::size_t>(factorial(j));
    if (total > 50'000'000) throw BudgetExceeded("As composition table too large");
    std::vector<int> t(total);
    const auto &cs = all_permutations(k);
    std::vector<Permutation> blocks(static_cast<std::size_t>(k));
    std::vector<int> digits(static_cast<std::size_t>(k));
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (int i = k - 1; i >= 0; --i) {
        const auto f = static_cast<std::size_t>(factorial(js[i]));
        digits[i] = static_cast<int>(rest % f);
        rest /= f;
      }
      for (int i = 0; i < k; ++i) blocks[i] = all_permutations(js[i])[digits[i]];
      const Permutation &c = cs[rest];
      t[idx] = permutation_rank(block_permutation(c, js) * block_sum(blocks));
    }
    return tables_.emplace(std::move(key), std::move(t)).first->second;
  }

  std::mutex mu_;
  std::map<std::vector<int>, std::vector<int>> tables_;
};

AsGammaTables &as_tables() {
  static AsGammaTables t;
  return t;
}

// Rank multiplication tables for Sigma_n.
const std::vector<std::vector<int>> &sigma_table(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, FiniteMonoid::symmetric_group(n).table).first;
  return it->second;
}

std::vector<SSetPtr> empty_levels(int n) { return std::vector<SSetPtr>(static_cast<std::size_t>(n) + 1); }

void check_bounds(int arity_bound, int dim_bound) {
  if (arity_bound < 0) throw Error("operad: negative arity bound");
  if (dim_bound < 1) throw TruncationError("operad levels need at least dimension 1 (for path components)");
  if (arity_bound > 8) throw BudgetExceeded("operad: arity bound above 8 is not supported");
}

} // namespace

// ---------------------------------------------------------------------------

Operad::Operad(OperadData d) : d_(std::move(d)) {
  if (static_cast<int>(d_.levels.size()) != d_.arity_bound + 1)
    throw Error("operad " + d_.name + ": wrong number of levels");
  for (int n = 0; n <= d_.arity_bound; ++n)
    if (!d_.levels[n] || d_.levels[n]->dim_bound() < d_.dim_bound)
      throw TruncationError("operad " + d_.name + ": level " + std::to_string(n) + " is truncated too low");
  if (d_.arity_bound >= 1 && d_.unit >= d_.levels[1]->size(0)) throw Error("operad " + d_.name + ": bad unit");
  if (d_.basepoint && *d_.basepoint >= d_.levels[0]->size(0))
    throw Error("operad " + d_.name + ": bad basepoint");
}

const SSetPtr &Operad::level(int n) const {
  if (n < 0 || n > d_.arity_bound)
    throw TruncationError("operad " + d_.name + ": arity " + std::to_string(n) + " exceeds the arity bound " +
                          std::to_string(d_.arity_bound));
  return d_.levels[static_cast<std::size_t>(n)];
}

Index Operad::gamma(int q, Index c, std::span<const int> js, std::span<const Index> ds) const {
  if (js.size() != ds.size()) throw Error("gamma: arity list and input list differ in length");
  const int total = std::accumulate(js.begin(), js.end(), 0);
  if (total > d_.arity_bound || static_cast<int>(js.size()) > d_.arity_bound)
    throw BudgetExceeded("operad " + d_.name + ": composite arity " + std::to_string(total) +
                         " exceeds the arity bound " + std::to_string(d_.arity_bound));
  return d_.gamma(q, c, js, ds);
}

Index Operad::act(int q, int n, Index c, const Permutation &s) const { return d_.act(q, n, c, s); }

Index Operad::unit(int q) const { return level(1)->degenerate_to(0, d_.unit, q); }

std::optional<Index> Operad::basepoint(int q) const {
  if (!d_.basepoint) return std::nullopt;
  return level(0)->degenerate_to(0, *d_.basepoint, q);
}

Index Operad::insert_basepoint(int q, int n, Index c, int i) const {
  auto bp = basepoint(q);
  if (!bp) throw Error("operad " + d_.name + " has no basepoint in arity 0");
  std::vector<int> js(static_cast<std::size_t>(n), 1);
  std::vector<Index> ds(static_cast<std::size_t>(n), unit(q));
  js[i] = 0;
  ds[i] = *bp;
  return gamma(q, c, js, ds);
}

Index Operad::collapse_to_zero(int q, int n, Index c) const {
  auto bp = basepoint(q);
  if (!bp) throw Error("operad " + d_.name + " has no basepoint in arity 0");
  std::vector<int> js(static_cast<std::size_t>(n), 0);
  std::vector<Index> ds(static_cast<std::size_t>(n), *bp);
  return gamma(q, c, js, ds);
}

SimplicialMap Operad::action_map(int n, const Permutation &s) const {
  return SimplicialMap::from_function(level(n), level(n), [this, n, &s](int q, Index c) { return act(q, n, c, s); });
}

Index Operad::from_as(int q, int n, int sigma_rank) const {
  if (!d_.from_as) throw Error("operad " + d_.name + " has no canonical map from As");
  return d_.from_as(q, n, sigma_rank);
}

int Operad::to_as(int q, int n, Index c) const {
  if (!d_.to_as) throw Error("operad " + d_.name + " has no augmentation to As");
  return d_.to_as(q, n, c);
}

// ---------------------------------------------------------------------------

OperadPtr as_operad(int arity_bound, int dim_bound) {
  check_bounds(arity_bound, dim_bound);
  OperadData d;
  d.name = "As";
  d.arity_bound = arity_bound;
  d.dim_bound = dim_bound;
  d.levels = empty_levels(arity_bound);
  for (int n = 0; n <= arity_bound; ++n) {
    auto s = std::make_shared<SimplicialSet>(*discrete(static_cast<Index>(factorial(n)), dim_bound));
    s->set_label("As(" + std::to_string(n) + ")");
    d.levels[n] = s;
  }
  d.gamma = [](int, Index c, std::span<const int> js, std::span<const Index> ds) {
    const auto &t = as_tables().table(js);
    std::size_t idx = c;
    for (std::size_t i = 0; i < js.size(); ++i) idx = idx * static_cast<std::size_t>(factorial(js[i])) + ds[i];
    return static_cast<Index>(t[idx]);
  };
  d.act = [](int, int n, Index c, const Permutation &s) {
    return static_cast<Index>(sigma_table(n)[c][permutation_rank(s)]);
  };
  d.unit = 0;
  d.basepoint = 0;
  d.from_as = [](int, int, int r) { return static_cast<Index>(r); };
  d.to_as = [](int, int, Index c) { return static_cast<int>(c); };
  return std::make_shared<const Operad>(std::move(d));
}

OperadPtr corrupted_as(int arity_bound) {
  auto base = as_operad(arity_bound);
  OperadData d = base->data();
  d.name = "As(corrupted)";
  auto g = d.gamma;
  // gamma(swap; 1, 1) should be the swap itself.
  d.gamma = [g](int q, Index c, std::span<const int> js, std::span<const Index> ds) {
    if (js.size() == 2 && js[0] == 1 && js[1] == 1 && c == 1) return Index{0};
    return g(q, c, js, ds);
  };
  return std::make_shared<const Operad>(std::move(d));
}

OperadPtr com_operad(int arity_bound, int dim_bound) {
  check_bounds(arity_bound, dim_bound);
  OperadData d;
  d.name = "Com";
  d.arity_bound = arity_bound;
  d.dim_bound = dim_bound;
  d.levels = empty_levels(arity_bound);
  for (int n = 0; n <= arity_bound; ++n) d.levels[n] = point(dim_bound);
  d.gamma = [](int, Index, std::span<const int>, std::span<const Index>) { return Index{0}; };
  d.act = [](int, int, Index, const Permutation &) { return Index{0}; };
  d.unit = 0;
  d.basepoint = 0;
  d.from_as = [](int, int, int) { return Index{0}; };
  return std::make_shared<const Operad>(std::move(d));
}

OperadPtr barratt_eccles(int arity_bound, int dim_bound) {
  check_bounds(arity_bound, dim_bound);
  OperadData d;
  d.name = "BarrattEccles";
  d.arity_bound = arity_bound;
  d.dim_bound = dim_bound;
  d.levels = empty_levels(arity_bound);
  auto radix = std::make_shared<std::vector<std::vector<std::uint64_t>>>();
  for (int n = 0; n <= arity_bound; ++n) {
    const std::uint64_t f = static_cast<std::uint64_t>(factorial(n));
    std::vector<std::uint64_t> pw{1};
    for (int t = 0; t <= dim_bound + 1; ++t) {
      if (pw.back() > (std::uint64_t{1} << 31) / f) {
        pw.push_back(0); // marks overflow; only fatal if that level is requested
        break;
      }
      pw.push_back(pw.back() * f);
    }
    if (static_cast<int>(pw.size()) < dim_bound + 2 || pw[static_cast<std::size_t>(dim_bound) + 1] == 0)
      throw BudgetExceeded("Barratt-Eccles level " + std::to_string(n) + " has too many simplices in dimension " +
                           std::to_string(dim_bound));
    radix->push_back(pw);
    SimplicialSet::Model m;
    m.dim_bound = dim_bound;
    m.count = [pw](int q) { return static_cast<Index>(pw[static_cast<std::size_t>(q) + 1]); };
    m.face = [f](int q, int i, Index x) {
      std::uint64_t out = 0, mul = 1, y = x;
      for (int t = 0; t <= q; ++t) {
        const std::uint64_t digit = y % f;
        y /= f;
        if (t == i) continue;
        out += digit * mul;
        mul *= f;
      }
      return static_cast<Index>(out);
    };
    m.degeneracy = [f](int q, int i, Index x) {
      std::uint64_t out = 0, mul = 1, y = x;
      for (int t = 0; t <= q; ++t) {
        const std::uint64_t digit = y % f;
        y /= f;
        out += digit * mul;
        mul *= f;
        if (t == i) {
          out += digit * mul;
          mul *= f;
        }
      }
      return static_cast<Index>(out);
    };
    auto s = SimplicialSet::from_model(m, n == 0 ? std::optional<Index>(0) : std::nullopt);
    s.set_label("E(" + std::to_string(n) + ")");
    d.levels[n] = make_sset(std::move(s));
  }
  d.gamma = [](int q, Index c, std::span<const int> js, std::span<const Index> ds) {
    const auto &t = as_tables().table(js);
    const int k = static_cast<int>(js.size());
    const std::uint64_t fk = static_cast<std::uint64_t>(factorial(k));
    int J = 0;
    std::array<std::uint64_t, 9> fj{}, rem{};
    for (std::size_t i = 0; i < ds.size(); ++i) rem[i] = ds[i];
    for (std::size_t i = 0; i < js.size(); ++i) {
      fj[i] = static_cast<std::uint64_t>(factorial(js[i]));
      J += js[i];
    }
    const std::uint64_t fJ = static_cast<std::uint64_t>(factorial(J));
    std::uint64_t cr = c, out = 0, mul = 1;
    for (int s = 0; s <= q; ++s) {
      std::size_t idx = cr % fk;
      cr /= fk;
      for (std::size_t i = 0; i < js.size(); ++i) {
        idx = idx * fj[i] + rem[i] % fj[i];
        rem[i] /= fj[i];
      }
      out += static_cast<std::uint64_t>(t[idx]) * mul;
      mul *= fJ;
    }
    return static_cast<Index>(out);
  };
  d.act = [](int q, int n, Index c, const Permutation &s) {
    const auto &tab = sigma_table(n);
    const int sr = permutation_rank(s);
    const std::uint64_t f = static_cast<std::uint64_t>(factorial(n));
    std::uint64_t y = c, out = 0, mul = 1;
    for (int t = 0; t <= q; ++t) {
      out += static_cast<std::uint64_t>(tab[y % f][sr]) * mul;
      y /= f;
      mul *= f;
    }
    return static_cast<Index>(out);
  };
  d.unit = 0;
  d.basepoint = 0;
  d.from_as = [](int q, int n, int r) {
    const std::uint64_t f = static_cast<std::uint64_t>(factorial(n));
    std::uint64_t out = 0, mul = 1;
    for (int t = 0; t <= q; ++t) {
      out += static_cast<std::uint64_t>(r) * mul;
      mul *= f;
    }
    return static_cast<Index>(out);
  };
  return std::make_shared<const Operad>(std::move(d));
}

OperadPtr monoid_operad(const FiniteMonoid &m, int arity_bound, int dim_bound) {
  check_bounds(arity_bound, dim_bound);
  m.validate();
  for (const auto &row : m.table)
    for (int v : row)
      if (v < 0) throw LawViolation("monoid operad needs a total multiplication table");
  OperadData d;
  d.name = "M[" + m.label + "]";
  d.arity_bound = arity_bound;
  d.dim_bound = dim_bound;
  d.levels = empty_levels(arity_bound);
  for (int n = 0; n <= arity_bound; ++n)
    d.levels[n] = n == 0 ? point(dim_bound) : discrete(n == 1 ? static_cast<Index>(m.order()) : 0, dim_bound);
  d.gamma = [m](int, Index c, std::span<const int> js, std::span<const Index> ds) {
    if (js.empty()) return c;
    if (js[0] == 0) return Index{0};
    return static_cast<Index>(*m.multiply(static_cast<int>(c), static_cast<int>(ds[0])));
  };
  d.act = [](int, int, Index c, const Permutation &) { return c; };
  d.unit = arity_bound >= 1 ? static_cast<Index>(m.identity) : 0;
  d.basepoint = 0;
  d.max_arity = 1;
  return std::make_shared<const Operad>(std::move(d));
}

OperadPtr abelian_monoid_operad(const FiniteMonoid &a, int arity_bound, int dim_bound) {
  check_bounds(arity_bound, dim_bound);
  a.validate();
  for (const auto &row : a.table)
    for (int v : row)
      if (v < 0) throw LawViolation("abelian monoid operad needs a total multiplication table");
  if (!a.is_commutative())
    throw LawViolation("abelian monoid operad: " + a.label +
                       " is not commutative, so the trivial action is not equivariant");
  OperadData d;
  d.name = "A[" + a.label + "]";
  d.arity_bound = arity_bound;
  d.dim_bound = dim_bound;
  d.levels = empty_levels(arity_bound);
  for (int n = 0; n <= arity_bound; ++n) d.levels[n] = discrete(static_cast<Index>(a.order()), dim_bound);
  d.gamma = [a](int, Index c, std::span<const int>, std::span<const Index> ds) {
    int v = static_cast<int>(c);
    for (Index x : ds) v = *a.multiply(v, static_cast<int>(x));
    return static_cast<Index>(v);
  };
  d.act = [](int, int, Index c, const Permutation &) { return c; };
  d.unit = static_cast<Index>(a.identity);
  d.basepoint = static_cast<Index>(a.identity);
  const Index e = static_cast<Index>(a.identity);
  d.from_as = [e](int, int, int) { return e; };
  return std::make_shared<const Operad>(std::move(d));
}

OperadPtr product(const OperadPtr &o, const OperadPtr &p) {
  const int N = std::min(o->arity_bound(), p->arity_bound());
  const int D = std::min(o->dim_bound(), p->dim_bound());
  auto sets = std::make_shared<std::vector<ProductSet>>();
  OperadData d;
  d.name = o->name() + " x " + p->name();
  d.arity_bound = N;
  d.dim_bound = D;
  d.levels = empty_levels(N);
  for (int n = 0; n <= N; ++n) {
    sets->push_back(ohs::product(truncate(o->level(n), D), truncate(p->level(n), D)));
    d.levels[n] = sets->back().set;
  }
  d.gamma = [o, p, sets](int q, Index c, std::span<const int> js, std::span<const Index> ds) {
    const auto &S = *sets;
    auto cp = S[js.size()].decode(q, c);
    std::vector<Index> a(ds.size()), b(ds.size());
    int J = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      auto dp = S[static_cast<std::size_t>(js[i])].decode(q, ds[i]);
      a[i] = dp[0];
      b[i] = dp[1];
      J += js[i];
    }
    const Index parts[2] = {o->gamma(q, cp[0], js, a), p->gamma(q, cp[1], js, b)};
    return S[static_cast<std::size_t>(J)].encode(q, parts);
  };
  d.act = [o, p, sets](int q, int n, Index c, const Permutation &s) {
    const auto &S = (*sets)[static_cast<std::size_t>(n)];
    auto cp = S.decode(q, c);
    const Index parts[2] = {o->act(q, n, cp[0], s), p->act(q, n, cp[1], s)};
    return S.encode(q, parts);
  };
  if (N >= 1) {
    const Index u[2] = {o->unit(0), p->unit(0)};
    d.unit = (*sets)[1].encode(0, u);
  }
  if (o->basepoint(0) && p->basepoint(0)) {
    const Index b[2] = {*o->basepoint(0), *p->basepoint(0)};
    d.basepoint = (*sets)[0].encode(0, b);
  }
  if (o->max_arity() >= 0 || p->max_arity() >= 0) {
    const int a = o->max_arity() < 0 ? p->max_arity() : o->max_arity();
    const int b = p->max_arity() < 0 ? o->max_arity() : p->max_arity();
    d.max_arity = std::min(a, b);
  }
  if (o->has_from_as() && p->has_from_as())
    d.from_as = [o, p, sets](int q, int n, int r) {
      const Index parts[2] = {o->from_as(q, n, r), p->from_as(q, n, r)};
      return (*sets)[static_cast<std::size_t>(n)].encode(q, parts);
    };
  if (o->has_to_as())
    d.to_as = [o, sets](int q, int n, Index c) {
      return o->to_as(q, n, (*sets)[static_cast<std::size_t>(n)].decode(q, c)[0]);
    };
  else if (p->has_to_as())
    d.to_as = [p, sets](int q, int n, Index c) {
      return p->to_as(q, n, (*sets)[static_cast<std::size_t>(n)].decode(q, c)[1]);
    };
  for (int which = 0; which < 2; ++which)
    d.factor_projections.push_back([sets, which](int q, int n, Index c) {
      return (*sets)[static_cast<std::size_t>(n)].decode(q, c)[static_cast<std::size_t>(which)];
    });
  return std::make_shared<const Operad>(std::move(d));
}

OperadPtr product_over_as(const OperadPtr &o, const OperadPtr &p) {
  if (!o->has_to_as() || !p->has_to_as())
    throw Error("product over As: missing augmentation to As on " + (!o->has_to_as() ? o->name() : p->name()));
  auto prod = ohs::product(o, p);
  const auto &proj = prod->data().factor_projections;
  auto subs = std::make_shared<std::vector<SubSet>>();
  OperadData d;
  d.name = o->name() + " x_As " + p->name();
  d.arity_bound = prod->arity_bound();
  d.dim_bound = prod->dim_bound();
  d.levels = empty_levels(d.arity_bound);
  for (int n = 0; n <= d.arity_bound; ++n) {
    subs->push_back(subset(prod->level(n), [&](int q, Index c) {
      return o->to_as(q, n, proj[0](q, n, c)) == p->to_as(q, n, proj[1](q, n, c));
    }));
    d.levels[n] = subs->back().set;
  }
  auto down = [subs](int q, int n, Index c) {
    const auto &r = (*subs)[static_cast<std::size_t>(n)].to_sub[static_cast<std::size_t>(q)][c];
    if (!r) throw Error("product over As: structure map leaves the pullback");
    return *r;
  };
  auto up = [subs](int q, int n, Index c) { return (*subs)[static_cast<std::size_t>(n)].inclusion(q, c); };
  d.gamma = [prod, up, down](int q, Index c, std::span<const int> js, std::span<const Index> ds) {
    std::vector<Index> lifted(ds.size());
    int J = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      lifted[i] = up(q, js[i], ds[i]);
      J += js[i];
    }
    return down(q, J, prod->gamma(q, up(q, static_cast<int>(js.size()), c), js, lifted));
  };
  d.act = [prod, up, down](int q, int n, Index c, const Permutation &s) {
    return down(q, n, prod->act(q, n, up(q, n, c), s));
  };
  if (d.arity_bound >= 1) d.unit = down(0, 1, prod->unit(0));
  if (prod->basepoint(0)) d.basepoint = down(0, 0, *prod->basepoint(0));
  d.max_arity = prod->max_arity();
  if (prod->has_from_as())
    d.from_as = [prod, down](int q, int n, int r) { return down(q, n, prod->from_as(q, n, r)); };
  d.to_as = [prod, up](int q, int n, Index c) { return prod->to_as(q, n, up(q, n, c)); };
  for (int which = 0; which < 2; ++which)
    d.factor_projections.push_back([proj, up, which](int q, int n, Index c) {
      return proj[static_cast<std::size_t>(which)](q, n, up(q, n, c));
    });
  return std::make_shared<const Operad>(std::move(d));
}

} // namespace ohs
