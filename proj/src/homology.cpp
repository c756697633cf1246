#include "ohs/homology.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

#include "ohs/error.hpp"

namespace ohs {

namespace {

void add_to(Chain &c, Index k, const Integer &v) {
  if (sgn(v) == 0) return;
  auto [it, fresh] = c.emplace(k, v);
  if (!fresh) {
    it->second += v;
    if (sgn(it->second) == 0) c.erase(it);
  }
}

} // namespace

Chain ChainComplex::apply_boundary(int q, const Chain &c) const {
  Chain out;
  if (q == 0) return out;
  const auto &m = boundary.at(static_cast<std::size_t>(q));
  for (const auto &[j, coef] : c)
    for (const auto &[i, v] : m.cols[j]) add_to(out, static_cast<Index>(i), coef * v);
  return out;
}

bool ChainComplex::boundary_squares_to_zero() const {
  for (int q = 2; q <= top; ++q)
    for (std::size_t j = 0; j < rank(q); ++j) {
      Chain c{{static_cast<Index>(j), Integer(1)}};
      if (!apply_boundary(q - 1, apply_boundary(q, c)).empty()) return false;
    }
  return true;
}

std::optional<Index> ChainComplex::position(int q, Index simplex) const {
  const auto &v = cells.at(static_cast<std::size_t>(q));
  auto it = std::lower_bound(v.begin(), v.end(), simplex);
  if (it == v.end() || *it != simplex) return std::nullopt;
  return static_cast<Index>(it - v.begin());
}

ChainComplex normalized_chains(const SimplicialSet &x, int top) {
  if (top < 0) throw Error("normalized_chains: negative top degree");
  if (x.dim_bound() < top)
    throw TruncationError("normalized_chains: " + x.label() + " is truncated at dimension " +
                          std::to_string(x.dim_bound()) + ", below " + std::to_string(top));
  ChainComplex c;
  c.top = top;
  c.cells.resize(static_cast<std::size_t>(top) + 1);
  c.boundary.resize(static_cast<std::size_t>(top) + 1);
  for (int q = 0; q <= top; ++q) {
    auto nd = x.nondegenerate(q);
    c.cells[q].assign(nd.begin(), nd.end());
  }
  for (int q = 0; q <= top; ++q) {
    auto &m = c.boundary[q];
    m.rows = q == 0 ? 0 : c.cells[q - 1].size();
    m.cols.resize(c.cells[q].size());
    if (q == 0) continue;
    for (std::size_t j = 0; j < c.cells[q].size(); ++j) {
      Chain col;
      for (int i = 0; i <= q; ++i) {
        const Index y = x.face(q, i, c.cells[q][j]);
        if (auto p = c.position(q - 1, y)) add_to(col, *p, Integer(i % 2 == 0 ? 1 : -1));
      }
      for (auto &[r, v] : col) m.cols[j].emplace_back(r, v);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------

struct HomologyEngine::Step {
  int q;     // degree of a; b has degree q + 1
  Index a, b;
  int eps;   // coefficient of a in the boundary of b
  std::vector<std::pair<Index, Integer>> rest;  // boundary of b without a
  std::vector<std::pair<Index, Integer>> row_a; // (c, <boundary c, a>) for c != b
};

struct HomologyEngine::Solver {
  int q = 0;
  std::size_t r = 0;             // rank of the reduced boundary out of degree q
  IntMatrix Vinv;                // from the SNF of that boundary
  IntMatrix U2;                  // from the SNF of the incoming boundary in kernel coordinates
  std::vector<std::size_t> rows; // rows of U2 giving each generator's coordinate
  std::vector<Integer> modulus;  // torsion order per generator, 0 for free
  std::vector<int> dense;        // original position -> survivor index or -1
  HomologyGroup group;
};

HomologyEngine::HomologyEngine() = default;
HomologyEngine::~HomologyEngine() = default;

std::shared_ptr<const HomologyEngine> HomologyEngine::create(ChainComplex c) {
  std::shared_ptr<HomologyEngine> e(new HomologyEngine());
  e->complex_ = std::move(c);
  e->reduce();
  e->solvers_.resize(static_cast<std::size_t>(std::max(e->complex_.top, 0)));
  return e;
}

std::shared_ptr<const HomologyEngine> HomologyEngine::of(const SimplicialSet &x, int q_max) {
  if (q_max < 0) throw Error("homology: negative degree");
  if (x.dim_bound() < q_max + 1)
    throw TruncationError("homology in degree " + std::to_string(q_max) + " of " + x.label() +
                          " needs simplices through dimension " + std::to_string(q_max + 1) +
                          "; the object stops at " + std::to_string(x.dim_bound()));
  return create(normalized_chains(x, q_max + 1));
}

void HomologyEngine::reduce() {
  const int top = complex_.top;
  if (top < 0) return;
  const auto T = static_cast<std::size_t>(top);
  std::vector<std::vector<Chain>> cols(T + 1);
  std::vector<std::vector<std::set<Index>>> rows(T + 1);
  std::vector<std::vector<bool>> alive(T + 1);
  for (std::size_t p = 0; p <= T; ++p) {
    alive[p].assign(complex_.rank(static_cast<int>(p)), true);
    cols[p].resize(complex_.rank(static_cast<int>(p)));
    rows[p].resize(complex_.boundary[p].rows);
    for (std::size_t j = 0; j < cols[p].size(); ++j)
      for (const auto &[i, v] : complex_.boundary[p].cols[j]) {
        cols[p][j].emplace(static_cast<Index>(i), v);
        rows[p][i].insert(static_cast<Index>(j));
      }
  }

  auto eliminate = [&](std::size_t p, Index a, Index b) {
    Step st;
    st.q = static_cast<int>(p) - 1;
    st.a = a;
    st.b = b;
    const Chain colb = cols[p][b];
    st.eps = colb.at(a) > 0 ? 1 : -1;
    for (const auto &[r, v] : colb)
      if (r != a) st.rest.emplace_back(r, v);
    for (Index c : rows[p][a])
      if (c != b) st.row_a.emplace_back(c, cols[p][c].at(a));
    for (const auto &[c, lambda] : st.row_a) {
      const Integer factor = lambda * st.eps;
      auto &col = cols[p][c];
      for (const auto &[r, v] : colb) {
        auto [it, fresh] = col.emplace(r, -factor * v);
        if (!fresh) it->second -= factor * v;
        if (sgn(it->second) == 0) {
          col.erase(it);
          rows[p][r].erase(c);
        } else {
          rows[p][r].insert(c);
        }
      }
    }
    for (const auto &[r, v] : colb) rows[p][r].erase(b);
    cols[p][b].clear();
    alive[p][b] = false;
    if (p + 1 <= T) {
      for (Index d : rows[p + 1][b]) cols[p + 1][d].erase(b);
      rows[p + 1][b].clear();
    }
    if (p - 1 >= 1) {
      for (const auto &[r, v] : cols[p - 1][a]) rows[p - 1][r].erase(a);
      cols[p - 1][a].clear();
    }
    alive[p - 1][a] = false;
    steps_.push_back(std::move(st));
  };

  for (std::size_t p = T; p >= 1; --p) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (Index b = 0; b < cols[p].size(); ++b) {
        if (!alive[p][b]) continue;
        std::optional<Index> best;
        for (const auto &[r, v] : cols[p][b])
          if ((v == 1 || v == -1) && (!best || rows[p][r].size() < rows[p][*best].size())) best = r;
        if (!best) continue;
        eliminate(p, *best, b);
        progress = true;
      }
    }
  }

  survivors_.resize(T + 1);
  for (std::size_t p = 0; p <= T; ++p)
    for (Index x = 0; x < alive[p].size(); ++x)
      if (alive[p][x]) survivors_[p].push_back(x);
  reduced_boundary_.resize(T + 1);
  for (std::size_t p = 0; p <= T; ++p) {
    const std::size_t nr = p == 0 ? 0 : survivors_[p - 1].size();
    IntMatrix m(nr, survivors_[p].size());
    if (p >= 1) {
      std::vector<int> dense(complex_.rank(static_cast<int>(p) - 1), -1);
      for (std::size_t i = 0; i < survivors_[p - 1].size(); ++i) dense[survivors_[p - 1][i]] = static_cast<int>(i);
      for (std::size_t j = 0; j < survivors_[p].size(); ++j)
        for (const auto &[r, v] : cols[p][survivors_[p][j]]) m.at(static_cast<std::size_t>(dense[r]), j) = v;
    }
    reduced_boundary_[p] = std::move(m);
  }
}

std::size_t HomologyEngine::reduced_rank(int q) const { return survivors_.at(static_cast<std::size_t>(q)).size(); }

Chain HomologyEngine::project(int q, const Chain &c) const {
  Chain x = c;
  for (const auto &st : steps_) {
    if (st.q == q) {
      auto it = x.find(st.a);
      if (it == x.end()) continue;
      const Integer alpha = it->second * st.eps;
      x.erase(it);
      for (const auto &[r, v] : st.rest) add_to(x, r, -alpha * v);
    } else if (st.q + 1 == q) {
      x.erase(st.b);
    }
  }
  return x;
}

Chain HomologyEngine::lift(int q, Chain x) const {
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    if (it->q + 1 != q) continue;
    Integer alpha = 0;
    for (const auto &[c, lambda] : it->row_a) {
      auto f = x.find(c);
      if (f != x.end()) alpha += lambda * f->second;
    }
    add_to(x, it->b, -alpha * it->eps);
  }
  return x;
}

HomologyGroup HomologyEngine::group(int q) const {
  if (q < 0 || q >= complex_.top)
    throw Error("homology: degree out of range (" + std::to_string(q) + " not below the chain top " +
                std::to_string(complex_.top) + ")");
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto &slot = solvers_[static_cast<std::size_t>(q)];
  if (slot) return slot->group;

  auto s = std::make_shared<Solver>();
  s->q = q;
  const auto Q = static_cast<std::size_t>(q);
  const std::size_t n = survivors_[Q].size();
  s->dense.assign(complex_.rank(q), -1);
  for (std::size_t i = 0; i < n; ++i) s->dense[survivors_[Q][i]] = static_cast<int>(i);

  SNF out = smith_normal_form(reduced_boundary_[Q]);
  s->r = out.rank;
  const std::size_t k = n - s->r;
  IntMatrix kerInv(k, n); // rows r.. of Vinv
  IntMatrix ker(n, k);    // columns r.. of V
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      kerInv.at(i, j) = out.Vinv.at(s->r + i, j);
      ker.at(j, i) = out.V.at(j, s->r + i);
    }
  s->Vinv = std::move(out.Vinv);
  // Only the column space of the incoming boundary matters; drop zero columns.
  const IntMatrix &B = reduced_boundary_[Q + 1];
  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < B.cols(); ++j)
    for (std::size_t i = 0; i < B.rows(); ++i)
      if (sgn(B.at(i, j)) != 0) {
        live.push_back(j);
        break;
      }
  IntMatrix Bl(B.rows(), live.size());
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < live.size(); ++j) Bl.at(i, j) = B.at(i, live[j]);
  SNF in = smith_normal_form_left(kerInv * Bl);
  HomologyGroup g;
  g.degree = q;
  std::vector<std::size_t> free_rows;
  for (std::size_t i = 0; i < k; ++i) {
    const bool boundary_row = i < in.rank;
    if (boundary_row && in.D.at(i, i) == 1) continue;
    if (boundary_row) {
      s->rows.push_back(i);
      s->modulus.push_back(in.D.at(i, i));
      g.torsion.push_back(in.D.at(i, i));
    } else {
      free_rows.push_back(i);
    }
  }
  for (auto i : free_rows) {
    s->rows.push_back(i);
    s->modulus.push_back(0);
  }
  g.rank = static_cast<int>(free_rows.size());
  for (auto i : s->rows) {
    Chain c;
    for (std::size_t j = 0; j < n; ++j) {
      Integer v = 0;
      for (std::size_t l = 0; l < k; ++l) v += ker.at(j, l) * in.Uinv.at(l, i);
      add_to(c, survivors_[Q][j], v);
    }
    g.generators.push_back(lift(q, std::move(c)));
  }
  s->U2 = std::move(in.U);
  g.engine = shared_from_this();
  s->group = g;
  slot = s;
  return g;
}

std::vector<Integer> HomologyGroup::coordinates(const Chain &cycle) const {
  if (!engine) throw Error("homology group has no engine");
  const auto &e = *engine;
  e.group(degree); // ensures the solver exists
  const auto &s = *e.solvers_[static_cast<std::size_t>(degree)];
  const Chain x = e.project(degree, cycle);
  const std::size_t n = s.Vinv.cols();
  std::vector<Integer> z(n);
  for (const auto &[pos, v] : x) {
    const int d = s.dense.at(pos);
    if (d < 0) throw Error("internal: projected chain leaves the reduced basis");
    z[static_cast<std::size_t>(d)] = v;
  }
  std::vector<Integer> w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(z[j]) != 0) w[i] += s.Vinv.at(i, j) * z[j];
  for (std::size_t i = 0; i < s.r; ++i)
    if (sgn(w[i]) != 0) throw Error("chain is not a cycle in degree " + std::to_string(degree));
  std::vector<Integer> out;
  for (std::size_t g = 0; g < s.rows.size(); ++g) {
    Integer y = 0;
    for (std::size_t l = 0; l < s.U2.cols(); ++l) y += s.U2.at(s.rows[g], l) * w[s.r + l];
    if (sgn(s.modulus[g]) != 0) mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), s.modulus[g].get_mpz_t());
    out.push_back(y);
  }
  return out;
}

std::string HomologyGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (rank > 0) {
    os << "Z";
    if (rank > 1) os << '^' << rank;
    first = false;
  }
  for (const auto &t : torsion) {
    os << (first ? "" : " + ") << "Z/" << t.get_str();
    first = false;
  }
  return os.str();
}

HomologyGroup homology(const SimplicialSet &x, int q) { return HomologyEngine::of(x, q)->group(q); }

std::vector<HomologyGroup> homology_through(const SimplicialSet &x, int q_max) {
  auto e = HomologyEngine::of(x, q_max);
  std::vector<HomologyGroup> out;
  for (int q = 0; q <= q_max; ++q) out.push_back(e->group(q));
  return out;
}

HomologyGroup homology(const ChainComplex &c, int q) { return HomologyEngine::create(c)->group(q); }

// ---------------------------------------------------------------------------

bool HomologyMap::is_surjective() const {
  const std::size_t k = target.generator_count();
  if (k == 0) return true;
  const std::size_t m = source.generator_count();
  IntMatrix big(k, m + k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < m; ++j) big.at(i, j) = matrix.at(i, j);
    if (i < target.torsion.size()) big.at(i, m + i) = target.torsion[i];
  }
  SNF s = smith_normal_form(big, false);
  if (s.rank != k) return false;
  for (std::size_t i = 0; i < k; ++i)
    if (s.D.at(i, i) != 1) return false;
  return true;
}

bool HomologyMap::is_isomorphism() const { return source.isomorphic_to(target) && is_surjective(); }

bool HomologyMap::is_zero() const { return matrix.is_zero(); }

Chain push_forward(const SimplicialMap &f, int q, const ChainComplex &src, const ChainComplex &tgt,
                   const Chain &c) {
  Chain out;
  for (const auto &[pos, v] : c) {
    const Index y = f(q, src.cells[static_cast<std::size_t>(q)][pos]);
    if (auto p = tgt.position(q, y)) add_to(out, *p, v);
  }
  return out;
}

namespace {

void check_chain_map(const SimplicialMap &f, int q, const ChainComplex &src, const ChainComplex &tgt) {
  for (int d = std::max(q, 1); d <= std::min({q + 1, src.top, tgt.top}); ++d)
    for (Index j = 0; j < src.rank(d); ++j) {
      Chain c{{j, Integer(1)}};
      auto lhs = push_forward(f, d - 1, src, tgt, src.apply_boundary(d, c));
      auto rhs = tgt.apply_boundary(d, push_forward(f, d, src, tgt, c));
      if (lhs != rhs)
        throw Error("not a chain map: boundary fails to commute on simplex " +
                    std::to_string(src.cells[static_cast<std::size_t>(d)][j]) + " of degree " + std::to_string(d));
    }
}

} // namespace

HomologyMap induced_map(const SimplicialMap &f, const HomologyGroup &source, const HomologyGroup &target) {
  if (source.degree != target.degree) throw Error("induced_map: degree mismatch");
  const auto &src = source.engine->complex();
  const auto &tgt = target.engine->complex();
  check_chain_map(f, source.degree, src, tgt);
  HomologyMap h;
  h.degree = source.degree;
  h.source = source;
  h.target = target;
  h.matrix = IntMatrix(target.generator_count(), source.generator_count());
  for (std::size_t j = 0; j < source.generators.size(); ++j) {
    auto coords = target.coordinates(push_forward(f, source.degree, src, tgt, source.generators[j]));
    for (std::size_t i = 0; i < coords.size(); ++i) h.matrix.at(i, j) = coords[i];
  }
  return h;
}

HomologyMap induced_map(const SimplicialMap &f, int q) {
  auto es = HomologyEngine::of(f.source(), q);
  auto et = HomologyEngine::of(f.target(), q);
  return induced_map(f, es->group(q), et->group(q));
}

std::vector<IsoVerdict> is_homology_iso(const SimplicialMap &f, int q_max) {
  auto es = HomologyEngine::of(f.source(), q_max);
  auto et = HomologyEngine::of(f.target(), q_max);
  std::vector<IsoVerdict> out;
  for (int q = 0; q <= q_max; ++q) {
    auto h = induced_map(f, es->group(q), et->group(q));
    out.push_back({q, h.is_isomorphism(), h.source.to_string(), h.target.to_string()});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<ColimitResult> homology_colimit(const std::function<SimplicialMap(int g)> &ladder, int stages,
                                            int q_max, int window) {
  if (window < 1) throw Error("homology_colimit: window must be positive");
  if (stages < window)
    throw Error("homology_colimit: a window of " + std::to_string(window) + " needs at least " +
                std::to_string(window) + " maps, the ladder has " + std::to_string(stages));
  std::vector<ColimitResult> res(static_cast<std::size_t>(q_max) + 1);
  for (int q = 0; q <= q_max; ++q) res[q].degree = q;

  std::optional<SimplicialMap> prev;
  std::shared_ptr<const HomologyEngine> cur;
  int built = 0;
  for (int g = 0; g < stages; ++g) {
    SimplicialMap f = ladder(g);
    if (prev && prev->target_ptr() != f.source_ptr())
      throw Error("homology_colimit: ladder is not composable at stage " + std::to_string(g));
    if (!cur) cur = HomologyEngine::of(f.source(), q_max);
    auto next = HomologyEngine::of(f.target(), q_max);
    bool all = true;
    for (int q = 0; q <= q_max; ++q) {
      auto &r = res[q];
      if (r.stabilized) continue;
      if (r.stages.empty()) r.stages.push_back(cur->group(q));
      r.stages.push_back(next->group(q));
      auto h = induced_map(f, r.stages[g], r.stages[g + 1]);
      r.map_is_iso.push_back(h.is_isomorphism());
      int run = 0;
      for (int j = g; j >= 0 && r.map_is_iso[j]; --j) ++run;
      if (run >= window) {
        r.stabilized = true;
        r.stable_from = g + 1 - window;
        r.reached_at = g + 1;
        r.group = r.stages[r.stable_from];
        r.message = "stabilized at stage " + std::to_string(r.stable_from);
      } else {
        all = false;
      }
    }
    prev = f;
    cur = next;
    built = g + 1;
    if (all) break;
  }
  for (auto &r : res)
    if (!r.stabilized) {
      r.group = r.stages.back();
      r.message = "not stabilized by stage " + std::to_string(built);
    }
  return res;
}

ColimitResult homology_colimit_degree(const std::function<SimplicialMap(int g)> &ladder, int stages, int q,
                                      int window) {
  auto all = homology_colimit(ladder, stages, q, window);
  return all[static_cast<std::size_t>(q)];
}

std::vector<ColimitResult> guarded_colimit(const std::function<SimplicialMap(int g)> &ladder, int stages, int q_max,
                                           int window) {
  if (window < 1 || stages >= window) return homology_colimit(ladder, stages, q_max, window);
  std::vector<ColimitResult> res(static_cast<std::size_t>(std::max(q_max, -1) + 1));
  for (int q = 0; q <= q_max; ++q) {
    res[q].degree = q;
    res[q].message = "a window of " + std::to_string(window) + " needs at least " + std::to_string(window) +
                     " stages, only " + std::to_string(stages) + " allowed";
  }
  return res;
}

} // namespace ohs
