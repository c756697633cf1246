#include "ohs/sset.hpp"

#include <algorithm>
#include <bit>

#include "ohs/error.hpp"

namespace ohs {

int Decomposition::base_dim(int q) const { return q - std::popcount(mask); }

std::vector<int> Decomposition::word() const {
  std::vector<int> w;
  for (int j = 31; j >= 0; --j)
    if (mask & (1u << j)) w.push_back(j);
  return w;
}

SimplicialSet SimplicialSet::from_model(const Model &model, std::optional<Index> basepoint) {
  if (model.dim_bound < 0) throw Error("simplicial set needs dim_bound >= 0");
  if (model.dim_bound > 30) throw BudgetExceeded("dimension bound above 30 is not supported");
  SimplicialSet s;
  s.dim_bound_ = model.dim_bound;
  s.levels_.resize(static_cast<std::size_t>(model.dim_bound) + 1);
  for (int q = 0; q <= model.dim_bound; ++q) s.levels_[q].size = model.count(q);
  for (int q = 0; q <= model.dim_bound; ++q) {
    auto &lv = s.levels_[q];
    if (q >= 1) {
      lv.faces.assign(static_cast<std::size_t>(q) + 1, std::vector<Index>(lv.size));
      for (int i = 0; i <= q; ++i)
        for (Index x = 0; x < lv.size; ++x) {
          Index y = model.face(q, i, x);
          if (y >= s.levels_[q - 1].size)
            throw Error("model face out of range in level " + std::to_string(q));
          lv.faces[i][x] = y;
        }
    }
    if (q < model.dim_bound) {
      lv.degens.assign(static_cast<std::size_t>(q) + 1, std::vector<Index>(lv.size));
      for (int i = 0; i <= q; ++i)
        for (Index x = 0; x < lv.size; ++x) {
          Index y = model.degeneracy(q, i, x);
          if (y >= s.levels_[q + 1].size)
            throw Error("model degeneracy out of range in level " + std::to_string(q));
          lv.degens[i][x] = y;
        }
    }
  }
  if (basepoint) {
    if (*basepoint >= s.size(0)) throw Error("basepoint is not a vertex");
    s.basepoint_ = basepoint;
  }
  s.finalize();
  return s;
}

void SimplicialSet::finalize() {
  for (int q = 0; q <= dim_bound_; ++q) {
    auto &lv = levels_[q];
    lv.decomposition.assign(lv.size, Decomposition{});
    lv.nondegenerate.clear();
    for (Index x = 0; x < lv.size; ++x) {
      Decomposition d{x, 0};
      if (q >= 1) {
        const auto &below = levels_[q - 1];
        for (int i = 0; i < q; ++i) {
          Index y = lv.faces[i][x];
          if (below.degens[i][y] != x) continue;
          const Decomposition &dy = below.decomposition[y];
          const std::uint32_t low = dy.mask & ((1u << i) - 1u);
          const std::uint32_t high = (dy.mask >> i) << (i + 1);
          d = Decomposition{dy.base, low | (1u << i) | high};
          break;
        }
      }
      lv.decomposition[x] = d;
      if (d.mask == 0) lv.nondegenerate.push_back(x);
    }
  }
  if (basepoint_) {
    Index b = *basepoint_;
    for (int q = 0; q <= dim_bound_; ++q) {
      levels_[q].basepoint = b;
      if (q < dim_bound_) b = levels_[q].degens[0][b];
    }
  }
}

Index SimplicialSet::size(int q) const {
  require_dim(q, "size");
  return levels_[q].size;
}

void SimplicialSet::require_dim(int q, const char *context) const {
  if (q < 0 || q > dim_bound_)
    throw TruncationError(std::string(context) + ": dimension " + std::to_string(q) +
                          " is outside the truncation bound " + std::to_string(dim_bound_) +
                          (label_.empty() ? "" : " of " + label_));
}

Index SimplicialSet::face(int q, int i, Index x) const {
  return levels_[static_cast<std::size_t>(q)].faces[static_cast<std::size_t>(i)][x];
}

Index SimplicialSet::degeneracy(int q, int i, Index x) const {
  if (q >= dim_bound_) require_dim(q + 1, "degeneracy");
  return levels_[static_cast<std::size_t>(q)].degens[static_cast<std::size_t>(i)][x];
}

Index SimplicialSet::vertex(int q, Index x, int k) const {
  Index v = x;
  for (int d = q; d > k; --d) v = face(d, d, v);
  for (int j = 0; j < k; ++j) v = face(k - j, 0, v);
  return v;
}

Index SimplicialSet::degenerate_to(int p, Index x, int q) const {
  for (int d = p; d < q; ++d) x = degeneracy(d, 0, x);
  return x;
}

const Decomposition &SimplicialSet::decomposition(int q, Index x) const {
  return levels_[static_cast<std::size_t>(q)].decomposition[x];
}

std::span<const Index> SimplicialSet::nondegenerate(int q) const {
  require_dim(q, "nondegenerate");
  return levels_[q].nondegenerate;
}

Index SimplicialSet::from_decomposition(int q, const Decomposition &d) const {
  auto w = d.word();
  int dim = d.base_dim(q);
  Index x = d.base;
  for (auto it = w.rbegin(); it != w.rend(); ++it) x = degeneracy(dim++, *it, x);
  return x;
}

Index SimplicialSet::basepoint_simplex(int q) const {
  if (!basepoint_) throw Error("simplicial set " + label_ + " has no basepoint");
  require_dim(q, "basepoint_simplex");
  return levels_[q].basepoint;
}

bool SimplicialSet::is_basepoint(int q, Index x) const {
  return basepoint_ && levels_[static_cast<std::size_t>(q)].basepoint == x;
}

int SimplicialSet::weight(int q, Index x) const {
  if (!weights_.empty()) return weights_[static_cast<std::size_t>(q)][x];
  return is_basepoint(q, x) ? 0 : 1;
}

void SimplicialSet::set_weights(const std::function<int(int q, Index x)> &w) {
  std::vector<std::vector<int>> table(levels_.size());
  for (int q = 0; q <= dim_bound_; ++q) {
    table[q].resize(levels_[q].size);
    for (Index x = 0; x < levels_[q].size; ++x) table[q][x] = w(q, x);
  }
  for (int q = 1; q <= dim_bound_; ++q)
    for (Index x = 0; x < levels_[q].size; ++x) {
      for (int i = 0; i <= q; ++i)
        if (table[q - 1][face(q, i, x)] > table[q][x])
          throw LawViolation("weight increases under d_" + std::to_string(i) + " at simplex " +
                             std::to_string(x) + " of level " + std::to_string(q));
    }
  for (int q = 0; q < dim_bound_; ++q)
    for (Index x = 0; x < levels_[q].size; ++x)
      for (int i = 0; i <= q; ++i)
        if (table[q + 1][degeneracy(q, i, x)] != table[q][x])
          throw LawViolation("weight changes under s_" + std::to_string(i));
  weights_ = std::move(table);
}

void SimplicialSet::set_basepoint(Index vertex) {
  if (vertex >= size(0)) throw Error("basepoint is not a vertex");
  basepoint_ = vertex;
  finalize();
}

std::size_t SimplicialSet::total_simplices() const {
  std::size_t n = 0;
  for (const auto &lv : levels_) n += lv.size;
  return n;
}

std::optional<Witness> check_simplicial_identities(const SimplicialSet &x) {
  const int D = x.dim_bound();
  auto fail = [](const std::string &what, int q, Index c) {
    return Witness{what + " fails at simplex " + std::to_string(c) + " of level " + std::to_string(q)};
  };
  for (int q = 2; q <= D; ++q)
    for (Index c = 0; c < x.size(q); ++c)
      for (int j = 1; j <= q; ++j)
        for (int i = 0; i < j; ++i)
          if (x.face(q - 1, i, x.face(q, j, c)) != x.face(q - 1, j - 1, x.face(q, i, c)))
            return fail("d_" + std::to_string(i) + " d_" + std::to_string(j) + " = d_" +
                            std::to_string(j - 1) + " d_" + std::to_string(i),
                        q, c);
  for (int q = 0; q + 2 <= D; ++q)
    for (Index c = 0; c < x.size(q); ++c)
      for (int j = 0; j <= q; ++j)
        for (int i = 0; i <= j; ++i)
          if (x.degeneracy(q + 1, i, x.degeneracy(q, j, c)) !=
              x.degeneracy(q + 1, j + 1, x.degeneracy(q, i, c)))
            return fail("s_i s_j = s_{j+1} s_i", q, c);
  for (int q = 0; q < D; ++q)
    for (Index c = 0; c < x.size(q); ++c)
      for (int j = 0; j <= q; ++j) {
        const Index sc = x.degeneracy(q, j, c);
        for (int i = 0; i <= q + 1; ++i) {
          const Index lhs = x.face(q + 1, i, sc);
          Index rhs;
          if (i == j || i == j + 1)
            rhs = c;
          else if (i < j)
            rhs = x.degeneracy(q - 1, j - 1, x.face(q, i, c));
          else
            rhs = x.degeneracy(q - 1, j, x.face(q, i - 1, c));
          if (lhs != rhs)
            return fail("d_" + std::to_string(i) + " s_" + std::to_string(j), q, c);
        }
      }
  return std::nullopt;
}

SimplicialMap::SimplicialMap(SSetPtr source, SSetPtr target, std::vector<std::vector<Index>> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  const int D = std::min(source_->dim_bound(), target_->dim_bound());
  if (static_cast<int>(images_.size()) != D + 1) throw Error("simplicial map: level count mismatch");
  for (int q = 0; q <= D; ++q) {
    if (images_[q].size() != source_->size(q)) throw Error("simplicial map: level size mismatch");
    for (Index y : images_[q])
      if (y >= target_->size(q)) throw Error("simplicial map: image out of range");
  }
}

SimplicialMap SimplicialMap::from_function(SSetPtr source, SSetPtr target,
                                           const std::function<Index(int q, Index x)> &f) {
  const int D = std::min(source->dim_bound(), target->dim_bound());
  std::vector<std::vector<Index>> images(static_cast<std::size_t>(D) + 1);
  for (int q = 0; q <= D; ++q) {
    images[q].resize(source->size(q));
    for (Index x = 0; x < source->size(q); ++x) images[q][x] = f(q, x);
  }
  return SimplicialMap(std::move(source), std::move(target), std::move(images));
}

SimplicialMap SimplicialMap::identity(SSetPtr x) {
  return from_function(x, x, [](int, Index c) { return c; });
}

SimplicialMap SimplicialMap::compose(const SimplicialMap &g, const SimplicialMap &f) {
  if (f.target_ != g.source_ && f.target_.get() != g.source_.get())
    throw Error("compose: maps are not composable");
  return from_function(f.source_, g.target_, [&](int q, Index x) { return g(q, f(q, x)); });
}

Index SimplicialMap::operator()(int q, Index x) const {
  if (q < 0 || q >= static_cast<int>(images_.size()))
    throw TruncationError("simplicial map evaluated above its dimension bound");
  return images_[static_cast<std::size_t>(q)][x];
}

int SimplicialMap::dim_bound() const { return static_cast<int>(images_.size()) - 1; }

std::optional<Witness> SimplicialMap::verify() const {
  const int D = dim_bound();
  const auto &S = *source_;
  const auto &T = *target_;
  for (int q = 1; q <= D; ++q)
    for (Index x = 0; x < S.size(q); ++x)
      for (int i = 0; i <= q; ++i)
        if ((*this)(q - 1, S.face(q, i, x)) != T.face(q, i, (*this)(q, x)))
          return Witness{"map does not commute with d_" + std::to_string(i) + " at simplex " +
                         std::to_string(x) + " of level " + std::to_string(q)};
  for (int q = 0; q < D; ++q)
    for (Index x = 0; x < S.size(q); ++x)
      for (int i = 0; i <= q; ++i)
        if ((*this)(q + 1, S.degeneracy(q, i, x)) != T.degeneracy(q, i, (*this)(q, x)))
          return Witness{"map does not commute with s_" + std::to_string(i) + " at simplex " +
                         std::to_string(x) + " of level " + std::to_string(q)};
  if (S.is_based() && T.is_based() && (*this)(0, *S.basepoint()) != *T.basepoint())
    return Witness{"map does not preserve the basepoint"};
  return std::nullopt;
}

bool SimplicialMap::is_isomorphism() const {
  if (verify()) return false;
  for (int q = 0; q <= dim_bound(); ++q) {
    if (source_->size(q) != target_->size(q)) return false;
    std::vector<bool> hit(target_->size(q), false);
    for (Index y : images_[q]) {
      if (hit[y]) return false;
      hit[y] = true;
    }
  }
  return true;
}

} // namespace ohs
