#include "ohs/snf.hpp"

#include <sstream>

#include "ohs/error.hpp"

namespace ohs {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto &row : init) {
    if (row.size() != cols_) throw Error("ragged matrix literal");
    for (long v : row) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix &o) const {
  if (cols_ != o.rows_) throw Error("matrix shape mismatch");
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer &a = at(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (sgn(o.at(k, j)) != 0) r.at(i, j) += a * o.at(k, j);
    }
  return r;
}

bool IntMatrix::operator==(const IntMatrix &o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool IntMatrix::is_zero() const {
  for (const auto &v : data_)
    if (sgn(v) != 0) return false;
  return true;
}

Integer IntMatrix::determinant() const {
  if (rows_ != cols_) throw Error("determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  // Bareiss.
  IntMatrix a = *this;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a.at(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a.at(p, k)) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix SparseMatrix::to_dense() const {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto &[i, v] : cols[j]) m.at(i, j) += v;
  return m;
}

std::vector<Integer> SNF::diagonal() const {
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D.at(i, i));
  return d;
}

namespace {

// Elementary operations applied to the working matrix and mirrored on the
// transforms so that U * M * V = A holds throughout.
struct Worker {
  IntMatrix A, U, Uinv, V, Vinv;
  bool track;
  bool track_right = true;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < A.cols(); ++c) std::swap(A.at(i, c), A.at(j, c));
    if (!track) return;
    for (std::size_t c = 0; c < U.cols(); ++c) std::swap(U.at(i, c), U.at(j, c));
    for (std::size_t r = 0; r < Uinv.rows(); ++r) std::swap(Uinv.at(r, i), Uinv.at(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < A.rows(); ++r) std::swap(A.at(r, i), A.at(r, j));
    if (!track || !track_right) return;
    for (std::size_t r = 0; r < V.rows(); ++r) std::swap(V.at(r, i), V.at(r, j));
    for (std::size_t c = 0; c < Vinv.cols(); ++c) std::swap(Vinv.at(i, c), Vinv.at(j, c));
  }
  // row_i += k * row_j
  void add_row(std::size_t i, std::size_t j, const Integer &k) {
    if (sgn(k) == 0) return;
    for (std::size_t c = 0; c < A.cols(); ++c)
      if (sgn(A.at(j, c)) != 0) A.at(i, c) += k * A.at(j, c);
    if (!track) return;
    for (std::size_t c = 0; c < U.cols(); ++c)
      if (sgn(U.at(j, c)) != 0) U.at(i, c) += k * U.at(j, c);
    for (std::size_t r = 0; r < Uinv.rows(); ++r)
      if (sgn(Uinv.at(r, i)) != 0) Uinv.at(r, j) -= k * Uinv.at(r, i);
  }
  // col_i += k * col_j
  void add_col(std::size_t i, std::size_t j, const Integer &k) {
    if (sgn(k) == 0) return;
    for (std::size_t r = 0; r < A.rows(); ++r)
      if (sgn(A.at(r, j)) != 0) A.at(r, i) += k * A.at(r, j);
    if (!track || !track_right) return;
    for (std::size_t r = 0; r < V.rows(); ++r)
      if (sgn(V.at(r, j)) != 0) V.at(r, i) += k * V.at(r, j);
    for (std::size_t c = 0; c < Vinv.cols(); ++c)
      if (sgn(Vinv.at(i, c)) != 0) Vinv.at(j, c) -= k * Vinv.at(i, c);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < A.cols(); ++c) A.at(i, c) = -A.at(i, c);
    if (!track) return;
    for (std::size_t c = 0; c < U.cols(); ++c) U.at(i, c) = -U.at(i, c);
    for (std::size_t r = 0; r < Uinv.rows(); ++r) Uinv.at(r, i) = -Uinv.at(r, i);
  }

  // Smallest nonzero |entry| in the lower-right block starting at t.
  bool find_pivot(std::size_t t, std::size_t &pi, std::size_t &pj) const {
    bool found = false;
    for (std::size_t i = t; i < A.rows(); ++i)
      for (std::size_t j = t; j < A.cols(); ++j) {
        const Integer &v = A.at(i, j);
        if (sgn(v) == 0) continue;
        if (!found || mpz_cmpabs(v.get_mpz_t(), A.at(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
          found = true;
          if (v == 1 || v == -1) return true;
        }
      }
    return found;
  }
};

} // namespace

namespace {

SNF run_snf(const IntMatrix &m, bool with_transforms, bool right) {
  Worker w{m, {}, {}, {}, {}, with_transforms, right};
  if (with_transforms) {
    w.U = w.Uinv = IntMatrix::identity(m.rows());
    if (right) w.V = w.Vinv = IntMatrix::identity(m.cols());
  }
  const std::size_t lim = std::min(m.rows(), m.cols());
  std::size_t t = 0;
  for (; t < lim; ++t) {
    std::size_t pi = 0, pj = 0;
    if (!w.find_pivot(t, pi, pj)) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m.rows(); ++i) {
        if (sgn(w.A.at(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.A.at(i, t).get_mpz_t(), w.A.at(t, t).get_mpz_t());
        w.add_row(i, t, -q);
        if (sgn(w.A.at(i, t)) != 0) {
          w.swap_rows(t, i);
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < m.cols(); ++j) {
        if (sgn(w.A.at(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.A.at(t, j).get_mpz_t(), w.A.at(t, t).get_mpz_t());
        w.add_col(j, t, -q);
        if (sgn(w.A.at(t, j)) != 0) {
          w.swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // Row and column t are clear; enforce divisibility of the remainder.
      bool fixed = true;
      for (std::size_t i = t + 1; i < m.rows() && fixed; ++i)
        for (std::size_t j = t + 1; j < m.cols(); ++j)
          if (!mpz_divisible_p(w.A.at(i, j).get_mpz_t(), w.A.at(t, t).get_mpz_t())) {
            w.add_row(t, i, 1);
            fixed = false;
            break;
          }
      if (fixed) break;
    }
    if (sgn(w.A.at(t, t)) < 0) w.negate_row(t);
  }
  SNF s;
  s.rank = t;
  s.D = std::move(w.A);
  if (with_transforms) {
    s.U = std::move(w.U);
    s.Uinv = std::move(w.Uinv);
    s.V = std::move(w.V);
    s.Vinv = std::move(w.Vinv);
  }
  return s;
}

} // namespace

SNF smith_normal_form(const IntMatrix &m, bool with_transforms) { return run_snf(m, with_transforms, true); }

SNF smith_normal_form_left(const IntMatrix &m) { return run_snf(m, true, false); }

SNF smith_normal_form(const SparseMatrix &m, bool with_transforms) {
  return smith_normal_form(m.to_dense(), with_transforms);
}

bool verify_snf(const IntMatrix &m, const SNF &s) {
  if (!(s.U * m * s.V == s.D)) return false;
  if (!(s.U * s.Uinv == IntMatrix::identity(m.rows()))) return false;
  if (!(s.V * s.Vinv == IntMatrix::identity(m.cols()))) return false;
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j && sgn(s.D.at(i, j)) != 0) return false;
  auto d = s.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if ((i < s.rank) != (sgn(d[i]) > 0)) return false;
    if (i + 1 < s.rank && !mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t())) return false;
  }
  const Integer du = s.U.determinant(), dv = s.V.determinant();
  return abs(du) == 1 && abs(dv) == 1;
}

} // namespace ohs
