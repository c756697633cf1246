#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ohs {

using Integer = mpz_class;

// Dense integer matrix, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer &at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer &at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix &o) const;
  bool operator==(const IntMatrix &o) const;
  bool is_zero() const;
  // Exact determinant of a square matrix (fraction-free elimination).
  Integer determinant() const;
  std::string to_string() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

// Sparse column-major integer matrix: col[j] lists (row, value) with value != 0.
struct SparseMatrix {
  std::size_t rows = 0;
  std::vector<std::vector<std::pair<std::size_t, Integer>>> cols;

  std::size_t ncols() const { return cols.size(); }
  IntMatrix to_dense() const;
};

struct SNF {
  // U * M * V = D with U, V unimodular; D diagonal with d_1 | d_2 | ...,
  // all d_i > 0 for i < rank.
  IntMatrix D, U, Uinv, V, Vinv;
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const;
};

// `with_transforms = false` leaves U, Uinv, V, Vinv empty.
SNF smith_normal_form(const IntMatrix &m, bool with_transforms = true);
SNF smith_normal_form(const SparseMatrix &m, bool with_transforms = true);
// Only U and Uinv; V and Vinv stay empty.
SNF smith_normal_form_left(const IntMatrix &m);

// Checks U*M*V = D, U*Uinv = I, V*Vinv = I and the divisibility chain.
bool verify_snf(const IntMatrix &m, const SNF &s);

} // namespace ohs
