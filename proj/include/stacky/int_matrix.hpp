#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <utility>
#include <vector>

#include "stacky/error.hpp"

namespace stacky {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Dense integer matrix, row-major, arbitrary-precision entries.  All lattice
// arithmetic in this project routes through this type; no fixed-width integers
// are used anywhere near a Smith or Hermite reduction.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Int& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  bool operator==(const IntMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
  }

  bool is_zero() const {
    for (const Int& x : a_)
      if (x != 0) return false;
    return true;
  }

  IntMatrix operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) fail(errc::dimension_mismatch, "matrix product shape");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& x = at(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) out.at(i, j) += x * rhs.at(k, j);
      }
    return out;
  }

  std::vector<Int> apply(const std::vector<Int>& v) const {
    if (v.size() != cols_) fail(errc::dimension_mismatch, "matrix-vector shape");
    std::vector<Int> out(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (at(i, j) != 0) out[i] += at(i, j) * v[j];
    return out;
  }

  std::vector<Int> column(std::size_t j) const {
    std::vector<Int> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
  }
  // row_i += c * row_j
  void add_row(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) += c * at(j, k);
  }
  void add_col(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, i) += c * at(k, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
  }
  void negate_col(std::size_t j) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, j) = -at(k, j);
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> a_;
};

// Fraction-free Bareiss determinant.
inline Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) fail(errc::dimension_mismatch, "determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a.at(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

struct SmithForm {
  IntMatrix U;  // unimodular, rows x rows
  IntMatrix D;  // diagonal, same shape as input
  IntMatrix V;  // unimodular, cols x cols
  std::vector<Int> invariant_factors;  // positive diagonal entries, divisibility chain
};

// U * M * V = D with D diagonal, d_1 | d_2 | ... ; pivot selection picks the
// smallest nonzero absolute value, ties broken by lowest (row, col).
inline SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  IntMatrix a = m, u = IntMatrix::identity(R), v = IntMatrix::identity(C);
  const std::size_t steps = R < C ? R : C;
  for (std::size_t t = 0; t < steps; ++t) {
    // pivot search over the trailing submatrix
    bool found = false;
    std::size_t pr = t, pc = t;
    Int best = 0;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j) {
        if (a.at(i, j) == 0) continue;
        Int mag = abs(a.at(i, j));
        if (!found || mag < best) {
          found = true;
          best = mag;
          pr = i;
          pc = j;
        }
      }
    if (!found) break;
    if (pr != t) {
      a.swap_rows(t, pr);
      u.swap_rows(t, pr);
    }
    if (pc != t) {
      a.swap_cols(t, pc);
      v.swap_cols(t, pc);
    }
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a.at(i, t) == 0) continue;
        Int q = a.at(i, t) / a.at(t, t);
        if (q != 0) {
          a.add_row(i, t, -q);
          u.add_row(i, t, -q);
        }
        if (a.at(i, t) != 0) {
          a.swap_rows(t, i);
          u.swap_rows(t, i);
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a.at(t, j) == 0) continue;
        Int q = a.at(t, j) / a.at(t, t);
        if (q != 0) {
          a.add_col(j, t, -q);
          v.add_col(j, t, -q);
        }
        if (a.at(t, j) != 0) {
          a.swap_cols(t, j);
          v.swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // pivot must divide every remaining entry or the chain can break later
      bool fixed = false;
      for (std::size_t i = t + 1; i < R && !fixed; ++i)
        for (std::size_t j = t + 1; j < C && !fixed; ++j)
          if (a.at(i, j) % a.at(t, t) != 0) {
            a.add_row(t, i, 1);
            u.add_row(t, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (a.at(t, t) < 0) {
      a.negate_row(t);
      u.negate_row(t);
    }
  }
  SmithForm out;
  out.U = std::move(u);
  out.V = std::move(v);
  for (std::size_t t = 0; t < steps; ++t)
    if (a.at(t, t) != 0) out.invariant_factors.push_back(a.at(t, t));
  out.D = std::move(a);
  return out;
}

// Canonical column Hermite form of the lattice spanned by the columns of b.
// Zero columns are dropped; pivot rows strictly increase left to right; pivots
// are positive; entries left of a pivot (in its row) are reduced into [0, pivot).
inline IntMatrix column_hermite_form(const IntMatrix& b) {
  const std::size_t R = b.rows(), C = b.cols();
  IntMatrix a = b;
  std::size_t col = 0;
  for (std::size_t row = 0; row < R && col < C; ++row) {
    // gcd-fold every column past `col` into column `col` on this row
    for (;;) {
      std::size_t p = C;
      Int best = 0;
      for (std::size_t j = col; j < C; ++j) {
        if (a.at(row, j) == 0) continue;
        Int mag = abs(a.at(row, j));
        if (p == C || mag < best) {
          p = j;
          best = mag;
        }
      }
      if (p == C) break;  // row entirely zero from col onward
      if (p != col) a.swap_cols(col, p);
      bool clean = true;
      for (std::size_t j = col + 1; j < C; ++j) {
        if (a.at(row, j) == 0) continue;
        Int q = a.at(row, j) / a.at(row, col);
        if (q != 0) a.add_col(j, col, -q);
        if (a.at(row, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (a.at(row, col) == 0) continue;
    if (a.at(row, col) < 0) a.negate_col(col);
    // reduce earlier columns in this pivot row into [0, pivot)
    for (std::size_t j = 0; j < col; ++j) {
      Int q = a.at(row, j) / a.at(row, col);
      if (a.at(row, j) - q * a.at(row, col) < 0) q -= 1;
      if (q != 0) a.add_col(j, col, -q);
    }
    ++col;
  }
  IntMatrix out(R, col);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < col; ++j) out.at(i, j) = a.at(i, j);
  return out;
}

// Basis of { v : A v = 0 } as Hermite-canonical columns.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  SmithForm s = smith_normal_form(a);
  std::size_t r = s.invariant_factors.size();
  std::size_t n = a.cols();
  IntMatrix basis(n, n - r);
  for (std::size_t j = r; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) basis.at(i, j - r) = s.V.at(i, j);
  return column_hermite_form(basis);
}

}  // namespace stacky
