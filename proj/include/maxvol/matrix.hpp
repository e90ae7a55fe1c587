// Copyright 2026 The maxvol Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAXVOL_MATRIX_HPP
#define MAXVOL_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxvol/errors.hpp"

namespace maxvol {

using Index = std::size_t;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Dense real matrix stored in column-major order: entry (i, j) lives at
/// data[i + j * rows]. This matches the Matrix Market array layout.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(Index rows, Index cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  DenseMatrix(Index rows, Index cols, std::vector<double> column_major)
      : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("DenseMatrix: data length does not match shape");
    }
  }

  /// Row-wise literal, convenient in tests: {{1, 2}, {3, 4}}.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.assign(rows_ * cols_, 0.0);
    Index i = 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("DenseMatrix: ragged initializer");
      Index j = 0;
      for (double v : r) (*this)(i, j++) = v;
      ++i;
    }
  }

  static DenseMatrix identity(Index n) {
    DenseMatrix I(n, n);
    for (Index i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    DenseMatrix D(d.size(), d.size());
    for (Index i = 0; i < d.size(); ++i) D(i, i) = d[i];
    return D;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(Index i, Index j) { return data_[i + j * rows_]; }
  double operator()(Index i, Index j) const { return data_[i + j * rows_]; }

  std::span<double> col(Index j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(Index j) const { return {data_.data() + j * rows_, rows_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  DenseMatrix transpose() const {
    DenseMatrix T(cols_, rows_);
    for (Index j = 0; j < cols_; ++j)
      for (Index i = 0; i < rows_; ++i) T(j, i) = (*this)(i, j);
    return T;
  }

  DenseMatrix& operator+=(const DenseMatrix& other) {
    check_same_shape(other);
    for (Index p = 0; p < data_.size(); ++p) data_[p] += other.data_[p];
    return *this;
  }

  DenseMatrix& operator-=(const DenseMatrix& other) {
    check_same_shape(other);
    for (Index p = 0; p < data_.size(); ++p) data_[p] -= other.data_[p];
    return *this;
  }

  DenseMatrix& operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw std::invalid_argument("DenseMatrix: shape mismatch");
    }
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

/// Row and column index lists identifying a submatrix. Order matters: it is
/// the order in which the indices appear in the extracted block.
struct Selection {
  std::vector<Index> rows;
  std::vector<Index> cols;

  static Selection leading(Index p, Index q) {
    Selection s;
    s.rows.resize(p);
    s.cols.resize(q);
    std::iota(s.rows.begin(), s.rows.end(), Index{0});
    std::iota(s.cols.begin(), s.cols.end(), Index{0});
    return s;
  }

  /// All rows of an m-row matrix together with the given columns (QR mode).
  static Selection columns(Index m, std::vector<Index> cols) {
    Selection s;
    s.rows.resize(m);
    std::iota(s.rows.begin(), s.rows.end(), Index{0});
    s.cols = std::move(cols);
    return s;
  }

  friend bool operator==(const Selection&, const Selection&) = default;
};

namespace detail {

inline void check_index_list(std::span<const Index> idx, Index bound, const char* what) {
  std::vector<bool> seen(bound, false);
  for (Index v : idx) {
    if (v >= bound) {
      throw std::out_of_range(std::string(what) + " index " + std::to_string(v) +
                              " out of range [0, " + std::to_string(bound) + ")");
    }
    if (seen[v]) throw std::invalid_argument(std::string(what) + " index repeated: " + std::to_string(v));
    seen[v] = true;
  }
}

}  // namespace detail

inline void validate(const Selection& sel, Index m, Index n) {
  detail::check_index_list(sel.rows, m, "row");
  detail::check_index_list(sel.cols, n, "column");
}

inline DenseMatrix extract(const DenseMatrix& A, const Selection& sel) {
  validate(sel, A.rows(), A.cols());
  DenseMatrix B(sel.rows.size(), sel.cols.size());
  for (Index j = 0; j < sel.cols.size(); ++j) {
    const auto src = A.col(sel.cols[j]);
    for (Index i = 0; i < sel.rows.size(); ++i) B(i, j) = src[sel.rows[i]];
  }
  return B;
}

/// Columns of A listed in cols, all rows.
inline DenseMatrix extract_columns(const DenseMatrix& A, std::span<const Index> cols) {
  DenseMatrix B(A.rows(), cols.size());
  for (Index j = 0; j < cols.size(); ++j) {
    if (cols[j] >= A.cols()) throw std::out_of_range("extract_columns: column index out of range");
    std::copy(A.col(cols[j]).begin(), A.col(cols[j]).end(), B.col(j).begin());
  }
  return B;
}

/// Contiguous block A(r0 : r0+p, c0 : c0+q).
inline DenseMatrix block(const DenseMatrix& A, Index r0, Index c0, Index p, Index q) {
  DenseMatrix B(p, q);
  for (Index j = 0; j < q; ++j)
    for (Index i = 0; i < p; ++i) B(i, j) = A(r0 + i, c0 + j);
  return B;
}

/// A(row_perm, col_perm): entry (i, j) of the result is A(row_perm[i], col_perm[j]).
inline DenseMatrix permute(const DenseMatrix& A, std::span<const Index> row_perm,
                           std::span<const Index> col_perm) {
  DenseMatrix B(row_perm.size(), col_perm.size());
  for (Index j = 0; j < col_perm.size(); ++j) {
    const auto src = A.col(col_perm[j]);
    for (Index i = 0; i < row_perm.size(); ++i) B(i, j) = src[row_perm[i]];
  }
  return B;
}

inline DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  DenseMatrix C(A.rows(), B.cols());
  for (Index j = 0; j < B.cols(); ++j) {
    auto c = C.col(j);
    for (Index p = 0; p < A.cols(); ++p) {
      const double b = B(p, j);
      if (b == 0.0) continue;
      const auto a = A.col(p);
      for (Index i = 0; i < A.rows(); ++i) c[i] += a[i] * b;
    }
  }
  return C;
}

/// Aᵀ·B without forming the transpose.
inline DenseMatrix matmul_tn(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.rows() != B.rows()) throw std::invalid_argument("matmul_tn: row counts differ");
  DenseMatrix C(A.cols(), B.cols());
  for (Index j = 0; j < B.cols(); ++j) {
    const auto b = B.col(j);
    for (Index i = 0; i < A.cols(); ++i) {
      const auto a = A.col(i);
      double acc = 0.0;
      for (Index p = 0; p < A.rows(); ++p) acc += a[p] * b[p];
      C(i, j) = acc;
    }
  }
  return C;
}

/// A·Bᵀ without forming the transpose.
inline DenseMatrix matmul_nt(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols() != B.cols()) throw std::invalid_argument("matmul_nt: column counts differ");
  DenseMatrix C(A.rows(), B.rows());
  for (Index p = 0; p < A.cols(); ++p) {
    const auto a = A.col(p);
    for (Index j = 0; j < B.rows(); ++j) {
      const double b = B(j, p);
      if (b == 0.0) continue;
      auto c = C.col(j);
      for (Index i = 0; i < A.rows(); ++i) c[i] += a[i] * b;
    }
  }
  return C;
}

inline double max_norm(const DenseMatrix& A) {
  double m = 0.0;
  for (double v : A.data()) m = std::max(m, std::abs(v));
  return m;
}

inline double frobenius_norm(const DenseMatrix& A) {
  double scale = 0.0, ssq = 1.0;
  for (double v : A.data()) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

inline double norm2(std::span<const double> x) {
  double scale = 0.0, ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

enum class Side { Left, Right };
enum class Uplo { Upper, Lower };

/// Solves T·X = B (Side::Left) or X·T = B (Side::Right) for triangular T.
/// Only the triangle named by uplo is read.
inline DenseMatrix solve_triangular(const DenseMatrix& T, const DenseMatrix& B, Side side, Uplo uplo,
                                    bool unit_diagonal = false) {
  const Index n = T.rows();
  if (T.cols() != n) throw std::invalid_argument("solve_triangular: T must be square");
  if (!unit_diagonal) {
    for (Index i = 0; i < n; ++i) {
      if (T(i, i) == 0.0) throw SingularMatrix(i);
    }
  }
  DenseMatrix X = B;
  if (side == Side::Left) {
    if (B.rows() != n) throw std::invalid_argument("solve_triangular: shape mismatch");
    for (Index c = 0; c < X.cols(); ++c) {
      auto x = X.col(c);
      if (uplo == Uplo::Upper) {
        for (Index ii = n; ii-- > 0;) {
          if (!unit_diagonal) x[ii] /= T(ii, ii);
          const double xi = x[ii];
          if (xi == 0.0) continue;
          for (Index r = 0; r < ii; ++r) x[r] -= T(r, ii) * xi;
        }
      } else {
        for (Index ii = 0; ii < n; ++ii) {
          if (!unit_diagonal) x[ii] /= T(ii, ii);
          const double xi = x[ii];
          if (xi == 0.0) continue;
          for (Index r = ii + 1; r < n; ++r) x[r] -= T(r, ii) * xi;
        }
      }
    }
  } else {
    // X·T = B  <=>  Tᵀ·Xᵀ = Bᵀ; work column by column of X.
    if (B.cols() != n) throw std::invalid_argument("solve_triangular: shape mismatch");
    if (uplo == Uplo::Upper) {
      for (Index j = 0; j < n; ++j) {
        auto xj = X.col(j);
        for (Index p = 0; p < j; ++p) {
          const double t = T(p, j);
          if (t == 0.0) continue;
          const auto xp = X.col(p);
          for (Index r = 0; r < X.rows(); ++r) xj[r] -= xp[r] * t;
        }
        if (!unit_diagonal)
          for (double& v : xj) v /= T(j, j);
      }
    } else {
      for (Index j = n; j-- > 0;) {
        auto xj = X.col(j);
        for (Index p = j + 1; p < n; ++p) {
          const double t = T(p, j);
          if (t == 0.0) continue;
          const auto xp = X.col(p);
          for (Index r = 0; r < X.rows(); ++r) xj[r] -= xp[r] * t;
        }
        if (!unit_diagonal)
          for (double& v : xj) v /= T(j, j);
      }
    }
  }
  return X;
}

/// LU factorization with partial (row) pivoting of a square matrix, packed
/// LAPACK-style: unit-lower L below the diagonal, U on and above it.
struct LuPartial {
  DenseMatrix lu;
  std::vector<Index> piv;  // row i of PA is row piv[i] of A
  int sign = 1;
  bool singular = false;

  explicit LuPartial(DenseMatrix A) : lu(std::move(A)) {
    const Index n = lu.rows();
    if (lu.cols() != n) throw std::invalid_argument("LuPartial: matrix must be square");
    piv.resize(n);
    std::iota(piv.begin(), piv.end(), Index{0});
    for (Index k = 0; k < n; ++k) {
      Index p = k;
      double best = std::abs(lu(k, k));
      for (Index i = k + 1; i < n; ++i) {
        if (std::abs(lu(i, k)) > best) {
          best = std::abs(lu(i, k));
          p = i;
        }
      }
      if (p != k) {
        for (Index j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
        std::swap(piv[k], piv[p]);
        sign = -sign;
      }
      const double pivot = lu(k, k);
      if (pivot == 0.0) {
        singular = true;
        continue;
      }
      for (Index i = k + 1; i < n; ++i) lu(i, k) /= pivot;
      for (Index j = k + 1; j < n; ++j) {
        const double ukj = lu(k, j);
        if (ukj == 0.0) continue;
        for (Index i = k + 1; i < n; ++i) lu(i, j) -= lu(i, k) * ukj;
      }
    }
  }

  /// log |det|, -inf when singular.
  double log_abs_det() const {
    double s = 0.0;
    for (Index i = 0; i < lu.rows(); ++i) {
      const double d = std::abs(lu(i, i));
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      s += std::log(d);
    }
    return s;
  }

  double det() const {
    double d = sign;
    for (Index i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
  }

  double min_abs_pivot() const {
    double m = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < lu.rows(); ++i) m = std::min(m, std::abs(lu(i, i)));
    return m;
  }

  /// Solves A·X = B.
  DenseMatrix solve(const DenseMatrix& B) const {
    const Index n = lu.rows();
    DenseMatrix X(n, B.cols());
    for (Index c = 0; c < B.cols(); ++c)
      for (Index i = 0; i < n; ++i) X(i, c) = B(piv[i], c);
    X = solve_triangular(lu, X, Side::Left, Uplo::Lower, /*unit_diagonal=*/true);
    return solve_triangular(lu, X, Side::Left, Uplo::Upper);
  }

  /// Solves X·A = B. With P·A = L·U, X = (B·U⁻¹·L⁻¹)·P.
  DenseMatrix solve_right(const DenseMatrix& B) const {
    const Index n = lu.rows();
    if (B.cols() != n) throw std::invalid_argument("LuPartial::solve_right: shape mismatch");
    DenseMatrix Y = solve_triangular(lu, B, Side::Right, Uplo::Upper);
    Y = solve_triangular(lu, Y, Side::Right, Uplo::Lower, /*unit_diagonal=*/true);
    DenseMatrix X(B.rows(), n);
    for (Index i = 0; i < n; ++i) {
      const auto src = Y.col(i);
      std::copy(src.begin(), src.end(), X.col(piv[i]).begin());
    }
    return X;
  }

  DenseMatrix inverse() const { return solve(DenseMatrix::identity(lu.rows())); }
};

}  // namespace maxvol

#endif  // MAXVOL_MATRIX_HPP
