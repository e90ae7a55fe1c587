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


// Reference computations used only by tests. They share no code with the
// library: long double arithmetic, straightforward loops.

#ifndef MAXVOL_TESTS_ORACLES_HPP
#define MAXVOL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxvol/matrix.hpp"

namespace oracle {

using maxvol::DenseMatrix;
using maxvol::Index;

/// |det| by Gaussian elimination with partial pivoting in long double.
inline long double abs_det(const DenseMatrix& A) {
  const Index n = A.rows();
  std::vector<long double> a(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a[i * n + j] = A(i, j);
  long double det = 1.0L;
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    for (Index r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[p * n + c])) p = r;
    if (a[p * n + c] == 0.0L) return 0.0L;
    if (p != c)
      for (Index j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
    det *= a[c * n + c];
    for (Index r = c + 1; r < n; ++r) {
      const long double f = a[r * n + c] / a[c * n + c];
      for (Index j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return std::fabs(det);
}

/// Volume of a tall or square matrix as sqrt(det(BᵀB)).
inline long double tall_volume(const DenseMatrix& B) {
  const Index m = B.rows(), k = B.cols();
  DenseMatrix G(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      long double s = 0.0L;
      for (Index r = 0; r < m; ++r) s += static_cast<long double>(B(r, i)) * B(r, j);
      G(i, j) = static_cast<double>(s);
    }
  return std::sqrt(abs_det(G));
}

inline DenseMatrix naive_matmul(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C(A.rows(), B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < B.cols(); ++j) {
      long double s = 0.0L;
      for (Index p = 0; p < A.cols(); ++p) s += static_cast<long double>(A(i, p)) * B(p, j);
      C(i, j) = static_cast<double>(s);
    }
  return C;
}

inline double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B) {
  double d = 0.0;
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i) d = std::max(d, std::abs(A(i, j) - B(i, j)));
  return d;
}

/// Row-major long double matrix used by the interpolative-bound oracles.
struct LMat {
  Index rows = 0, cols = 0;
  std::vector<long double> v;
  LMat(Index r, Index c) : rows(r), cols(c), v(r * c, 0.0L) {}
  long double& operator()(Index i, Index j) { return v[i * cols + j]; }
  long double operator()(Index i, Index j) const { return v[i * cols + j]; }
};

/// Solves M·X = B (M square) by Gaussian elimination with partial pivoting.
inline LMat solve(LMat M, LMat B) {
  const Index n = M.rows;
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    for (Index r = c + 1; r < n; ++r)
      if (std::fabs(M(r, c)) > std::fabs(M(p, c))) p = r;
    for (Index j = 0; j < n; ++j) std::swap(M(p, j), M(c, j));
    for (Index j = 0; j < B.cols; ++j) std::swap(B(p, j), B(c, j));
    for (Index r = c + 1; r < n; ++r) {
      const long double f = M(r, c) / M(c, c);
      for (Index j = c; j < n; ++j) M(r, j) -= f * M(c, j);
      for (Index j = 0; j < B.cols; ++j) B(r, j) -= f * B(c, j);
    }
  }
  for (Index c = n; c-- > 0;)
    for (Index j = 0; j < B.cols; ++j) {
      long double s = B(c, j);
      for (Index q = c + 1; q < n; ++q) s -= M(c, q) * B(q, j);
      B(c, j) = s / M(c, c);
    }
  return B;
}

inline bool contains(const std::vector<Index>& v, Index x) {
  for (Index y : v)
    if (y == x) return true;
  return false;
}

/// max(|A21·A11⁻¹|, |A11⁻¹·A12|) for the block (rows, cols), in long double.
inline long double ge_interpolative_bound(const DenseMatrix& A, const std::vector<Index>& rows,
                                          const std::vector<Index>& cols) {
  const Index k = rows.size();
  std::vector<Index> orow, ocol;
  for (Index i = 0; i < A.rows(); ++i)
    if (!contains(rows, i)) orow.push_back(i);
  for (Index j = 0; j < A.cols(); ++j)
    if (!contains(cols, j)) ocol.push_back(j);
  LMat a11(k, k), a11t(k, k), a12(k, ocol.size()), a21t(k, orow.size());
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      a11(i, j) = A(rows[i], cols[j]);
      a11t(j, i) = A(rows[i], cols[j]);
    }
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < ocol.size(); ++j) a12(i, j) = A(rows[i], ocol[j]);
    for (Index j = 0; j < orow.size(); ++j) a21t(i, j) = A(orow[j], cols[i]);
  }
  long double nu = 0.0L;
  for (long double x : solve(a11, a12).v) nu = std::max(nu, std::fabs(x));
  for (long double x : solve(a11t, a21t).v) nu = std::max(nu, std::fabs(x));
  return nu;
}

/// max |R11⁻¹·R12| for the column set `cols`: Householder QR of
/// [A(:, cols) A(:, rest)] in long double, then back substitution.
inline long double qr_interpolative_bound(const DenseMatrix& A, const std::vector<Index>& cols) {
  const Index m = A.rows(), k = cols.size();
  std::vector<Index> order = cols;
  for (Index j = 0; j < A.cols(); ++j)
    if (!contains(cols, j)) order.push_back(j);
  const Index n = order.size();
  LMat M(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) M(i, j) = A(i, order[j]);
  for (Index c = 0; c < k; ++c) {
    long double norm = 0.0L;
    for (Index i = c; i < m; ++i) norm += M(i, c) * M(i, c);
    norm = std::sqrt(norm);
    if (norm == 0.0L) continue;
    const long double alpha = M(c, c) > 0 ? -norm : norm;
    std::vector<long double> v(m - c);
    for (Index i = c; i < m; ++i) v[i - c] = M(i, c);
    v[0] -= alpha;
    long double vv = 0.0L;
    for (long double x : v) vv += x * x;
    if (vv == 0.0L) continue;
    for (Index j = c; j < n; ++j) {
      long double d = 0.0L;
      for (Index i = c; i < m; ++i) d += v[i - c] * M(i, j);
      const long double f = 2.0L * d / vv;
      for (Index i = c; i < m; ++i) M(i, j) -= f * v[i - c];
    }
  }
  LMat r11(k, k), r12(k, n - k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k; ++j) r11(i, j) = M(i, j);
    for (Index j = k; j < n; ++j) r12(i, j - k) = M(i, j);
  }
  long double nu = 0.0L;
  for (long double x : solve(r11, r12).v) nu = std::max(nu, std::fabs(x));
  return nu;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle

#endif  // MAXVOL_TESTS_ORACLES_HPP
