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

#ifndef MAXVOL_SVD_HPP
#define MAXVOL_SVD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "maxvol/householder.hpp"
#include "maxvol/matrix.hpp"

namespace maxvol {

/// Thin SVD A = U·diag(s)·Vᵀ with U m×r, V n×r, r = min(m, n).
struct SvdResult {
  std::vector<double> singular_values;  // nonincreasing
  DenseMatrix left_vectors;             // empty when values only were requested
  DenseMatrix right_vectors;
};

/// Sweep cap for the Jacobi iteration. In practice 6-12 sweeps suffice.
inline constexpr int kMaxJacobiSweeps = 80;

namespace detail {

/// One-sided (Hestenes) Jacobi on the columns of G (m×n, m >= n). On return
/// the columns of G are mutually orthogonal; V (if non-null) accumulates the
/// rotations so that G_in·V = G_out.
inline void hestenes_jacobi(DenseMatrix& G, DenseMatrix* V) {
  const Index m = G.rows(), n = G.cols();
  const double tol = kEps * std::sqrt(static_cast<double>(m));
  std::vector<double> nrm(n);
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    for (Index j = 0; j < n; ++j) {
      const auto g = G.col(j);
      double acc = 0.0;
      for (double v : g) acc += v * v;
      nrm[j] = acc;
    }
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = nrm[p], beta = nrm[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        auto gp = G.col(p);
        auto gq = G.col(q);
        double gamma = 0.0;
        for (Index i = 0; i < m; ++i) gamma += gp[i] * gq[i];
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        // Norms are recomputed rather than updated: the update formula
        // cancels to negative values when a column collapses to zero.
        double np = 0.0, nq = 0.0;
        for (Index i = 0; i < m; ++i) {
          const double a = gp[i], b = gq[i];
          gp[i] = c * a - s * b;
          gq[i] = s * a + c * b;
          np += gp[i] * gp[i];
          nq += gq[i] * gq[i];
        }
        nrm[p] = np;
        nrm[q] = nq;
        if (V != nullptr) {
          auto vp = V->col(p);
          auto vq = V->col(q);
          for (Index i = 0; i < V->rows(); ++i) {
            const double a = vp[i], b = vq[i];
            vp[i] = c * a - s * b;
            vq[i] = s * a + c * b;
          }
        }
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceError("one-sided Jacobi SVD did not converge in " + std::to_string(kMaxJacobiSweeps) +
                         " sweeps");
}

/// Completes the columns of U flagged in `missing` to an orthonormal set
/// using modified Gram-Schmidt against canonical basis vectors.
inline void complete_orthonormal(DenseMatrix& U, const std::vector<bool>& missing) {
  const Index m = U.rows();
  Index candidate = 0;
  for (Index j = 0; j < U.cols(); ++j) {
    if (!missing[j]) continue;
    for (; candidate < m; ++candidate) {
      std::vector<double> e(m, 0.0);
      e[candidate] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (Index c = 0; c < U.cols(); ++c) {
          if (c == j || (missing[c] && c > j)) continue;
          const auto u = U.col(c);
          double d = 0.0;
          for (Index i = 0; i < m; ++i) d += u[i] * e[i];
          for (Index i = 0; i < m; ++i) e[i] -= d * u[i];
        }
      }
      const double nv = norm2(e);
      if (nv > 0.5) {
        auto u = U.col(j);
        for (Index i = 0; i < m; ++i) u[i] = e[i] / nv;
        ++candidate;
        break;
      }
    }
  }
}

inline SvdResult svd_tall(const DenseMatrix& A, bool want_vectors) {
  const Index m = A.rows(), n = A.cols();
  SvdResult out;
  if (n == 0) return out;

  // Precondition with a QR factorization when the matrix is tall so the
  // Jacobi sweeps run on an n×n triangle.
  const bool precondition = m > n;
  HouseholderSteps H;
  DenseMatrix G;
  if (precondition) {
    H = householder_qr(A, n);
    G = H.r11();
  } else {
    G = A;
  }
  DenseMatrix V;
  if (want_vectors) V = DenseMatrix::identity(n);
  hestenes_jacobi(G, want_vectors ? &V : nullptr);

  std::vector<double> sv(n);
  for (Index j = 0; j < n; ++j) sv[j] = norm2(G.col(j));
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return sv[a] > sv[b]; });

  out.singular_values.resize(n);
  for (Index j = 0; j < n; ++j) out.singular_values[j] = sv[order[j]];
  if (!want_vectors) return out;

  const Index gm = G.rows();
  DenseMatrix Ug(gm, n);
  std::vector<bool> missing(n, false);
  const double floor = out.singular_values[0] * kEps * static_cast<double>(std::max(m, n));
  for (Index j = 0; j < n; ++j) {
    const double s = sv[order[j]];
    const auto g = G.col(order[j]);
    if (s > floor && s > 0.0) {
      auto u = Ug.col(j);
      for (Index i = 0; i < gm; ++i) u[i] = g[i] / s;
    } else {
      missing[j] = true;
    }
  }
  complete_orthonormal(Ug, missing);
  out.right_vectors = DenseMatrix(n, n);
  for (Index j = 0; j < n; ++j) {
    const auto src = V.col(order[j]);
    std::copy(src.begin(), src.end(), out.right_vectors.col(j).begin());
  }
  if (precondition) {
    // U = Q·Ug with Q the thin Householder factor.
    DenseMatrix Q = H.form_q(n);
    out.left_vectors = matmul(Q, Ug);
  } else {
    out.left_vectors = std::move(Ug);
  }
  return out;
}

}  // namespace detail

/// Thin SVD by QR-preconditioned one-sided Jacobi. Accurate to backward
/// stability; throws ConvergenceError after kMaxJacobiSweeps sweeps.
inline SvdResult svd(const DenseMatrix& A) {
  if (A.rows() >= A.cols()) return detail::svd_tall(A, true);
  SvdResult t = detail::svd_tall(A.transpose(), true);
  std::swap(t.left_vectors, t.right_vectors);
  return t;
}

inline std::vector<double> singular_values(const DenseMatrix& A) {
  if (A.rows() >= A.cols()) return detail::svd_tall(A, false).singular_values;
  return detail::svd_tall(A.transpose(), false).singular_values;
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, sorted
/// nonincreasing. Only the upper triangle is trusted to be consistent.
inline std::vector<double> symmetric_eigenvalues(DenseMatrix S) {
  const Index n = S.rows();
  if (S.cols() != n) throw std::invalid_argument("symmetric_eigenvalues: matrix must be square");
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (Index j = 0; j < n; ++j) {
      diag += S(j, j) * S(j, j);
      for (Index i = 0; i < j; ++i) off += 2.0 * S(i, j) * S(i, j);
    }
    if (off <= kEps * kEps * std::max(diag, std::numeric_limits<double>::min())) break;
    if (sweep + 1 == kMaxJacobiSweeps) throw ConvergenceError("symmetric Jacobi did not converge");
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = S(p, q);
        if (apq == 0.0) continue;
        const double theta = (S(q, q) - S(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double skp = S(k, p), skq = S(k, q);
          S(k, p) = c * skp - s * skq;
          S(k, q) = s * skp + c * skq;
        }
        for (Index k = 0; k < n; ++k) {
          const double spk = S(p, k), sqk = S(q, k);
          S(p, k) = c * spk - s * sqk;
          S(q, k) = s * spk + c * sqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (Index i = 0; i < n; ++i) ev[i] = S(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// Spectral norm via the largest singular value.
inline double norm_2(const DenseMatrix& A) {
  if (A.empty()) return 0.0;
  return singular_values(A).front();
}

}  // namespace maxvol

#endif  // MAXVOL_SVD_HPP
