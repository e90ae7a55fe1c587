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

#ifndef MAXVOL_HOUSEHOLDER_HPP
#define MAXVOL_HOUSEHOLDER_HPP

#include <cmath>
#include <numeric>
#include <vector>

#include "maxvol/matrix.hpp"

namespace maxvol {

/// k steps of Householder QR, optionally with column pivoting on the largest
/// remaining column norm. Storage follows LAPACK's geqp3: R on and above the
/// diagonal of `work`, reflector tails below it, scalar factors in `tau`.
struct HouseholderSteps {
  DenseMatrix work;
  std::vector<double> tau;
  std::vector<Index> perm;  // column j of work came from column perm[j] of the input
  Index steps = 0;

  Index rows() const { return work.rows(); }
  Index cols() const { return work.cols(); }

  /// R11 (k×k, upper triangular), R12 (k×(n-k)), and R22 ((m-k)×(n-k)).
  DenseMatrix r11() const {
    DenseMatrix R(steps, steps);
    for (Index j = 0; j < steps; ++j)
      for (Index i = 0; i <= j; ++i) R(i, j) = work(i, j);
    return R;
  }
  DenseMatrix r12() const { return block(work, 0, steps, steps, cols() - steps); }
  DenseMatrix r22() const { return block(work, steps, steps, rows() - steps, cols() - steps); }

  /// First `count` columns of Q = H_0 H_1 ... H_{steps-1}.
  DenseMatrix form_q(Index count) const {
    const Index m = rows();
    DenseMatrix Q(m, count);
    for (Index j = 0; j < count && j < m; ++j) Q(j, j) = 1.0;
    for (Index h = steps; h-- > 0;) {
      if (tau[h] == 0.0) continue;
      for (Index c = 0; c < count; ++c) {
        auto q = Q.col(c);
        double dot = q[h];
        for (Index i = h + 1; i < m; ++i) dot += work(i, h) * q[i];
        dot *= tau[h];
        if (dot == 0.0) continue;
        q[h] -= dot;
        for (Index i = h + 1; i < m; ++i) q[i] -= dot * work(i, h);
      }
    }
    return Q;
  }

  /// Flips the signs of rows of R (and the matching columns of Q) so that
  /// diag(R11) is nonnegative. Returns the sign vector to apply to Q columns.
  std::vector<double> normalize_signs() {
    std::vector<double> sgn(steps, 1.0);
    for (Index i = 0; i < steps; ++i) {
      if (work(i, i) < 0.0) {
        sgn[i] = -1.0;
        for (Index j = i; j < cols(); ++j) work(i, j) = -work(i, j);
      }
    }
    return sgn;
  }
};

namespace detail {

/// Generates the reflector annihilating x[1:]; x[0] becomes beta. Returns tau.
inline double make_reflector(std::span<double> x) {
  if (x.size() <= 1) return 0.0;
  const double alpha = x[0];
  const double xnorm = norm2(x.subspan(1));
  if (xnorm == 0.0) return 0.0;
  const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
  const double tau = (beta - alpha) / beta;
  const double scale = 1.0 / (alpha - beta);
  for (Index i = 1; i < x.size(); ++i) x[i] *= scale;
  x[0] = beta;
  return tau;
}

/// Applies (I - tau v vᵀ) to columns [c0, n) of W, where v = [1; W(h+1:, h)].
inline void apply_reflector(DenseMatrix& W, Index h, double tau, Index c0) {
  if (tau == 0.0) return;
  const Index m = W.rows();
  for (Index c = c0; c < W.cols(); ++c) {
    auto w = W.col(c);
    double dot = w[h];
    for (Index i = h + 1; i < m; ++i) dot += W(i, h) * w[i];
    dot *= tau;
    if (dot == 0.0) continue;
    w[h] -= dot;
    for (Index i = h + 1; i < m; ++i) w[i] -= dot * W(i, h);
  }
}

}  // namespace detail

/// Unpivoted Householder QR for `k` steps (k <= min(m, n)).
inline HouseholderSteps householder_qr(DenseMatrix A, Index k) {
  HouseholderSteps H;
  const Index m = A.rows(), n = A.cols();
  k = std::min({k, m, n});
  H.work = std::move(A);
  H.tau.assign(k, 0.0);
  H.perm.resize(n);
  std::iota(H.perm.begin(), H.perm.end(), Index{0});
  for (Index j = 0; j < k; ++j) {
    H.tau[j] = detail::make_reflector(H.work.col(j).subspan(j));
    detail::apply_reflector(H.work, j, H.tau[j], j + 1);
  }
  H.steps = k;
  return H;
}

/// Column-pivoted Householder QR for k steps. Residual column norms are
/// downdated after each step and recomputed when the downdated norm has lost
/// more than half the working precision relative to its last exact value.
/// Throws RankDeficient{step} if the largest residual norm is at the
/// degenerate threshold eps * max(m, n) * (largest input column norm).
inline HouseholderSteps householder_cpqr(DenseMatrix A, Index k) {
  HouseholderSteps H;
  const Index m = A.rows(), n = A.cols();
  if (k > std::min(m, n)) throw std::invalid_argument("cpqr: k exceeds min(m, n)");
  H.work = std::move(A);
  H.tau.assign(k, 0.0);
  H.perm.resize(n);
  std::iota(H.perm.begin(), H.perm.end(), Index{0});

  std::vector<double> vn1(n), vn2(n);
  double largest = 0.0;
  for (Index j = 0; j < n; ++j) {
    vn1[j] = vn2[j] = norm2(H.work.col(j));
    largest = std::max(largest, vn1[j]);
  }
  const double threshold = kEps * static_cast<double>(std::max(m, n)) * largest;
  const double tol3z = std::sqrt(kEps);

  for (Index j = 0; j < k; ++j) {
    Index p = j;
    for (Index c = j + 1; c < n; ++c)
      if (vn1[c] > vn1[p]) p = c;
    if (!(vn1[p] > threshold)) throw RankDeficient(j, "largest residual column norm is negligible");
    if (p != j) {
      auto a = H.work.col(j);
      auto b = H.work.col(p);
      std::swap_ranges(a.begin(), a.end(), b.begin());
      std::swap(H.perm[j], H.perm[p]);
      std::swap(vn1[j], vn1[p]);
      std::swap(vn2[j], vn2[p]);
    }
    H.tau[j] = detail::make_reflector(H.work.col(j).subspan(j));
    detail::apply_reflector(H.work, j, H.tau[j], j + 1);

    for (Index c = j + 1; c < n; ++c) {
      if (vn1[c] == 0.0) continue;
      const double r = std::abs(H.work(j, c)) / vn1[c];
      const double temp = std::max(0.0, (1.0 + r) * (1.0 - r));
      const double ratio = vn1[c] / vn2[c];
      if (temp * ratio * ratio <= tol3z) {
        vn1[c] = j + 1 < m ? norm2(H.work.col(c).subspan(j + 1)) : 0.0;
        vn2[c] = vn1[c];
      } else {
        vn1[c] *= std::sqrt(temp);
      }
    }
  }
  H.steps = k;
  return H;
}

}  // namespace maxvol

#endif  // MAXVOL_HOUSEHOLDER_HPP
