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


#ifndef MAXVOL_GEN_HPP
#define MAXVOL_GEN_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxvol/matrix.hpp"
#include "maxvol/random.hpp"

namespace maxvol::gen {

/// i.i.d. standard normal entries, filled column by column from Rng(seed).
inline DenseMatrix gaussian(Index m, Index n, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix A(m, n);
  for (double& v : A.data()) v = rng.normal();
  return A;
}

/// Column scaling that keeps CPQR and GECP from pivoting on Kahan matrices.
inline constexpr double kKahanTau = 1e-7;

/// Upper-triangular Kahan matrix: K(i,i) = c^i, K(i,j) = -s·c^i for j > i
/// (0-based), c = sqrt(1 - s²). With `perturb`, column j is scaled by
/// (1 - j·tau).
inline DenseMatrix kahan(Index n, double s, bool perturb = true, double tau = kKahanTau) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("kahan: need 0 < s < 1");
  const double c = std::sqrt((1.0 - s) * (1.0 + s));
  DenseMatrix K(n, n);
  double ci = 1.0;
  for (Index i = 0; i < n; ++i, ci *= c) {
    K(i, i) = ci;
    for (Index j = i + 1; j < n; ++j) K(i, j) = -s * ci;
  }
  if (perturb)
    for (Index j = 0; j < n; ++j)
      for (double& v : K.col(j)) v *= 1.0 - static_cast<double>(j) * tau;
  return K;
}

/// KᵀK for the Kahan matrix K.
inline DenseMatrix kahan_gram(Index n, double s, bool perturb = true, double tau = kKahanTau) {
  const DenseMatrix K = kahan(n, s, perturb, tau);
  return matmul_tn(K, K);
}

/// k+1 on the diagonal of the leading k×k block, -1 elsewhere in the leading
/// rows and columns, k+1 throughout the trailing block.
inline DenseMatrix sharpness_ge(Index m, Index n, Index k) {
  if (k < 2 || k > std::min(m, n)) throw std::invalid_argument("sharpness_ge: need 2 <= k <= min(m, n)");
  const double kp1 = static_cast<double>(k) + 1.0;
  DenseMatrix A(m, n, -1.0);
  for (Index i = 0; i < k; ++i) A(i, i) = kp1;
  for (Index j = k; j < n; ++j)
    for (Index i = k; i < m; ++i) A(i, j) = kp1;
  return A;
}

/// Rank-k companion of sharpness_ge: the off-diagonal entries of the leading
/// block become -1 - beta with beta = (k+2)/(k²-1).
inline DenseMatrix sharpness_b_k(Index m, Index n, Index k) {
  DenseMatrix B = sharpness_ge(m, n, k);
  const double kd = static_cast<double>(k);
  const double beta = (kd + 2.0) / (kd * kd - 1.0);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i)
      if (i != j) B(i, j) = -1.0 - beta;
  return B;
}

/// (k+1)×n matrix whose Gram matrix is sharpness_ge(n, n, k). Row i < k has
/// d_i at column i and a_i to its right; row k holds d_k from column k on.
inline DenseMatrix sharpness_qr(Index k, Index n) {
  if (k < 2 || n < k + 1) throw std::invalid_argument("sharpness_qr: need k >= 2 and n >= k + 1");
  const double kd = static_cast<double>(k);
  const double scale = std::sqrt(kd + 2.0);
  DenseMatrix A(k + 1, n);
  for (Index i = 0; i <= k; ++i) {
    const double p = kd - static_cast<double>(i) + 1.0;  // k - i + 2 with 1-based i
    const double d = std::sqrt(p) / std::sqrt(p + 1.0);
    const double a = -1.0 / std::sqrt(p * (p + 1.0));
    if (i < k) {
      A(i, i) = scale * d;
      for (Index j = i + 1; j < n; ++j) A(i, j) = scale * a;
    } else {
      for (Index j = k; j < n; ++j) A(i, j) = scale * d;
    }
  }
  return A;
}

/// diag(1, 1/mu, mu, 1); principal 2×2 pivot with μ_B = mu².
inline DenseMatrix necessity_mu(double mu) {
  if (!(mu > 1.0)) throw std::invalid_argument("necessity_mu: need mu > 1");
  const double d[] = {1.0, 1.0 / mu, mu, 1.0};
  return DenseMatrix::diagonal(d);
}

/// 5×5 matrix with identity principal 3×3 pivot, interpolative bounds nu and
/// μ_B = nu².
inline DenseMatrix necessity_nu(double nu) {
  if (!(nu > 1.0)) throw std::invalid_argument("necessity_nu: need nu > 1");
  return DenseMatrix{{1, 0, 0, 1, 0}, {0, 1, 0, nu, 0}, {0, 0, 1, 0, 0}, {-nu, 1, 0, 0, 0}, {0, 0, 0, 0, 1}};
}

/// 4×4 block diagonal matrix with two 2×2 local maximum volume blocks.
inline DenseMatrix two_local_maxima() {
  const double r3 = std::sqrt(3.0);
  return DenseMatrix{{1, 3, 0, 0}, {3, 1, 0, 0}, {0, 0, r3, 2}, {0, 0, 2, -r3}};
}

enum class Kernel { RungeLike, Wendland, RungeRing };

struct KernelSpec {
  Kernel kernel = Kernel::RungeLike;
  double param = 1.0;  // beta for RungeLike, s in {0, 1, 3} for Wendland
  Index rows = 2;
  Index cols = 2;
};

/// Chebyshev points cos(iπ/(N-1)), i = 0..N-1.
inline std::vector<double> chebyshev_points(Index N) {
  if (N < 2) throw std::invalid_argument("chebyshev_points: need N >= 2");
  std::vector<double> x(N);
  for (Index i = 0; i < N; ++i) x[i] = std::cos(static_cast<double>(i) * std::numbers::pi / static_cast<double>(N - 1));
  return x;
}

inline double kernel_value(const KernelSpec& spec, double x, double y) {
  switch (spec.kernel) {
    case Kernel::RungeLike: {
      const double r2 = x * x + y * y;
      return 1.0 / (1.0 + spec.param * r2 * r2);
    }
    case Kernel::Wendland: {
      const double d = std::abs(x - y);
      const double t = std::max(1.0 - d, 0.0);
      const double t2 = t * t, t4 = t2 * t2;
      if (spec.param == 0.0) return t2;
      if (spec.param == 1.0) return t4 * (4.0 * d + 1.0);
      return t4 * t4 * (((32.0 * d + 25.0) * d + 8.0) * d + 1.0);
    }
    case Kernel::RungeRing: {
      const double u = 0.5 - x * x - y * y;
      return 1.0 / (1.0 + 100.0 * u * u);
    }
  }
  return 0.0;
}

inline void validate(const KernelSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2) throw std::invalid_argument("kernel: grid counts must be >= 2");
  if (spec.kernel == Kernel::RungeLike && !(spec.param > 0.0))
    throw std::invalid_argument("kernel: beta must be > 0");
  if (spec.kernel == Kernel::Wendland && spec.param != 0.0 && spec.param != 1.0 && spec.param != 3.0)
    throw std::invalid_argument("kernel: Wendland s must be 0, 1 or 3");
}

/// A(i, j) = f(x_i, y_j) on Chebyshev grids of the requested sizes.
inline DenseMatrix kernel_matrix(const KernelSpec& spec) {
  validate(spec);
  const auto x = chebyshev_points(spec.rows);
  const auto y = chebyshev_points(spec.cols);
  DenseMatrix A(spec.rows, spec.cols);
  for (Index j = 0; j < spec.cols; ++j)
    for (Index i = 0; i < spec.rows; ++i) A(i, j) = kernel_value(spec, x[i], y[j]);
  return A;
}

inline std::string to_string(Kernel k) {
  switch (k) {
    case Kernel::RungeLike: return "runge";
    case Kernel::Wendland: return "wendland";
    case Kernel::RungeRing: return "ring";
  }
  return "?";
}

}  // namespace maxvol::gen

#endif  // MAXVOL_GEN_HPP
