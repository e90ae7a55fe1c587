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


#ifndef MAXVOL_ASSESS_HPP
#define MAXVOL_ASSESS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "maxvol/ge.hpp"
#include "maxvol/householder.hpp"
#include "maxvol/lowrank.hpp"
#include "maxvol/matrix.hpp"
#include "maxvol/qr.hpp"
#include "maxvol/search.hpp"
#include "maxvol/svd.hpp"

namespace maxvol {

/// μ_B: the largest neighbor volume ratio of the selection, clamped below at
/// 1, evaluated with the fast ratio formulas. GE neighbors include one-sided
/// swaps. QR mode reads only selection.cols.
inline double mu_metric(const DenseMatrix& A, const Selection& sel, Mode mode) {
  if (mode == Mode::GE) {
    GePolicy p(A, ge_state_from_selection(A, sel));
    return std::max(p.max_ratio().second, 1.0);
  }
  QrPolicy p(A, qr_state_from_columns(A, sel.cols));
  return std::max(p.max_ratio().second, 1.0);
}

struct BoundProfile {
  Mode mode = Mode::GE;
  Index m = 0, n = 0, k = 0;
  double gamma_or_mu = 1.0;
  double mu_factor = 1.0;
};

/// Closed-form rank-revealing factor for a gamma-local maxvol pivot:
/// GE 1 + 5γ²k√(mn), QR √(1 + 5γ²kn). Also valid with γ replaced by μ_B.
inline BoundProfile mu_factor(Mode mode, Index m, Index n, Index k, double gamma = 1.0) {
  BoundProfile b{mode, m, n, k, gamma, 1.0};
  const double g2k = gamma * gamma * static_cast<double>(k);
  if (mode == Mode::GE)
    b.mu_factor = 1.0 + 5.0 * g2k * std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  else
    b.mu_factor = std::sqrt(1.0 + 5.0 * g2k * static_cast<double>(n));
  return b;
}

/// Singular values of X·Yᵀ from the thin factors: QR of X, then the SVD of
/// the k×n product R·Yᵀ. O(k²(m + n)).
inline std::vector<double> lowrank_singular_values(const LowRank& f) {
  const Index k = f.x.cols();
  if (k == 0) return {};
  const Index steps = std::min(f.x.rows(), k);
  HouseholderSteps H = householder_qr(f.x, steps);
  DenseMatrix R(steps, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i <= std::min(j, steps - 1); ++i) R(i, j) = H.work(i, j);
  return singular_values(matmul_nt(R, f.y));
}

struct SandwichReport {
  std::vector<double> sigma_a;         // σ_j(A), all min(m, n)
  std::vector<double> sigma_ak;        // σ_j(A_k), j <= k
  std::vector<double> sigma_residual;  // σ_j(A - A_k), j <= min(m, n) - k
  double mu = 1.0;
  /// Largest of σ_j(A)/σ_j(A_k), σ_j(A_k)/σ_j(A) and σ_j(A-A_k)/σ_{k+j}(A),
  /// skipping pairs that are both at the noise floor.
  double worst_ratio = 1.0;
  /// Largest violation of the lower residual bound σ_{k+j}(A) <= σ_j(A-A_k),
  /// as σ_{k+j}(A)/σ_j(A-A_k); at most 1 up to roundoff.
  double worst_interlace = 0.0;
  double noise_floor = 0.0;
  bool passed = false;
};

inline constexpr double kSandwichRelSlack = 1e-10;
inline constexpr double kSandwichFloorFactor = 64.0;

/// Checks (1/μ)σ_j(A) <= σ_j(A_k) <= μσ_j(A) for j <= k and
/// σ_{k+j}(A) <= σ_j(A - A_k) <= μσ_{k+j}(A), against oracle singular values.
/// Values within noise_floor = 64·eps·σ_1(A)·max(m, n) of zero are treated
/// as zero.
inline SandwichReport validate_sandwich(const DenseMatrix& A, const LowRank& f, double mu,
                                        std::vector<double> sigma_a = {}) {
  const Index m = A.rows(), n = A.cols(), k = f.x.cols(), r = std::min(m, n);
  SandwichReport rep;
  rep.mu = mu;
  rep.sigma_a = sigma_a.empty() ? singular_values(A) : std::move(sigma_a);
  rep.sigma_ak = lowrank_singular_values(f);
  rep.sigma_ak.resize(std::min(k, r), 0.0);
  DenseMatrix res = A;
  res -= f.dense();
  rep.sigma_residual = singular_values(res);
  rep.sigma_residual.resize(r - std::min(k, r), 0.0);

  const double s1 = rep.sigma_a.empty() ? 0.0 : rep.sigma_a.front();
  rep.noise_floor = kSandwichFloorFactor * kEps * s1 * static_cast<double>(std::max(m, n));
  const double fl = rep.noise_floor;
  auto le = [&](double a, double b) { return a <= b * (1.0 + kSandwichRelSlack) + fl; };
  auto ratio = [&](double a, double b) {
    if (a <= fl && b <= fl) return 1.0;
    return b <= 0.0 ? std::numeric_limits<double>::infinity() : a / b;
  };
  bool ok = true;
  for (Index j = 0; j < rep.sigma_ak.size(); ++j) {
    const double sa = rep.sigma_a[j], sk = rep.sigma_ak[j];
    ok = ok && le(sa, mu * sk) && le(sk, mu * sa);
    rep.worst_ratio = std::max({rep.worst_ratio, ratio(sa, sk), ratio(sk, sa)});
  }
  for (Index j = 0; j < rep.sigma_residual.size(); ++j) {
    const double sa = rep.sigma_a[k + j], se = rep.sigma_residual[j];
    ok = ok && le(sa, se) && le(se, mu * sa);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio(se, sa));
    rep.worst_interlace = std::max(rep.worst_interlace, ratio(sa, se));
  }
  rep.passed = ok;
  return rep;
}

enum class NecessityForm {
  GeTheorem,    // ν² + μ²
  QrTheorem,    // √(ν² + μ⁴)
  GeCorollary,  // ν² + μ²(1 + √(k(m-k))ν)(1 + √(k(n-k))ν)
  QrCorollary,  // √(ν² + (1 + √(k(n-k))ν)²μ⁴)
};

/// Largest μ_B a pivot can have if it reveals rank with factor mu and has
/// interpolative bound nu.
inline double necessity_gamma_bound(NecessityForm form, double mu, double nu, Index m, Index n, Index k) {
  if (!(mu >= 0.0) || !(nu >= 0.0)) throw std::invalid_argument("necessity bound: mu and nu must be >= 0");
  const double mu2 = mu * mu, nu2 = nu * nu;
  const double rm = std::sqrt(static_cast<double>(k) * static_cast<double>(m - std::min(m, k)));
  const double rn = std::sqrt(static_cast<double>(k) * static_cast<double>(n - std::min(n, k)));
  switch (form) {
    case NecessityForm::GeTheorem: return nu2 + mu2;
    case NecessityForm::QrTheorem: return std::sqrt(nu2 + mu2 * mu2);
    case NecessityForm::GeCorollary: return nu2 + mu2 * (1.0 + rm * nu) * (1.0 + rn * nu);
    case NecessityForm::QrCorollary: {
      const double a = 1.0 + rn * nu;
      return std::sqrt(nu2 + a * a * mu2 * mu2);
    }
  }
  return std::numeric_limits<double>::infinity();
}

/// Rank-revealing and interpolative constants measured from a factorization.
struct MeasuredConstants {
  double mu = 1.0;
  double nu = 0.0;
};

namespace detail {

/// max(σ_k(A)/σ_k(B), ‖E‖₂/σ_{k+1}(A)), treating 0/0 at the noise floor as 1.
inline double measured_mu(std::span<const double> sigma_a, double sigma_k_block, double residual_norm, Index k,
                          double floor) {
  auto q = [&](double a, double b) {
    if (a <= floor && b <= floor) return 1.0;
    return b <= 0.0 ? std::numeric_limits<double>::infinity() : a / b;
  };
  double mu = q(sigma_a[k - 1], sigma_k_block);
  if (k < sigma_a.size()) mu = std::max(mu, q(residual_norm, sigma_a[k]));
  return std::max(mu, 1.0);
}

inline double floor_for(std::span<const double> sigma_a, Index m, Index n) {
  return sigma_a.empty() ? 0.0 : kSandwichFloorFactor * kEps * sigma_a.front() * static_cast<double>(std::max(m, n));
}

}  // namespace detail

/// GE: μ = max(σ_k(A)/σ_k(A11), ‖S‖₂/σ_{k+1}(A)); ν = max(‖W‖_max, ‖Z‖_max).
inline MeasuredConstants measure_constants(const PartialLU& lu, std::span<const double> sigma_a) {
  const Index m = lu.rows(), n = lu.cols(), k = lu.k;
  const auto s11 = singular_values(lu.a11);
  const double sn = lu.s.empty() ? 0.0 : norm_2(lu.s);
  const auto [wb, zb] = interpolative_bounds_ge(lu);
  return {detail::measured_mu(sigma_a, s11[k - 1], sn, k, detail::floor_for(sigma_a, m, n)), std::max(wb, zb)};
}

/// QR: μ = max(σ_k(A)/σ_k(R11), ‖R22‖₂/σ_{k+1}(A)); ν = ‖R11⁻¹R12‖_max.
inline MeasuredConstants measure_constants(const PartialQR& qr, std::span<const double> sigma_a) {
  const Index m = qr.rows(), n = qr.cols(), k = qr.k;
  const auto s11 = singular_values(qr.r11);
  const double rn = qr.r22.empty() ? 0.0 : norm_2(qr.r22);
  return {detail::measured_mu(sigma_a, s11[k - 1], rn, k, detail::floor_for(sigma_a, m, n)),
          interpolative_bound_qr(qr)};
}

}  // namespace maxvol

#endif  // MAXVOL_ASSESS_HPP
