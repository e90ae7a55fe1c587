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


#ifndef MAXVOL_QR_HPP
#define MAXVOL_QR_HPP

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "maxvol/householder.hpp"
#include "maxvol/lowrank.hpp"
#include "maxvol/matrix.hpp"
#include "maxvol/random.hpp"
#include "maxvol/search.hpp"
#include "maxvol/svd.hpp"
#include "maxvol/volume.hpp"

namespace maxvol {

/// Partial QR with k selected columns:
///
///   A·P = [Q1 Q2] · [R11 R12; 0 R22].
///
/// Q2 is never formed. R22 is kept alongside its Gram matrix R22ᵀR22.
struct PartialQR {
  std::vector<Index> col_perm;
  Index k = 0;
  DenseMatrix q1;        // m×k, orthonormal columns
  DenseMatrix r11;       // k×k upper triangular, nonnegative diagonal
  DenseMatrix r12;       // k×(n-k)
  DenseMatrix r22;       // (m-k)×(n-k)
  DenseMatrix r22_gram;  // (n-k)×(n-k)

  Index cols() const { return col_perm.size(); }
  Index rows() const { return q1.rows(); }

  std::vector<Index> selected() const {
    return {col_perm.begin(), col_perm.begin() + static_cast<std::ptrdiff_t>(k)};
  }
  Selection selection() const { return Selection::columns(rows(), selected()); }
};

/// Cached quantities for the column-swap ratio.
struct QRState {
  PartialQR qr;
  DenseMatrix rr;             // R11⁻¹R12, k×(n-k)
  std::vector<double> g;      // diag((R11ᵀR11)⁻¹)
  std::vector<double> c;      // diag(R22ᵀR22)
  double log_volume = 0.0;    // Σ log R11(i,i)
};

namespace detail {

inline void check_qr_k(const DenseMatrix& A, Index k) {
  if (k < 1 || k > std::min(A.rows(), A.cols()))
    throw std::invalid_argument("QR: k must satisfy 1 <= k <= min(m, n)");
  if (!A.all_finite()) throw std::invalid_argument("QR: matrix has non-finite entries");
}

inline double qr_degenerate_threshold(const DenseMatrix& A) {
  double largest = 0.0;
  for (Index j = 0; j < A.cols(); ++j) largest = std::max(largest, norm2(A.col(j)));
  return kEps * static_cast<double>(std::max(A.rows(), A.cols())) * largest;
}

/// Packs k Householder steps on A(:, perm) into a QRState.
inline QRState qr_state_from_steps(HouseholderSteps H, std::vector<Index> perm, double threshold) {
  const Index k = H.steps, n = H.cols();
  const auto sgn = H.normalize_signs();
  QRState st;
  PartialQR& f = st.qr;
  f.k = k;
  f.col_perm = std::move(perm);
  f.r11 = H.r11();
  for (Index i = 0; i < k; ++i)
    if (!(f.r11(i, i) > threshold)) throw RankDeficient(i, "selected columns are numerically dependent");
  f.r12 = H.r12();
  f.r22 = H.r22();
  f.q1 = H.form_q(k);
  for (Index j = 0; j < k; ++j)
    if (sgn[j] < 0.0)
      for (double& v : f.q1.col(j)) v = -v;

  double lv = 0.0;
  for (Index i = 0; i < k; ++i) lv += std::log(f.r11(i, i));
  st.log_volume = lv;
  st.rr = solve_triangular(f.r11, f.r12, Side::Left, Uplo::Upper);
  const DenseMatrix rinv = solve_triangular(f.r11, DenseMatrix::identity(k), Side::Left, Uplo::Upper);
  st.g.assign(k, 0.0);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i <= j; ++i) st.g[i] += rinv(i, j) * rinv(i, j);
  st.c.assign(n - k, 0.0);
  for (Index j = 0; j < n - k; ++j) {
    const double nv = norm2(f.r22.col(j));
    st.c[j] = nv * nv;
  }
  return st;
}

}  // namespace detail

/// Rebuilds the state by unpivoted Householder QR on A(:, col_perm).
inline QRState qr_state_from_permutation(const DenseMatrix& A, std::vector<Index> col_perm, Index k) {
  const std::vector<Index> all = [&] {
    std::vector<Index> r(A.rows());
    std::iota(r.begin(), r.end(), Index{0});
    return r;
  }();
  HouseholderSteps H = householder_qr(permute(A, all, col_perm), k);
  return detail::qr_state_from_steps(std::move(H), std::move(col_perm), detail::qr_degenerate_threshold(A));
}

inline QRState qr_state_from_columns(const DenseMatrix& A, std::span<const Index> cols) {
  detail::check_index_list(cols, A.cols(), "column");
  if (cols.empty() || cols.size() > A.rows()) throw std::invalid_argument("QR: need 1 <= |cols| <= m");
  return qr_state_from_permutation(A, permutation_with_leading(cols, A.cols()), cols.size());
}

inline QRState cpqr_state(const DenseMatrix& A, Index k) {
  detail::check_qr_k(A, k);
  const double thr = detail::qr_degenerate_threshold(A);
  HouseholderSteps H = householder_cpqr(A, k);
  std::vector<Index> perm = H.perm;
  return detail::qr_state_from_steps(std::move(H), std::move(perm), thr);
}

/// Gram matrix R22ᵀR22 of the residual block.
inline void fill_residual_gram(PartialQR& f) { f.r22_gram = matmul_tn(f.r22, f.r22); }

/// k steps of column-pivoted Householder QR.
inline PartialQR cpqr_partial(const DenseMatrix& A, Index k) {
  PartialQR f = cpqr_state(A, k).qr;
  fill_residual_gram(f);
  return f;
}

/// vol(Â)/vol(A) after exchanging selected column s with trailing column t:
/// sqrt((R11⁻¹R12)(s,t)² + ((R11ᵀR11)⁻¹)(s,s)·(R22ᵀR22)(t,t)).
inline double qr_ratio(const QRState& st, Index s, Index t) {
  const double r = st.rr(s, t);
  return std::sqrt(r * r + st.g[s] * st.c[t]);
}

inline double qr_ratio(const QRState& st, const Move& mv) {
  if (mv.row || !mv.col) throw std::invalid_argument("qr_ratio: QR moves swap one column only");
  return qr_ratio(st, mv.col->out, mv.col->in);
}

class QrPolicy {
 public:
  QrPolicy(const DenseMatrix& A, QRState st) : A_(&A), st_(std::move(st)) {}

  const QRState& state() const { return st_; }
  QRState release() && { return std::move(st_); }

  double log_volume() const { return st_.log_volume; }

  std::optional<std::pair<Move, double>> first_exceeding(double thr) const {
    const Index k = st_.qr.k, nk = st_.qr.cols() - k;
    const double thr2 = thr * thr;
    for (Index s = 0; s < k; ++s)
      for (Index t = 0; t < nk; ++t) {
        const double r = st_.rr(s, t);
        if (r * r + st_.g[s] * st_.c[t] > thr2) {
          const double ratio = qr_ratio(st_, s, t);
          if (ratio > thr) return std::pair{Move{std::nullopt, Swap{s, t}}, ratio};
        }
      }
    return std::nullopt;
  }

  std::pair<Move, double> max_ratio() const {
    const Index k = st_.qr.k, nk = st_.qr.cols() - k;
    Move best_mv;
    double best = 0.0;
    for (Index s = 0; s < k; ++s)
      for (Index t = 0; t < nk; ++t) {
        const double r = qr_ratio(st_, s, t);
        if (r > best) {
          best = r;
          best_mv = Move{std::nullopt, Swap{s, t}};
        }
      }
    return {best_mv, best};
  }

  void apply(const Move& mv) {
    auto cp = st_.qr.col_perm;
    std::swap(cp[mv.col->out], cp[st_.qr.k + mv.col->in]);
    st_ = qr_state_from_permutation(*A_, std::move(cp), st_.qr.k);
  }

 private:
  const DenseMatrix* A_;
  QRState st_;
};

/// Path-length bound from a CPQR start: k log_g 2 + log_g(n-k)/2.
inline double qr_path_bound(Index n, Index k, double gamma) {
  if (!(gamma > 1.0)) return std::numeric_limits<double>::infinity();
  const double lg = std::log(gamma);
  const double tail = n > k ? 0.5 * std::log(static_cast<double>(n - k)) / lg : 0.0;
  return static_cast<double>(k) * std::log(2.0) / lg + tail;
}

/// Extra swaps allowed past the CPQR path bound before the cap trips.
inline constexpr Index kQrCapSlack = 8;

inline Index qr_swap_cap(Index m, Index n, Index k, const SearchConfig& cfg) {
  if (cfg.max_swaps) return *cfg.max_swaps;
  if (cfg.init == InitKind::Greedy && cfg.gamma > 1.0)
    return static_cast<Index>(std::ceil(qr_path_bound(n, k, cfg.gamma))) + kQrCapSlack;
  return default_swap_cap(m, n, k);
}

namespace detail {

inline QRState qr_random_start(const DenseMatrix& A, Index k, std::uint64_t seed) {
  Rng rng(seed);
  constexpr int kAttempts = 50;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const auto cols = rng.sample(A.cols(), k);
    try {
      return qr_state_from_columns(A, cols);
    } catch (const RankDeficient&) {
    }
  }
  throw RankDeficient(kAttempts, "no full-rank random column subset found");
}

}  // namespace detail

inline SearchConfig qr_default_config() {
  SearchConfig cfg;
  cfg.gamma = 2.0;
  return cfg;
}

/// QR with (gamma-)local maximum volume column selection. Defaults to gamma = 2.
inline std::pair<PartialQR, SearchReport> qr_local_maxvol(const DenseMatrix& A, Index k,
                                                         const SearchConfig& cfg = qr_default_config()) {
  validate(cfg);
  detail::check_qr_k(A, k);
  QRState start;
  switch (cfg.init) {
    case InitKind::Greedy: start = cpqr_state(A, k); break;
    case InitKind::Given:
      if (cfg.given.cols.size() != k) throw std::invalid_argument("QR: given selection must have k columns");
      start = qr_state_from_columns(A, cfg.given.cols);
      break;
    case InitKind::RandomSeeded: start = detail::qr_random_start(A, k, cfg.seed); break;
  }
  const Index m = A.rows(), n = A.cols();
  QrPolicy policy(A, std::move(start));
  SearchReport rep = run_search(policy, cfg, qr_swap_cap(m, n, k, cfg));
  rep.mode = Mode::QR;
  rep.m = m;
  rep.n = n;
  rep.k = k;
  if (cfg.init == InitKind::Greedy) rep.theoretical_path_bound = qr_path_bound(n, k, cfg.gamma);
  PartialQR f = std::move(policy).release().qr;
  fill_residual_gram(f);
  return {std::move(f), std::move(rep)};
}

/// ‖R11⁻¹R12‖_max.
inline double interpolative_bound_qr(const PartialQR& f) {
  for (Index i = 0; i < f.k; ++i)
    if (!(std::abs(f.r11(i, i)) > 0.0)) throw RankDeficient(i, "R11 is singular");
  if (f.r12.empty()) return 0.0;
  return max_norm(solve_triangular(f.r11, f.r12, Side::Left, Uplo::Upper));
}

/// A_k = Q1·[R11 R12]·P⁻¹ as X·Yᵀ.
inline LowRank qr_lowrank(const PartialQR& f) {
  const Index n = f.cols(), k = f.k;
  LowRank out{f.q1, DenseMatrix(n, k)};
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < k; ++r) out.y(f.col_perm[r], c) = f.r11(c, r);
    for (Index r = k; r < n; ++r) out.y(f.col_perm[r], c) = f.r12(c, r - k);
  }
  return out;
}

/// ‖R11⁻¹‖₂, the interpolation-operator norm for DEIM-style consumers.
inline double r11_inv_norm2(const PartialQR& f) {
  return norm_2(solve_triangular(f.r11, DenseMatrix::identity(f.k), Side::Left, Uplo::Upper));
}

/// Residual singular values σ_j(R22), from the eigenvalues of R22ᵀR22.
inline std::vector<double> residual_singular_values(const PartialQR& f) {
  auto ev = symmetric_eigenvalues(f.r22_gram);
  const Index r = std::min(f.r22.rows(), f.r22.cols());
  ev.resize(std::min<Index>(ev.size(), r));
  for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
  return ev;
}

struct CholeskyLinkResult {
  bool qr_local = false;    // m×k column block is local maxvol in A
  bool gram_local = false;  // k×k principal block of AᵀA beats every symmetric swap
  double qr_worst = 0.0;    // largest column-swap volume ratio
  double gram_worst = 0.0;  // largest symmetric-swap determinant ratio
  bool agree() const { return qr_local == gram_local; }
};

/// Compares the column-subset certificate for A with the symmetric-swap
/// certificate for the principal block of AᵀA. Both sides are computed from
/// scratch: SVD volumes for A, LU determinants for AᵀA.
inline CholeskyLinkResult cholesky_link_check(const DenseMatrix& A, std::span<const Index> cols,
                                              double tolerance = 1e-9) {
  detail::check_index_list(cols, A.cols(), "column");
  const Index n = A.cols(), k = cols.size();
  const DenseMatrix G = matmul_tn(A, A);
  auto perm = permutation_with_leading(cols, n);
  std::vector<Index> sel(cols.begin(), cols.end());
  const double base_qr = log_volume(extract_columns(A, sel));
  const double base_g = log_abs_det(permute(G, sel, sel));
  CholeskyLinkResult res;
  for (Index s = 0; s < k; ++s) {
    for (Index t = k; t < n; ++t) {
      auto trial = sel;
      trial[s] = perm[t];
      const double lq = log_volume(extract_columns(A, trial));
      const double lg = log_abs_det(permute(G, trial, trial));
      if (std::isfinite(lq)) res.qr_worst = std::max(res.qr_worst, std::exp(lq - base_qr));
      if (std::isfinite(lg)) res.gram_worst = std::max(res.gram_worst, std::exp(lg - base_g));
    }
  }
  res.qr_local = res.qr_worst <= 1.0 + tolerance;
  res.gram_local = res.gram_worst <= 1.0 + tolerance;
  return res;
}

}  // namespace maxvol

#endif  // MAXVOL_QR_HPP
