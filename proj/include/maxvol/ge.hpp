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

#ifndef MAXVOL_GE_HPP
#define MAXVOL_GE_HPP

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "maxvol/lowrank.hpp"
#include "maxvol/matrix.hpp"
#include "maxvol/random.hpp"
#include "maxvol/search.hpp"

namespace maxvol {

/// Partial LU factorization with a k×k pivot block:
///
///   A(row_perm, col_perm) = [A11 A12; A21 A22]
///                         = [I 0; W I] · [A11 A12; 0 S],
///
/// with W = A21·A11⁻¹, Z = A11⁻¹·A12 and S = A22 − A21·A11⁻¹·A12.
struct PartialLU {
  std::vector<Index> row_perm;
  std::vector<Index> col_perm;
  Index k = 0;
  DenseMatrix a11;  // k×k
  DenseMatrix w;    // (m-k)×k
  DenseMatrix z;    // k×(n-k)
  DenseMatrix s;    // (m-k)×(n-k)

  Index rows() const { return row_perm.size(); }
  Index cols() const { return col_perm.size(); }

  Selection selection() const {
    return {{row_perm.begin(), row_perm.begin() + static_cast<std::ptrdiff_t>(k)},
            {col_perm.begin(), col_perm.begin() + static_cast<std::ptrdiff_t>(k)}};
  }
};

/// Cached quantities for O(1) neighbor volume ratios.
struct GEState {
  PartialLU lu;
  DenseMatrix a11_inv;
  double log_volume = 0.0;  // log |det A11|
};

/// |pivot| at or below this value counts as a zero pivot.
inline double degenerate_pivot_threshold(const DenseMatrix& A) {
  return kEps * max_norm(A) * static_cast<double>(std::max(A.rows(), A.cols()));
}

namespace detail {

inline void check_ge_k(const DenseMatrix& A, Index k) {
  if (k < 1 || k > std::min(A.rows(), A.cols()))
    throw std::invalid_argument("GE: k must satisfy 1 <= k <= min(m, n)");
  if (!A.all_finite()) throw std::invalid_argument("GE: matrix has non-finite entries");
}

}  // namespace detail

/// Recomputes every cached block from the permutations. O(kmn).
inline GEState ge_state_from_permutations(const DenseMatrix& A, std::vector<Index> row_perm,
                                          std::vector<Index> col_perm, Index k) {
  const Index m = A.rows(), n = A.cols();
  std::span<const Index> rp(row_perm), cp(col_perm);
  GEState st;
  st.lu.k = k;
  st.lu.a11 = permute(A, rp.first(k), cp.first(k));
  LuPartial f(st.lu.a11);
  const double thr = degenerate_pivot_threshold(A);
  for (Index i = 0; i < k; ++i) {
    if (!(std::abs(f.lu(i, i)) > thr)) throw RankDeficient(i, "pivot block is numerically singular");
  }
  st.log_volume = f.log_abs_det();
  st.a11_inv = f.inverse();
  const DenseMatrix a21 = permute(A, rp.subspan(k), cp.first(k));
  const DenseMatrix a12 = permute(A, rp.first(k), cp.subspan(k));
  st.lu.w = f.solve_right(a21);
  st.lu.z = f.solve(a12);
  st.lu.s = permute(A, rp.subspan(k), cp.subspan(k));
  if (m > k && n > k) st.lu.s -= matmul(a21, st.lu.z);
  st.lu.row_perm = std::move(row_perm);
  st.lu.col_perm = std::move(col_perm);
  return st;
}

inline GEState ge_state_from_selection(const DenseMatrix& A, const Selection& sel) {
  validate(sel, A.rows(), A.cols());
  if (sel.rows.size() != sel.cols.size() || sel.rows.empty())
    throw std::invalid_argument("GE: selection must be a nonempty square block");
  return ge_state_from_permutations(A, permutation_with_leading(sel.rows, A.rows()),
                                    permutation_with_leading(sel.cols, A.cols()), sel.rows.size());
}

/// k steps of Gaussian elimination with complete pivoting. The returned state
/// carries the pivot order in its permutations and blocks taken from the
/// elimination itself.
inline GEState gecp_state(const DenseMatrix& A, Index k) {
  detail::check_ge_k(A, k);
  const Index m = A.rows(), n = A.cols();
  DenseMatrix work = A;
  std::vector<Index> rp(m), cp(n);
  std::iota(rp.begin(), rp.end(), Index{0});
  std::iota(cp.begin(), cp.end(), Index{0});
  const double thr = degenerate_pivot_threshold(A);

  for (Index p = 0; p < k; ++p) {
    Index bi = p, bj = p;
    double best = -1.0;
    for (Index j = p; j < n; ++j) {
      const auto c = work.col(j);
      for (Index i = p; i < m; ++i) {
        if (std::abs(c[i]) > best) {
          best = std::abs(c[i]);
          bi = i;
          bj = j;
        }
      }
    }
    if (!(best > thr)) throw RankDeficient(p, "complete pivoting found no usable pivot");
    if (bi != p) {
      for (Index j = 0; j < n; ++j) std::swap(work(p, j), work(bi, j));
      std::swap(rp[p], rp[bi]);
    }
    if (bj != p) {
      auto a = work.col(p);
      auto b = work.col(bj);
      std::swap_ranges(a.begin(), a.end(), b.begin());
      std::swap(cp[p], cp[bj]);
    }
    const double pivot = work(p, p);
    auto lcol = work.col(p);
    for (Index i = p + 1; i < m; ++i) lcol[i] /= pivot;
    for (Index j = p + 1; j < n; ++j) {
      const double u = work(p, j);
      if (u == 0.0) continue;
      auto c = work.col(j);
      for (Index i = p + 1; i < m; ++i) c[i] -= lcol[i] * u;
    }
  }

  GEState st;
  st.lu.k = k;
  st.lu.a11 = permute(A, std::span<const Index>(rp).first(k), std::span<const Index>(cp).first(k));
  DenseMatrix l11(k, k), u11(k, k);
  for (Index j = 0; j < k; ++j) {
    l11(j, j) = 1.0;
    for (Index i = 0; i <= j; ++i) u11(i, j) = work(i, j);
    for (Index i = j + 1; i < k; ++i) l11(i, j) = work(i, j);
  }
  double lv = 0.0;
  for (Index i = 0; i < k; ++i) lv += std::log(std::abs(u11(i, i)));
  st.log_volume = lv;
  const DenseMatrix l21 = block(work, k, 0, m - k, k);
  const DenseMatrix u12 = block(work, 0, k, k, n - k);
  st.lu.w = solve_triangular(l11, l21, Side::Right, Uplo::Lower, /*unit_diagonal=*/true);
  st.lu.z = solve_triangular(u11, u12, Side::Left, Uplo::Upper);
  const DenseMatrix linv =
      solve_triangular(l11, DenseMatrix::identity(k), Side::Left, Uplo::Lower, /*unit_diagonal=*/true);
  st.a11_inv = solve_triangular(u11, linv, Side::Left, Uplo::Upper);
  st.lu.s = block(work, k, k, m - k, n - k);
  st.lu.row_perm = std::move(rp);
  st.lu.col_perm = std::move(cp);
  return st;
}

inline PartialLU gecp_partial(const DenseMatrix& A, Index k) { return gecp_state(A, k).lu; }

/// vol(Â11) / vol(A11) for the neighbor reached by `mv`.
///
/// Combined swap of row i with row k+j and column s with column k+t:
///   |Z(s,t)·W(j,i) + A11⁻¹(s,i)·S(j,t)|.
/// Row-only swap (matrix determinant lemma with a rank-one row change):
///   |W(j,i)|.  Column-only swap: |Z(s,t)|.
inline double ge_ratio(const GEState& st, const Move& mv) {
  const PartialLU& f = st.lu;
  if (mv.row && mv.col) {
    const Index i = mv.row->out, j = mv.row->in, s = mv.col->out, t = mv.col->in;
    return std::abs(f.z(s, t) * f.w(j, i) + st.a11_inv(s, i) * f.s(j, t));
  }
  if (mv.row) return std::abs(f.w(mv.row->in, mv.row->out));
  if (mv.col) return std::abs(f.z(mv.col->out, mv.col->in));
  return 1.0;
}

/// Neighbor scan over a GEState with exact branch-and-bound pruning: a block
/// of combined moves is skipped only when an upper bound on every ratio in it
/// is already at or below the target.
class GePolicy {
 public:
  GePolicy(const DenseMatrix& A, GEState st) : A_(&A), st_(std::move(st)) { refresh_aux(); }

  const GEState& state() const { return st_; }
  GEState release() && { return std::move(st_); }

  double log_volume() const { return st_.log_volume; }

  std::optional<std::pair<Move, double>> first_exceeding(double thr) const {
    const auto& f = st_.lu;
    const Index k = f.k, mk = f.rows() - k, nk = f.cols() - k;
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < mk; ++j) {
        const double r = std::abs(f.w(j, i));
        if (r > thr) return std::pair{Move{Swap{i, j}, std::nullopt}, r};
      }
    for (Index s = 0; s < k; ++s)
      for (Index t = 0; t < nk; ++t) {
        const double r = std::abs(zt_(t, s));
        if (r > thr) return std::pair{Move{std::nullopt, Swap{s, t}}, r};
      }
    std::optional<std::pair<Move, double>> hit;
    scan_combined(thr, [&](Index i, Index j, Index s, Index t, double r) {
      if (r > thr) {
        hit = std::pair{Move{Swap{i, j}, Swap{s, t}}, r};
        return true;
      }
      return false;
    });
    return hit;
  }

  std::pair<Move, double> max_ratio() const {
    const auto& f = st_.lu;
    const Index k = f.k, mk = f.rows() - k, nk = f.cols() - k;
    Move best_mv;
    double best = 0.0;
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < mk; ++j)
        if (std::abs(f.w(j, i)) > best) {
          best = std::abs(f.w(j, i));
          best_mv = Move{Swap{i, j}, std::nullopt};
        }
    for (Index s = 0; s < k; ++s)
      for (Index t = 0; t < nk; ++t)
        if (std::abs(zt_(t, s)) > best) {
          best = std::abs(zt_(t, s));
          best_mv = Move{std::nullopt, Swap{s, t}};
        }
    // The pruning threshold tightens as better moves are found.
    double floor = best;
    scan_combined_dynamic(floor, [&](Index i, Index j, Index s, Index t, double r) {
      if (r > best) {
        best = r;
        best_mv = Move{Swap{i, j}, Swap{s, t}};
        floor = r;
      }
    });
    return {best_mv, best};
  }

  void apply(const Move& mv) {
    auto rp = st_.lu.row_perm;
    auto cp = st_.lu.col_perm;
    apply_move(mv, st_.lu.k, rp, cp);
    st_ = ge_state_from_permutations(*A_, std::move(rp), std::move(cp), st_.lu.k);
    refresh_aux();
  }

 private:
  static constexpr double kBoundSlack = 1.0 + 8.0 * kEps;

  void refresh_aux() {
    const auto& f = st_.lu;
    const Index k = f.k, mk = f.rows() - k, nk = f.cols() - k;
    zt_ = f.z.transpose();
    st_t_ = f.s.transpose();
    zrow_.assign(k, 0.0);
    zmax_ = 0.0;
    for (Index s = 0; s < k; ++s) {
      for (Index t = 0; t < nk; ++t) zrow_[s] = std::max(zrow_[s], std::abs(zt_(t, s)));
      zmax_ = std::max(zmax_, zrow_[s]);
    }
    srow_.assign(mk, 0.0);
    for (Index j = 0; j < mk; ++j)
      for (Index t = 0; t < nk; ++t) srow_[j] = std::max(srow_[j], std::abs(st_t_(t, j)));
    ainv_col_.assign(k, 0.0);
    for (Index i = 0; i < k; ++i)
      for (Index s = 0; s < k; ++s) ainv_col_[i] = std::max(ainv_col_[i], std::abs(st_.a11_inv(s, i)));
  }

  // Visits combined moves in lexicographic (i, j, s, t) order, skipping
  // provably non-exceeding blocks; stops when visit returns true.
  template <class Visit>
  void scan_combined(double thr, Visit&& visit) const {
    const auto& f = st_.lu;
    const Index k = f.k, mk = f.rows() - k, nk = f.cols() - k;
    if (mk == 0 || nk == 0) return;
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < mk; ++j) {
        const double w = f.w(j, i);
        if ((std::abs(w) * zmax_ + ainv_col_[i] * srow_[j]) * kBoundSlack <= thr) continue;
        const auto srowj = st_t_.col(j);
        for (Index s = 0; s < k; ++s) {
          const double a = st_.a11_inv(s, i);
          if ((std::abs(w) * zrow_[s] + std::abs(a) * srow_[j]) * kBoundSlack <= thr) continue;
          const auto zs = zt_.col(s);
          for (Index t = 0; t < nk; ++t) {
            const double r = std::abs(zs[t] * w + a * srowj[t]);
            if (r > thr && visit(i, j, s, t, r)) return;
          }
        }
      }
    }
  }

  template <class Visit>
  void scan_combined_dynamic(double& floor, Visit&& visit) const {
    const auto& f = st_.lu;
    const Index k = f.k, mk = f.rows() - k, nk = f.cols() - k;
    if (mk == 0 || nk == 0) return;
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < mk; ++j) {
        const double w = f.w(j, i);
        if ((std::abs(w) * zmax_ + ainv_col_[i] * srow_[j]) * kBoundSlack <= floor) continue;
        const auto srowj = st_t_.col(j);
        for (Index s = 0; s < k; ++s) {
          const double a = st_.a11_inv(s, i);
          if ((std::abs(w) * zrow_[s] + std::abs(a) * srow_[j]) * kBoundSlack <= floor) continue;
          const auto zs = zt_.col(s);
          for (Index t = 0; t < nk; ++t) {
            const double r = std::abs(zs[t] * w + a * srowj[t]);
            if (r > floor) visit(i, j, s, t, r);
          }
        }
      }
    }
  }

  const DenseMatrix* A_;
  GEState st_;
  DenseMatrix zt_;    // Zᵀ, (n-k)×k
  DenseMatrix st_t_;  // Sᵀ, (n-k)×(m-k)
  std::vector<double> zrow_, srow_, ainv_col_;
  double zmax_ = 0.0;
};

namespace detail {

/// Uniformly random nonsingular k×k selection, up to 50 draws.
inline GEState ge_random_start(const DenseMatrix& A, Index k, std::uint64_t seed) {
  Rng rng(seed);
  constexpr int kAttempts = 50;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Selection sel{rng.sample(A.rows(), k), rng.sample(A.cols(), k)};
    try {
      return ge_state_from_selection(A, sel);
    } catch (const RankDeficient&) {
    }
  }
  throw RankDeficient(kAttempts, "no nonsingular random selection found");
}

/// Path-length bound for a GECP start: (k+1) log_g 4 + log_g(k + rho)
/// + log_g(n-k)/2 + log_g(m-k)/2.
inline double ge_path_bound(Index m, Index n, Index k, double gamma, double rho) {
  if (!(gamma > 1.0)) return std::numeric_limits<double>::infinity();
  const double lg = std::log(gamma);
  auto half_log = [&](Index d) { return d > 0 ? 0.5 * std::log(static_cast<double>(d)) / lg : 0.0; };
  return static_cast<double>(k + 1) * std::log(4.0) / lg + std::log(static_cast<double>(k) + rho) / lg +
         half_log(n - k) + half_log(m - k);
}

}  // namespace detail

/// GE with (gamma-)local maximum volume pivoting. gamma = 1 is the strict
/// search; gamma > 1 the relaxed one.
inline std::pair<PartialLU, SearchReport> ge_local_maxvol(const DenseMatrix& A, Index k,
                                                         const SearchConfig& cfg = {}) {
  validate(cfg);
  detail::check_ge_k(A, k);
  GEState start;
  switch (cfg.init) {
    case InitKind::Greedy: start = gecp_state(A, k); break;
    case InitKind::Given:
      if (cfg.given.rows.size() != k || cfg.given.cols.size() != k)
        throw std::invalid_argument("GE: given selection must be k×k");
      start = ge_state_from_selection(A, cfg.given);
      break;
    case InitKind::RandomSeeded: start = detail::ge_random_start(A, k, cfg.seed); break;
  }
  const Index m = A.rows(), n = A.cols();
  const Index cap = cfg.max_swaps.value_or(default_swap_cap(m, n, k));
  GePolicy policy(A, std::move(start));
  SearchReport rep = run_search(policy, cfg, cap);
  rep.mode = Mode::GE;
  rep.m = m;
  rep.n = n;
  rep.k = k;
  if (cfg.init == InitKind::Greedy) {
    const double rho = cfg.growth_factor.value_or(wilkinson_growth_bound(k + 1));
    rep.theoretical_path_bound = detail::ge_path_bound(m, n, k, cfg.gamma, rho);
  }
  return {std::move(policy).release().lu, std::move(rep)};
}

/// (‖A21·A11⁻¹‖_max, ‖A11⁻¹·A12‖_max).
inline std::pair<double, double> interpolative_bounds_ge(const PartialLU& lu) {
  return {max_norm(lu.w), max_norm(lu.z)};
}

/// A_k = P1ᵀ [I; W] A11 [I Z] P2ᵀ as X·Yᵀ with X = A(:, J) and Y = P2ᵀ[I Z]ᵀ.
inline LowRank ge_lowrank(const PartialLU& lu) {
  const Index m = lu.rows(), n = lu.cols(), k = lu.k;
  LowRank f{DenseMatrix(m, k), DenseMatrix(n, k)};
  const DenseMatrix wa = matmul(lu.w, lu.a11);
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < k; ++r) f.x(lu.row_perm[r], c) = lu.a11(r, c);
    for (Index r = k; r < m; ++r) f.x(lu.row_perm[r], c) = wa(r - k, c);
    f.y(lu.col_perm[c], c) = 1.0;
    for (Index r = k; r < n; ++r) f.y(lu.col_perm[r], c) = lu.z(c, r - k);
  }
  return f;
}

}  // namespace maxvol

#endif  // MAXVOL_GE_HPP
