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


#ifndef MAXVOL_VERIFY_HPP
#define MAXVOL_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "maxvol/errors.hpp"
#include "maxvol/matrix.hpp"
#include "maxvol/search.hpp"
#include "maxvol/volume.hpp"

namespace maxvol {

/// How the verifier measures a block's volume.
enum class VolumeOracle {
  Svd,          // product of singular values, any shape
  Determinant,  // |det| by partial-pivot LU; square blocks only, falls back to Svd otherwise
};

struct Certificate {
  bool passed = false;
  double worst_ratio = 0.0;  // largest vol(neighbor) / vol(selection)
  Move worst_move;
};

/// Relative slack the verifier grants on top of gamma.
inline constexpr double kVerifyTolerance = 1e-9;

namespace detail {

inline double oracle_log_volume(const DenseMatrix& B, VolumeOracle oracle) {
  if (oracle == VolumeOracle::Determinant && B.rows() == B.cols()) return log_abs_det(B);
  return log_volume(B);
}

}  // namespace detail

/// Exhaustive neighbor check. Every neighbor block is extracted from A and
/// its volume recomputed from scratch, so nothing is shared with the fast
/// ratio formulas. GE mode takes a k×k selection; QR mode uses only
/// selection.cols (all rows). Zero-volume neighbors never fail the check.
inline Certificate verify_local_maxvol(Mode mode, const DenseMatrix& A, const Selection& sel, double gamma,
                                       VolumeOracle oracle = VolumeOracle::Svd) {
  const Index m = A.rows(), n = A.cols();
  std::vector<Index> rows = sel.rows;
  if (mode == Mode::QR) {
    rows.resize(m);
    std::iota(rows.begin(), rows.end(), Index{0});
  } else if (sel.rows.size() != sel.cols.size()) {
    throw std::invalid_argument("verify: GE selection must be square");
  }
  validate(Selection{rows, sel.cols}, m, n);
  const Index k = sel.cols.size();
  const auto rp = permutation_with_leading(mode == Mode::GE ? std::span<const Index>(rows) : std::span<const Index>{},
                                           m);
  const auto cp = permutation_with_leading(sel.cols, n);

  Certificate cert;
  const double base = detail::oracle_log_volume(extract(A, {rows, sel.cols}), oracle);
  if (!std::isfinite(base)) {
    cert.worst_ratio = std::numeric_limits<double>::infinity();
    return cert;
  }
  std::vector<Index> tr = rows, tc = sel.cols;
  for (const Move& mv : Neighbors(mode, m, n, k)) {
    if (mv.row) tr[mv.row->out] = rp[k + mv.row->in];
    if (mv.col) tc[mv.col->out] = cp[k + mv.col->in];
    const double lv = detail::oracle_log_volume(extract(A, {tr, tc}), oracle);
    if (mv.row) tr[mv.row->out] = rows[mv.row->out];
    if (mv.col) tc[mv.col->out] = sel.cols[mv.col->out];
    if (!std::isfinite(lv)) continue;
    const double ratio = std::exp(lv - base);
    if (ratio > cert.worst_ratio) {
      cert.worst_ratio = ratio;
      cert.worst_move = mv;
    }
  }
  cert.passed = cert.worst_ratio <= gamma * (1.0 + kVerifyTolerance);
  return cert;
}

/// C(n, k) as a double (exact below 2^53).
inline double binomial(Index n, Index k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

inline constexpr double kBruteForceLimit = 1e7;

namespace detail {

/// Advances a sorted k-combination of [0, n) in lexicographic order.
inline bool next_combination(std::vector<Index>& c, Index n) {
  const Index k = c.size();
  for (Index i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (Index j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

struct GlobalMaxvol {
  Selection selection;
  double log_volume = -std::numeric_limits<double>::infinity();
};

/// Exhaustive search for a maximum volume p×q submatrix. The first
/// maximizer in lexicographic (rows, cols) order wins ties.
inline GlobalMaxvol brute_force_global_maxvol(const DenseMatrix& A, Index p, Index q) {
  const Index m = A.rows(), n = A.cols();
  if (p < 1 || q < 1 || p > m || q > n) throw std::invalid_argument("brute force: invalid block size");
  const double count = binomial(m, p) * binomial(n, q);
  if (count > kBruteForceLimit)
    throw SizeGuardExceeded("brute force: " + std::to_string(count) + " submatrices exceed the limit");
  const VolumeOracle oracle = p == q ? VolumeOracle::Determinant : VolumeOracle::Svd;
  GlobalMaxvol best;
  std::vector<Index> r(p);
  std::iota(r.begin(), r.end(), Index{0});
  do {
    std::vector<Index> c(q);
    std::iota(c.begin(), c.end(), Index{0});
    do {
      const double lv = detail::oracle_log_volume(extract(A, {r, c}), oracle);
      if (lv > best.log_volume) {
        best.log_volume = lv;
        best.selection = {r, c};
      }
    } while (detail::next_combination(c, n));
  } while (detail::next_combination(r, m));
  return best;
}

}  // namespace maxvol

#endif  // MAXVOL_VERIFY_HPP
