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

#ifndef MAXVOL_VOLUME_HPP
#define MAXVOL_VOLUME_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "maxvol/matrix.hpp"
#include "maxvol/svd.hpp"

namespace maxvol {

// The volume of a p×q matrix is the product of its min(p, q) singular values.
// Some authors use det(AᵀA) for tall matrices instead; that is the square of
// this quantity and is not used anywhere in this library.

/// Singular values at or below eps * sigma_1 * max(m, n) count as zero.
inline double rank_threshold(std::span<const double> sv, Index m, Index n) {
  if (sv.empty()) return 0.0;
  return kEps * sv.front() * static_cast<double>(std::max(m, n));
}

inline Index numerical_rank(const DenseMatrix& A) {
  const auto sv = singular_values(A);
  const double tol = rank_threshold(sv, A.rows(), A.cols());
  Index r = 0;
  for (double s : sv)
    if (s > tol) ++r;
  return r;
}

/// Sum of log singular values; -inf when any of them is numerically zero.
inline double log_volume(const DenseMatrix& A) {
  const auto sv = singular_values(A);
  if (sv.empty() || sv.front() == 0.0) return -std::numeric_limits<double>::infinity();
  const double tol = rank_threshold(sv, A.rows(), A.cols());
  double s = 0.0;
  for (double v : sv) {
    if (v <= tol) return -std::numeric_limits<double>::infinity();
    s += std::log(v);
  }
  return s;
}

/// Product of singular values. Overflows for large blocks; search code
/// compares volumes through log_volume instead.
inline double volume(const DenseMatrix& A) {
  const double lv = log_volume(A);
  return std::isinf(lv) ? 0.0 : std::exp(lv);
}

/// log |det| of a square matrix by partial-pivoted LU, with the same
/// numerical-zero convention as log_volume applied to the pivots.
inline double log_abs_det(const DenseMatrix& A) {
  LuPartial lu(A);
  const double scale = max_norm(A);
  if (scale == 0.0) return -std::numeric_limits<double>::infinity();
  if (lu.min_abs_pivot() <= kEps * scale * static_cast<double>(A.rows()))
    return -std::numeric_limits<double>::infinity();
  return lu.log_abs_det();
}

}  // namespace maxvol

#endif  // MAXVOL_VOLUME_HPP
