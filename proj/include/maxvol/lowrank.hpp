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


#ifndef MAXVOL_LOWRANK_HPP
#define MAXVOL_LOWRANK_HPP

#include "maxvol/matrix.hpp"

namespace maxvol {

/// Rank-k factor pair A_k = X·Yᵀ.
struct LowRank {
  DenseMatrix x;  // m×k
  DenseMatrix y;  // n×k
  DenseMatrix dense() const { return matmul_nt(x, y); }
};

}  // namespace maxvol

#endif  // MAXVOL_LOWRANK_HPP
