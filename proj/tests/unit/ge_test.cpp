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


#include <gtest/gtest.h>

#include <cmath>

#include "maxvol/ge.hpp"
#include "maxvol/gen.hpp"
#include "maxvol/verify.hpp"
#include "maxvol/volume.hpp"
#include "oracles.hpp"

using namespace maxvol;

namespace {

void check_partial_lu(const DenseMatrix& A, const PartialLU& f) {
  const Index m = A.rows(), n = A.cols(), k = f.k;
  const auto P = permute(A, f.row_perm, f.col_perm);
  const double tol = 1e-10 * max_norm(A) * static_cast<double>(k);
  EXPECT_LT(oracle::max_abs_diff(f.a11, block(P, 0, 0, k, k)), tol);
  const auto A12 = block(P, 0, k, k, n - k), A21 = block(P, k, 0, m - k, k), A22 = block(P, k, k, m - k, n - k);
  EXPECT_LT(oracle::max_abs_diff(oracle::naive_matmul(f.w, f.a11), A21), tol);
  EXPECT_LT(oracle::max_abs_diff(oracle::naive_matmul(f.a11, f.z), A12), tol);
  // Block reconstruction of the trailing block: A22 = W·A11·Z + S.
  const auto rec = oracle::naive_matmul(oracle::naive_matmul(f.w, f.a11), f.z) + f.s;
  EXPECT_LT(oracle::max_abs_diff(rec, A22), tol);
}

/// Ratio for a move by brute-force determinants.
double det_ratio(const DenseMatrix& A, const PartialLU& f, const Move& mv) {
  const Index k = f.k;
  std::vector<Index> r(f.row_perm.begin(), f.row_perm.begin() + k), c(f.col_perm.begin(), f.col_perm.begin() + k);
  const long double base = oracle::abs_det(extract(A, {r, c}));
  if (mv.row) r[mv.row->out] = f.row_perm[k + mv.row->in];
  if (mv.col) c[mv.col->out] = f.col_perm[k + mv.col->in];
  return static_cast<double>(oracle::abs_det(extract(A, {r, c})) / base);
}

}  // namespace

TEST(Gecp, Diagonal) {
  const double d[] = {1, 2, 3};
  const auto f = gecp_partial(DenseMatrix::diagonal(d), 2);
  EXPECT_EQ(f.row_perm[0], 2u);
  EXPECT_EQ(f.col_perm[0], 2u);
  EXPECT_EQ(f.row_perm[1], 1u);
  EXPECT_EQ(f.a11(0, 0), 3.0);
  EXPECT_EQ(f.a11(1, 1), 2.0);
  EXPECT_EQ(f.s(0, 0), 1.0);
}

TEST(Gecp, FirstPivotLargestMagnitude) {
  const auto A = gen::two_local_maxima();
  const auto f = gecp_partial(A, 1);
  EXPECT_EQ(std::abs(f.a11(0, 0)), 3.0);
}

TEST(Gecp, NoPivotingOnKahanGram) {
  const Index n = 10;
  const auto f = gecp_partial(gen::kahan_gram(n, 0.6), n - 1);
  for (Index i = 0; i < n - 1; ++i) {
    EXPECT_EQ(f.row_perm[i], i);
    EXPECT_EQ(f.col_perm[i], i);
  }
}

TEST(Gecp, BlocksConsistent) {
  const auto A = gen::gaussian(12, 9, 3);
  check_partial_lu(A, gecp_partial(A, 4));
  check_partial_lu(A, gecp_partial(A, 9));
}

TEST(Gecp, EliminationStateMatchesRecomputation) {
  const auto A = gen::gaussian(10, 11, 4);
  const auto st = gecp_state(A, 5);
  const auto re = ge_state_from_permutations(A, st.lu.row_perm, st.lu.col_perm, 5);
  EXPECT_LT(oracle::max_abs_diff(st.lu.w, re.lu.w), 1e-12);
  EXPECT_LT(oracle::max_abs_diff(st.lu.z, re.lu.z), 1e-12);
  EXPECT_LT(oracle::max_abs_diff(st.lu.s, re.lu.s), 1e-12);
  EXPECT_LT(oracle::max_abs_diff(st.a11_inv, re.a11_inv), 1e-12);
  EXPECT_NEAR(st.log_volume, re.log_volume, 1e-12);
}

TEST(Gecp, RankDeficientStep) {
  const auto A = matmul_nt(gen::gaussian(8, 3, 1), gen::gaussian(7, 3, 2));
  try {
    gecp_partial(A, 4);
    FAIL();
  } catch (const RankDeficient& e) {
    EXPECT_EQ(e.step(), 3u);
  }
}

TEST(GeRatio, BlockDiagonalReduction) {
  const auto A = gen::two_local_maxima();
  const auto st = ge_state_from_selection(A, {{0, 1}, {0, 1}});
  for (const Move& mv : Neighbors(Mode::GE, 4, 4, 2)) {
    if (!mv.row || !mv.col) {
      EXPECT_EQ(ge_ratio(st, mv), 0.0);
      continue;
    }
    const double expect = std::abs(st.a11_inv(mv.col->out, mv.row->out) * st.lu.s(mv.row->in, mv.col->in));
    EXPECT_DOUBLE_EQ(ge_ratio(st, mv), expect);
  }
}

TEST(GeRatio, MatchesDeterminantsOnRandom8x8) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto A = gen::gaussian(8, 8, 50 + seed);
    for (Index k = 1; k <= 4; ++k) {
      const auto st = gecp_state(A, k);
      for (const Move& mv : Neighbors(Mode::GE, 8, 8, k)) {
        EXPECT_LT(oracle::rel_diff(ge_ratio(st, mv), det_ratio(A, st.lu, mv)), 1e-9) << describe(mv);
      }
    }
  }
}

TEST(GeRatio, SharpnessSingleDiagonalSwapIsHalf) {
  const Index k = 5;
  const auto A = gen::sharpness_ge(12, 12, k);
  const auto st = ge_state_from_selection(A, Selection::leading(k, k));
  EXPECT_NEAR(ge_ratio(st, Move{Swap{2, 3}, std::nullopt}), 0.5, 1e-13);
  EXPECT_NEAR(ge_ratio(st, Move{std::nullopt, Swap{4, 0}}), 0.5, 1e-13);
  // Exchanging row i and column i together reproduces A11 entrywise.
  EXPECT_NEAR(ge_ratio(st, Move{Swap{2, 3}, Swap{2, 4}}), 1.0, 1e-13);
}

TEST(GePolicy, PrunedScanEqualsPlainScan) {
  // first_exceeding and max_ratio skip blocks by bounds; compare with a
  // straight pass over the enumerator.
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto A = gen::gaussian(14, 11, 200 + seed);
    for (Index k : {1, 3, 6}) {
      const auto st = ge_state_from_selection(A, {Rng(seed).sample(14, k), Rng(seed + 99).sample(11, k)});
      GePolicy pol(A, st);
      double best = 0.0;
      Move best_mv;
      std::optional<Move> first;
      const double thr = 1.0;
      for (const Move& mv : Neighbors(Mode::GE, 14, 11, k)) {
        const double r = ge_ratio(st, mv);
        if (!first && r > thr) first = mv;
        if (r > best) {
          best = r;
          best_mv = mv;
        }
      }
      const auto fe = pol.first_exceeding(thr);
      ASSERT_EQ(fe.has_value(), first.has_value());
      if (fe) {
        EXPECT_EQ(fe->first, *first);
      }
      const auto [mv, r] = pol.max_ratio();
      EXPECT_DOUBLE_EQ(r, best);
      EXPECT_EQ(mv, best_mv);
    }
  }
}

TEST(GeLocalMaxvol, AlreadyLocalMaxZeroSwaps) {
  const auto A = gen::two_local_maxima();
  SearchConfig cfg;
  cfg.init = InitKind::Given;
  cfg.given = {{0, 1}, {0, 1}};
  const auto [f, rep] = ge_local_maxvol(A, 2, cfg);
  EXPECT_EQ(rep.path_length, 0u);
  EXPECT_LE(rep.certified_gamma, 1.0);
}

TEST(GeLocalMaxvol, SharpnessPrincipalBlockZeroSwaps) {
  for (Index m : {6, 9}) {
    const auto A = gen::sharpness_ge(m, m + 2, 4);
    SearchConfig cfg;
    cfg.init = InitKind::Given;
    cfg.given = Selection::leading(4, 4);
    const auto [f, rep] = ge_local_maxvol(A, 4, cfg);
    EXPECT_EQ(rep.path_length, 0u);
    EXPECT_NEAR(rep.certified_gamma, 1.0, 1e-12);
  }
}

TEST(GeLocalMaxvol, RandomStartsTerminateCertified) {
  const auto A = gen::gaussian(11, 11, 2026);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SearchConfig cfg;
    cfg.init = InitKind::RandomSeeded;
    cfg.seed = seed;
    const auto [f, rep] = ge_local_maxvol(A, 3, cfg);
    EXPECT_LE(rep.path_length, 40u);
    const auto cert = verify_local_maxvol(Mode::GE, A, f.selection(), 1.0);
    EXPECT_TRUE(cert.passed) << cert.worst_ratio;
    for (const auto& s : rep.swaps) EXPECT_GT(s.log_volume_after, s.log_volume_before);
    check_partial_lu(A, f);
  }
}

TEST(GeLocalMaxvol, GammaRelaxedBoundsAndPathBound) {
  const auto A = gen::gaussian(40, 30, 77);
  SearchConfig cfg;
  cfg.gamma = 2.0;
  const auto [f, rep] = ge_local_maxvol(A, 6, cfg);
  const auto [wb, zb] = interpolative_bounds_ge(f);
  EXPECT_LE(wb, 2.0 + 1e-8);
  EXPECT_LE(zb, 2.0 + 1e-8);
  EXPECT_LE(static_cast<double>(rep.path_length), rep.theoretical_path_bound);
  for (const auto& s : rep.swaps) EXPECT_GT(s.log_volume_after - s.log_volume_before, std::log(2.0));
}

TEST(GeLocalMaxvol, IterationCap) {
  const auto A = gen::gaussian(30, 30, 5);
  SearchConfig cfg;
  cfg.init = InitKind::RandomSeeded;
  cfg.seed = 1;
  cfg.max_swaps = 1;
  EXPECT_THROW(ge_local_maxvol(A, 5, cfg), IterationCapExceeded);
}

TEST(GeLocalMaxvol, SingularGivenStart) {
  DenseMatrix A(4, 4, 1.0);
  A(0, 0) = 2.0;
  SearchConfig cfg;
  cfg.init = InitKind::Given;
  cfg.given = {{1, 2}, {1, 2}};
  EXPECT_THROW(ge_local_maxvol(A, 2, cfg), RankDeficient);
}

TEST(InterpolativeBounds, BlockDiagonalZero) {
  const auto st = ge_state_from_selection(gen::two_local_maxima(), {{0, 1}, {0, 1}});
  const auto [wb, zb] = interpolative_bounds_ge(st.lu);
  EXPECT_EQ(wb, 0.0);
  EXPECT_EQ(zb, 0.0);
}

TEST(InterpolativeBounds, NuExample) {
  const double nu = 3.5;
  const auto st = ge_state_from_selection(gen::necessity_nu(nu), Selection::leading(3, 3));
  const auto [wb, zb] = interpolative_bounds_ge(st.lu);
  EXPECT_DOUBLE_EQ(wb, nu);
  EXPECT_DOUBLE_EQ(zb, nu);
}

TEST(GeLowrank, ExactOnRankK) {
  const auto A = matmul_nt(gen::gaussian(15, 4, 1), gen::gaussian(12, 4, 2));
  const auto f = gecp_partial(A, 4);
  EXPECT_LT(max_norm(A - ge_lowrank(f).dense()), 1e-10 * max_norm(A));
}

TEST(GeLowrank, ResidualIsSchurComplement) {
  const auto A = gen::gaussian(10, 8, 9);
  const auto f = gecp_partial(A, 3);
  const auto R = A - ge_lowrank(f).dense();
  const auto P = permute(R, f.row_perm, f.col_perm);
  EXPECT_LT(max_norm(block(P, 0, 0, 3, 8)), 1e-12);
  EXPECT_LT(max_norm(block(P, 0, 0, 10, 3)), 1e-12);
  EXPECT_LT(oracle::max_abs_diff(block(P, 3, 3, 7, 5), f.s), 1e-12);
}

TEST(GeInterpolative, MatchesLongDoubleOracle) {
  const auto A = gen::gaussian(25, 30, 24);
  const auto [f, rep] = ge_local_maxvol(A, 6);
  const auto [wb, zb] = interpolative_bounds_ge(f);
  const auto sel = f.selection();
  EXPECT_NEAR(std::max(wb, zb), double(oracle::ge_interpolative_bound(A, sel.rows, sel.cols)), 1e-12);
}
