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

#ifndef MAXVOL_SEARCH_HPP
#define MAXVOL_SEARCH_HPP

#include <cmath>
#include <concepts>
#include <cstdint>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "maxvol/matrix.hpp"

namespace maxvol {

enum class Mode { GE, QR };

inline const char* to_string(Mode m) { return m == Mode::GE ? "ge" : "qr"; }

/// Exchange of position `out` inside the selected block with position `in`
/// of the complementary (trailing) block. Both are 0-based offsets:
/// out in [0, k), in in [0, m-k) or [0, n-k).
struct Swap {
  Index out = 0;
  Index in = 0;
  friend bool operator==(const Swap&, const Swap&) = default;
};

/// An edge of the volume submatrix graph: at most one row and at most one
/// column exchanged. QR moves only ever carry a column swap.
struct Move {
  std::optional<Swap> row;
  std::optional<Swap> col;
  friend bool operator==(const Move&, const Move&) = default;
};

inline std::string describe(const Move& mv) {
  std::string s;
  if (mv.row) s += "row " + std::to_string(mv.row->out) + "<->k+" + std::to_string(mv.row->in);
  if (mv.col) {
    if (!s.empty()) s += ", ";
    s += "col " + std::to_string(mv.col->out) + "<->k+" + std::to_string(mv.col->in);
  }
  return s;
}

enum class InitKind { Greedy, Given, RandomSeeded };

struct SearchConfig {
  double gamma = 1.0;
  InitKind init = InitKind::Greedy;
  Selection given;             // used when init == Given
  std::uint64_t seed = 0;      // used when init == RandomSeeded
  std::optional<Index> max_swaps;  // default cap computed per mode when empty
  /// Relative slack on the acceptance test ratio > gamma. Ratios within
  /// gamma * (1 + tie_tolerance) are treated as ties and never accepted, so
  /// roundoff cannot make the search cycle between equal-volume blocks.
  double tie_tolerance = 1e-12;
  /// GECP growth factor used only to report the theoretical GE path bound.
  /// Defaults to Wilkinson's bound for a (k+1)×(k+1) matrix when empty.
  std::optional<double> growth_factor;
};

inline void validate(const SearchConfig& cfg) {
  if (!(cfg.gamma >= 1.0)) throw std::invalid_argument("SearchConfig: gamma must be >= 1");
  if (cfg.max_swaps && *cfg.max_swaps < 1) throw std::invalid_argument("SearchConfig: max_swaps must be >= 1");
  if (!(cfg.tie_tolerance >= 0.0)) throw std::invalid_argument("SearchConfig: tie_tolerance must be >= 0");
}

struct SwapRecord {
  Move move;
  double ratio = 0.0;
  double log_volume_before = 0.0;
  double log_volume_after = 0.0;
};

struct SearchReport {
  Mode mode = Mode::GE;
  Index m = 0, n = 0, k = 0;
  double gamma = 1.0;
  Index path_length = 0;
  std::vector<SwapRecord> swaps;
  /// Largest neighbor volume ratio at the final node (may be below 1).
  double certified_gamma = 0.0;
  Move worst_move;
  double start_log_volume = 0.0;
  double end_log_volume = 0.0;
  Index swap_cap = 0;
  /// Path-length bound implied by the greedy start (infinite for gamma = 1).
  double theoretical_path_bound = std::numeric_limits<double>::infinity();
  /// True when the search stopped because a move accepted by the ratio
  /// formula did not increase the recomputed volume (a roundoff-level tie,
  /// typically between duplicate rows or columns). The move was undone.
  bool ended_on_tie = false;

  /// The pivot quality metric: certified_gamma clamped below at 1.
  double mu_b() const { return std::max(certified_gamma, 1.0); }
};

// ---------------------------------------------------------------------------
// Neighbor enumeration.
//
// Order: row-only moves (i, j), then column-only moves (s, t), then combined
// moves (i, j, s, t), each lexicographic. QR mode has column-only moves.

inline std::uint64_t neighbor_count(Mode mode, Index m, Index n, Index k) {
  const std::uint64_t cols = static_cast<std::uint64_t>(k) * (n - k);
  if (mode == Mode::QR) return cols;
  const std::uint64_t rows = static_cast<std::uint64_t>(k) * (m - k);
  return (rows + 1) * (cols + 1) - 1;
}

class Neighbors {
 public:
  Neighbors(Mode mode, Index m, Index n, Index k) : mode_(mode), m_(m), n_(n), k_(k) {
    if (k == 0 || k > n || (mode == Mode::GE && k > m)) throw std::invalid_argument("Neighbors: invalid k");
  }

  std::uint64_t size() const { return neighbor_count(mode_, m_, n_, k_); }

  Move at(std::uint64_t idx) const {
    const std::uint64_t rows = mode_ == Mode::GE ? static_cast<std::uint64_t>(k_) * (m_ - k_) : 0;
    const std::uint64_t cols = static_cast<std::uint64_t>(k_) * (n_ - k_);
    Move mv;
    if (idx < rows) {
      mv.row = decode(idx, m_ - k_);
      return mv;
    }
    idx -= rows;
    if (idx < cols) {
      mv.col = decode(idx, n_ - k_);
      return mv;
    }
    idx -= cols;
    mv.row = decode(idx / cols, m_ - k_);
    mv.col = decode(idx % cols, n_ - k_);
    return mv;
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Move;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const Neighbors* owner, std::uint64_t idx) : owner_(owner), idx_(idx) {}
    Move operator*() const { return owner_->at(idx_); }
    iterator& operator++() {
      ++idx_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++idx_;
      return t;
    }
    bool operator==(const iterator& o) const { return idx_ == o.idx_; }

   private:
    const Neighbors* owner_ = nullptr;
    std::uint64_t idx_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  static Swap decode(std::uint64_t idx, Index trailing) {
    return {static_cast<Index>(idx / trailing), static_cast<Index>(idx % trailing)};
  }

  Mode mode_;
  Index m_, n_, k_;
};

/// Applies a move to a pair of permutations whose leading k entries are the
/// current selection.
inline void apply_move(const Move& mv, Index k, std::vector<Index>& row_perm, std::vector<Index>& col_perm) {
  if (mv.row) std::swap(row_perm[mv.row->out], row_perm[k + mv.row->in]);
  if (mv.col) std::swap(col_perm[mv.col->out], col_perm[k + mv.col->in]);
}

/// Builds a full permutation of [0, n) whose leading entries are `lead` in
/// order, followed by the remaining indices ascending.
inline std::vector<Index> permutation_with_leading(std::span<const Index> lead, Index n) {
  std::vector<bool> used(n, false);
  std::vector<Index> p;
  p.reserve(n);
  for (Index v : lead) {
    if (v >= n || used[v]) throw std::invalid_argument("permutation_with_leading: invalid index list");
    used[v] = true;
    p.push_back(v);
  }
  for (Index v = 0; v < n; ++v)
    if (!used[v]) p.push_back(v);
  return p;
}

// ---------------------------------------------------------------------------
// Search engine shared by GE and QR modes.

/// What the engine needs from a mode: the current block's log-volume, the
/// first neighbor (in scan order) whose ratio exceeds a threshold, the
/// largest neighbor ratio, and the ability to move to a neighbor.
template <class P>
concept SearchPolicy = requires(P p, const P cp, const Move& mv, double thr) {
  { cp.log_volume() } -> std::convertible_to<double>;
  { cp.first_exceeding(thr) } -> std::same_as<std::optional<std::pair<Move, double>>>;
  { cp.max_ratio() } -> std::same_as<std::pair<Move, double>>;
  p.apply(mv);
};

/// Moves to the first neighbor whose volume exceeds gamma times the current
/// one until none does. Every accepted move must also strictly increase the
/// log-volume recomputed from the rebuilt factorization. A move that fails
/// this is undone and the best-ratio neighbor is tried instead; if that one
/// fails too the search ends. Roundoff on exact ties therefore cannot make
/// the walk cycle.
template <SearchPolicy P>
SearchReport run_search(P& policy, const SearchConfig& cfg, Index cap) {
  validate(cfg);
  SearchReport rep;
  rep.gamma = cfg.gamma;
  rep.swap_cap = cap;
  rep.start_log_volume = policy.log_volume();
  const double threshold = cfg.gamma * (1.0 + cfg.tie_tolerance);
  double current = rep.start_log_volume;
  while (auto next = policy.first_exceeding(threshold)) {
    if (rep.path_length >= cap) throw IterationCapExceeded(cap);
    auto [mv, ratio] = *next;
    policy.apply(mv);
    double after = policy.log_volume();
    if (!(after > current)) {
      // Roundoff tie: undo, then fall back to the best neighbor.
      policy.apply(mv);
      auto [best, best_ratio] = policy.max_ratio();
      if (!(best_ratio > threshold) || best == mv) {
        rep.ended_on_tie = true;
        break;
      }
      policy.apply(best);
      after = policy.log_volume();
      if (!(after > current)) {
        policy.apply(best);
        rep.ended_on_tie = true;
        break;
      }
      mv = best;
      ratio = best_ratio;
    }
    SwapRecord rec;
    rec.move = mv;
    rec.ratio = ratio;
    rec.log_volume_before = current;
    rec.log_volume_after = after;
    current = after;
    rep.swaps.push_back(rec);
    ++rep.path_length;
  }
  rep.end_log_volume = current;
  auto [worst, ratio] = policy.max_ratio();
  rep.worst_move = worst;
  rep.certified_gamma = ratio;
  return rep;
}

/// Default swap cap 4 * (k log2(max(m, n)) + k + 64).
inline Index default_swap_cap(Index m, Index n, Index k) {
  const double lg = std::log2(static_cast<double>(std::max<Index>({m, n, 2})));
  return static_cast<Index>(4.0 * (static_cast<double>(k) * lg + static_cast<double>(k) + 64.0));
}

/// Wilkinson's bound on the complete-pivoting growth factor of an n×n matrix:
/// sqrt(n) * (2 * 3^(1/2) * ... * n^(1/(n-1)))^(1/2).
inline double wilkinson_growth_bound(Index n) {
  double log_prod = 0.0;
  for (Index j = 2; j <= n; ++j) log_prod += std::log(static_cast<double>(j)) / static_cast<double>(j - 1);
  return std::sqrt(static_cast<double>(n)) * std::exp(0.5 * log_prod);
}

}  // namespace maxvol

#endif  // MAXVOL_SEARCH_HPP
