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

#ifndef MAXVOL_ERRORS_HPP
#define MAXVOL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxvol {

/// A pivot (or pivot block) is numerically singular. `step` is the 0-based
/// elimination step, or the attempt index for randomly drawn selections.
class RankDeficient : public std::runtime_error {
 public:
  explicit RankDeficient(std::size_t step, const std::string& what = "")
      : std::runtime_error("rank deficient at step " + std::to_string(step) +
                           (what.empty() ? "" : ": " + what)),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class IterationCapExceeded : public std::runtime_error {
 public:
  explicit IterationCapExceeded(std::size_t cap)
      : std::runtime_error("maximum number of swaps (" + std::to_string(cap) + ") exceeded"), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// Triangular solve hit an exact zero on the diagonal.
class SingularMatrix : public std::runtime_error {
 public:
  explicit SingularMatrix(std::size_t index)
      : std::runtime_error("zero diagonal entry at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class SizeGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxvol

#endif  // MAXVOL_ERRORS_HPP
