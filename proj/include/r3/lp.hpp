// Copyright 2026 The r3 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "r3/kernels.hpp"
#include "r3/sparse.hpp"

namespace r3 {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// minimize objective . x
///   s.t. a_eq x = b_eq, a_le x <= b_le, lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +infinity.
struct LinearProgram {
  std::vector<double> objective;
  SparseMatrix a_eq;
  std::vector<double> b_eq;
  SparseMatrix a_le;
  std::vector<double> b_le;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  /// Empty program over `num_vars` variables with bounds [0, +inf).
  explicit LinearProgram(int num_vars);

  int num_vars() const { return static_cast<int>(objective.size()); }

  /// Throws std::invalid_argument on inconsistent dimensions or bounds.
  void validate() const;
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericFailure };

const char* to_string(LPStatus status);

struct LPSolution {
  LPStatus status = LPStatus::kNumericFailure;
  std::vector<double> x;
  double objective_value = 0.0;
  long iterations = 0;
  std::string message;
};

struct LPOptions {
  // Equality residuals must satisfy |Ax - b| <= feas_tol * (1 + ||b||_inf).
  double feas_tol = 1e-9;
  // Reduced-cost threshold for optimality (row-equilibrated units).
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Pivots between refactorizations; 0 selects max(100, rows).
  int refactor_interval = 0;
  // 0 selects 50 * (rows + cols) + 1000.
  long max_iterations = 0;
  bool presolve = true;
  ExecPolicy exec = ExecPolicy::kParallel;
};

/// Two-phase bounded-variable revised simplex. Dantzig pricing, with Bland's
/// rule taking over after 10 * (rows + cols) consecutive degenerate pivots.
/// Deterministic: the same input always produces the same vertex.
LPSolution solve_lp(const LinearProgram& lp, const LPOptions& options = {});

/// Writes the program in fixed-format MPS. Inequality rows become `L` rows,
/// equalities `E` rows; column names are C<index>, rows R<index>.
void write_mps(const LinearProgram& lp, std::ostream& out,
               const std::string& name = "R3LP");

}  // namespace r3
