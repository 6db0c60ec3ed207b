// Copyright 2026 the ecdispatch authors
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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "ecd/model.hpp"
#include "ecd/solution.hpp"

namespace ecd {

struct BnbConfig {
  double integrality_tol = 1e-6;
  double relative_gap_tol = 1e-6;
  std::int64_t node_limit = 100000;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  /// Adds one valid aggregate-rounding row per period to the relaxation:
  /// the period's total server count, softened by the unmet term, cannot
  /// fall below its rounded service requirement.  Cuts nothing integral,
  /// tightens the bound enormously on allocation-style models.
  bool period_rounding_rows = true;
  /// When nonzero, writes one line per node to `log`.
  int log_level = 0;
  std::ostream* log = nullptr;
};

struct SolveStats {
  std::int64_t nodes_explored = 0;
  std::int64_t simplex_iterations = 0;
  double wall_time_s = 0.0;
  double best_bound = 0.0;
  double incumbent_objective = 0.0;
  double final_gap = 0.0;
  double root_lp_objective = 0.0;
};

struct MilpResult {
  Solution solution;
  SolveStats stats;
};

/// Branch-and-bound on the integer server counts: most-fractional
/// branching (ties to the lowest index), best-bound node order with FIFO
/// tie-break, and a depth-first dive until the first incumbent.  Returns
/// an integer-feasible solution within `relative_gap_tol` of the optimum,
/// or the best incumbent and bound when the node limit strikes first.
MilpResult solve_milp(const MilpModel& m, const BnbConfig& cfg = {});

/// Rounds every fractional server count up (capped at its bound), fixes
/// them, and re-solves the LP.  Returns the re-solved point when feasible.
/// Only used to seed the incumbent; never part of the optimality argument.
std::optional<Solution> round_fix_heuristic(const MilpModel& m,
                                            std::span<const double> lp_values,
                                            const BnbConfig& cfg = {});

}  // namespace ecd
