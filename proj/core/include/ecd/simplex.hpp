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
#include <memory>
#include <span>
#include <vector>

#include "ecd/lp.hpp"

namespace ecd {

struct SimplexConfig {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  /// Pivots smaller than this trigger a refactorization retry, then an error.
  double pivot_tol = 1e-9;
  /// Basis updates between refactorizations.
  int refactor_interval = 100;
  /// Iterations without measurable progress before Bland's rule engages.
  int stall_threshold = 100;
  std::int64_t iteration_limit = 2000000;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  /// One value per structural variable.
  std::vector<double> values;
  /// One reduced cost per structural variable (0 for basic variables).
  std::vector<double> reduced_costs;
  /// One of 'B', 'L', 'U' per structural variable.
  std::vector<char> var_status;
  /// Worst bound/row violation of the returned point.
  double primal_infeasibility = 0.0;
  /// Worst reduced-cost sign violation at the returned basis.
  double dual_infeasibility = 0.0;
  /// Remaining total infeasibility when status == Infeasible.
  double infeasibility_certificate = 0.0;
  /// Improving direction (structural part) when status == Unbounded.
  std::vector<double> ray;
  std::int64_t iterations = 0;
};

/// Bounded-variable primal simplex with a two-phase start, Dantzig pricing,
/// a Bland fallback against cycling, and a periodically refactorized basis.
///
/// The solver owns a working copy of the variable bounds, so a caller can
/// tighten or relax bounds between solves and re-solve warm from the basis
/// it last reached; that is the node re-solve path of branch-and-bound.
class SimplexSolver {
 public:
  explicit SimplexSolver(LpProblem problem, SimplexConfig cfg = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  const LpProblem& problem() const;

  /// Changes the working bounds of one variable.  Takes effect on the next
  /// solve; the basis is kept.
  void set_bounds(int var, double lower, double upper);
  /// Restores every working bound to the problem bounds.
  void reset_bounds();
  /// Forgets the basis; the next solve starts from the all-slack basis.
  void reset_basis();

  /// Solves from the current basis (warm whenever one exists).
  LpResult solve();

  std::int64_t total_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ecd
