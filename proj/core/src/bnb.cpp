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

#include "ecd/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "ecd/errors.hpp"
#include "ecd/simplex.hpp"

namespace ecd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double relative_gap(double incumbent, double bound) {
  if (incumbent == kInf) return kInf;
  return (incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

// One aggregate-rounding row per period.  Summing the demand rows of a
// period gives  served + unmet = required  (in requests), and summing the
// utilization caps gives  served <= cap_per_server * total_servers, so
//
//   cap_per_server * S + Q >= required,   S integer, Q >= 0.
//
// Mixed-integer rounding of that inequality yields
//
//   S + Q / (cap_per_server * f) >= ceil(required / cap_per_server),
//
// with f the fractional part of required / cap_per_server.  Every integer
// point satisfies it, so the relaxation stays valid while its bound gets
// the per-period server quantization that the plain relaxation misses.
void append_period_rounding_rows(const MilpModel& m, LpProblem& lp) {
  const VarLayout& L = m.layout;
  const int T = L.num_periods;

  double alpha = 0.0, cap_per_server = 0.0;
  std::vector<double> required(T, 0.0);
  for (const Row& r : m.rows) {
    if (r.family == RowFamily::DemandBalance) {
      alpha = r.terms.back().coef;  // coefficient on the unmet variable
      required[r.t] += r.rhs;
    } else if (r.family == RowFamily::UtilizationCap) {
      const double c = -r.terms.back().coef;
      if (cap_per_server == 0.0) {
        cap_per_server = c;
      } else if (c != cap_per_server) {
        return;  // non-uniform caps: the aggregate row does not apply
      }
    }
  }
  if (alpha <= 0.0 || cap_per_server <= 0.0) return;

  std::vector<RowEntry> terms;
  for (int t = 0; t < T; ++t) {
    const double d = required[t] / alpha / cap_per_server;
    const double f = d - std::floor(d);
    if (f < 1e-6) continue;
    terms.clear();
    for (int j = 0; j < L.num_ecs; ++j) terms.push_back({L.c(j, t), 1.0});
    const double qcoef = 1.0 / (cap_per_server * f);
    for (int i = 0; i < L.num_areas; ++i) terms.push_back({L.q(i, t), qcoef});
    lp.add_row('>', std::floor(d) + 1.0, terms);
  }
}

struct Node {
  double bound;    // LP objective of the parent, a valid subtree bound
  int parent;      // index into the pool, -1 at the root
  int branch_var;  // -1 at the root
  double blo = 0.0, bhi = 0.0;
  int depth = 0;
};

struct QueueEntry {
  double bound;
  std::int64_t seq;
  int node;
};
struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;                              // FIFO tie-break
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& m, const BnbConfig& cfg)
      : model_(m), cfg_(cfg), layout_(m.layout) {
    check_integrality_pattern();
    LpProblem lp = lp_relaxation(m);
    if (cfg.period_rounding_rows) append_period_rounding_rows(m, lp);
    SimplexConfig scfg;
    scfg.feasibility_tol = cfg.feasibility_tol;
    scfg.optimality_tol = cfg.optimality_tol;
    solver_.emplace(std::move(lp), scfg);
    const int c0 = layout_.c(0, 0);
    for (int k = 0; k < layout_.c_count(); ++k) int_vars_.push_back(c0 + k);
  }

  MilpResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    MilpResult out;
    search(out);
    out.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.stats.simplex_iterations = solver_->total_iterations();
    return out;
  }

 private:
  void check_integrality_pattern() {
    const int c0 = layout_.c(0, 0);
    const int c1 = c0 + layout_.c_count();
    for (int k = 0; k < model_.num_vars(); ++k) {
      const bool expected = k >= c0 && k < c1;
      if (model_.integral[k] != expected) {
        throw ValidationError(
            "solver expects integrality exactly on the server-count variables");
      }
    }
  }

  // most fractional value, ties to the lowest variable index
  int pick_branch_var(std::span<const double> values) const {
    int best = -1;
    double best_score = 0.0;
    for (int v : int_vars_) {
      const double x = values[v];
      if (std::abs(x - std::round(x)) <= cfg_.integrality_tol) continue;
      const double frac = x - std::floor(x);
      const double score = std::min(frac, 1.0 - frac);
      if (score > best_score) {
        best_score = score;
        best = v;
      }
    }
    return best;
  }

  void apply_node_bounds(int node) {
    solver_->reset_bounds();
    chain_.clear();
    for (int at = node; at >= 0; at = pool_[at].parent) {
      if (pool_[at].branch_var >= 0) chain_.push_back(at);
    }
    // ancestors first so the deeper (tighter) override wins
    for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) {
      const Node& nd = pool_[*it];
      solver_->set_bounds(nd.branch_var, nd.blo, nd.bhi);
    }
  }

  bool improves(double objective) const {
    return objective < incumbent_obj_ - 1e-12 * (1.0 + std::abs(objective));
  }

  void accept_incumbent(const std::vector<double>& values, double objective) {
    incumbent_obj_ = objective;
    incumbent_values_ = values;
    for (int v : int_vars_) incumbent_values_[v] = std::round(incumbent_values_[v]);
  }

  /// Fixes every integer to its rounded value and re-solves once, both to
  /// snap values exactly onto integers and to let the continuous part
  /// re-optimize for the fixed configuration.
  void try_incumbent(std::span<const double> values) {
    for (int v : int_vars_) {
      const double r = std::round(values[v]);
      solver_->set_bounds(v, r, r);
    }
    const LpResult polished = solver_->solve();
    if (polished.status != LpStatus::Optimal) return;
    const double obj = model_.objective_value(polished.values);
    if (improves(obj)) accept_incumbent(polished.values, obj);
  }

  void seed_incumbent_by_rounding(std::span<const double> root_values) {
    for (int v : int_vars_) {
      const double up = std::ceil(root_values[v] - cfg_.integrality_tol);
      solver_->set_bounds(v, std::min(up, model_.bounds[v].ub),
                          std::min(up, model_.bounds[v].ub));
    }
    const LpResult fixed = solver_->solve();
    if (fixed.status != LpStatus::Optimal) return;
    const double obj = model_.objective_value(fixed.values);
    if (improves(obj)) accept_incumbent(fixed.values, obj);
  }

  /// Creates both children of a branching decision.  Without an incumbent
  /// the rounding-direction child is handed back for an immediate dive and
  /// only its sibling is queued; with an incumbent both are queued.
  void expand(int parent, double parent_obj, int var, double value,
              std::optional<int>& dive) {
    const Node& p = pool_[parent];
    double lo = model_.bounds[var].lb, hi = model_.bounds[var].ub;
    for (int at = parent; at >= 0; at = pool_[at].parent) {
      if (pool_[at].branch_var == var) {
        lo = pool_[at].blo;
        hi = pool_[at].bhi;
        break;
      }
    }
    const double fl = std::floor(value);
    const int down = static_cast<int>(pool_.size());
    pool_.push_back({parent_obj, parent, var, lo, fl, p.depth + 1});
    const int up = down + 1;
    pool_.push_back({parent_obj, parent, var, fl + 1.0, hi, p.depth + 1});

    if (incumbent_obj_ == kInf) {
      const bool up_first = (value - fl) >= 0.5;
      dive = up_first ? up : down;
      const int other = up_first ? down : up;
      queue_.push({parent_obj, seq_++, other});
    } else {
      queue_.push({parent_obj, seq_++, down});
      queue_.push({parent_obj, seq_++, up});
    }
  }

  double open_bound(const std::optional<int>& dive) const {
    double bound = pruned_min_;
    if (!queue_.empty()) bound = std::min(bound, queue_.top().bound);
    if (dive) bound = std::min(bound, pool_[*dive].bound);
    return bound;
  }

  void log_node(std::int64_t id, int depth, double lp_obj, double bound) const {
    if (cfg_.log_level < 1 || cfg_.log == nullptr) return;
    *cfg_.log << "node " << id << " depth " << depth << " lp " << lp_obj << " bound "
              << bound << " incumbent "
              << (incumbent_obj_ < kInf ? std::to_string(incumbent_obj_) : "none")
              << " gap " << relative_gap(incumbent_obj_, bound) << '\n';
  }

  void search(MilpResult& out) {
    SolveStats& st = out.stats;

    LpResult root = solver_->solve();
    st.nodes_explored = 1;
    if (root.status == LpStatus::Infeasible) {
      out.solution.status = SolveStatus::Infeasible;
      st.best_bound = kInf;
      st.incumbent_objective = kInf;
      st.final_gap = kInf;
      return;
    }
    if (root.status == LpStatus::Unbounded) {
      // all variables are bounded below and costs are finite, so this can
      // only mean the model was assembled wrong
      out.solution.status = SolveStatus::Unbounded;
      st.best_bound = -kInf;
      st.incumbent_objective = kInf;
      st.final_gap = kInf;
      return;
    }
    if (root.status != LpStatus::Optimal) {
      throw SolveError("root relaxation hit the simplex iteration limit");
    }
    st.root_lp_objective = root.objective;
    pool_.push_back({root.objective, -1, -1, 0.0, 0.0, 0});
    log_node(0, 0, root.objective, root.objective);

    int branch = pick_branch_var(root.values);
    if (branch < 0) {
      try_incumbent(root.values);
      if (incumbent_obj_ == kInf) {
        accept_incumbent(root.values, root.objective);
      }
      pruned_min_ = root.objective;
      conclude(out, SolveStatus::Optimal, std::nullopt);
      return;
    }

    seed_incumbent_by_rounding(root.values);
    std::optional<int> dive;
    expand(0, root.objective, branch, root.values[branch], dive);

    while (true) {
      const double bound_now =
          std::min(open_bound(dive), incumbent_obj_);
      if (incumbent_obj_ < kInf &&
          relative_gap(incumbent_obj_, bound_now) <= cfg_.relative_gap_tol) {
        conclude(out, SolveStatus::Optimal, dive);
        return;
      }

      int nidx;
      if (dive) {
        nidx = *dive;
        dive.reset();
      } else if (!queue_.empty()) {
        nidx = queue_.top().node;
        queue_.pop();
      } else {
        break;  // tree exhausted
      }
      const Node nd = pool_[nidx];

      if (incumbent_obj_ < kInf &&
          relative_gap(incumbent_obj_, nd.bound) <= cfg_.relative_gap_tol) {
        pruned_min_ = std::min(pruned_min_, nd.bound);
        continue;
      }
      if (st.nodes_explored >= cfg_.node_limit) {
        pruned_min_ = std::min(pruned_min_, nd.bound);  // still open
        conclude(out, SolveStatus::NodeLimit, std::nullopt);
        return;
      }

      apply_node_bounds(nidx);
      const LpResult res = solver_->solve();
      ++st.nodes_explored;

      if (res.status == LpStatus::Infeasible) {
        log_node(st.nodes_explored - 1, nd.depth, kInf, open_bound(dive));
        continue;
      }
      if (res.status != LpStatus::Optimal) {
        throw SolveError("node relaxation failed below the root");
      }
      const double node_obj = std::max(res.objective, nd.bound);
      log_node(st.nodes_explored - 1, nd.depth, res.objective, open_bound(dive));

      if (incumbent_obj_ < kInf &&
          relative_gap(incumbent_obj_, node_obj) <= cfg_.relative_gap_tol) {
        pruned_min_ = std::min(pruned_min_, node_obj);
        continue;
      }

      branch = pick_branch_var(res.values);
      if (branch < 0) {
        try_incumbent(res.values);
        pruned_min_ = std::min(pruned_min_, node_obj);
        continue;
      }
      expand(nidx, node_obj, branch, res.values[branch], dive);
    }

    conclude(out, SolveStatus::Optimal, std::nullopt);
  }

  void conclude(MilpResult& out, SolveStatus status, const std::optional<int>& dive) {
    SolveStats& st = out.stats;
    if (incumbent_obj_ == kInf) {
      out.solution.status =
          status == SolveStatus::NodeLimit ? status : SolveStatus::Infeasible;
      st.best_bound = open_bound(dive);
      st.incumbent_objective = kInf;
      st.final_gap = kInf;
      return;
    }
    out.solution.status = status;
    out.solution.values = incumbent_values_;
    out.solution.objective = incumbent_obj_;
    st.incumbent_objective = incumbent_obj_;
    st.best_bound = std::min(open_bound(dive), incumbent_obj_);
    st.final_gap = relative_gap(incumbent_obj_, st.best_bound);
  }

  const MilpModel& model_;
  BnbConfig cfg_;
  VarLayout layout_;
  std::optional<SimplexSolver> solver_;
  std::vector<int> int_vars_;

  std::vector<Node> pool_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue_;
  std::int64_t seq_ = 0;

  double incumbent_obj_ = kInf;
  std::vector<double> incumbent_values_;
  double pruned_min_ = kInf;

  mutable std::vector<int> chain_;
};

}  // namespace

MilpResult solve_milp(const MilpModel& m, const BnbConfig& cfg) {
  return BranchAndBound(m, cfg).run();
}

std::optional<Solution> round_fix_heuristic(const MilpModel& m,
                                            std::span<const double> lp_values,
                                            const BnbConfig& cfg) {
  if (static_cast<int>(lp_values.size()) != m.num_vars()) {
    throw ValidationError("round_fix_heuristic: wrong value count");
  }
  SimplexConfig scfg;
  scfg.feasibility_tol = cfg.feasibility_tol;
  scfg.optimality_tol = cfg.optimality_tol;
  SimplexSolver solver(lp_relaxation(m), scfg);
  const VarLayout& L = m.layout;
  const int c0 = L.c(0, 0);
  for (int k = 0; k < L.c_count(); ++k) {
    const int v = c0 + k;
    const double up = std::ceil(lp_values[v] - cfg.integrality_tol);
    const double capped = std::min(up, m.bounds[v].ub);
    solver.set_bounds(v, capped, capped);
  }
  const LpResult res = solver.solve();
  if (res.status != LpStatus::Optimal) return std::nullopt;
  Solution sol;
  sol.status = SolveStatus::Optimal;
  sol.values = res.values;
  for (int k = 0; k < L.c_count(); ++k) {
    sol.values[c0 + k] = std::round(sol.values[c0 + k]);
  }
  sol.objective = m.objective_value(sol.values);
  return sol;
}

}  // namespace ecd
