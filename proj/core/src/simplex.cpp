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

#include "ecd/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "ecd/errors.hpp"

namespace ecd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void LpProblem::validate() const {
  if (num_vars < 0) throw ValidationError("lp: negative variable count");
  const auto nv = static_cast<std::size_t>(num_vars);
  if (objective.size() != nv || lower.size() != nv || upper.size() != nv) {
    throw ValidationError("lp: objective/bound arrays must match num_vars");
  }
  if (row_start.size() != sense.size() + 1 || rhs.size() != sense.size()) {
    throw ValidationError("lp: row arrays are inconsistent");
  }
  for (int i = 0; i < num_vars; ++i) {
    if (!(lower[i] <= upper[i])) {
      throw ValidationError("lp: variable " + std::to_string(i) + " has lower > upper");
    }
  }
  for (char c : sense) {
    if (c != '<' && c != '=' && c != '>') {
      throw ValidationError("lp: bad row sense");
    }
  }
  for (int k : col) {
    if (k < 0 || k >= num_vars) throw ValidationError("lp: column index out of range");
  }
}

LpProblem lp_relaxation(const MilpModel& m) {
  LpProblem lp;
  lp.num_vars = m.num_vars();
  lp.objective = m.objective;
  lp.lower.resize(lp.num_vars);
  lp.upper.resize(lp.num_vars);
  for (int k = 0; k < lp.num_vars; ++k) {
    lp.lower[k] = m.bounds[k].lb;
    lp.upper[k] = m.bounds[k].ub;
  }
  lp.row_start.push_back(0);
  for (const Row& r : m.rows) lp.add_row(r.sense, r.rhs, r.terms);
  return lp;
}

// ---------------------------------------------------------------------------

namespace {

enum class VStat : std::uint8_t { AtLower, AtUpper, Basic };

struct Eta {
  int pos;       // basis position that changed
  double pivot;  // w[pos]
  std::vector<std::pair<int, double>> nz;  // other nonzeros of w
};

}  // namespace

struct SimplexSolver::Impl {
  LpProblem prob;
  SimplexConfig cfg;

  int ns = 0;  // structural variables
  int m = 0;   // rows == basis size
  int nt = 0;  // ns + m (slack per row)

  // columns of [A | I] in CSC form
  std::vector<int> cstart, crow;
  std::vector<double> cval;

  std::vector<double> lb, ub;    // working bounds (structural + slack)
  std::vector<double> lb0, ub0;  // problem bounds
  std::vector<double> cost;      // phase-2 objective (slacks 0)
  std::vector<double> b;         // row right-hand sides

  std::vector<VStat> status;
  std::vector<int> basic_var;     // variable at each basis position
  std::vector<int> basis_pos;    // position of a variable, -1 if nonbasic
  std::vector<double> xb;        // values of basic variables

  // basis factorization: dense LU with partial pivoting plus an eta file
  std::vector<double> lu;   // m x m row-major
  std::vector<int> perm;    // row permutation
  std::vector<Eta> etas;
  bool factored = false;

  std::int64_t iterations = 0;

  // scratch; ybuf is internal to ftran/btran, never passed into them
  std::vector<double> wcol, ybuf, rhsbuf, price_y;
  std::vector<double> dvals;  // reduced costs of the last pricing pass

  explicit Impl(LpProblem p, SimplexConfig c) : prob(std::move(p)), cfg(c) {
    prob.validate();
    ns = prob.num_vars;
    m = prob.num_rows();
    nt = ns + m;
    build_columns();
    lb.assign(nt, 0.0);
    ub.assign(nt, 0.0);
    cost.assign(nt, 0.0);
    for (int j = 0; j < ns; ++j) {
      lb[j] = prob.lower[j];
      ub[j] = prob.upper[j];
      cost[j] = prob.objective[j];
    }
    for (int i = 0; i < m; ++i) {
      switch (prob.sense[i]) {
        case '<': lb[ns + i] = 0.0; ub[ns + i] = kInf; break;
        case '=': lb[ns + i] = 0.0; ub[ns + i] = 0.0; break;
        case '>': lb[ns + i] = -kInf; ub[ns + i] = 0.0; break;
      }
    }
    lb0 = lb;
    ub0 = ub;
    b = prob.rhs;
    wcol.resize(m);
    ybuf.resize(m);
    rhsbuf.resize(m);
    price_y.resize(m);
    dvals.assign(nt, 0.0);
    reset_basis();
  }

  void build_columns() {
    cstart.assign(nt + 1, 0);
    const int rows = m;
    std::vector<int> counts(ns, 0);
    for (int r = 0; r < rows; ++r) {
      for (int k = prob.row_start[r]; k < prob.row_start[r + 1]; ++k) {
        ++counts[prob.col[k]];
      }
    }
    for (int j = 0; j < ns; ++j) cstart[j + 1] = cstart[j] + counts[j];
    for (int i = 0; i < m; ++i) cstart[ns + i + 1] = cstart[ns + i] + 1;
    crow.resize(cstart[nt]);
    cval.resize(cstart[nt]);
    std::vector<int> fill(ns, 0);
    for (int r = 0; r < rows; ++r) {
      for (int k = prob.row_start[r]; k < prob.row_start[r + 1]; ++k) {
        const int j = prob.col[k];
        const int at = cstart[j] + fill[j]++;
        crow[at] = r;
        cval[at] = prob.val[k];
      }
    }
    for (int i = 0; i < m; ++i) {
      crow[cstart[ns + i]] = i;
      cval[cstart[ns + i]] = 1.0;
    }
  }

  double nb_value(int j) const { return status[j] == VStat::AtUpper ? ub[j] : lb[j]; }

  void reset_basis() {
    status.assign(nt, VStat::AtLower);
    for (int j = 0; j < nt; ++j) {
      if (lb[j] == -kInf) status[j] = VStat::AtUpper;  // every var has a finite side
    }
    basic_var.resize(m);
    basis_pos.assign(nt, -1);
    for (int i = 0; i < m; ++i) {
      basic_var[i] = ns + i;
      basis_pos[ns + i] = i;
      status[ns + i] = VStat::Basic;
    }
    etas.clear();
    factored = false;
  }

  // --- factorization -------------------------------------------------------

  bool factor() {
    lu.assign(static_cast<std::size_t>(m) * m, 0.0);
    perm.resize(m);
    for (int k = 0; k < m; ++k) {
      const int j = basic_var[k];
      for (int p = cstart[j]; p < cstart[j + 1]; ++p) {
        lu[static_cast<std::size_t>(crow[p]) * m + k] = cval[p];
      }
    }
    for (int i = 0; i < m; ++i) perm[i] = i;
    for (int k = 0; k < m; ++k) {
      int piv = k;
      double best = std::abs(lu[static_cast<std::size_t>(k) * m + k]);
      for (int i = k + 1; i < m; ++i) {
        const double a = std::abs(lu[static_cast<std::size_t>(i) * m + k]);
        if (a > best) {
          best = a;
          piv = i;
        }
      }
      if (best < 1e-12) return false;
      if (piv != k) {
        for (int j2 = 0; j2 < m; ++j2) {
          std::swap(lu[static_cast<std::size_t>(piv) * m + j2],
                    lu[static_cast<std::size_t>(k) * m + j2]);
        }
        std::swap(perm[piv], perm[k]);
      }
      const double d = lu[static_cast<std::size_t>(k) * m + k];
      for (int i = k + 1; i < m; ++i) {
        double& l = lu[static_cast<std::size_t>(i) * m + k];
        if (l == 0.0) continue;
        l /= d;
        const double* rowk = &lu[static_cast<std::size_t>(k) * m];
        double* rowi = &lu[static_cast<std::size_t>(i) * m];
        for (int j2 = k + 1; j2 < m; ++j2) rowi[j2] -= l * rowk[j2];
      }
    }
    etas.clear();
    factored = true;
    return true;
  }

  void refactor_or_throw() {
    if (factor()) return;
    // singular: fall back to the all-slack basis and let phase 1 rebuild
    reset_basis();
    if (!factor()) {
      throw SolveError("simplex: numerically singular basis after reset");
    }
  }

  // solve B x = rhs in place (rhs has length m)
  void ftran(double* x) {
    for (int i = 0; i < m; ++i) ybuf[i] = x[perm[i]];
    for (int i = 0; i < m; ++i) {
      const double* row = &lu[static_cast<std::size_t>(i) * m];
      double s = ybuf[i];
      for (int j = 0; j < i; ++j) s -= row[j] * ybuf[j];
      ybuf[i] = s;
    }
    for (int i = m - 1; i >= 0; --i) {
      const double* row = &lu[static_cast<std::size_t>(i) * m];
      double s = ybuf[i];
      for (int j = i + 1; j < m; ++j) s -= row[j] * ybuf[j];
      ybuf[i] = s / row[i];
    }
    std::memcpy(x, ybuf.data(), sizeof(double) * m);
    for (const Eta& e : etas) {
      const double t = x[e.pos] / e.pivot;
      if (t != 0.0) {
        for (const auto& [i, v] : e.nz) x[i] -= v * t;
      }
      x[e.pos] = t;
    }
  }

  // solve B^T y = rhs in place
  void btran(double* y) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = y[it->pos];
      for (const auto& [i, v] : it->nz) s -= v * y[i];
      y[it->pos] = s / it->pivot;
    }
    // U^T forward, then L^T backward, then undo the permutation
    for (int i = 0; i < m; ++i) {
      double s = y[i];
      for (int j = 0; j < i; ++j) s -= lu[static_cast<std::size_t>(j) * m + i] * y[j];
      y[i] = s / lu[static_cast<std::size_t>(i) * m + i];
    }
    for (int i = m - 1; i >= 0; --i) {
      double s = y[i];
      for (int j = i + 1; j < m; ++j) s -= lu[static_cast<std::size_t>(j) * m + i] * y[j];
      y[i] = s;
    }
    for (int i = 0; i < m; ++i) ybuf[perm[i]] = y[i];
    std::memcpy(y, ybuf.data(), sizeof(double) * m);
  }

  void compute_xb() {
    std::fill(rhsbuf.begin(), rhsbuf.end(), 0.0);
    for (int i = 0; i < m; ++i) rhsbuf[i] = b[i];
    for (int j = 0; j < nt; ++j) {
      if (status[j] == VStat::Basic) continue;
      const double v = nb_value(j);
      if (v == 0.0) continue;
      for (int p = cstart[j]; p < cstart[j + 1]; ++p) rhsbuf[crow[p]] -= cval[p] * v;
    }
    ftran(rhsbuf.data());
    xb.assign(rhsbuf.begin(), rhsbuf.end());
  }

  void ensure_factored() {
    if (!factored || static_cast<int>(etas.size()) >= cfg.refactor_interval) {
      refactor_or_throw();
      compute_xb();
    }
  }

  // --- the iteration -------------------------------------------------------

  double total_infeasibility() const {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      const int i = basic_var[k];
      if (xb[k] < lb[i]) s += lb[i] - xb[k];
      else if (xb[k] > ub[i]) s += xb[k] - ub[i];
    }
    return s;
  }

  double max_bound_violation() const {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      const int i = basic_var[k];
      s = std::max(s, std::max(lb[i] - xb[k], xb[k] - ub[i]));
    }
    return std::max(s, 0.0);
  }

  LpResult solve() {
    if (!factored) {
      refactor_or_throw();
    }
    compute_xb();

    int stall = 0;
    bool bland = false;
    bool prev_phase1 = true;
    double last_progress_metric = kInf;

    std::vector<double>& y = price_y;
    std::vector<double> cb(m);

    for (;;) {
      if (iterations >= cfg.iteration_limit) {
        return finish(LpStatus::IterationLimit);
      }
      if (static_cast<int>(etas.size()) >= cfg.refactor_interval) {
        refactor_or_throw();
        compute_xb();
      }

      const bool phase1 = max_bound_violation() > cfg.feasibility_tol;
      if (phase1 != prev_phase1) {
        last_progress_metric = kInf;
        stall = 0;
        bland = false;
        prev_phase1 = phase1;
      }

      // pricing direction
      for (int k = 0; k < m; ++k) {
        const int i = basic_var[k];
        if (phase1) {
          cb[k] = xb[k] < lb[i] - cfg.feasibility_tol   ? -1.0
                  : xb[k] > ub[i] + cfg.feasibility_tol ? 1.0
                                                        : 0.0;
        } else {
          cb[k] = cost[i];
        }
      }
      std::memcpy(y.data(), cb.data(), sizeof(double) * m);
      btran(y.data());

      int enter = -1;
      double best_score = 0.0;
      for (int j = 0; j < nt; ++j) {
        if (status[j] == VStat::Basic || lb[j] == ub[j]) continue;
        double d = phase1 ? 0.0 : cost[j];
        for (int p = cstart[j]; p < cstart[j + 1]; ++p) d -= cval[p] * y[crow[p]];
        dvals[j] = d;
        double score = 0.0;
        if (status[j] == VStat::AtLower) {
          if (d < -cfg.optimality_tol) score = -d;
        } else {
          if (d > cfg.optimality_tol) score = d;
        }
        if (score > 0.0) {
          if (bland) {
            enter = j;
            break;
          }
          if (score > best_score) {
            best_score = score;
            enter = j;
          }
        }
      }

      if (enter < 0) {
        if (phase1) {
          return finish(LpStatus::Infeasible);
        }
        return finish(LpStatus::Optimal);
      }

      // transformed entering column
      std::fill(wcol.begin(), wcol.end(), 0.0);
      for (int p = cstart[enter]; p < cstart[enter + 1]; ++p) {
        wcol[crow[p]] = cval[p];
      }
      ftran(wcol.data());

      const double sigma = status[enter] == VStat::AtLower ? 1.0 : -1.0;

      // ratio test
      double tstar = ub[enter] - lb[enter];  // bound-flip distance, may be inf
      int leave_pos = -1;
      bool leave_to_upper = false;
      double leave_pivot = 0.0;
      const double rtol = cfg.feasibility_tol;

      for (int k = 0; k < m; ++k) {
        const double wk = wcol[k];
        if (std::abs(wk) < 1e-11) continue;
        const int i = basic_var[k];
        const double delta = -sigma * wk;  // movement of x_i per unit step
        double t;
        bool to_upper;
        if (phase1 && xb[k] < lb[i] - rtol) {
          if (delta <= 0.0) continue;  // moving further below, never blocks
          t = (lb[i] - xb[k]) / delta;
          to_upper = false;
        } else if (phase1 && xb[k] > ub[i] + rtol) {
          if (delta >= 0.0) continue;
          t = (ub[i] - xb[k]) / delta;
          to_upper = true;
        } else if (delta > 0.0) {
          if (ub[i] == kInf) continue;
          t = (ub[i] - xb[k]) / delta;
          to_upper = true;
        } else {
          if (lb[i] == -kInf) continue;
          t = (lb[i] - xb[k]) / delta;
          to_upper = false;
        }
        if (t < 0.0) t = 0.0;
        bool take;
        if (leave_pos < 0) {
          take = t < tstar;
        } else if (bland) {
          take = t < tstar - 1e-12 ||
                 (t <= tstar + 1e-12 && i < basic_var[leave_pos]);
        } else {
          take = t < tstar - 1e-12 ||
                 (t <= tstar + 1e-12 && std::abs(wk) > std::abs(leave_pivot));
        }
        if (take) {
          tstar = t;
          leave_pos = k;
          leave_to_upper = to_upper;
          leave_pivot = wk;
        }
      }

      if (leave_pos < 0 && tstar == kInf) {
        if (phase1) {
          // an improving unblocked direction cannot exist when minimizing
          // infeasibility; refresh the factorization once, then give up
          refactor_or_throw();
          compute_xb();
          if (max_bound_violation() > cfg.feasibility_tol) {
            throw SolveError("simplex: unbounded phase-1 direction (numerical)");
          }
          continue;
        }
        return finish_unbounded(enter, sigma);
      }

      // apply the step
      if (tstar != 0.0) {
        for (int k = 0; k < m; ++k) {
          if (wcol[k] != 0.0) xb[k] -= sigma * tstar * wcol[k];
        }
      }

      if (leave_pos < 0) {
        // bound flip, no basis change
        status[enter] =
            status[enter] == VStat::AtLower ? VStat::AtUpper : VStat::AtLower;
      } else {
        if (std::abs(leave_pivot) < cfg.pivot_tol) {
          if (!etas.empty()) {
            // possibly stale factors: refresh and retry this iteration
            refactor_or_throw();
            compute_xb();
            ++iterations;
            continue;
          }
          throw SolveError("simplex: numerically singular basis, pivot " +
                           std::to_string(leave_pivot) + " on variable " +
                           std::to_string(basic_var[leave_pos]));
        }
        const int leave_var = basic_var[leave_pos];
        status[leave_var] = leave_to_upper ? VStat::AtUpper : VStat::AtLower;
        basis_pos[leave_var] = -1;
        const double enter_from = nb_value(enter);
        status[enter] = VStat::Basic;
        basic_var[leave_pos] = enter;
        basis_pos[enter] = leave_pos;
        xb[leave_pos] = enter_from + sigma * tstar;

        Eta e;
        e.pos = leave_pos;
        e.pivot = wcol[leave_pos];
        e.nz.reserve(16);
        for (int k = 0; k < m; ++k) {
          if (k != leave_pos && wcol[k] != 0.0) e.nz.emplace_back(k, wcol[k]);
        }
        etas.push_back(std::move(e));
      }

      ++iterations;

      // stall bookkeeping for the Bland fallback
      const double metric = phase1 ? total_infeasibility() : objective_now();
      if (metric < last_progress_metric - 1e-12 * (1.0 + std::abs(metric))) {
        last_progress_metric = metric;
        stall = 0;
        bland = false;
      } else if (++stall >= cfg.stall_threshold) {
        bland = true;
      }
    }
  }

  double objective_now() const {
    double s = 0.0;
    for (int j = 0; j < nt; ++j) {
      if (cost[j] == 0.0) continue;
      s += cost[j] * (status[j] == VStat::Basic ? xb[basis_pos[j]] : nb_value(j));
    }
    return s;
  }

  LpResult finish(LpStatus st) {
    LpResult r;
    r.status = st;
    r.iterations = iterations;
    r.values.resize(ns);
    for (int j = 0; j < ns; ++j) {
      r.values[j] = status[j] == VStat::Basic ? xb[basis_pos[j]] : nb_value(j);
    }
    r.reduced_costs.assign(ns, 0.0);
    r.var_status.resize(ns);
    double dual_viol = 0.0;
    for (int j = 0; j < ns; ++j) {
      switch (status[j]) {
        case VStat::Basic: r.var_status[j] = 'B'; break;
        case VStat::AtLower:
          r.var_status[j] = 'L';
          r.reduced_costs[j] = dvals[j];
          dual_viol = std::max(dual_viol, -dvals[j]);
          break;
        case VStat::AtUpper:
          r.var_status[j] = 'U';
          r.reduced_costs[j] = dvals[j];
          dual_viol = std::max(dual_viol, dvals[j]);
          break;
      }
    }
    if (st == LpStatus::Optimal) {
      double obj = 0.0;
      for (int j = 0; j < ns; ++j) {
        if (cost[j] != 0.0) obj += cost[j] * r.values[j];
      }
      r.objective = obj;
      r.dual_infeasibility = dual_viol;
    } else if (st == LpStatus::Infeasible) {
      r.infeasibility_certificate = total_infeasibility();
    }
    r.primal_infeasibility = primal_residual(r.values);
    return r;
  }

  LpResult finish_unbounded(int enter, double sigma) {
    LpResult r = finish(LpStatus::Unbounded);
    r.ray.assign(ns, 0.0);
    if (enter < ns) r.ray[enter] = sigma;
    for (int k = 0; k < m; ++k) {
      const int i = basic_var[k];
      if (i < ns && wcol[k] != 0.0) r.ray[i] = -sigma * wcol[k];
    }
    return r;
  }

  double primal_residual(const std::vector<double>& v) const {
    double worst = max_bound_violation();
    for (int j = 0; j < ns; ++j) {
      worst = std::max(worst, std::max(lb[j] - v[j], v[j] - ub[j]));
    }
    // row residuals |A v + s - b|
    std::vector<double> act(m, 0.0);
    for (int j = 0; j < nt; ++j) {
      const double vj = j < ns ? v[j]
                      : status[j] == VStat::Basic ? xb[basis_pos[j]]
                                                  : nb_value(j);
      if (vj == 0.0) continue;
      for (int p = cstart[j]; p < cstart[j + 1]; ++p) act[crow[p]] += cval[p] * vj;
    }
    for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(act[i] - b[i]));
    return worst;
  }
};

SimplexSolver::SimplexSolver(LpProblem problem, SimplexConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(problem), cfg)) {}

SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

const LpProblem& SimplexSolver::problem() const { return impl_->prob; }

void SimplexSolver::set_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= impl_->ns) throw ValidationError("set_bounds: bad variable");
  if (!(lower <= upper)) throw ValidationError("set_bounds: lower > upper");
  impl_->lb[var] = lower;
  impl_->ub[var] = upper;
  if (impl_->status[var] != VStat::Basic) {
    // keep the nonbasic variable on a finite bound
    if (impl_->status[var] == VStat::AtLower && lower == -kInf) {
      impl_->status[var] = VStat::AtUpper;
    } else if (impl_->status[var] == VStat::AtUpper && upper == kInf) {
      impl_->status[var] = VStat::AtLower;
    }
  }
}

void SimplexSolver::reset_bounds() {
  impl_->lb = impl_->lb0;
  impl_->ub = impl_->ub0;
}

void SimplexSolver::reset_basis() { impl_->reset_basis(); }

LpResult SimplexSolver::solve() { return impl_->solve(); }

std::int64_t SimplexSolver::total_iterations() const { return impl_->iterations; }

}  // namespace ecd
