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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ecd/model.hpp"
#include "ecd/scenario.hpp"

namespace ecd {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NodeLimit };

std::string_view to_string(SolveStatus status);
SolveStatus solve_status_from_string(std::string_view name);

/// Values of every cataloged decision variable plus the objective.
/// `values` is empty when no assignment is available (infeasible or
/// unbounded, or a node limit hit before any incumbent was found).
struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;

  bool has_values() const { return !values.empty(); }
};

/// Decomposition of the objective plus physical totals.
struct CostReport {
  double unmet_cost = 0.0;           // penalties for unmet requests
  double electricity_cost = 0.0;     // grid purchases
  double sellback_revenue = 0.0;     // grid sales
  double net_electricity = 0.0;      // purchases - sales
  double carbon_cost = 0.0;          // carbon tax on grid energy
  double total = 0.0;                // unmet + net electricity + carbon
  double total_emissions_tons = 0.0;
  double total_unmet_requests = 0.0;
  double total_curtailed_kwh = 0.0;
};

/// Cost decomposition of an optimal solution.  Throws ValidationError when
/// the solution is not optimal or carries no values.
CostReport cost_report(const Scenario& s, const Solution& sol);

/// Same arithmetic for any complete value assignment, regardless of how it
/// was obtained.
CostReport cost_report_from_values(const Scenario& s, std::span<const double> values);

/// Residuals of a candidate solution against every constraint family.
struct ResidualReport {
  struct Entry {
    std::string family;
    double residual;
  };
  std::vector<Entry> families;       // fixed order, absolute residuals
  double max_residual = 0.0;         // max over families
  double integrality_residual = 0.0; // worst |c - round(c)|
  double objective_residual = 0.0;   // |stated - recomputed| / max(1, |stated|)
  /// Charging and discharging overlap somewhere.  Harmless for the cost
  /// (dominated whenever efficiency < 1) but worth flagging.
  bool simultaneous_charge_discharge = false;

  bool pass(double tol) const {
    return max_residual <= tol && integrality_residual <= tol &&
           objective_residual <= tol;
  }
};

/// Checks a value assignment against the model of (s, v).  Reports and
/// never throws on violations; only a malformed assignment (wrong length)
/// raises ValidationError.
ResidualReport validate_solution(const Scenario& s, Variant v, const Solution& sol,
                                 double tol, const ModelOptions& opts = {});

/// Solution document I/O.  The document records the variant, dimensions,
/// status, objective, every variable by name, and the cost report block.
void write_solution(const Scenario& s, Variant v, const Solution& sol,
                    std::ostream& out);
void save_solution(const Scenario& s, Variant v, const Solution& sol,
                   const std::string& path);

struct SolutionDocument {
  Variant variant;
  Solution solution;
};

SolutionDocument read_solution(const VarLayout& layout, std::istream& in);
SolutionDocument load_solution(const VarLayout& layout, const std::string& path);

}  // namespace ecd
