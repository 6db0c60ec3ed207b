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

#include "ecd/solution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "ecd/errors.hpp"
#include "textio.hpp"

namespace ecd {

using textio::format_double;

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NodeLimit: return "node-limit";
  }
  return "unknown";
}

SolveStatus solve_status_from_string(std::string_view name) {
  if (name == "optimal") return SolveStatus::Optimal;
  if (name == "infeasible") return SolveStatus::Infeasible;
  if (name == "unbounded") return SolveStatus::Unbounded;
  if (name == "node-limit") return SolveStatus::NodeLimit;
  throw ParseError("unknown solve status '" + std::string(name) + "'");
}

CostReport cost_report_from_values(const Scenario& s, std::span<const double> values) {
  const VarLayout L{s.num_areas, s.num_ecs, s.num_periods};
  if (static_cast<int>(values.size()) != L.count()) {
    throw ValidationError("cost report: expected " + std::to_string(L.count()) +
                          " variable values, got " + std::to_string(values.size()));
  }

  CostReport r;
  for (int i = 0; i < s.num_areas; ++i) {
    for (int t = 0; t < s.num_periods; ++t) {
      const double q = values[L.q(i, t)];
      r.unmet_cost += s.unmet_penalty[i] * q;
      r.total_unmet_requests += q;
    }
  }
  for (int j = 0; j < s.num_ecs; ++j) {
    const EdgeCloudParams& ec = s.ecs[j];
    for (int t = 0; t < s.num_periods; ++t) {
      const double pg = values[L.pg(j, t)];
      r.electricity_cost += ec.price[t] * pg;
      r.sellback_revenue += s.sellback_ratio * ec.price[t] * values[L.ps(j, t)];
      r.carbon_cost += ec.carbon_tax * ec.emission_factor / 1000.0 * pg;
      r.total_emissions_tons += ec.emission_factor * pg / 1000.0;
      r.total_curtailed_kwh += values[L.pw(j, t)] * s.period_length_hours;
    }
  }
  r.net_electricity = r.electricity_cost - r.sellback_revenue;
  r.total = r.unmet_cost + r.net_electricity + r.carbon_cost;
  return r;
}

CostReport cost_report(const Scenario& s, const Solution& sol) {
  if (sol.status != SolveStatus::Optimal || !sol.has_values()) {
    throw ValidationError("cost report requires an optimal solution, got status '" +
                          std::string(to_string(sol.status)) + "'");
  }
  return cost_report_from_values(s, sol.values);
}

namespace {

struct FamilyResidual {
  double value = 0.0;
  void bound(double v, double lb, double ub) {
    value = std::max(value, std::max(lb - v, v - ub));
    value = std::max(value, 0.0);
  }
  void equality(double lhs, double rhs) { value = std::max(value, std::abs(lhs - rhs)); }
  void at_most(double lhs, double rhs) { value = std::max(value, lhs - rhs); }
};

}  // namespace

ResidualReport validate_solution(const Scenario& s, Variant v, const Solution& sol,
                                 double tol, const ModelOptions& opts) {
  const VarLayout L{s.num_areas, s.num_ecs, s.num_periods};
  if (static_cast<int>(sol.values.size()) != L.count()) {
    throw ValidationError("validate: expected " + std::to_string(L.count()) +
                          " variable values, got " + std::to_string(sol.values.size()));
  }
  const std::span<const double> x(sol.values);
  const int M = s.num_areas, N = s.num_ecs, T = s.num_periods;
  const double alpha = s.resource_per_request;
  const double rho = s.service_rate;

  FamilyResidual server_bounds, demand, alloc, util, power, grid, balance, charge,
      dynamics, level, sell;
  double integrality = 0.0;
  bool overlap = false;

  for (int j = 0; j < N; ++j) {
    const EdgeCloudParams& ec = s.ecs[j];
    const double idle_term = ec.p_idle + (ec.pue - 1.0) * ec.p_peak;
    const double load_slope =
        (opts.load_reduces_power ? ec.p_idle - ec.p_peak : ec.p_peak - ec.p_idle) / rho;
    for (int t = 0; t < T; ++t) {
      const double c = x[L.c(j, t)];
      server_bounds.bound(c, 0.0, ec.max_servers);
      integrality = std::max(integrality, std::abs(c - std::round(c)));

      double load = 0.0;
      for (int i = 0; i < M; ++i) load += x[L.x(i, j, t)];
      util.at_most(load, s.max_utilization * rho * c);
      power.equality(x[L.pu(j, t)], idle_term * c + load_slope * load);

      grid.bound(x[L.pg(j, t)], 0.0, ec.grid_cap[t]);
      const double pw = x[L.pw(j, t)];
      balance.bound(pw, 0.0, opts.no_curtailment ? 0.0 : ec.renewable[t]);
      balance.equality(ec.renewable[t] - pw + x[L.pg(j, t)] + x[L.pd(j, t)],
                       x[L.pu(j, t)] + x[L.pc(j, t)] + x[L.ps(j, t)]);

      const double pc = x[L.pc(j, t)], pd = x[L.pd(j, t)];
      charge.bound(pc, 0.0, v.battery_enabled ? ec.charge_max : 0.0);
      charge.bound(pd, 0.0, v.battery_enabled ? ec.discharge_max : 0.0);
      if (std::min(pc, pd) > tol) overlap = true;

      sell.bound(x[L.ps(j, t)], 0.0,
                 v.sellback_enabled ? std::numeric_limits<double>::infinity() : 0.0);

      if (v.battery_enabled) {
        dynamics.equality(x[L.e(j, t + 1)],
                          battery_step(x[L.e(j, t)], pc, pd, s.charge_efficiency,
                                       s.period_length_hours));
      }
    }
    if (v.battery_enabled) {
      dynamics.equality(x[L.e(j, 0)], ec.batt_init);
      const int last = opts.bound_post_horizon_level ? T : T - 1;
      for (int t = 0; t <= last; ++t) {
        level.bound(x[L.e(j, t)], ec.batt_cap_min, ec.batt_cap_max);
      }
    } else {
      for (int t = 0; t <= T; ++t) level.equality(x[L.e(j, t)], ec.batt_init);
    }
  }
  for (int i = 0; i < M; ++i) {
    for (int t = 0; t < T; ++t) {
      double served = 0.0;
      for (int j = 0; j < N; ++j) {
        const double xv = x[L.x(i, j, t)];
        served += xv;
        const double b = eligibility(s.delay_at(i, j), s.max_delay_ms);
        const double cap = opts.allocation_bound_in_resource_units
                               ? b * s.demand_at(i, t)
                               : b * s.demand_at(i, t) / alpha;
        alloc.bound(xv, 0.0, cap);
      }
      const double q = x[L.q(i, t)];
      alloc.bound(q, 0.0, std::numeric_limits<double>::infinity());
      demand.equality(alpha * (served + q), s.demand_at(i, t));
    }
  }

  const MilpModel m = build_model(s, v, opts);
  const double recomputed = m.objective_value(sol.values);
  const double obj_resid =
      std::abs(sol.objective - recomputed) / std::max(1.0, std::abs(sol.objective));

  ResidualReport report;
  report.families = {
      {"server-count-bounds", server_bounds.value},
      {"demand-balance", demand.value},
      {"allocation-bounds", alloc.value},
      {"utilization-cap", util.value},
      {"power-definition", power.value},
      {"grid-bounds", grid.value},
      {"energy-balance", balance.value},
      {"charge-discharge-bounds", charge.value},
      {"battery-dynamics", dynamics.value},
      {"battery-level-bounds", level.value},
      {"sellback-bounds", sell.value},
  };
  for (const auto& e : report.families) {
    report.max_residual = std::max(report.max_residual, e.residual);
  }
  report.integrality_residual = integrality;
  report.objective_residual = obj_resid;
  report.simultaneous_charge_discharge = overlap;
  return report;
}

void write_solution(const Scenario& s, Variant v, const Solution& sol,
                    std::ostream& out) {
  const VarLayout L{s.num_areas, s.num_ecs, s.num_periods};
  out << "# ecdispatch solution document\n";
  out << "solution v1\n";
  out << "variant " << v.name() << '\n';
  out << "num_areas " << s.num_areas << '\n';
  out << "num_ecs " << s.num_ecs << '\n';
  out << "num_periods " << s.num_periods << '\n';
  out << "status " << to_string(sol.status) << '\n';
  out << "objective " << format_double(sol.objective) << '\n';
  out << "variables " << (sol.has_values() ? L.count() : 0) << '\n';
  if (sol.has_values()) {
    for (int k = 0; k < L.count(); ++k) {
      out << var_name(L, k) << ' ' << format_double(sol.values[k]) << '\n';
    }
    const CostReport r = cost_report_from_values(s, sol.values);
    out << "report\n";
    out << "unmet_cost " << format_double(r.unmet_cost) << '\n';
    out << "electricity_cost " << format_double(r.electricity_cost) << '\n';
    out << "sellback_revenue " << format_double(r.sellback_revenue) << '\n';
    out << "net_electricity " << format_double(r.net_electricity) << '\n';
    out << "carbon_cost " << format_double(r.carbon_cost) << '\n';
    out << "total " << format_double(r.total) << '\n';
    out << "total_emissions_tons " << format_double(r.total_emissions_tons) << '\n';
    out << "total_unmet_requests " << format_double(r.total_unmet_requests) << '\n';
    out << "total_curtailed_kwh " << format_double(r.total_curtailed_kwh) << '\n';
  }
  out << "end\n";
}

void save_solution(const Scenario& s, Variant v, const Solution& sol,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write solution file '" + path + "'");
  write_solution(s, v, sol, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

SolutionDocument read_solution(const VarLayout& layout, std::istream& in) {
  textio::LineReader reader(in);
  std::vector<std::string> tok;
  if (!reader.next(tok) || tok.size() != 2 || tok[0] != "solution" || tok[1] != "v1") {
    throw ParseError(reader.where() + ": expected header 'solution v1'");
  }

  SolutionDocument doc;
  doc.solution.status = SolveStatus::Infeasible;
  int declared_vars = -1;
  bool in_report = false;
  while (reader.next(tok)) {
    const std::string& key = tok[0];
    if (key == "end") {
      if (declared_vars > 0 &&
          static_cast<int>(doc.solution.values.size()) != layout.count()) {
        throw ParseError("solution document lists " +
                         std::to_string(doc.solution.values.size()) + " of " +
                         std::to_string(layout.count()) + " variables");
      }
      return doc;
    }
    if (key == "report") {
      in_report = true;  // report block is derived data; skip on read
      continue;
    }
    if (tok.size() != 2) {
      throw ParseError(reader.where() + ": expected 'key value'");
    }
    if (in_report) continue;
    if (key == "variant") {
      doc.variant = Variant::from_name(tok[1]);
    } else if (key == "status") {
      doc.solution.status = solve_status_from_string(tok[1]);
    } else if (key == "objective") {
      doc.solution.objective = textio::parse_double(tok[1], reader.where());
    } else if (key == "variables") {
      declared_vars = static_cast<int>(textio::parse_int(tok[1], reader.where()));
      if (declared_vars > 0) {
        if (declared_vars != layout.count()) {
          throw ParseError(reader.where() + ": document has " + tok[1] +
                           " variables, scenario expects " +
                           std::to_string(layout.count()));
        }
        doc.solution.values.assign(layout.count(), 0.0);
      }
    } else if (key == "num_areas" || key == "num_ecs" || key == "num_periods") {
      const int got = static_cast<int>(textio::parse_int(tok[1], reader.where()));
      const int want = key == "num_areas"   ? layout.num_areas
                       : key == "num_ecs"   ? layout.num_ecs
                                            : layout.num_periods;
      if (got != want) {
        throw ParseError(reader.where() + ": " + key + " is " + tok[1] +
                         ", scenario has " + std::to_string(want));
      }
    } else {
      // a variable line
      if (doc.solution.values.empty()) {
        throw ParseError(reader.where() + ": variable before 'variables' count");
      }
      const int idx = var_index(layout, key);
      doc.solution.values[idx] = textio::parse_double(tok[1], reader.where());
    }
  }
  throw ParseError("unexpected end of file, missing 'end'");
}

SolutionDocument load_solution(const VarLayout& layout, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open solution file '" + path + "'");
  try {
    return read_solution(layout, in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace ecd
