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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecd/scenario.hpp"

namespace ecd {

/// Model configuration: which energy features are available.
/// M0 = battery + sell-back, M1 = neither, M2 = battery only,
/// M3 = sell-back only.
struct Variant {
  bool battery_enabled = true;
  bool sellback_enabled = true;

  static Variant M0() { return {true, true}; }
  static Variant M1() { return {false, false}; }
  static Variant M2() { return {true, false}; }
  static Variant M3() { return {false, true}; }

  /// Parses "M0".."M3"; throws ValidationError otherwise.
  static Variant from_name(std::string_view name);
  std::string name() const;

  bool operator==(const Variant&) const = default;
};

/// Switches for documented alternative model readings.  Defaults give the
/// standard model.
struct ModelOptions {
  /// Load term of the power identity uses (p_idle - p_peak), so power
  /// shrinks as servers get busier.  Off by default: busier servers draw
  /// more power.
  bool load_reduces_power = false;
  /// Cap allocations at eligibility * demand in resource units instead of
  /// eligibility * demand / resource_per_request (requests).
  bool allocation_bound_in_resource_units = false;
  /// Pin renewable spill to zero, making the energy balance a strict
  /// equality on generation.
  bool no_curtailment = false;
  /// Keep the battery level box active at the post-horizon index.
  bool bound_post_horizon_level = true;

  bool operator==(const ModelOptions&) const = default;
};

enum class VarKind : std::uint8_t {
  Allocation,     // x[i][j][t] requests routed from area i to EC j
  Unmet,          // q[i][t]    unmet requests
  Servers,        // c[j][t]    active servers (integer)
  GridPower,      // PG[j][t]   kW bought from the grid
  ChargePower,    // PC[j][t]   kW into the battery
  DischargePower, // PD[j][t]   kW out of the battery
  SellPower,      // PS[j][t]   kW sold to the grid
  UsePower,       // PU[j][t]   kW consumed by the site
  SpillPower,     // PW[j][t]   kW of renewable output curtailed
  BatteryLevel,   // E[j][t]    kWh stored, t = 1..T+1
};

/// Index arithmetic for the variable catalog.  The layout depends only on
/// the dimensions, never on the variant, so solutions stay comparable
/// across variants.
struct VarLayout {
  int num_areas = 0;
  int num_ecs = 0;
  int num_periods = 0;

  int x(int i, int j, int t) const { return (i * num_ecs + j) * num_periods + t; }
  int q(int i, int t) const { return x_count() + i * num_periods + t; }
  int c(int j, int t) const { return x_count() + q_count() + j * num_periods + t; }
  int pg(int j, int t) const { return c(0, 0) + c_count() + j * num_periods + t; }
  int pc(int j, int t) const { return pg(j, t) + jt_count(); }
  int pd(int j, int t) const { return pg(j, t) + 2 * jt_count(); }
  int ps(int j, int t) const { return pg(j, t) + 3 * jt_count(); }
  int pu(int j, int t) const { return pg(j, t) + 4 * jt_count(); }
  int pw(int j, int t) const { return pg(j, t) + 5 * jt_count(); }
  /// Battery level; t runs 0..num_periods (one index past the horizon).
  int e(int j, int t) const {
    return pg(0, 0) + 6 * jt_count() + j * (num_periods + 1) + t;
  }

  int x_count() const { return num_areas * num_ecs * num_periods; }
  int q_count() const { return num_areas * num_periods; }
  int c_count() const { return jt_count(); }
  int jt_count() const { return num_ecs * num_periods; }
  int e_count() const { return num_ecs * (num_periods + 1); }
  int count() const {
    return x_count() + q_count() + c_count() + 6 * jt_count() + e_count();
  }

  bool operator==(const VarLayout&) const = default;
};

/// Canonical variable name, e.g. "x[2][1][4]" or "E[1][13]" (1-based).
std::string var_name(const VarLayout& layout, int index);
/// Inverse of var_name; throws ParseError on unknown names.
int var_index(const VarLayout& layout, std::string_view name);

struct VarBounds {
  double lb = 0.0;
  double ub = 0.0;  // +infinity allowed
};

enum class RowFamily : std::uint8_t {
  DemandBalance,    // served plus unmet equals demand
  UtilizationCap,   // load on a site within the utilization budget
  PowerDefinition,  // site power as a function of servers and load
  EnergyBalance,    // sources equal sinks at each site and period
  BatteryDynamics,  // level recursion between consecutive periods
};

std::string_view row_family_tag(RowFamily family);

struct RowEntry {
  int var;
  double coef;
};

struct Row {
  RowFamily family;
  int i = -1;  // area, when applicable
  int j = -1;  // edge cloud, when applicable
  int t = -1;  // period, when applicable
  char sense = '=';  // '<', '=', '>'
  double rhs = 0.0;
  std::vector<RowEntry> terms;  // nonzero coefficients, unique variables
};

/// Sparse mixed-integer linear program: variable catalog with bounds,
/// objective and integrality, plus tagged constraint rows.  Minimization.
struct MilpModel {
  VarLayout layout;
  Variant variant;
  ModelOptions options;
  std::vector<VarBounds> bounds;    // one per variable
  std::vector<double> objective;    // one per variable
  std::vector<bool> integral;       // true only for server-count variables
  std::vector<Row> rows;

  int num_vars() const { return layout.count(); }
  double objective_value(std::span<const double> values) const;
};

/// Average utilization of a site: load / (service_rate * active_servers).
/// Zero servers with zero load is 0; zero servers with positive load is an
/// invalid state and throws std::domain_error.
double utilization(double request_load, double service_rate, double active_servers);

/// Site power draw in kW for a given server count and request load.
double power_demand(double active_servers, double request_load,
                    const EdgeCloudParams& ec, double service_rate,
                    bool load_reduces_power = false);

/// Battery level after one period of charging/discharging.
double battery_step(double level, double charge, double discharge,
                    double efficiency, double dt_hours);

/// Assembles the full MILP for a scenario and variant.
MilpModel build_model(const Scenario& s, Variant v, const ModelOptions& opts = {});

}  // namespace ecd
