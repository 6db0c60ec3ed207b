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
#include <string>
#include <vector>

namespace ecd {

/// Closed sampling interval for one generated parameter.
struct Range {
  double low = 0.0;
  double high = 0.0;

  bool contains(double v) const { return v >= low && v <= high; }
};

/// Per-site parameters of one edge cloud.
///
/// Units: power in kW, energy in kWh, prices in money per kWh,
/// emission_factor in tons CO2 per MWh of grid energy, carbon_tax in money
/// per ton CO2.  The per-period vectors (price, grid_cap, renewable) all
/// have length num_periods.
struct EdgeCloudParams {
  int max_servers = 0;
  double p_idle = 0.0;   // kW drawn by an idle server
  double p_peak = 0.0;   // kW drawn by a fully busy server
  double pue = 1.0;      // facility power / IT power, >= 1
  std::vector<double> price;
  std::vector<double> grid_cap;
  std::vector<double> renewable;
  double batt_cap_max = 0.0;
  double batt_cap_min = 0.0;
  double batt_init = 0.0;
  double charge_max = 0.0;
  double discharge_max = 0.0;
  double emission_factor = 0.0;
  double carbon_tax = 0.0;

  bool operator==(const EdgeCloudParams&) const = default;
};

/// Everything exogenous to one planning run: sets (areas, edge clouds,
/// periods), demand, delays, prices, and per-site energy parameters.
/// Immutable once built; validate() checks every invariant and throws
/// ValidationError naming the first violation.
struct Scenario {
  int num_areas = 0;    // M
  int num_ecs = 0;      // N
  int num_periods = 0;  // T
  double period_length_hours = 1.0;

  /// Resource demand per area and period, area-major (row = area).
  std::vector<double> demand;
  double resource_per_request = 0.0;  // resource units consumed per request
  double service_rate = 0.0;          // requests one server handles per period
  std::vector<double> unmet_penalty;  // money per unmet request, one per area
  std::vector<double> delay_ms;       // one-way delay, area-major (col = EC)
  double max_delay_ms = 0.0;          // round-trip delay budget
  double max_utilization = 0.0;       // cap on average server utilization
  std::vector<EdgeCloudParams> ecs;
  double sellback_ratio = 0.0;   // sell price = sellback_ratio * purchase price
  double charge_efficiency = 1.0;

  double demand_at(int area, int period) const {
    return demand[static_cast<std::size_t>(area) * num_periods + period];
  }
  double delay_at(int area, int ec) const {
    return delay_ms[static_cast<std::size_t>(area) * num_ecs + ec];
  }
  /// Total demand of one period, summed over areas, in requests.
  double period_requests(int period) const;

  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// 1 when a round trip over the link fits the delay budget, else 0.
int eligibility(double delay_ms, double max_delay_ms);

/// Seeded generator specification.  Ranges are sampled uniformly (closed
/// intervals); scalars are taken verbatim.  The same spec always produces
/// the same scenario.
struct GenSpec {
  std::uint64_t seed = 1;

  int num_areas = 10;
  int num_ecs = 8;
  int num_periods = 12;

  double period_length_hours = 1.0;
  double resource_per_request = 0.5;
  double service_rate = 0.8;
  double max_delay_ms = 100.0;
  double max_utilization = 0.9;
  double sellback_ratio = 0.8;
  double charge_efficiency = 0.8;

  /// When set, delays are clamped so every (area, EC) pair stays eligible.
  bool force_eligibility = true;

  Range demand{10.0, 30.0};
  Range unmet_penalty{5.0, 5.0};
  Range delay_ms{2.0, 25.0};
  Range max_servers{100.0, 150.0};
  Range p_idle{0.45, 0.55};
  Range p_peak{1.2, 1.5};
  Range pue{1.8, 1.9};
  Range price{0.10, 0.35};
  Range grid_cap{1000.0, 1500.0};
  Range renewable{80.0, 100.0};
  Range batt_cap_max{90.0, 100.0};
  Range batt_cap_min{30.0, 50.0};
  Range charge_max{70.0, 80.0};
  Range discharge_max{70.0, 80.0};
  Range emission_factor{0.1, 0.8};
  Range carbon_tax{20.0, 50.0};

  void validate() const;
};

/// Deterministically samples a scenario from the spec.  Throws
/// ValidationError on an invalid spec or when user-supplied ranges produce
/// a parameter combination that violates a scenario invariant.
Scenario generate_scenario(const GenSpec& spec);

/// Multiplicative what-if factors for sensitivity sweeps.
struct ScaleFactors {
  double psi = 1.0;          // renewable output multiplier
  double xi_e = 1.0;         // electricity price multiplier
  double xi_emax = 1.0;      // battery capacity multiplier
  double xi_dmax = 1.0;      // delay threshold multiplier
  double gamma_scale = 1.0;  // utilization threshold multiplier
  std::optional<double> zeta_override;  // replaces sellback_ratio when set

  void validate() const;
};

/// Returns a scaled copy; the input is untouched.  Battery minimum and
/// initial level are clamped so they never exceed the scaled capacity, and
/// the utilization threshold is clamped into (0, 1].
Scenario scale_scenario(const Scenario& s, const ScaleFactors& f);

/// Scenario document I/O (plain text, '#' comments, see README).
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);
Scenario read_scenario(std::istream& in);
void write_scenario(const Scenario& s, std::ostream& out);

}  // namespace ecd
