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

#include "ecd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecd/errors.hpp"
#include "ecd/rng.hpp"

namespace ecd {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::string at_ec(int j) { return "ec " + std::to_string(j + 1) + ": "; }

void validate_vector(const std::vector<double>& v, int expected, const std::string& where) {
  require(static_cast<int>(v.size()) == expected,
          where + "expected " + std::to_string(expected) + " entries, got " +
              std::to_string(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    require(std::isfinite(v[k]) && v[k] >= 0.0,
            where + "entry " + std::to_string(k + 1) + " must be finite and >= 0");
  }
}

}  // namespace

double Scenario::period_requests(int period) const {
  double total = 0.0;
  for (int i = 0; i < num_areas; ++i) total += demand_at(i, period);
  return total / resource_per_request;
}

void Scenario::validate() const {
  require(num_areas >= 1, "num_areas must be >= 1");
  require(num_ecs >= 1, "num_ecs must be >= 1");
  require(num_periods >= 1, "num_periods must be >= 1");
  require(period_length_hours > 0.0, "period_length_hours must be > 0");
  require(resource_per_request > 0.0, "resource_per_request must be > 0");
  require(service_rate > 0.0, "service_rate must be > 0");
  require(max_delay_ms >= 0.0, "max_delay_ms must be >= 0");
  require(max_utilization > 0.0 && max_utilization <= 1.0,
          "max_utilization must lie in (0, 1]");
  require(sellback_ratio >= 0.0 && sellback_ratio <= 1.0,
          "sellback_ratio must lie in [0, 1]");
  require(charge_efficiency > 0.0 && charge_efficiency <= 1.0,
          "charge_efficiency must lie in (0, 1]");

  validate_vector(demand, num_areas * num_periods, "demand: ");
  validate_vector(unmet_penalty, num_areas, "unmet_penalty: ");
  validate_vector(delay_ms, num_areas * num_ecs, "delay: ");

  require(static_cast<int>(ecs.size()) == num_ecs,
          "ecs: expected " + std::to_string(num_ecs) + " entries, got " +
              std::to_string(ecs.size()));
  for (int j = 0; j < num_ecs; ++j) {
    const EdgeCloudParams& ec = ecs[j];
    require(ec.max_servers >= 0, at_ec(j) + "max_servers must be >= 0");
    require(ec.p_idle >= 0.0, at_ec(j) + "p_idle must be >= 0");
    require(ec.p_idle <= ec.p_peak, at_ec(j) + "p_idle <= p_peak violated");
    require(ec.pue >= 1.0, at_ec(j) + "pue must be >= 1");
    validate_vector(ec.price, num_periods, at_ec(j) + "price: ");
    validate_vector(ec.grid_cap, num_periods, at_ec(j) + "grid_cap: ");
    validate_vector(ec.renewable, num_periods, at_ec(j) + "renewable: ");
    require(ec.batt_cap_min >= 0.0, at_ec(j) + "batt_cap_min must be >= 0");
    require(ec.batt_cap_min <= ec.batt_init && ec.batt_init <= ec.batt_cap_max,
            at_ec(j) + "batt_cap_min <= batt_init <= batt_cap_max violated");
    require(ec.charge_max >= 0.0, at_ec(j) + "charge_max must be >= 0");
    require(ec.discharge_max >= 0.0, at_ec(j) + "discharge_max must be >= 0");
    require(ec.emission_factor >= 0.0, at_ec(j) + "emission_factor must be >= 0");
    require(ec.carbon_tax >= 0.0, at_ec(j) + "carbon_tax must be >= 0");
  }
}

int eligibility(double delay_ms, double max_delay_ms) {
  return 2.0 * delay_ms <= max_delay_ms ? 1 : 0;
}

void GenSpec::validate() const {
  require(num_areas >= 1 && num_ecs >= 1 && num_periods >= 1,
          "dimensions must be >= 1");
  require(period_length_hours > 0.0, "period_length_hours must be > 0");
  require(resource_per_request > 0.0, "resource_per_request must be > 0");
  require(service_rate > 0.0, "service_rate must be > 0");
  require(max_utilization > 0.0 && max_utilization <= 1.0,
          "max_utilization must lie in (0, 1]");
  require(sellback_ratio >= 0.0 && sellback_ratio <= 1.0,
          "sellback_ratio must lie in [0, 1]");
  require(charge_efficiency > 0.0 && charge_efficiency <= 1.0,
          "charge_efficiency must lie in (0, 1]");
  const struct {
    const char* name;
    const Range& r;
  } ranges[] = {
      {"demand", demand},
      {"unmet_penalty", unmet_penalty},
      {"delay_ms", delay_ms},
      {"max_servers", max_servers},
      {"p_idle", p_idle},
      {"p_peak", p_peak},
      {"pue", pue},
      {"price", price},
      {"grid_cap", grid_cap},
      {"renewable", renewable},
      {"batt_cap_max", batt_cap_max},
      {"batt_cap_min", batt_cap_min},
      {"charge_max", charge_max},
      {"discharge_max", discharge_max},
      {"emission_factor", emission_factor},
      {"carbon_tax", carbon_tax},
  };
  for (const auto& [name, r] : ranges) {
    require(r.low <= r.high, std::string(name) + ": range low > high");
  }
}

// Sampling order is part of the format contract (generator version 1):
// demand (area-major), unmet penalties, delays (area-major), then per EC:
// max_servers, p_idle, p_peak, pue, price[t], grid_cap[t], renewable[t],
// batt_cap_max, batt_cap_min, charge_max, discharge_max, emission_factor,
// carbon_tax.  Changing this order changes every seeded scenario.
Scenario generate_scenario(const GenSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);

  Scenario s;
  s.num_areas = spec.num_areas;
  s.num_ecs = spec.num_ecs;
  s.num_periods = spec.num_periods;
  s.period_length_hours = spec.period_length_hours;
  s.resource_per_request = spec.resource_per_request;
  s.service_rate = spec.service_rate;
  s.max_delay_ms = spec.max_delay_ms;
  s.max_utilization = spec.max_utilization;
  s.sellback_ratio = spec.sellback_ratio;
  s.charge_efficiency = spec.charge_efficiency;

  const int M = spec.num_areas, N = spec.num_ecs, T = spec.num_periods;

  s.demand.resize(static_cast<std::size_t>(M) * T);
  for (double& d : s.demand) d = rng.uniform(spec.demand.low, spec.demand.high);

  s.unmet_penalty.resize(M);
  for (double& p : s.unmet_penalty)
    p = rng.uniform(spec.unmet_penalty.low, spec.unmet_penalty.high);

  s.delay_ms.resize(static_cast<std::size_t>(M) * N);
  for (double& d : s.delay_ms) {
    d = rng.uniform(spec.delay_ms.low, spec.delay_ms.high);
    if (spec.force_eligibility) d = std::min(d, spec.max_delay_ms / 2.0);
  }

  s.ecs.resize(N);
  for (EdgeCloudParams& ec : s.ecs) {
    ec.max_servers = rng.uniform_int(static_cast<int>(spec.max_servers.low),
                                     static_cast<int>(spec.max_servers.high));
    ec.p_idle = rng.uniform(spec.p_idle.low, spec.p_idle.high);
    ec.p_peak = rng.uniform(spec.p_peak.low, spec.p_peak.high);
    ec.pue = rng.uniform(spec.pue.low, spec.pue.high);
    ec.price.resize(T);
    for (double& v : ec.price) v = rng.uniform(spec.price.low, spec.price.high);
    ec.grid_cap.resize(T);
    for (double& v : ec.grid_cap) v = rng.uniform(spec.grid_cap.low, spec.grid_cap.high);
    ec.renewable.resize(T);
    for (double& v : ec.renewable) v = rng.uniform(spec.renewable.low, spec.renewable.high);
    ec.batt_cap_max = rng.uniform(spec.batt_cap_max.low, spec.batt_cap_max.high);
    ec.batt_cap_min = rng.uniform(spec.batt_cap_min.low, spec.batt_cap_min.high);
    ec.batt_init = ec.batt_cap_min;  // most conservative feasible start
    ec.charge_max = rng.uniform(spec.charge_max.low, spec.charge_max.high);
    ec.discharge_max = rng.uniform(spec.discharge_max.low, spec.discharge_max.high);
    ec.emission_factor = rng.uniform(spec.emission_factor.low, spec.emission_factor.high);
    ec.carbon_tax = rng.uniform(spec.carbon_tax.low, spec.carbon_tax.high);
  }

  s.validate();
  return s;
}

void ScaleFactors::validate() const {
  require(psi > 0.0, "psi must be > 0");
  require(xi_e > 0.0, "xi_e must be > 0");
  require(xi_emax > 0.0, "xi_emax must be > 0");
  require(xi_dmax > 0.0, "xi_dmax must be > 0");
  require(gamma_scale > 0.0, "gamma_scale must be > 0");
  if (zeta_override) {
    require(*zeta_override >= 0.0 && *zeta_override <= 1.0,
            "zeta_override must lie in [0, 1]");
  }
}

Scenario scale_scenario(const Scenario& s, const ScaleFactors& f) {
  s.validate();
  f.validate();

  Scenario out = s;
  out.max_delay_ms = s.max_delay_ms * f.xi_dmax;
  out.max_utilization = std::min(1.0, s.max_utilization * f.gamma_scale);
  if (f.zeta_override) out.sellback_ratio = *f.zeta_override;

  for (EdgeCloudParams& ec : out.ecs) {
    for (double& v : ec.renewable) v *= f.psi;
    for (double& v : ec.price) v *= f.xi_e;
    ec.batt_cap_max *= f.xi_emax;
    ec.batt_cap_min = std::min(ec.batt_cap_min, ec.batt_cap_max);
    ec.batt_init = std::min(ec.batt_init, ec.batt_cap_max);
  }

  out.validate();
  return out;
}

}  // namespace ecd
