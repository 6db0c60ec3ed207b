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

#include "ecd/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecd/errors.hpp"

namespace ecd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Variant Variant::from_name(std::string_view name) {
  if (name == "M0") return M0();
  if (name == "M1") return M1();
  if (name == "M2") return M2();
  if (name == "M3") return M3();
  throw ValidationError("unknown variant '" + std::string(name) +
                        "', expected M0, M1, M2 or M3");
}

std::string Variant::name() const {
  if (battery_enabled && sellback_enabled) return "M0";
  if (!battery_enabled && !sellback_enabled) return "M1";
  if (battery_enabled) return "M2";
  return "M3";
}

std::string var_name(const VarLayout& L, int index) {
  const int T = L.num_periods;
  if (index < L.x_count()) {
    const int t = index % T;
    const int j = (index / T) % L.num_ecs;
    const int i = index / (T * L.num_ecs);
    return "x[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "][" +
           std::to_string(t + 1) + "]";
  }
  auto jt_name = [&](const char* stem, int base) {
    const int k = index - base;
    return std::string(stem) + "[" + std::to_string(k / T + 1) + "][" +
           std::to_string(k % T + 1) + "]";
  };
  if (index < L.c(0, 0)) {
    const int k = index - L.q(0, 0);
    return "q[" + std::to_string(k / T + 1) + "][" + std::to_string(k % T + 1) + "]";
  }
  if (index < L.pg(0, 0)) return jt_name("c", L.c(0, 0));
  if (index < L.pc(0, 0)) return jt_name("PG", L.pg(0, 0));
  if (index < L.pd(0, 0)) return jt_name("PC", L.pc(0, 0));
  if (index < L.ps(0, 0)) return jt_name("PD", L.pd(0, 0));
  if (index < L.pu(0, 0)) return jt_name("PS", L.ps(0, 0));
  if (index < L.pw(0, 0)) return jt_name("PU", L.pu(0, 0));
  if (index < L.e(0, 0)) return jt_name("PW", L.pw(0, 0));
  const int k = index - L.e(0, 0);
  return "E[" + std::to_string(k / (T + 1) + 1) + "][" + std::to_string(k % (T + 1) + 1) +
         "]";
}

int var_index(const VarLayout& L, std::string_view name) {
  const auto bad = [&] {
    return ParseError("unknown variable name '" + std::string(name) + "'");
  };
  auto lb = name.find('[');
  if (lb == std::string_view::npos || name.back() != ']') throw bad();
  const std::string_view stem = name.substr(0, lb);
  std::vector<int> idx;
  std::size_t p = lb;
  while (p < name.size() && name[p] == '[') {
    auto close = name.find(']', p);
    if (close == std::string_view::npos) throw bad();
    int v = 0;
    for (std::size_t k = p + 1; k < close; ++k) {
      if (name[k] < '0' || name[k] > '9') throw bad();
      v = v * 10 + (name[k] - '0');
    }
    idx.push_back(v - 1);  // stored names are 1-based
    p = close + 1;
  }
  if (p != name.size()) throw bad();

  auto in = [](int v, int n) { return v >= 0 && v < n; };
  if (stem == "x" && idx.size() == 3 && in(idx[0], L.num_areas) &&
      in(idx[1], L.num_ecs) && in(idx[2], L.num_periods)) {
    return L.x(idx[0], idx[1], idx[2]);
  }
  if (idx.size() == 2) {
    const int a = idx[0], b = idx[1];
    if (stem == "q" && in(a, L.num_areas) && in(b, L.num_periods)) return L.q(a, b);
    if (in(a, L.num_ecs)) {
      if (stem == "E" && in(b, L.num_periods + 1)) return L.e(a, b);
      if (in(b, L.num_periods)) {
        if (stem == "c") return L.c(a, b);
        if (stem == "PG") return L.pg(a, b);
        if (stem == "PC") return L.pc(a, b);
        if (stem == "PD") return L.pd(a, b);
        if (stem == "PS") return L.ps(a, b);
        if (stem == "PU") return L.pu(a, b);
        if (stem == "PW") return L.pw(a, b);
      }
    }
  }
  throw bad();
}

std::string_view row_family_tag(RowFamily family) {
  switch (family) {
    case RowFamily::DemandBalance: return "demand-balance";
    case RowFamily::UtilizationCap: return "utilization-cap";
    case RowFamily::PowerDefinition: return "power-definition";
    case RowFamily::EnergyBalance: return "energy-balance";
    case RowFamily::BatteryDynamics: return "battery-dynamics";
  }
  return "unknown";
}

double MilpModel::objective_value(std::span<const double> values) const {
  double total = 0.0;
  for (std::size_t k = 0; k < objective.size(); ++k) {
    if (objective[k] != 0.0) total += objective[k] * values[k];
  }
  return total;
}

double utilization(double request_load, double service_rate, double active_servers) {
  if (request_load < 0.0 || service_rate <= 0.0 || active_servers < 0.0) {
    throw std::domain_error("utilization: arguments out of domain");
  }
  if (active_servers == 0.0) {
    if (request_load == 0.0) return 0.0;
    throw std::domain_error("utilization: positive load with zero active servers");
  }
  return request_load / (service_rate * active_servers);
}

double power_demand(double active_servers, double request_load,
                    const EdgeCloudParams& ec, double service_rate,
                    bool load_reduces_power) {
  const double idle_term = ec.p_idle + (ec.pue - 1.0) * ec.p_peak;
  const double slope = (load_reduces_power ? ec.p_idle - ec.p_peak
                                           : ec.p_peak - ec.p_idle);
  return active_servers * idle_term + slope * (request_load / service_rate);
}

double battery_step(double level, double charge, double discharge,
                    double efficiency, double dt_hours) {
  return level + dt_hours * (efficiency * charge - discharge / efficiency);
}

MilpModel build_model(const Scenario& s, Variant v, const ModelOptions& opts) {
  s.validate();

  MilpModel m;
  m.layout = {s.num_areas, s.num_ecs, s.num_periods};
  m.variant = v;
  m.options = opts;

  const VarLayout& L = m.layout;
  const int M = s.num_areas, N = s.num_ecs, T = s.num_periods;
  const double alpha = s.resource_per_request;
  const double rho = s.service_rate;
  const double cap_per_server = s.max_utilization * rho;
  const double dt = s.period_length_hours;
  const double eta = s.charge_efficiency;

  const int n = L.count();
  m.bounds.assign(n, VarBounds{0.0, kInf});
  m.objective.assign(n, 0.0);
  m.integral.assign(n, false);

  // variable bounds and objective
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < N; ++j) {
      const int b = eligibility(s.delay_at(i, j), s.max_delay_ms);
      for (int t = 0; t < T; ++t) {
        const double lam = s.demand_at(i, t);
        const double cap = opts.allocation_bound_in_resource_units ? lam : lam / alpha;
        m.bounds[L.x(i, j, t)] = {0.0, b * cap};
      }
    }
  }
  for (int i = 0; i < M; ++i) {
    for (int t = 0; t < T; ++t) m.objective[L.q(i, t)] = s.unmet_penalty[i];
  }
  for (int j = 0; j < N; ++j) {
    const EdgeCloudParams& ec = s.ecs[j];
    const double carbon_per_kwh = ec.carbon_tax * ec.emission_factor / 1000.0;
    for (int t = 0; t < T; ++t) {
      m.bounds[L.c(j, t)] = {0.0, static_cast<double>(ec.max_servers)};
      m.integral[L.c(j, t)] = true;
      m.bounds[L.pg(j, t)] = {0.0, ec.grid_cap[t]};
      m.bounds[L.pc(j, t)] = {0.0, v.battery_enabled ? ec.charge_max : 0.0};
      m.bounds[L.pd(j, t)] = {0.0, v.battery_enabled ? ec.discharge_max : 0.0};
      m.bounds[L.ps(j, t)] = {0.0, v.sellback_enabled ? kInf : 0.0};
      m.bounds[L.pu(j, t)] = {0.0, kInf};
      m.bounds[L.pw(j, t)] = {0.0, opts.no_curtailment ? 0.0 : ec.renewable[t]};
      m.objective[L.pg(j, t)] = ec.price[t] + carbon_per_kwh;
      m.objective[L.ps(j, t)] = -s.sellback_ratio * ec.price[t];
    }
    for (int t = 0; t <= T; ++t) {
      if (v.battery_enabled) {
        m.bounds[L.e(j, t)] = {ec.batt_cap_min, ec.batt_cap_max};
      } else {
        m.bounds[L.e(j, t)] = {ec.batt_init, ec.batt_init};
      }
    }
    m.bounds[L.e(j, 0)] = {ec.batt_init, ec.batt_init};
    if (v.battery_enabled && !opts.bound_post_horizon_level) {
      m.bounds[L.e(j, T)] = {-kInf, kInf};
    }
  }

  // rows
  for (int i = 0; i < M; ++i) {
    for (int t = 0; t < T; ++t) {
      Row r{RowFamily::DemandBalance, i, -1, t, '=', s.demand_at(i, t), {}};
      r.terms.reserve(N + 1);
      for (int j = 0; j < N; ++j) r.terms.push_back({L.x(i, j, t), alpha});
      r.terms.push_back({L.q(i, t), alpha});
      m.rows.push_back(std::move(r));
    }
  }
  for (int j = 0; j < N; ++j) {
    for (int t = 0; t < T; ++t) {
      Row r{RowFamily::UtilizationCap, -1, j, t, '<', 0.0, {}};
      r.terms.reserve(M + 1);
      for (int i = 0; i < M; ++i) r.terms.push_back({L.x(i, j, t), 1.0});
      r.terms.push_back({L.c(j, t), -cap_per_server});
      m.rows.push_back(std::move(r));
    }
  }
  for (int j = 0; j < N; ++j) {
    const EdgeCloudParams& ec = s.ecs[j];
    const double idle_term = ec.p_idle + (ec.pue - 1.0) * ec.p_peak;
    const double load_slope =
        (opts.load_reduces_power ? ec.p_idle - ec.p_peak : ec.p_peak - ec.p_idle) / rho;
    for (int t = 0; t < T; ++t) {
      Row r{RowFamily::PowerDefinition, -1, j, t, '=', 0.0, {}};
      r.terms.reserve(M + 2);
      r.terms.push_back({L.pu(j, t), 1.0});
      r.terms.push_back({L.c(j, t), -idle_term});
      if (load_slope != 0.0) {
        for (int i = 0; i < M; ++i) r.terms.push_back({L.x(i, j, t), -load_slope});
      }
      m.rows.push_back(std::move(r));
    }
  }
  for (int j = 0; j < N; ++j) {
    const EdgeCloudParams& ec = s.ecs[j];
    for (int t = 0; t < T; ++t) {
      Row r{RowFamily::EnergyBalance, -1, j, t, '=', -ec.renewable[t], {}};
      r.terms = {{L.pg(j, t), 1.0}, {L.pd(j, t), 1.0},  {L.pw(j, t), -1.0},
                 {L.pu(j, t), -1.0}, {L.pc(j, t), -1.0}, {L.ps(j, t), -1.0}};
      m.rows.push_back(std::move(r));
    }
  }
  if (v.battery_enabled) {
    for (int j = 0; j < N; ++j) {
      for (int t = 0; t < T; ++t) {
        Row r{RowFamily::BatteryDynamics, -1, j, t, '=', 0.0, {}};
        r.terms = {{L.e(j, t + 1), 1.0},
                   {L.e(j, t), -1.0},
                   {L.pc(j, t), -dt * eta},
                   {L.pd(j, t), dt / eta}};
        m.rows.push_back(std::move(r));
      }
    }
  }

  return m;
}

}  // namespace ecd
