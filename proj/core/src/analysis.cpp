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

#include "ecd/analysis.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>

#include "ecd/errors.hpp"
#include "textio.hpp"

namespace ecd {

SweepParam sweep_param_from_string(std::string_view name) {
  if (name == "psi") return SweepParam::Psi;
  if (name == "zeta") return SweepParam::Zeta;
  if (name == "xi_e") return SweepParam::XiE;
  if (name == "xi_emax") return SweepParam::XiEmax;
  if (name == "gamma_scale") return SweepParam::GammaScale;
  if (name == "xi_dmax") return SweepParam::XiDmax;
  if (name == "num_areas") return SweepParam::NumAreas;
  if (name == "num_ecs") return SweepParam::NumEcs;
  throw ValidationError("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Psi: return "psi";
    case SweepParam::Zeta: return "zeta";
    case SweepParam::XiE: return "xi_e";
    case SweepParam::XiEmax: return "xi_emax";
    case SweepParam::GammaScale: return "gamma_scale";
    case SweepParam::XiDmax: return "xi_dmax";
    case SweepParam::NumAreas: return "num_areas";
    case SweepParam::NumEcs: return "num_ecs";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  base.validate();
  if (grid.empty()) throw ValidationError("sweep grid must be nonempty");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw ValidationError("sweep grid must be strictly increasing");
    }
  }
  if (variants.empty()) throw ValidationError("sweep needs at least one variant");
  const bool dimension_sweep =
      param == SweepParam::NumAreas || param == SweepParam::NumEcs;
  if ((dimension_sweep || seed_policy == SeedPolicy::ReseedPerPoint) && !gen) {
    throw ValidationError(
        "dimension sweeps and per-point reseeding need a generator spec");
  }
  if (dimension_sweep) {
    for (double g : grid) {
      if (g < 1.0 || g != std::floor(g)) {
        throw ValidationError("dimension grids must hold integers >= 1");
      }
    }
  }
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
}

namespace {

Scenario scenario_for_point(const SweepSpec& spec, double value, std::size_t index) {
  GenSpec gen;
  bool regen = false;
  if (spec.gen) gen = *spec.gen;
  if (spec.seed_policy == SeedPolicy::ReseedPerPoint) {
    gen.seed = spec.gen->seed + static_cast<std::uint64_t>(index);
    regen = true;
  }

  ScaleFactors f;
  switch (spec.param) {
    case SweepParam::Psi: f.psi = value; break;
    case SweepParam::Zeta: f.zeta_override = value; break;
    case SweepParam::XiE: f.xi_e = value; break;
    case SweepParam::XiEmax: f.xi_emax = value; break;
    case SweepParam::GammaScale: f.gamma_scale = value; break;
    case SweepParam::XiDmax: f.xi_dmax = value; break;
    case SweepParam::NumAreas:
      gen.num_areas = static_cast<int>(value);
      regen = true;
      break;
    case SweepParam::NumEcs:
      gen.num_ecs = static_cast<int>(value);
      regen = true;
      break;
  }
  const Scenario base = regen ? generate_scenario(gen) : spec.base;
  return scale_scenario(base, f);
}

SweepRow solve_row(const Scenario& s, Variant v, double param_value,
                   const BnbConfig& cfg, const ModelOptions& opts,
                   bool record_timing) {
  SweepRow row;
  row.param = param_value;
  row.variant = v;
  const MilpModel model = build_model(s, v, opts);
  const MilpResult res = solve_milp(model, cfg);
  row.status = res.solution.status;
  row.nodes = res.stats.nodes_explored;
  row.wall_ms = record_timing ? res.stats.wall_time_s * 1000.0 : 0.0;
  row.root_lp_objective = res.stats.root_lp_objective;
  row.best_bound = res.stats.best_bound;
  if (res.solution.has_values()) {
    row.report = cost_report_from_values(s, res.solution.values);
  }
  return row;
}

// deterministic fan-out: every task writes its own slot
void run_tasks(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      fn(k);
    }
  };
  std::vector<std::thread> threads;
  const int n = std::min<int>(jobs, static_cast<int>(count));
  threads.reserve(n);
  for (int k = 0; k < n; ++k) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();

  SweepTable table;
  table.rows.resize(spec.grid.size() * spec.variants.size());

  // scenario preparation is cheap next to the solves; do it up front so a
  // bad grid value fails before any solving starts
  std::vector<Scenario> scenarios;
  scenarios.reserve(spec.grid.size());
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    scenarios.push_back(scenario_for_point(spec, spec.grid[g], g));
  }

  run_tasks(spec.jobs, table.rows.size(), [&](std::size_t k) {
    const std::size_t g = k / spec.variants.size();
    const std::size_t v = k % spec.variants.size();
    table.rows[k] = solve_row(scenarios[g], spec.variants[v], spec.grid[g],
                              spec.solver, spec.options, spec.record_timing);
  });
  return table;
}

SweepTable compare_variants(const Scenario& s, const std::vector<Variant>& variants,
                            const BnbConfig& cfg, const ModelOptions& opts, int jobs,
                            bool record_timing) {
  s.validate();
  if (variants.empty()) throw ValidationError("compare needs at least one variant");
  SweepTable table;
  table.rows.resize(variants.size());
  run_tasks(jobs, variants.size(), [&](std::size_t k) {
    table.rows[k] = solve_row(s, variants[k], 0.0, cfg, opts, record_timing);
  });
  return table;
}

void write_csv(const SweepTable& t, std::ostream& out) {
  if (t.rows.empty()) throw ValidationError("cannot write an empty sweep table");
  out << "param,variant,total_cost,unmet_cost,net_electricity,carbon_cost,revenue,"
         "emissions_tons,curtailed_kwh,unmet_requests,status,nodes,wall_ms\n";
  auto n = [](double v) { return textio::format_double(v, 6); };
  for (const SweepRow& r : t.rows) {
    out << n(r.param) << ',' << r.variant.name() << ',' << n(r.report.total) << ','
        << n(r.report.unmet_cost) << ',' << n(r.report.net_electricity) << ','
        << n(r.report.carbon_cost) << ',' << n(r.report.sellback_revenue) << ','
        << n(r.report.total_emissions_tons) << ',' << n(r.report.total_curtailed_kwh)
        << ',' << n(r.report.total_unmet_requests) << ',' << to_string(r.status) << ','
        << r.nodes << ',' << n(r.wall_ms) << '\n';
  }
}

void write_csv(const SweepTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV file '" + path + "'");
  write_csv(t, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace ecd
