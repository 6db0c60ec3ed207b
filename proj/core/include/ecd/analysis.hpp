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
#include <optional>
#include <string>
#include <vector>

#include "ecd/bnb.hpp"
#include "ecd/model.hpp"
#include "ecd/scenario.hpp"
#include "ecd/solution.hpp"

namespace ecd {

/// A parameter the sweep can vary.  The scale factors multiply the base
/// scenario; zeta replaces the sell-back ratio; the dimension parameters
/// regenerate the scenario at a new size.
enum class SweepParam {
  Psi,         // renewable multiplier
  Zeta,        // sell-back ratio (absolute value, not a multiplier)
  XiE,         // price multiplier
  XiEmax,      // battery capacity multiplier
  GammaScale,  // utilization threshold multiplier
  XiDmax,      // delay threshold multiplier
  NumAreas,    // regenerate with this many areas
  NumEcs,      // regenerate with this many edge clouds
};

SweepParam sweep_param_from_string(std::string_view name);
std::string_view to_string(SweepParam p);

enum class SeedPolicy { FixedBase, ReseedPerPoint };

struct SweepSpec {
  Scenario base;
  /// Needed for dimension sweeps and for ReseedPerPoint; the base scenario
  /// is ignored for dimension sweeps, which regenerate from this spec.
  std::optional<GenSpec> gen;
  SweepParam param = SweepParam::Psi;
  std::vector<double> grid;  // nonempty, strictly increasing
  std::vector<Variant> variants;
  SeedPolicy seed_policy = SeedPolicy::FixedBase;
  ModelOptions options;
  BnbConfig solver;
  int jobs = 1;
  /// When false, wall_ms is recorded as zero so repeated runs produce
  /// byte-identical tables.
  bool record_timing = true;

  void validate() const;
};

struct SweepRow {
  double param = 0.0;
  Variant variant;
  SolveStatus status = SolveStatus::Infeasible;
  CostReport report;  // zeros unless the solve produced values
  std::int64_t nodes = 0;
  double wall_ms = 0.0;
  double root_lp_objective = 0.0;
  double best_bound = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // grid-major, then variant order
};

/// Runs every (grid point, variant) pair.  Solver failures become row
/// statuses; the sweep never aborts half way.  Points run concurrently
/// when spec.jobs > 1; the row order does not depend on jobs.
SweepTable run_sweep(const SweepSpec& spec);

/// One row per variant on the identical scenario.
SweepTable compare_variants(const Scenario& s, const std::vector<Variant>& variants,
                            const BnbConfig& cfg = {}, const ModelOptions& opts = {},
                            int jobs = 1, bool record_timing = true);

/// CSV with the fixed header
///   param,variant,total_cost,unmet_cost,net_electricity,carbon_cost,
///   revenue,emissions_tons,curtailed_kwh,unmet_requests,status,nodes,wall_ms
/// and numeric fields at 6 significant digits.  Throws on an empty table.
void write_csv(const SweepTable& t, std::ostream& out);
void write_csv(const SweepTable& t, const std::string& path);

}  // namespace ecd
