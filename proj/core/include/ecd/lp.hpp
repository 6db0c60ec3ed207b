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
#include <vector>

#include "ecd/model.hpp"

namespace ecd {

/// Sparse linear program in row-major (CSR) form, minimization.
/// Upper bounds may be +infinity; every variable of this artifact has a
/// finite lower bound.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;

  std::vector<char> sense;  // one per row: '<', '=', '>'
  std::vector<double> rhs;
  std::vector<int> row_start;  // size num_rows() + 1
  std::vector<int> col;
  std::vector<double> val;

  int num_rows() const { return static_cast<int>(sense.size()); }

  void add_row(char row_sense, double row_rhs,
               std::span<const RowEntry> terms) {
    sense.push_back(row_sense);
    rhs.push_back(row_rhs);
    for (const RowEntry& e : terms) {
      col.push_back(e.var);
      val.push_back(e.coef);
    }
    row_start.push_back(static_cast<int>(col.size()));
  }

  void validate() const;  // throws ValidationError
};

/// LP relaxation of the model: same variable indexing, integrality dropped.
LpProblem lp_relaxation(const MilpModel& m);

}  // namespace ecd
