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
#include <string>

#include "ecd/model.hpp"

namespace ecd {

/// Writes the model as a fixed-format MPS file (ROWS / COLUMNS / RHS /
/// BOUNDS, integer columns inside INTORG/INTEND markers).  MPS names are
/// capped at 8 characters, so variables become C1, C2, ... and rows R1,
/// R2, ...; the table mapping them back to catalog names is written next
/// to the file as `<path>.names`.
void write_mps(const MilpModel& m, const std::string& path);

void write_mps(const MilpModel& m, std::ostream& mps_out, std::ostream& names_out);

}  // namespace ecd
