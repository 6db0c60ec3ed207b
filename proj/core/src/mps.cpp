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

#include "ecd/mps.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <vector>

#include "ecd/errors.hpp"
#include "textio.hpp"

namespace ecd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pad8(const std::string& name) {
  std::string s = name;
  if (s.size() < 8) s.append(8 - s.size(), ' ');
  return s;
}

std::string num(double v) { return textio::format_double(v, 12); }

void entry(std::ostream& out, const std::string& a, const std::string& b,
           double value) {
  out << "    " << pad8(a) << "  " << pad8(b) << "  " << num(value) << '\n';
}

}  // namespace

void write_mps(const MilpModel& m, std::ostream& out, std::ostream& names_out) {
  const int nrows = static_cast<int>(m.rows.size());
  const int nvars = m.num_vars();

  auto rname = [](int i) { return "R" + std::to_string(i + 1); };
  auto cname = [](int k) { return "C" + std::to_string(k + 1); };

  // column-major view of the rows
  std::vector<std::vector<std::pair<int, double>>> cols(nvars);
  for (int i = 0; i < nrows; ++i) {
    for (const RowEntry& e : m.rows[i].terms) cols[e.var].push_back({i, e.coef});
  }

  out << "NAME          ECDMODEL\n";
  out << "ROWS\n";
  out << " N  COST\n";
  for (int i = 0; i < nrows; ++i) {
    const char s = m.rows[i].sense;
    out << ' ' << (s == '<' ? 'L' : s == '>' ? 'G' : 'E') << "  " << rname(i) << '\n';
  }

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker_id = 0;
  for (int k = 0; k < nvars; ++k) {
    if (m.integral[k] != in_integer_block) {
      out << "    " << pad8("MARK" + std::to_string(++marker_id)) << "  'MARKER'"
          << std::string(17, ' ') << (m.integral[k] ? "'INTORG'" : "'INTEND'") << '\n';
      in_integer_block = m.integral[k];
    }
    bool wrote = false;
    if (m.objective[k] != 0.0) {
      entry(out, cname(k), "COST", m.objective[k]);
      wrote = true;
    }
    for (const auto& [row, coef] : cols[k]) {
      entry(out, cname(k), rname(row), coef);
      wrote = true;
    }
    if (!wrote) entry(out, cname(k), "COST", 0.0);  // declare unused columns
  }
  if (in_integer_block) {
    out << "    " << pad8("MARK" + std::to_string(++marker_id)) << "  'MARKER'"
        << std::string(17, ' ') << "'INTEND'\n";
  }

  out << "RHS\n";
  for (int i = 0; i < nrows; ++i) {
    if (m.rows[i].rhs != 0.0) entry(out, "RHS", rname(i), m.rows[i].rhs);
  }

  out << "BOUNDS\n";
  for (int k = 0; k < nvars; ++k) {
    const double lb = m.bounds[k].lb, ub = m.bounds[k].ub;
    if (lb == ub) {
      out << " FX " << pad8("BND") << "  " << pad8(cname(k)) << "  " << num(lb) << '\n';
      continue;
    }
    if (lb == -kInf) {
      out << " MI " << pad8("BND") << "  " << pad8(cname(k)) << '\n';
    } else if (lb != 0.0 || m.integral[k]) {
      out << " LO " << pad8("BND") << "  " << pad8(cname(k)) << "  " << num(lb) << '\n';
    }
    if (ub != kInf) {
      out << " UP " << pad8("BND") << "  " << pad8(cname(k)) << "  " << num(ub) << '\n';
    }
  }
  out << "ENDATA\n";

  names_out << "# MPS name -> catalog name\n";
  for (int k = 0; k < nvars; ++k) {
    names_out << cname(k) << ' ' << var_name(m.layout, k) << '\n';
  }
  for (int i = 0; i < nrows; ++i) {
    const Row& r = m.rows[i];
    names_out << rname(i) << ' ' << row_family_tag(r.family);
    if (r.i >= 0) names_out << " i=" << r.i + 1;
    if (r.j >= 0) names_out << " j=" << r.j + 1;
    if (r.t >= 0) names_out << " t=" << r.t + 1;
    names_out << '\n';
  }
}

void write_mps(const MilpModel& m, const std::string& path) {
  std::ofstream mps(path);
  if (!mps) throw IoError("cannot write MPS file '" + path + "'");
  std::ofstream names(path + ".names");
  if (!names) throw IoError("cannot write names file '" + path + ".names'");
  write_mps(m, mps, names);
  if (!mps || !names) throw IoError("write failed for '" + path + "'");
}

}  // namespace ecd
