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

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "ecd/errors.hpp"
#include "ecd/scenario.hpp"
#include "textio.hpp"

namespace ecd {

using textio::format_double;
using textio::LineReader;
using textio::parse_double;
using textio::parse_int;

namespace {

void write_row(std::ostream& out, const double* v, int n) {
  for (int k = 0; k < n; ++k) {
    if (k) out << ' ';
    out << format_double(v[k]);
  }
  out << '\n';
}

}  // namespace

void write_scenario(const Scenario& s, std::ostream& out) {
  out << "# ecdispatch scenario document\n"
         "# units: power kW, energy kWh, price money/kWh, delay ms (one way),\n"
         "#        demand resource-units/period, emission_factor tCO2/MWh,\n"
         "#        carbon_tax money/tCO2\n"
         "# demand rows are areas, columns are periods; delay rows are areas,\n"
         "# columns are edge clouds.\n";
  out << "scenario v1\n";
  out << "num_areas " << s.num_areas << '\n';
  out << "num_ecs " << s.num_ecs << '\n';
  out << "num_periods " << s.num_periods << '\n';
  out << "period_length_hours " << format_double(s.period_length_hours) << '\n';
  out << "resource_per_request " << format_double(s.resource_per_request) << '\n';
  out << "service_rate " << format_double(s.service_rate) << '\n';
  out << "max_delay_ms " << format_double(s.max_delay_ms) << '\n';
  out << "max_utilization " << format_double(s.max_utilization) << '\n';
  out << "sellback_ratio " << format_double(s.sellback_ratio) << '\n';
  out << "charge_efficiency " << format_double(s.charge_efficiency) << '\n';
  out << "unmet_penalty ";
  write_row(out, s.unmet_penalty.data(), s.num_areas);
  out << "demand\n";
  for (int i = 0; i < s.num_areas; ++i) {
    write_row(out, &s.demand[static_cast<std::size_t>(i) * s.num_periods], s.num_periods);
  }
  out << "delay\n";
  for (int i = 0; i < s.num_areas; ++i) {
    write_row(out, &s.delay_ms[static_cast<std::size_t>(i) * s.num_ecs], s.num_ecs);
  }
  for (int j = 0; j < s.num_ecs; ++j) {
    const EdgeCloudParams& ec = s.ecs[j];
    out << "ec " << j + 1 << '\n';
    out << "max_servers " << ec.max_servers << '\n';
    out << "p_idle " << format_double(ec.p_idle) << '\n';
    out << "p_peak " << format_double(ec.p_peak) << '\n';
    out << "pue " << format_double(ec.pue) << '\n';
    out << "batt_cap_max " << format_double(ec.batt_cap_max) << '\n';
    out << "batt_cap_min " << format_double(ec.batt_cap_min) << '\n';
    out << "batt_init " << format_double(ec.batt_init) << '\n';
    out << "charge_max " << format_double(ec.charge_max) << '\n';
    out << "discharge_max " << format_double(ec.discharge_max) << '\n';
    out << "emission_factor " << format_double(ec.emission_factor) << '\n';
    out << "carbon_tax " << format_double(ec.carbon_tax) << '\n';
    out << "price ";
    write_row(out, ec.price.data(), s.num_periods);
    out << "grid_cap ";
    write_row(out, ec.grid_cap.data(), s.num_periods);
    out << "renewable ";
    write_row(out, ec.renewable.data(), s.num_periods);
  }
  out << "end\n";
}

namespace {

class ScenarioParser {
 public:
  explicit ScenarioParser(std::istream& in) : reader_(in) {}

  Scenario parse() {
    expect_header();
    Scenario s;
    bool done = false;
    int next_ec = 0;

    std::vector<std::string> tok;
    while (!done && reader_.next(tok)) {
      const std::string& key = tok[0];
      if (key == "end") {
        done = true;
      } else if (key == "num_areas") {
        s.num_areas = static_cast<int>(scalar_int(tok));
      } else if (key == "num_ecs") {
        s.num_ecs = static_cast<int>(scalar_int(tok));
      } else if (key == "num_periods") {
        s.num_periods = static_cast<int>(scalar_int(tok));
      } else if (key == "period_length_hours") {
        s.period_length_hours = scalar(tok);
      } else if (key == "resource_per_request") {
        s.resource_per_request = scalar(tok);
      } else if (key == "service_rate") {
        s.service_rate = scalar(tok);
      } else if (key == "max_delay_ms") {
        s.max_delay_ms = scalar(tok);
      } else if (key == "max_utilization") {
        s.max_utilization = scalar(tok);
      } else if (key == "sellback_ratio") {
        s.sellback_ratio = scalar(tok);
      } else if (key == "charge_efficiency") {
        s.charge_efficiency = scalar(tok);
      } else if (key == "unmet_penalty") {
        require_dims(s);
        s.unmet_penalty = values(tok, 1, s.num_areas);
      } else if (key == "demand") {
        require_dims(s);
        s.demand = matrix(s.num_areas, s.num_periods, "demand");
      } else if (key == "delay") {
        require_dims(s);
        s.delay_ms = matrix(s.num_areas, s.num_ecs, "delay");
      } else if (key == "ec") {
        require_dims(s);
        const int j = static_cast<int>(scalar_int(tok));
        if (j != next_ec + 1) {
          throw ParseError(reader_.where() + ": expected 'ec " +
                           std::to_string(next_ec + 1) + "', got 'ec " +
                           std::to_string(j) + "'");
        }
        s.ecs.push_back(parse_ec(s.num_periods));
        ++next_ec;
      } else {
        throw ParseError(reader_.where() + ": unknown key '" + key + "'");
      }
    }
    if (!done) throw ParseError("unexpected end of file, missing 'end'");
    s.validate();
    return s;
  }

 private:
  void expect_header() {
    std::vector<std::string> tok;
    if (!reader_.next(tok) || tok.size() != 2 || tok[0] != "scenario" || tok[1] != "v1") {
      throw ParseError(reader_.where() + ": expected header 'scenario v1'");
    }
  }

  void require_dims(const Scenario& s) const {
    if (s.num_areas < 1 || s.num_ecs < 1 || s.num_periods < 1) {
      throw ParseError(reader_.where() +
                       ": num_areas, num_ecs and num_periods must come first");
    }
  }

  double scalar(const std::vector<std::string>& tok) {
    if (tok.size() != 2) {
      throw ParseError(reader_.where() + ": '" + tok[0] + "' takes exactly one value");
    }
    return parse_double(tok[1], reader_.where());
  }

  long long scalar_int(const std::vector<std::string>& tok) {
    if (tok.size() != 2) {
      throw ParseError(reader_.where() + ": '" + tok[0] + "' takes exactly one value");
    }
    return parse_int(tok[1], reader_.where());
  }

  std::vector<double> values(const std::vector<std::string>& tok, std::size_t first,
                             int expected) {
    if (static_cast<int>(tok.size() - first) != expected) {
      throw ParseError(reader_.where() + ": '" + tok[0] + "' expects " +
                       std::to_string(expected) + " values");
    }
    std::vector<double> out(expected);
    for (int k = 0; k < expected; ++k) out[k] = parse_double(tok[first + k], reader_.where());
    return out;
  }

  std::vector<double> matrix(int rows, int cols, const std::string& what) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(rows) * cols);
    std::vector<std::string> tok;
    for (int r = 0; r < rows; ++r) {
      if (!reader_.next(tok)) {
        throw ParseError("unexpected end of file inside '" + what + "'");
      }
      if (static_cast<int>(tok.size()) != cols) {
        throw ParseError(reader_.where() + ": " + what + " row " + std::to_string(r + 1) +
                         " expects " + std::to_string(cols) + " values");
      }
      for (const std::string& t : tok) out.push_back(parse_double(t, reader_.where()));
    }
    return out;
  }

  EdgeCloudParams parse_ec(int periods) {
    EdgeCloudParams ec;
    std::set<std::string> seen;
    // fixed field count: 11 scalars followed by 3 period vectors
    while (seen.size() < 14) {
      std::vector<std::string> tok;
      if (!reader_.next(tok)) {
        throw ParseError("unexpected end of file inside an ec block");
      }
      const std::string& key = tok[0];
      if (!seen.insert(key).second) {
        throw ParseError(reader_.where() + ": duplicate ec field '" + key + "'");
      }
      if (key == "max_servers") {
        ec.max_servers = static_cast<int>(scalar_int(tok));
      } else if (key == "p_idle") {
        ec.p_idle = scalar(tok);
      } else if (key == "p_peak") {
        ec.p_peak = scalar(tok);
      } else if (key == "pue") {
        ec.pue = scalar(tok);
      } else if (key == "batt_cap_max") {
        ec.batt_cap_max = scalar(tok);
      } else if (key == "batt_cap_min") {
        ec.batt_cap_min = scalar(tok);
      } else if (key == "batt_init") {
        ec.batt_init = scalar(tok);
      } else if (key == "charge_max") {
        ec.charge_max = scalar(tok);
      } else if (key == "discharge_max") {
        ec.discharge_max = scalar(tok);
      } else if (key == "emission_factor") {
        ec.emission_factor = scalar(tok);
      } else if (key == "carbon_tax") {
        ec.carbon_tax = scalar(tok);
      } else if (key == "price") {
        ec.price = values(tok, 1, periods);
      } else if (key == "grid_cap") {
        ec.grid_cap = values(tok, 1, periods);
      } else if (key == "renewable") {
        ec.renewable = values(tok, 1, periods);
      } else {
        throw ParseError(reader_.where() + ": unknown ec field '" + key + "'");
      }
    }
    return ec;
  }

  LineReader reader_;
};

}  // namespace

Scenario read_scenario(std::istream& in) { return ScenarioParser(in).parse(); }

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  try {
    return read_scenario(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scenario file '" + path + "'");
  write_scenario(s, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace ecd
