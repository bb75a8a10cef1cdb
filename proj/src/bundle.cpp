// Copyright 2026 The uavsched Authors
//
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

#include "uavsched/bundle.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace uavsched {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path,
                                               const std::string& header) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != header) {
    fail(ErrorKind::Parse,
         path.string() + ": expected header '" + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

long csv_long(const std::string& field, const fs::path& path) {
  const double v = parse_double(field);
  const double r = std::nearbyint(v);
  if (v != r) fail(ErrorKind::Parse, path.string() + ": expected an integer");
  return static_cast<long>(r);
}

}  // namespace

std::string summary_json(const Scenario& s, const Solution& sol) {
  nlohmann::json j;
  j["schema"] = "uavsched.summary/1";
  j["scheme"] = sol.scheme;
  j["theta_j"] = sol.theta;
  j["iterations"] = sol.trace.iterations;
  j["converged"] = sol.trace.converged;
  j["kappa"] = sol.kappa;
  j["seed"] = sol.seed;
  j["num_sensors"] = s.num_sensors();
  j["num_slots"] = s.num_slots();
  j["blocks_per_slot"] = s.mission.blocks_per_slot;
  j["sensors"] = nlohmann::json::array();
  for (size_t k = 0; k < sol.sensors.size(); ++k) {
    const SensorStats& st = sol.sensors[k];
    nlohmann::json sj;
    sj["sensor"] = k + 1;
    sj["energy_j"] = st.energy_j;
    sj["throughput_bpshz"] = st.throughput;
    sj["demand_ratio"] = st.demand_ratio;
    sj["rounded_ratio"] = st.rounded_ratio;
    sj["nominal_bits"] = st.nominal_bits;
    j["sensors"].push_back(sj);
  }
  // wall-clock data is isolated here; everything else is reproducible
  nlohmann::json timing;
  timing["lp_seconds"] = sol.trace.lp_seconds;
  timing["sca_seconds"] = sol.trace.sca_seconds;
  timing["total_seconds"] =
      std::accumulate(sol.trace.lp_seconds.begin(), sol.trace.lp_seconds.end(), 0.0) +
      std::accumulate(sol.trace.sca_seconds.begin(), sol.trace.sca_seconds.end(), 0.0);
  j["timing"] = timing;
  return j.dump(2) + "\n";
}

std::string trace_json(const Solution& sol) {
  nlohmann::json j;
  j["schema"] = "uavsched.trace/1";
  j["theta"] = sol.trace.theta;
  j["eta"] = sol.trace.eta;
  j["converged"] = sol.trace.converged;
  j["iterations"] = sol.trace.iterations;
  j["sca"] = nlohmann::json::array();
  for (const ScaTrace& t : sol.trace.sca) {
    nlohmann::json tj;
    tj["eta_lb"] = t.eta_lb;
    tj["eta_exact"] = t.eta_exact;
    tj["iterations"] = t.iterations;
    tj["converged"] = t.converged;
    j["sca"].push_back(tj);
  }
  nlohmann::json timing;
  timing["lp_seconds"] = sol.trace.lp_seconds;
  timing["sca_seconds"] = sol.trace.sca_seconds;
  j["timing"] = timing;
  return j.dump(2) + "\n";
}

void write_bundle(const Scenario& s, const Solution& sol,
                  const std::string& dir) {
  const int kcount = s.num_sensors();
  const int slots = s.num_slots();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create directory " + dir);
  const fs::path base(dir);

  write_file(base / "scenario.toml", serialize_scenario(s));

  {
    std::ostringstream o;
    o << "slot,x_m,y_m\n";
    for (int m = 0; m < slots; ++m) {
      o << m + 1 << "," << format_double(sol.trajectory[m].x()) << ","
        << format_double(sol.trajectory[m].y()) << "\n";
    }
    write_file(base / "trajectory.csv", o.str());
  }
  {
    std::ostringstream o;
    o << "slot,sensor,fraction,blocks\n";
    for (int m = 0; m < slots; ++m) {
      for (int k = 0; k < kcount; ++k) {
        o << m + 1 << "," << k + 1 << "," << format_double(sol.schedule(k, m))
          << "," << sol.blocks(k, m) << "\n";
      }
    }
    write_file(base / "schedule.csv", o.str());
  }
  {
    std::ostringstream o;
    o << "slot,sensor,blocks,rate_bpshz\n";
    for (int m = 0; m < slots; ++m) {
      for (int k = 0; k < kcount; ++k) {
        o << m + 1 << "," << k + 1 << "," << sol.blocks(k, m) << ","
          << format_double(sol.rates(k, m)) << "\n";
      }
    }
    write_file(base / "blocks.csv", o.str());
  }
  write_file(base / "summary.json", summary_json(s, sol));
  write_file(base / "trace.json", trace_json(sol));
  if (!sol.lp_text.empty()) {
    write_file(base / "schedule.lp", sol.lp_text);
  }
  if (!sol.sca_iterates.empty()) {
    std::ostringstream o;
    o << "iterate,slot,x_m,y_m\n";
    for (size_t i = 0; i < sol.sca_iterates.size(); ++i) {
      const Trajectory& q = sol.sca_iterates[i];
      for (int m = 0; m < q.num_points(); ++m) {
        o << i + 1 << "," << m + 1 << "," << format_double(q[m].x()) << ","
          << format_double(q[m].y()) << "\n";
      }
    }
    write_file(base / "iterates.csv", o.str());
  }
}

Bundle load_bundle(const std::string& dir) {
  const fs::path base(dir);
  if (!fs::exists(base / "scenario.toml")) {
    fail(ErrorKind::Io, dir + " does not contain a solution bundle");
  }
  Bundle b;
  b.scenario = parse_scenario(read_file(base / "scenario.toml"));
  const int kcount = b.scenario.num_sensors();
  const int slots = b.scenario.num_slots();

  {
    const auto rows = read_csv(base / "trajectory.csv", "slot,x_m,y_m");
    if (static_cast<int>(rows.size()) != slots) {
      fail(ErrorKind::Parse, "trajectory.csv: expected " +
                                 std::to_string(slots) + " rows");
    }
    b.trajectory.points.resize(static_cast<size_t>(slots));
    for (const auto& r : rows) {
      if (r.size() != 3) fail(ErrorKind::Parse, "trajectory.csv: bad row");
      const long m = csv_long(r[0], base / "trajectory.csv");
      if (m < 1 || m > slots) {
        fail(ErrorKind::Parse, "trajectory.csv: slot out of range");
      }
      b.trajectory[static_cast<int>(m - 1)] =
          Vec2(parse_double(r[1]), parse_double(r[2]));
    }
  }
  {
    const auto rows =
        read_csv(base / "schedule.csv", "slot,sensor,fraction,blocks");
    b.schedule = Eigen::MatrixXd::Zero(kcount, slots);
    for (const auto& r : rows) {
      if (r.size() != 4) fail(ErrorKind::Parse, "schedule.csv: bad row");
      const long m = csv_long(r[0], base / "schedule.csv");
      const long k = csv_long(r[1], base / "schedule.csv");
      if (m < 1 || m > slots || k < 1 || k > kcount) {
        fail(ErrorKind::Parse, "schedule.csv: index out of range");
      }
      b.schedule(static_cast<int>(k - 1), static_cast<int>(m - 1)) =
          parse_double(r[2]);
    }
  }
  {
    const auto rows =
        read_csv(base / "blocks.csv", "slot,sensor,blocks,rate_bpshz");
    b.blocks = Eigen::MatrixXi::Zero(kcount, slots);
    b.rates = Eigen::MatrixXd::Zero(kcount, slots);
    for (const auto& r : rows) {
      if (r.size() != 4) fail(ErrorKind::Parse, "blocks.csv: bad row");
      const long m = csv_long(r[0], base / "blocks.csv");
      const long k = csv_long(r[1], base / "blocks.csv");
      if (m < 1 || m > slots || k < 1 || k > kcount) {
        fail(ErrorKind::Parse, "blocks.csv: index out of range");
      }
      b.blocks(static_cast<int>(k - 1), static_cast<int>(m - 1)) =
          static_cast<int>(csv_long(r[2], base / "blocks.csv"));
      b.rates(static_cast<int>(k - 1), static_cast<int>(m - 1)) =
          parse_double(r[3]);
    }
  }
  return b;
}

}  // namespace uavsched
