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

#include "uavsched/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace uavsched {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// ---------------------------------------------------------------------------
// Scenario file parsing. The format is a strict TOML subset: '#' comments,
// [section] headers, [[sensors]] table arrays, and `key = value` lines where
// a value is a number or a flat numeric array. Parsing is byte-deterministic
// (std::from_chars only, no locale).
// ---------------------------------------------------------------------------

struct ParsedValue {
  std::vector<double> nums;  // single numbers are length-1 arrays
  bool is_array = false;
  int line = 0;
};

using Table = std::map<std::string, ParsedValue>;

struct ParsedFile {
  std::map<std::string, Table> sections;
  std::vector<Table> sensors;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  fail(ErrorKind::Parse, "scenario line " + std::to_string(line) + ": " + msg);
}

ParsedValue parse_value(const std::string& raw, int line) {
  ParsedValue v;
  v.line = line;
  std::string t = trim(raw);
  if (t.empty()) parse_fail(line, "missing value");
  if (t.front() == '[') {
    if (t.back() != ']') parse_fail(line, "unterminated array");
    v.is_array = true;
    std::string body = t.substr(1, t.size() - 2);
    std::string item;
    std::istringstream ss(body);
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) parse_fail(line, "empty array element");
      v.nums.push_back(parse_double(item));
    }
    if (v.nums.empty()) parse_fail(line, "empty array");
  } else {
    v.nums.push_back(parse_double(t));
  }
  return v;
}

ParsedFile parse_file(const std::string& text) {
  ParsedFile out;
  Table* current = nullptr;
  std::string current_name;
  std::istringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string t = trim(raw);
    if (t.empty()) continue;
    if (t.rfind("[[", 0) == 0) {
      if (t.size() < 4 || t.substr(t.size() - 2) != "]]")
        parse_fail(line, "malformed table-array header");
      std::string name = trim(t.substr(2, t.size() - 4));
      if (name != "sensors")
        parse_fail(line, "unknown table array '" + name + "'");
      out.sensors.emplace_back();
      current = &out.sensors.back();
      current_name = "sensors";
      continue;
    }
    if (t.front() == '[') {
      if (t.back() != ']') parse_fail(line, "malformed section header");
      std::string name = trim(t.substr(1, t.size() - 2));
      if (name != "mission" && name != "channel" && name != "solver")
        parse_fail(line, "unknown section '" + name + "'");
      if (out.sections.count(name))
        parse_fail(line, "duplicate section '" + name + "'");
      current = &out.sections[name];
      current_name = name;
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos) parse_fail(line, "expected 'key = value'");
    if (current == nullptr)
      parse_fail(line, "key outside of any section");
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) parse_fail(line, "empty key");
    if (current->count(key))
      parse_fail(line, "duplicate key '" + key + "' in [" + current_name + "]");
    (*current)[key] = parse_value(t.substr(eq + 1), line);
  }
  return out;
}

class TableReader {
 public:
  TableReader(const Table& t, std::string where) : t_(t), where_(std::move(where)) {}

  double number(const std::string& key) {
    const ParsedValue& v = find(key);
    if (v.is_array) parse_fail(v.line, where_ + "." + key + ": expected a scalar");
    return v.nums[0];
  }
  double number_or(const std::string& key, double fallback) {
    if (!t_.count(key)) return fallback;
    return number(key);
  }
  long integer(const std::string& key) {
    double d = number(key);
    double r = std::nearbyint(d);
    if (std::abs(d - r) > 0.0)
      fail(ErrorKind::Parse, where_ + "." + key + ": expected an integer");
    return static_cast<long>(r);
  }
  long integer_or(const std::string& key, long fallback) {
    if (!t_.count(key)) return fallback;
    return integer(key);
  }
  Vec2 point(const std::string& key) {
    const ParsedValue& v = find(key);
    if (!v.is_array || v.nums.size() != 2)
      parse_fail(v.line, where_ + "." + key + ": expected [x, y]");
    return Vec2(v.nums[0], v.nums[1]);
  }
  void check_consumed() const {
    for (const auto& [key, v] : t_) {
      if (!consumed_.count(key))
        parse_fail(v.line, where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const ParsedValue& find(const std::string& key) {
    auto it = t_.find(key);
    if (it == t_.end())
      fail(ErrorKind::Parse, where_ + ": missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
  }
  const Table& t_;
  std::string where_;
  std::set<std::string> consumed_;
};

}  // namespace

DerivedConstants derived_constants(const Scenario& s) {
  DerivedConstants d;
  d.d_max = s.slot_displacement();
  for (int k = 0; k < s.num_sensors(); ++k) {
    d.slot_energy_j.push_back(s.slot_energy(k));
    d.rate_demand.push_back(s.rate_demand(k));
  }
  return d;
}

void validate_scenario(const Scenario& s, std::vector<std::string>* warnings) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::Validation, what);
  };
  require(!s.sensors.empty(), "at least one sensor required (K >= 1)");
  for (size_t k = 0; k < s.sensors.size(); ++k) {
    const Sensor& u = s.sensors[k];
    const std::string id = "sensor " + std::to_string(k + 1);
    require(std::isfinite(u.position.x()) && std::isfinite(u.position.y()),
            id + ": position must be finite");
    require(u.data_bits > 0.0, id + ": data_bits must be positive");
    require(u.tx_power_w > 0.0, id + ": power_w must be positive");
  }

  const Mission& m = s.mission;
  require(m.altitude_m > 0.0, "mission.H must be positive");
  require(m.v_max_mps > 0.0, "mission.v_max must be positive");
  require(m.horizon_s > 0.0, "mission.T must be positive");
  require(m.slot_len_s > 0.0, "mission.dt must be positive");
  require(m.blocks_per_slot >= 1, "mission.L must be at least 1");
  require(m.num_slots >= 2, "mission: at least 2 slots required (M >= 2)");
  require(std::abs(m.horizon_s - m.num_slots * m.slot_len_s) <=
              1e-9 * m.horizon_s,
          "mission: T must be an integer multiple of dt");
  const double reach = (m.q_end - m.q_start).norm();
  require(reach <= m.v_max_mps * m.horizon_s,
          "endpoint reachability: ||qF - q0|| = " + format_double(reach) +
              " m exceeds v_max*T = " +
              format_double(m.v_max_mps * m.horizon_s) + " m");
  if (warnings && m.v_max_mps * m.slot_len_s > 0.2 * m.altitude_m) {
    warnings->push_back(
        "per-slot displacement v_max*dt = " +
        format_double(m.v_max_mps * m.slot_len_s) +
        " m is not small against altitude H = " + format_double(m.altitude_m) +
        " m; the per-slot quasi-static approximation may be poor");
  }

  const ChannelParams& c = s.channel;
  require(c.beta0 > 0.0, "channel.beta0 must be positive");
  require(c.noise_power_w > 0.0, "channel.noise power must be positive");
  require(c.snr_gap >= 1.0, "channel.gamma must be >= 1 (>= 0 dB)");
  require(c.path_loss_exp >= 2.0, "channel.alpha must be >= 2");
  require(c.rician_k >= 0.0, "channel.rician_k must be >= 0");
  require(c.outage_eps > 0.0 && c.outage_eps < 1.0,
          "channel.epsilon must lie in (0, 1)");
  require(c.bandwidth_hz > 0.0, "channel.bandwidth_hz must be positive");

  require(s.solver.kappa > 0.0, "solver.kappa must be positive");
  require(s.solver.max_outer >= 1, "solver.max_outer must be at least 1");
  require(s.solver.max_sca >= 1, "solver.max_sca must be at least 1");
}

Scenario parse_scenario(const std::string& text,
                        std::vector<std::string>* warnings) {
  ParsedFile f = parse_file(text);
  Scenario s;

  if (!f.sections.count("mission"))
    fail(ErrorKind::Parse, "scenario: missing [mission] section");
  if (!f.sections.count("channel"))
    fail(ErrorKind::Parse, "scenario: missing [channel] section");
  if (f.sensors.empty())
    fail(ErrorKind::Parse, "scenario: no [[sensors]] entries");

  {
    TableReader r(f.sections["mission"], "mission");
    s.mission.altitude_m = r.number("H");
    s.mission.v_max_mps = r.number("v_max");
    s.mission.horizon_s = r.number("T");
    s.mission.slot_len_s = r.number("dt");
    s.mission.q_start = r.point("q0");
    s.mission.q_end = r.point("qF");
    s.mission.blocks_per_slot = static_cast<int>(r.integer_or("L", 100));
    r.check_consumed();
    if (s.mission.slot_len_s <= 0.0)
      fail(ErrorKind::Validation, "mission.dt must be positive");
    s.mission.num_slots = static_cast<int>(
        std::llround(s.mission.horizon_s / s.mission.slot_len_s));
  }
  {
    TableReader r(f.sections["channel"], "channel");
    s.channel.beta0_db = r.number("beta0_db");
    s.channel.noise_dbm = r.number("noise_dbm");
    s.channel.gamma_db = r.number("gamma_db");
    s.channel.path_loss_exp = r.number("alpha");
    s.channel.rician_k = r.number("rician_k");
    s.channel.outage_eps = r.number("epsilon");
    s.channel.bandwidth_hz = r.number("bandwidth_hz");
    r.check_consumed();
    // the only dB -> linear conversion in the pipeline
    s.channel.beta0 = db_to_linear(s.channel.beta0_db);
    s.channel.noise_power_w = dbm_to_watts(s.channel.noise_dbm);
    s.channel.snr_gap = db_to_linear(s.channel.gamma_db);
  }
  if (f.sections.count("solver")) {
    TableReader r(f.sections["solver"], "solver");
    s.solver.kappa = r.number_or("kappa", 1e-4);
    s.solver.seed = static_cast<std::uint64_t>(r.integer_or("seed", 1));
    s.solver.max_outer = static_cast<int>(r.integer_or("max_outer", 50));
    s.solver.max_sca = static_cast<int>(r.integer_or("max_sca", 100));
    r.check_consumed();
  }
  for (size_t i = 0; i < f.sensors.size(); ++i) {
    TableReader r(f.sensors[i], "sensors[" + std::to_string(i + 1) + "]");
    Sensor u;
    u.position = Vec2(r.number("x"), r.number("y"));
    u.data_bits = r.number("data_bits");
    u.tx_power_w = r.number("power_w");
    r.check_consumed();
    s.sensors.push_back(u);
  }

  validate_scenario(s, warnings);
  return s;
}

Scenario load_scenario(const std::string& path,
                       std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), warnings);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  auto num = [](double v) { return format_double(v); };
  o << "[mission]\n";
  o << "H = " << num(s.mission.altitude_m) << "\n";
  o << "v_max = " << num(s.mission.v_max_mps) << "\n";
  o << "T = " << num(s.mission.horizon_s) << "\n";
  o << "dt = " << num(s.mission.slot_len_s) << "\n";
  o << "q0 = [" << num(s.mission.q_start.x()) << ", "
    << num(s.mission.q_start.y()) << "]\n";
  o << "qF = [" << num(s.mission.q_end.x()) << ", " << num(s.mission.q_end.y())
    << "]\n";
  o << "L = " << s.mission.blocks_per_slot << "\n";
  o << "\n[channel]\n";
  o << "beta0_db = " << num(s.channel.beta0_db) << "\n";
  o << "noise_dbm = " << num(s.channel.noise_dbm) << "\n";
  o << "gamma_db = " << num(s.channel.gamma_db) << "\n";
  o << "alpha = " << num(s.channel.path_loss_exp) << "\n";
  o << "rician_k = " << num(s.channel.rician_k) << "\n";
  o << "epsilon = " << num(s.channel.outage_eps) << "\n";
  o << "bandwidth_hz = " << num(s.channel.bandwidth_hz) << "\n";
  o << "\n[solver]\n";
  o << "kappa = " << num(s.solver.kappa) << "\n";
  o << "seed = " << s.solver.seed << "\n";
  o << "max_outer = " << s.solver.max_outer << "\n";
  o << "max_sca = " << s.solver.max_sca << "\n";
  for (const Sensor& u : s.sensors) {
    o << "\n[[sensors]]\n";
    o << "x = " << num(u.position.x()) << "\n";
    o << "y = " << num(u.position.y()) << "\n";
    o << "data_bits = " << num(u.data_bits) << "\n";
    o << "power_w = " << num(u.tx_power_w) << "\n";
  }
  return o.str();
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write scenario file: " + path);
  out << serialize_scenario(s);
  if (!out) fail(ErrorKind::Io, "write failed: " + path);
}

Scenario with_data_bits(const Scenario& s, double bits) {
  Scenario out = s;
  for (Sensor& u : out.sensors) u.data_bits = bits;
  validate_scenario(out);
  return out;
}

Scenario with_outage_eps(const Scenario& s, double eps) {
  Scenario out = s;
  out.channel.outage_eps = eps;
  validate_scenario(out);
  return out;
}

Scenario with_horizon(const Scenario& s, double horizon_s) {
  Scenario out = s;
  out.mission.horizon_s = horizon_s;
  out.mission.num_slots =
      static_cast<int>(std::llround(horizon_s / out.mission.slot_len_s));
  validate_scenario(out);
  return out;
}

Scenario random_scenario(const Scenario& templ, int num_sensors,
                         double box_min, double box_max, std::uint64_t seed) {
  if (num_sensors < 1) fail(ErrorKind::Argument, "num_sensors must be >= 1");
  if (!(box_max > box_min)) fail(ErrorKind::Argument, "empty placement box");
  Scenario out = templ;
  Sensor proto = templ.sensors.empty() ? Sensor{Vec2(0, 0), 1e7, 0.1}
                                       : templ.sensors.front();
  Rng rng(seed);
  out.sensors.clear();
  for (int k = 0; k < num_sensors; ++k) {
    Sensor u = proto;
    u.position.x() = box_min + (box_max - box_min) * rng.next_double();
    u.position.y() = box_min + (box_max - box_min) * rng.next_double();
    out.sensors.push_back(u);
  }
  validate_scenario(out);
  return out;
}

}  // namespace uavsched
