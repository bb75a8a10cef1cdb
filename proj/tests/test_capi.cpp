#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "uavsched.h"

namespace {

const char* kSmallScenario = R"(# two-sensor test instance
[mission]
H = 100.0
v_max = 50.0
T = 15.0
dt = 0.5
q0 = [-300.0, 0.0]
qF = [300.0, 0.0]
L = 100

[channel]
beta0_db = -60.0
noise_dbm = -110.0
gamma_db = 7.0
alpha = 2.0
rician_k = 10.0
epsilon = 1e-2
bandwidth_hz = 1e6

[solver]
kappa = 1e-4
seed = 1

[[sensors]]
x = -150.0
y = 120.0
data_bits = 4e6
power_w = 0.1

[[sensors]]
x = 200.0
y = -100.0
data_bits = 4e6
power_w = 0.1
)";

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) {
    path = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string strip_timing(std::string json) {
  // drop the isolated "timing" object line block for byte comparisons
  const size_t at = json.find("\"timing\"");
  REQUIRE(at != std::string::npos);
  size_t depth = 0;
  size_t start = json.find('{', at);
  size_t end = start;
  for (size_t i = start; i < json.size(); ++i) {
    if (json[i] == '{') ++depth;
    if (json[i] == '}') {
      --depth;
      if (depth == 0) {
        end = i;
        break;
      }
    }
  }
  json.erase(at, end - at + 1);
  return json;
}

}  // namespace

TEST_CASE("status names and argument guards") {
  CHECK(std::strcmp(uavs_status_name(UAVS_OK), "ok") == 0);
  CHECK(std::strcmp(uavs_status_name(UAVS_ERR_INFEASIBLE), "infeasible") == 0);
  CHECK(uavs_scenario_load(nullptr, nullptr) == UAVS_ERR_ARGUMENT);
  uavs_scenario* out = nullptr;
  CHECK(uavs_scenario_load("/definitely/not/here.toml", &out) == UAVS_ERR_IO);
  CHECK(std::string(uavs_last_error()).find("not/here") != std::string::npos);
}

TEST_CASE("parse errors carry messages") {
  uavs_scenario* s = nullptr;
  CHECK(uavs_scenario_parse("[mission]\nH = oops\n", &s) == UAVS_ERR_PARSE);
  CHECK(std::string(uavs_last_error()).find("oops") != std::string::npos);

  // validation failures are distinct from parse failures
  std::string bad = kSmallScenario;
  const size_t at = bad.find("T = 15.0");
  bad.replace(at, 8, "T = 11.0");  // 600 m > v_max*T = 550 m
  CHECK(uavs_scenario_parse(bad.c_str(), &s) == UAVS_ERR_VALIDATION);
  CHECK(std::string(uavs_last_error()).find("reachability") != std::string::npos);
}

TEST_CASE("end-to-end solve through the C surface") {
  uavs_scenario* s = nullptr;
  REQUIRE(uavs_scenario_parse(kSmallScenario, &s) == UAVS_OK);
  CHECK(uavs_scenario_num_sensors(s) == 2);
  CHECK(uavs_scenario_num_slots(s) == 30);
  CHECK(uavs_scenario_blocks_per_slot(s) == 100);

  uavs_options opt;
  uavs_options_init(&opt);
  uavs_solution* sol = nullptr;
  REQUIRE(uavs_solve(s, &opt, &sol) == UAVS_OK);
  CHECK(uavs_solution_theta(sol) > 0.0);
  CHECK(uavs_solution_converged(sol) == 1);

  const int slots = uavs_scenario_num_slots(s);
  std::vector<double> xy(static_cast<size_t>(2 * slots));
  REQUIRE(uavs_solution_trajectory(sol, xy.data(), xy.size()) == UAVS_OK);
  CHECK(xy[0] == -300.0);
  CHECK(xy[1] == 0.0);
  CHECK(xy[static_cast<size_t>(2 * slots - 2)] == 300.0);

  std::vector<double> fractions(static_cast<size_t>(2 * slots));
  REQUIRE(uavs_solution_schedule(sol, fractions.data(), fractions.size()) == UAVS_OK);
  std::vector<int32_t> blocks(static_cast<size_t>(2 * slots));
  REQUIRE(uavs_solution_blocks(sol, blocks.data(), blocks.size()) == UAVS_OK);
  for (int m = 0; m < slots; ++m) {
    CHECK(blocks[static_cast<size_t>(m)] +
              blocks[static_cast<size_t>(slots + m)] <=
          100);
  }
  // undersized buffers are rejected
  CHECK(uavs_solution_trajectory(sol, xy.data(), 3) == UAVS_ERR_ARGUMENT);

  uavs_solution_free(sol);
  uavs_scenario_free(s);
}

TEST_CASE("straight scheme never beats the optimizer") {
  uavs_scenario* s = nullptr;
  REQUIRE(uavs_scenario_parse(kSmallScenario, &s) == UAVS_OK);
  uavs_solution* opt_sol = nullptr;
  uavs_solution* straight_sol = nullptr;
  REQUIRE(uavs_solve_scheme(s, nullptr, UAVS_SCHEME_OPTIMIZED, &opt_sol) == UAVS_OK);
  REQUIRE(uavs_solve_scheme(s, nullptr, UAVS_SCHEME_STRAIGHT, &straight_sol) == UAVS_OK);
  CHECK(uavs_solution_theta(opt_sol) <=
        uavs_solution_theta(straight_sol) + 1e-9);
  uavs_solution_free(opt_sol);
  uavs_solution_free(straight_sol);
  uavs_scenario_free(s);
}

TEST_CASE("scenario round trip preserves every field") {
  TempDir dir("uavs_capi_roundtrip");
  uavs_scenario* s = nullptr;
  REQUIRE(uavs_scenario_parse(kSmallScenario, &s) == UAVS_OK);
  const std::string path = (dir.path / "scenario.toml").string();
  REQUIRE(uavs_scenario_save(s, path.c_str()) == UAVS_OK);

  uavs_scenario* again = nullptr;
  REQUIRE(uavs_scenario_load(path.c_str(), &again) == UAVS_OK);
  const std::string path2 = (dir.path / "scenario2.toml").string();
  REQUIRE(uavs_scenario_save(again, path2.c_str()) == UAVS_OK);

  std::ifstream a(path), b(path2);
  std::string text_a((std::istreambuf_iterator<char>(a)), {});
  std::string text_b((std::istreambuf_iterator<char>(b)), {});
  CHECK(text_a == text_b);
  uavs_scenario_free(s);
  uavs_scenario_free(again);
}

TEST_CASE("bundle write, verify, and reproducible summaries") {
  TempDir dir("uavs_capi_bundle");
  uavs_scenario* s = nullptr;
  REQUIRE(uavs_scenario_parse(kSmallScenario, &s) == UAVS_OK);

  uavs_options opt;
  uavs_options_init(&opt);
  opt.seed = 77;
  opt.dump_lp = 1;
  uavs_solution* sol = nullptr;
  REQUIRE(uavs_solve(s, &opt, &sol) == UAVS_OK);

  const std::string run = (dir.path / "run").string();
  REQUIRE(uavs_solution_write_bundle(s, sol, run.c_str()) == UAVS_OK);
  for (const char* name :
       {"scenario.toml", "trajectory.csv", "schedule.csv", "blocks.csv",
        "summary.json", "trace.json", "schedule.lp"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(std::filesystem::path(run) / name));
  }

  char* report = nullptr;
  int passed = 0;
  REQUIRE(uavs_verify_bundle(run.c_str(), 5, 60, &report, &passed) == UAVS_OK);
  CHECK(passed == 1);
  CHECK(std::string(report).find("empirical_outage") != std::string::npos);
  uavs_string_free(report);

  // verification is usage-checked
  CHECK(uavs_verify_bundle(run.c_str(), 5, 0, &report, &passed) == UAVS_ERR_ARGUMENT);
  CHECK(uavs_verify_bundle((dir.path / "nope").string().c_str(), 5, 1, &report,
                           &passed) == UAVS_ERR_IO);

  // identical inputs give byte-identical summaries once timing is stripped
  uavs_solution* sol2 = nullptr;
  REQUIRE(uavs_solve(s, &opt, &sol2) == UAVS_OK);
  char* json1 = nullptr;
  char* json2 = nullptr;
  REQUIRE(uavs_solution_summary_json(s, sol, &json1) == UAVS_OK);
  REQUIRE(uavs_solution_summary_json(s, sol2, &json2) == UAVS_OK);
  CHECK(strip_timing(json1) == strip_timing(json2));
  uavs_string_free(json1);
  uavs_string_free(json2);

  char* trace = nullptr;
  REQUIRE(uavs_solution_trace_json(sol, &trace) == UAVS_OK);
  CHECK(std::string(trace).find("\"theta\"") != std::string::npos);
  uavs_string_free(trace);

  uavs_solution_free(sol);
  uavs_solution_free(sol2);
  uavs_scenario_free(s);
}

TEST_CASE("tampering with stored rates fails verification") {
  TempDir dir("uavs_capi_tamper");
  uavs_scenario* s = nullptr;
  REQUIRE(uavs_scenario_parse(kSmallScenario, &s) == UAVS_OK);
  uavs_solution* sol = nullptr;
  REQUIRE(uavs_solve(s, nullptr, &sol) == UAVS_OK);
  const std::string run = (dir.path / "run").string();
  REQUIRE(uavs_solution_write_bundle(s, sol, run.c_str()) == UAVS_OK);

  // double every stored rate in blocks.csv
  const std::string blocks_path = run + "/blocks.csv";
  std::ifstream in(blocks_path);
  std::string line, out;
  std::getline(in, line);
  out = line + "\n";
  while (std::getline(in, line)) {
    const size_t last = line.rfind(',');
    const double rate = std::stod(line.substr(last + 1));
    out += line.substr(0, last + 1) + std::to_string(2.0 * rate) + "\n";
  }
  in.close();
  std::ofstream(blocks_path, std::ios::trunc) << out;

  char* report = nullptr;
  int passed = 1;
  REQUIRE(uavs_verify_bundle(run.c_str(), 5, 40, &report, &passed) == UAVS_OK);
  CHECK(passed == 0);
  uavs_string_free(report);
  uavs_solution_free(sol);
  uavs_scenario_free(s);
}

TEST_CASE("comparison sweep through the C surface") {
  uavs_scenario* s = nullptr;
  REQUIRE(uavs_scenario_parse(kSmallScenario, &s) == UAVS_OK);
  const double grid[] = {2e6, 4e6};
  char* csv = nullptr;
  REQUIRE(uavs_compare(s, nullptr, "S", grid, 2, nullptr, 2, &csv) == UAVS_OK);
  const std::string text(csv);
  CHECK(text.find("optimized") != std::string::npos);
  CHECK(text.find("straight") != std::string::npos);
  CHECK(text.find("static") != std::string::npos);
  // header plus six rows
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  uavs_string_free(csv);

  // scenario copies for sweeps re-validate
  uavs_scenario* bad = nullptr;
  CHECK(uavs_scenario_with_outage_eps(s, 2.0, &bad) == UAVS_ERR_VALIDATION);
  uavs_scenario* good = nullptr;
  REQUIRE(uavs_scenario_with_horizon(s, 20.0, &good) == UAVS_OK);
  CHECK(uavs_scenario_num_slots(good) == 40);
  uavs_scenario_free(good);
  uavs_scenario_free(s);
}
