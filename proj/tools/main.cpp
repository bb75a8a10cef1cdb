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

// Command-line front end. Talks to the solver exclusively through the
// C API in uavsched.h.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "uavsched.h"

namespace {

// process exit codes, one per failure class
enum ExitCode {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitParse = 4,
  kExitValidation = 5,
  kExitInfeasible = 6,
  kExitSolver = 7,
};

int exit_code_for(uavs_status st) {
  switch (st) {
    case UAVS_OK: return kExitOk;
    case UAVS_ERR_ARGUMENT: return kExitUsage;
    case UAVS_ERR_IO: return kExitIo;
    case UAVS_ERR_PARSE: return kExitParse;
    case UAVS_ERR_VALIDATION: return kExitValidation;
    case UAVS_ERR_INFEASIBLE: return kExitInfeasible;
    case UAVS_ERR_SOLVER: return kExitSolver;
  }
  return kExitSolver;
}

[[noreturn]] void die(uavs_status st, const std::string& context) {
  std::cerr << "error (" << uavs_status_name(st) << "): " << context;
  const char* detail = uavs_last_error();
  if (detail && detail[0] != '\0') std::cerr << ": " << detail;
  std::cerr << "\n";
  std::exit(exit_code_for(st));
}

struct ScenarioHandle {
  uavs_scenario* ptr = nullptr;
  ~ScenarioHandle() { uavs_scenario_free(ptr); }
};

struct SolutionHandle {
  uavs_solution* ptr = nullptr;
  ~SolutionHandle() { uavs_solution_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { uavs_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

void load_scenario_or_die(const std::string& path, ScenarioHandle& out) {
  const uavs_status st = uavs_scenario_load(path.c_str(), &out.ptr);
  if (st != UAVS_OK) die(st, "loading scenario '" + path + "'");
  OwnedString warnings;
  if (uavs_scenario_warnings(out.ptr, &warnings.ptr) == UAVS_OK &&
      warnings.ptr && warnings.ptr[0] != '\0') {
    std::cerr << "warning: " << warnings.str();
  }
}

struct CommonFlags {
  double kappa = 0.0;
  std::uint64_t seed = 0;
  int max_outer = 0;
  int max_sca = 0;
  bool dump_lp = false;
  bool dump_iterates = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kappa", kappa,
                    "fractional-improvement stopping tolerance");
    cmd->add_option("--seed", seed, "seed recorded into artifacts");
    cmd->add_option("--max-outer", max_outer,
                    "cap on schedule/trajectory alternations");
    cmd->add_option("--max-sca", max_sca, "cap on inner trajectory passes");
    cmd->add_flag("--dump-lp", dump_lp,
                  "write the final schedule LP in LP text format");
    cmd->add_flag("--dump-iterates", dump_iterates,
                  "write every inner trajectory iterate (iterates.csv)");
  }

  uavs_options options() const {
    uavs_options opt;
    uavs_options_init(&opt);
    opt.kappa = kappa;
    opt.seed = seed;
    opt.max_outer = max_outer;
    opt.max_sca = max_sca;
    opt.dump_lp = dump_lp ? 1 : 0;
    opt.keep_iterates = dump_iterates ? 1 : 0;
    return opt;
  }
};

// "S=2e6:2e6:2e7" (start:step:stop) or "eps=1e-4,1e-3,1e-2"
bool parse_sweep(const std::string& spec, std::string& var,
                 std::vector<double>& grid) {
  const size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  var = spec.substr(0, eq);
  if (var != "S" && var != "eps" && var != "T") return false;
  const std::string body = spec.substr(eq + 1);
  if (body.empty()) return false;
  try {
    if (body.find(':') != std::string::npos) {
      double vals[3];
      size_t pos = 0;
      for (int i = 0; i < 3; ++i) {
        const size_t colon = body.find(':', pos);
        const bool last = i == 2;
        if (last != (colon == std::string::npos)) return false;
        const std::string tok =
            body.substr(pos, last ? std::string::npos : colon - pos);
        vals[i] = std::stod(tok);
        pos = colon + 1;
      }
      const double start = vals[0], step = vals[1], stop = vals[2];
      if (step <= 0.0 || stop < start) return false;
      for (double v = start; v <= stop * (1.0 + 1e-12); v += step) {
        grid.push_back(v);
      }
    } else {
      size_t pos = 0;
      while (pos != std::string::npos) {
        const size_t comma = body.find(',', pos);
        const std::string tok =
            body.substr(pos, comma == std::string::npos ? std::string::npos
                                                        : comma - pos);
        grid.push_back(std::stod(tok));
        pos = comma == std::string::npos ? comma : comma + 1;
      }
    }
  } catch (const std::exception&) {
    return false;
  }
  return !grid.empty();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(UAVS_ERR_IO, "cannot write '" + path + "'");
  out << text;
  if (!out) die(UAVS_ERR_IO, "write failed for '" + path + "'");
}

int cmd_solve(const std::string& scenario_path, const std::string& out_dir,
              const std::string& scheme_str, const CommonFlags& flags) {
  ScenarioHandle scenario;
  load_scenario_or_die(scenario_path, scenario);

  uavs_scheme scheme = UAVS_SCHEME_OPTIMIZED;
  if (scheme_str == "straight") scheme = UAVS_SCHEME_STRAIGHT;
  if (scheme_str == "static") scheme = UAVS_SCHEME_STATIC;

  const uavs_options opt = flags.options();
  SolutionHandle sol;
  uavs_status st = uavs_solve_scheme(scenario.ptr, &opt, scheme, &sol.ptr);
  if (st != UAVS_OK) die(st, "solving '" + scenario_path + "'");

  if (!out_dir.empty()) {
    st = uavs_solution_write_bundle(scenario.ptr, sol.ptr, out_dir.c_str());
    if (st != UAVS_OK) die(st, "writing bundle to '" + out_dir + "'");
  }

  std::printf("scheme      %s\n", scheme_str.c_str());
  std::printf("theta       %.17g J\n", uavs_solution_theta(sol.ptr));
  std::printf("iterations  %d (%s)\n", uavs_solution_iterations(sol.ptr),
              uavs_solution_converged(sol.ptr) ? "converged" : "cap reached");
  if (!out_dir.empty()) std::printf("artifacts   %s\n", out_dir.c_str());
  return kExitOk;
}

int cmd_compare(const std::string& scenario_path, const std::string& sweep,
                const std::string& out_dir, int workers,
                const CommonFlags& flags) {
  ScenarioHandle scenario;
  load_scenario_or_die(scenario_path, scenario);

  std::string var;
  std::vector<double> grid;
  if (!sweep.empty() && !parse_sweep(sweep, var, grid)) {
    die(UAVS_ERR_ARGUMENT,
        "bad --sweep spec '" + sweep + "' (expected S|eps|T=start:step:stop or a comma list)");
  }

  const uavs_options opt = flags.options();
  OwnedString csv;
  const uavs_status st = uavs_compare(
      scenario.ptr, &opt, var.empty() ? nullptr : var.c_str(),
      grid.empty() ? nullptr : grid.data(), grid.size(),
      out_dir.empty() ? nullptr : out_dir.c_str(), workers, &csv.ptr);
  if (st != UAVS_OK) die(st, "comparing schemes for '" + scenario_path + "'");

  std::fputs(csv.ptr, stdout);
  if (!out_dir.empty()) {
    write_text_file(out_dir + "/comparison.csv", csv.str());
  }
  return kExitOk;
}

int cmd_verify(const std::string& run_dir, std::uint64_t seed, int reps) {
  if (reps < 1) {
    die(UAVS_ERR_ARGUMENT, "--reps must be at least 1");
  }
  OwnedString report;
  int passed = 0;
  const uavs_status st =
      uavs_verify_bundle(run_dir.c_str(), seed, reps, &report.ptr, &passed);
  if (st != UAVS_OK) die(st, "verifying bundle '" + run_dir + "'");
  write_text_file(run_dir + "/verify_report.json", report.str());
  std::fputs(report.ptr, stdout);
  std::printf("verification %s\n", passed ? "PASS" : "FAIL");
  return passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "uavsched: joint sensor wake-up schedule and collector trajectory "
      "optimization"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand(
      "solve", "solve one scenario and write a solution bundle");
  std::string scenario_path, out_dir, scheme = "optimized";
  CommonFlags solve_flags;
  solve->add_option("scenario", scenario_path, "scenario file")->required();
  solve->add_option("--out", out_dir, "output directory for the bundle");
  solve->add_option("--scheme", scheme, "optimized|straight|static")
      ->check(CLI::IsMember({"optimized", "straight", "static"}));
  solve_flags.attach(solve);

  // compare
  auto* compare = app.add_subcommand(
      "compare", "run optimized/straight/static schemes, optionally sweeping");
  std::string cmp_scenario, cmp_sweep, cmp_out;
  int cmp_workers = 0;
  CommonFlags cmp_flags;
  compare->add_option("scenario", cmp_scenario, "scenario file")->required();
  compare->add_option("--sweep", cmp_sweep,
                      "sweep spec: S|eps|T=start:step:stop or value list");
  compare->add_option("--out", cmp_out, "directory for CSV + per-point bundles");
  compare->add_option("--workers", cmp_workers, "worker pool size (0 = auto)");
  cmp_flags.attach(compare);

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Monte-Carlo check of a stored solution bundle");
  std::string run_dir;
  std::uint64_t verify_seed = 1;
  int verify_reps = 1;
  verify->add_option("run_dir", run_dir, "bundle directory")->required();
  verify->add_option("--seed", verify_seed, "simulation seed");
  verify->add_option("--reps", verify_reps,
                     "mission repetitions (scales the sampled block count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (solve->parsed()) {
    return cmd_solve(scenario_path, out_dir, scheme, solve_flags);
  }
  if (compare->parsed()) {
    return cmd_compare(cmp_scenario, cmp_sweep, cmp_out, cmp_workers, cmp_flags);
  }
  if (verify->parsed()) {
    return cmd_verify(run_dir, verify_seed, verify_reps);
  }
  return kExitUsage;
}
