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

#include "uavsched.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "uavsched/baselines.hpp"
#include "uavsched/bcd.hpp"
#include "uavsched/bundle.hpp"
#include "uavsched/mc_verify.hpp"
#include "uavsched/scenario.hpp"

struct uavs_scenario {
  uavsched::Scenario s;
  std::vector<std::string> warnings;
};

struct uavs_solution {
  uavsched::Solution sol;
};

namespace {

thread_local std::string g_last_error;

uavs_status map_kind(uavsched::ErrorKind kind) {
  using uavsched::ErrorKind;
  switch (kind) {
    case ErrorKind::Argument: return UAVS_ERR_ARGUMENT;
    case ErrorKind::Io: return UAVS_ERR_IO;
    case ErrorKind::Parse: return UAVS_ERR_PARSE;
    case ErrorKind::Validation: return UAVS_ERR_VALIDATION;
    case ErrorKind::Infeasible: return UAVS_ERR_INFEASIBLE;
    case ErrorKind::Solver: return UAVS_ERR_SOLVER;
  }
  return UAVS_ERR_SOLVER;
}

template <typename Fn>
uavs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return UAVS_OK;
  } catch (const uavsched::Error& e) {
    g_last_error = e.what();
    return map_kind(e.kind());
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return UAVS_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return UAVS_ERR_SOLVER;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UAVS_ERR_SOLVER;
  }
}

uavs_status arg_error(const char* msg) {
  g_last_error = msg;
  return UAVS_ERR_ARGUMENT;
}

char* dup_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

uavsched::SolveOptions to_options(const uavs_options* opt) {
  uavsched::SolveOptions o;
  if (opt) {
    o.kappa = opt->kappa;
    o.max_outer = opt->max_outer;
    o.max_sca = opt->max_sca;
    o.seed = opt->seed;
    o.dump_lp = opt->dump_lp != 0;
    o.keep_iterates = opt->keep_iterates != 0;
  }
  return o;
}

}  // namespace

extern "C" {

void uavs_options_init(uavs_options* opt) {
  if (!opt) return;
  opt->kappa = 0.0;
  opt->max_outer = 0;
  opt->max_sca = 0;
  opt->seed = 0;
  opt->dump_lp = 0;
  opt->keep_iterates = 0;
}

const char* uavs_status_name(uavs_status status) {
  switch (status) {
    case UAVS_OK: return "ok";
    case UAVS_ERR_ARGUMENT: return "argument";
    case UAVS_ERR_IO: return "io";
    case UAVS_ERR_PARSE: return "parse";
    case UAVS_ERR_VALIDATION: return "validation";
    case UAVS_ERR_INFEASIBLE: return "infeasible";
    case UAVS_ERR_SOLVER: return "solver";
  }
  return "unknown";
}

const char* uavs_last_error(void) { return g_last_error.c_str(); }

void uavs_string_free(char* text) { delete[] text; }

uavs_status uavs_scenario_load(const char* path, uavs_scenario** out) {
  if (!path || !out) return arg_error("uavs_scenario_load: null argument");
  return guarded([&]() {
    auto handle = std::make_unique<uavs_scenario>();
    handle->s = uavsched::load_scenario(path, &handle->warnings);
    *out = handle.release();
  });
}

uavs_status uavs_scenario_parse(const char* text, uavs_scenario** out) {
  if (!text || !out) return arg_error("uavs_scenario_parse: null argument");
  return guarded([&]() {
    auto handle = std::make_unique<uavs_scenario>();
    handle->s = uavsched::parse_scenario(text, &handle->warnings);
    *out = handle.release();
  });
}

uavs_status uavs_scenario_save(const uavs_scenario* s, const char* path) {
  if (!s || !path) return arg_error("uavs_scenario_save: null argument");
  return guarded([&]() { uavsched::save_scenario(s->s, path); });
}

void uavs_scenario_free(uavs_scenario* s) { delete s; }

int uavs_scenario_num_sensors(const uavs_scenario* s) {
  return s ? s->s.num_sensors() : 0;
}

int uavs_scenario_num_slots(const uavs_scenario* s) {
  return s ? s->s.num_slots() : 0;
}

int uavs_scenario_blocks_per_slot(const uavs_scenario* s) {
  return s ? s->s.mission.blocks_per_slot : 0;
}

uavs_status uavs_scenario_warnings(const uavs_scenario* s, char** out) {
  if (!s || !out) return arg_error("uavs_scenario_warnings: null argument");
  std::string joined;
  for (const std::string& w : s->warnings) {
    joined += w;
    joined += '\n';
  }
  *out = dup_string(joined);
  return UAVS_OK;
}

uavs_status uavs_scenario_with_data_bits(const uavs_scenario* s, double bits,
                                         uavs_scenario** out) {
  if (!s || !out) return arg_error("uavs_scenario_with_data_bits: null argument");
  return guarded([&]() {
    auto handle = std::make_unique<uavs_scenario>();
    handle->s = uavsched::with_data_bits(s->s, bits);
    *out = handle.release();
  });
}

uavs_status uavs_scenario_with_outage_eps(const uavs_scenario* s, double eps,
                                          uavs_scenario** out) {
  if (!s || !out) return arg_error("uavs_scenario_with_outage_eps: null argument");
  return guarded([&]() {
    auto handle = std::make_unique<uavs_scenario>();
    handle->s = uavsched::with_outage_eps(s->s, eps);
    *out = handle.release();
  });
}

uavs_status uavs_scenario_with_horizon(const uavs_scenario* s,
                                       double horizon_s,
                                       uavs_scenario** out) {
  if (!s || !out) return arg_error("uavs_scenario_with_horizon: null argument");
  return guarded([&]() {
    auto handle = std::make_unique<uavs_scenario>();
    handle->s = uavsched::with_horizon(s->s, horizon_s);
    *out = handle.release();
  });
}

uavs_status uavs_solve(const uavs_scenario* s, const uavs_options* opt,
                       uavs_solution** out) {
  return uavs_solve_scheme(s, opt, UAVS_SCHEME_OPTIMIZED, out);
}

uavs_status uavs_solve_scheme(const uavs_scenario* s, const uavs_options* opt,
                              uavs_scheme scheme, uavs_solution** out) {
  if (!s || !out) return arg_error("uavs_solve: null argument");
  uavsched::Scheme sch;
  switch (scheme) {
    case UAVS_SCHEME_OPTIMIZED: sch = uavsched::Scheme::Optimized; break;
    case UAVS_SCHEME_STRAIGHT: sch = uavsched::Scheme::Straight; break;
    case UAVS_SCHEME_STATIC: sch = uavsched::Scheme::Static; break;
    default: return arg_error("uavs_solve: unknown scheme");
  }
  return guarded([&]() {
    auto handle = std::make_unique<uavs_solution>();
    handle->sol = uavsched::solve_scheme(s->s, sch, to_options(opt));
    *out = handle.release();
  });
}

void uavs_solution_free(uavs_solution* sol) { delete sol; }

double uavs_solution_theta(const uavs_solution* sol) {
  return sol ? sol->sol.theta : 0.0;
}

int uavs_solution_iterations(const uavs_solution* sol) {
  return sol ? sol->sol.trace.iterations : 0;
}

int uavs_solution_converged(const uavs_solution* sol) {
  return sol && sol->sol.trace.converged ? 1 : 0;
}

uavs_status uavs_solution_trajectory(const uavs_solution* sol, double* xy,
                                     size_t len) {
  if (!sol || !xy) return arg_error("uavs_solution_trajectory: null argument");
  const size_t need =
      2 * static_cast<size_t>(sol->sol.trajectory.num_points());
  if (len < need) return arg_error("uavs_solution_trajectory: buffer too small");
  for (int m = 0; m < sol->sol.trajectory.num_points(); ++m) {
    xy[2 * static_cast<size_t>(m)] = sol->sol.trajectory[m].x();
    xy[2 * static_cast<size_t>(m) + 1] = sol->sol.trajectory[m].y();
  }
  return UAVS_OK;
}

uavs_status uavs_solution_schedule(const uavs_solution* sol, double* fractions,
                                   size_t len) {
  if (!sol || !fractions) return arg_error("uavs_solution_schedule: null argument");
  const auto& x = sol->sol.schedule;
  const size_t need = static_cast<size_t>(x.rows()) * static_cast<size_t>(x.cols());
  if (len < need) return arg_error("uavs_solution_schedule: buffer too small");
  for (int k = 0; k < x.rows(); ++k) {
    for (int m = 0; m < x.cols(); ++m) {
      fractions[static_cast<size_t>(k) * static_cast<size_t>(x.cols()) +
                static_cast<size_t>(m)] = x(k, m);
    }
  }
  return UAVS_OK;
}

uavs_status uavs_solution_blocks(const uavs_solution* sol, int32_t* blocks,
                                 size_t len) {
  if (!sol || !blocks) return arg_error("uavs_solution_blocks: null argument");
  const auto& n = sol->sol.blocks;
  const size_t need = static_cast<size_t>(n.rows()) * static_cast<size_t>(n.cols());
  if (len < need) return arg_error("uavs_solution_blocks: buffer too small");
  for (int k = 0; k < n.rows(); ++k) {
    for (int m = 0; m < n.cols(); ++m) {
      blocks[static_cast<size_t>(k) * static_cast<size_t>(n.cols()) +
             static_cast<size_t>(m)] = n(k, m);
    }
  }
  return UAVS_OK;
}

uavs_status uavs_solution_summary_json(const uavs_scenario* s,
                                       const uavs_solution* sol, char** out) {
  if (!s || !sol || !out) return arg_error("uavs_solution_summary_json: null argument");
  return guarded([&]() { *out = dup_string(uavsched::summary_json(s->s, sol->sol)); });
}

uavs_status uavs_solution_trace_json(const uavs_solution* sol, char** out) {
  if (!sol || !out) return arg_error("uavs_solution_trace_json: null argument");
  return guarded([&]() { *out = dup_string(uavsched::trace_json(sol->sol)); });
}

uavs_status uavs_solution_write_bundle(const uavs_scenario* s,
                                       const uavs_solution* sol,
                                       const char* dir) {
  if (!s || !sol || !dir) return arg_error("uavs_solution_write_bundle: null argument");
  return guarded([&]() { uavsched::write_bundle(s->s, sol->sol, dir); });
}

uavs_status uavs_verify_bundle(const char* dir, uint64_t seed, int repetitions,
                               char** report, int* passed) {
  if (!dir) return arg_error("uavs_verify_bundle: null directory");
  if (repetitions < 1) return arg_error("uavs_verify_bundle: repetitions must be >= 1");
  return guarded([&]() {
    const uavsched::Bundle b = uavsched::load_bundle(dir);
    const uavsched::VerifyReport rep = uavsched::simulate_collection(
        b.scenario, b.blocks, b.trajectory, seed, repetitions, b.rates);
    if (report) *report = dup_string(uavsched::verify_report_json(rep));
    if (passed) *passed = rep.pass ? 1 : 0;
  });
}

uavs_status uavs_compare(const uavs_scenario* s, const uavs_options* opt,
                         const char* sweep_var, const double* grid,
                         size_t grid_len, const char* artifact_dir,
                         int max_workers, char** csv) {
  if (!s || !csv) return arg_error("uavs_compare: null argument");
  if (grid_len > 0 && !grid) return arg_error("uavs_compare: null grid");
  return guarded([&]() {
    uavsched::SweepSpec sweep;
    if (sweep_var && sweep_var[0] != '\0' && grid_len > 0) {
      sweep.variable = sweep_var;
      sweep.grid.assign(grid, grid + grid_len);
    }
    const uavsched::CompareResult res =
        uavsched::compare(s->s, sweep, to_options(opt),
                          artifact_dir ? artifact_dir : "", max_workers);
    *csv = dup_string(uavsched::compare_csv(res));
  });
}

}  // extern "C"
