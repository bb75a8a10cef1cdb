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

#ifndef UAVSCHED_BUNDLE_HPP
#define UAVSCHED_BUNDLE_HPP

#include <string>

#include "uavsched/bcd.hpp"

namespace uavsched {

/// Solution bundle layout inside a run directory:
///   scenario.toml    instance snapshot (self-contained for verification)
///   trajectory.csv   slot,x_m,y_m
///   schedule.csv     slot,sensor,fraction,blocks
///   blocks.csv       slot,sensor,blocks,rate_bpshz (designed tx rates)
///   summary.json     theta, per-sensor stats, iteration counts, options
///   trace.json       convergence traces and wall times
///   iterates.csv     (optional) outer,iter,slot,x_m,y_m per SCA iterate
///   schedule.lp      (optional) final LP instance in LP text format
/// All numeric output is full-precision and locale-independent; summary
/// timings live under the isolated "timing" key so the rest of the file is
/// byte-reproducible for a fixed scenario, options and seed.
void write_bundle(const Scenario& s, const Solution& sol,
                  const std::string& dir);

struct Bundle {
  Scenario scenario;
  Trajectory trajectory;
  Eigen::MatrixXd schedule;
  Eigen::MatrixXi blocks;
  Eigen::MatrixXd rates;  // designed per-slot transmission rates
};

Bundle load_bundle(const std::string& dir);

std::string summary_json(const Scenario& s, const Solution& sol);
std::string trace_json(const Solution& sol);

}  // namespace uavsched

#endif  // UAVSCHED_BUNDLE_HPP
