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

#ifndef UAVSCHED_COMMON_HPP
#define UAVSCHED_COMMON_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uavsched {

using Vec2 = Eigen::Vector2d;

enum class ErrorKind {
  Argument,    // caller misuse of the API
  Io,          // file missing / unreadable / unwritable
  Parse,       // malformed scenario or bundle file
  Validation,  // well-formed input violating a model invariant
  Infeasible,  // no schedule/trajectory satisfies the demands
  Solver,      // numerical failure inside an optimizer
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

/// xoshiro256++ generator seeded through splitmix64.
///
/// Substreams derived with substream(key) are decorrelated for distinct
/// keys, so per-(sensor, slot) simulation streams stay reproducible no
/// matter how work is scheduled across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 mantissa bits.
  double next_double();

  /// One pair of independent standard normals (Box-Muller). Always
  /// consumes exactly two uniforms, keeping streams alignment-stable.
  void next_normal_pair(double& z0, double& z1);

  /// Independent generator for (this seed, key).
  Rng substream(std::uint64_t key) const;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
};

/// Shortest round-trip decimal form of x (locale-independent).
std::string format_double(double x);

/// Locale-independent strict double parse; throws Error(Parse) on junk.
double parse_double(const std::string& text);

}  // namespace uavsched

#endif  // UAVSCHED_COMMON_HPP
