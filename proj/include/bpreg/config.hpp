#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bpreg/solver.hpp"
#include "bpreg/types.hpp"

namespace bpreg {

/// Flat key=value run configuration shared by the CLI commands. Unknown keys
/// are rejected so a typo never silently falls back to a default.
struct Config {
  PenaltySpec penalty;
  BasisKind basis = BasisKind::Identity;
  SolveOptions solve;

  // generation
  int n_cases = 8;
  int n_covariates = 2;
  double t_max = 1.0;
  int n_times = 11;
  std::uint64_t seed = 1;
  int n_paths = 1000;
  double noise_scale = 1.0;
  double u0 = 0.0;
  std::vector<double> beta_start;  // defaults to all ones
  std::vector<double> beta_end;    // defaults to beta_start (constant path)

  /// Resolved true coefficient path (linear in time between the endpoints).
  CoefPath true_path() const;

  /// Applies one key=value assignment; throws ConfigError on unknown keys or
  /// unparseable values.
  void set(const std::string& key, const std::string& value);

  static Config from_file(const std::string& path);
  static Config defaults() { return Config{}; }
};

}  // namespace bpreg
