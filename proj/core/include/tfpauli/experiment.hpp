// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfpauli/errors.hpp"
#include "tfpauli/field_minimizer.hpp"
#include "tfpauli/potentials.hpp"

namespace tfpauli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

/// Malformed configuration; `line` is 1-based, 0 when no line applies.
class ConfigError : public InputError {
 public:
  ConfigError(int line, const std::string& what)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + what
                            : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parsed `key = value` configuration. Keys are dotted (`grid.n`); blank
/// lines and lines starting with '#' are ignored.
struct ExperimentConfig {
  std::string experiment;  // tf-constant | weyl-sweep | field-min |
                           // hydrogen-check | bound-sweep
  std::string output_path;
  std::uint64_t seed = 1;

  double grid_extent = 1.0;
  int grid_n = 32;

  std::optional<PotentialSpec> potential;
  std::vector<double> h_list;

  EnergyConfig energy;  // h is taken from h_list
  std::optional<double> coupling_z;
  double coupling_kappa = 1.0;

  MinimizeOptions minimize;
  double start_amplitude = 0.05;  // field-min and bound-sweep starts
  int start_max_mode = 2;

  std::vector<double> hydrogen_c{1.0, 2.0};
  double hydrogen_radius = 20.0;
  int hydrogen_samples = 10;  // random fields per charge, plus A = 0
  double hydrogen_amplitude = 1.0;
  int hydrogen_max_mode = 3;

  double tf_tolerance = 1e-8;
  bool wall_clock = false;

  /// Warnings that do not stop a run.
  std::vector<std::string> warnings;
};

const std::vector<std::string>& experiment_names();

/// Throws ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 of the bytes, as 16 hex digits.
std::string config_hash(const std::string& bytes);

/// Worker count: TFPAULI_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
int worker_count();

/// Runs the configured experiment and writes one JSON line per unit of
/// work. The output path is resolved against the config file's directory.
/// Returns an ExitCode; diagnostics go to `log`.
int run_experiment(const std::string& config_path, std::ostream& log);

/// Parses and checks a config; prints a summary to `log`.
int validate_config(const std::string& config_path, std::ostream& log);

/// CSV of the requested columns, one row per record, ordered by experiment
/// and then by descending h when every record carries h.
int emit_plot_data(const std::string& records_path,
                   const std::vector<std::string>& columns,
                   const std::string& out_path, std::ostream& log);

}  // namespace tfpauli
