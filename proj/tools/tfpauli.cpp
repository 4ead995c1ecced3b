// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

// tfpauli run <config> | plot <records> --columns a,b --out <csv> |
// validate <config>

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfpauli/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tfpauli: Thomas-Fermi and magnetic trace experiments"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run an experiment configuration");
  run->add_option("config", run_config, "Configuration file")->required();

  std::string records, out_csv;
  std::vector<std::string> columns;
  auto* plot = app.add_subcommand("plot", "Write selected record columns as CSV");
  plot->add_option("records", records, "JSON-lines records file")->required();
  plot->add_option("--columns", columns, "Comma-separated column names")
      ->required()
      ->delimiter(',');
  plot->add_option("--out", out_csv, "Output CSV path")->required();

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a configuration file");
  validate->add_option("config", validate_config, "Configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tfpauli::kExitConfig;
  }

  if (*run) return tfpauli::run_experiment(run_config, std::cerr);
  if (*plot) return tfpauli::emit_plot_data(records, columns, out_csv, std::cerr);
  return tfpauli::validate_config(validate_config, std::cout);
}
