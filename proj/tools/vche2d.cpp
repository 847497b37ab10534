// Command-line runner for the experiment catalog and snapshot inspection.
//
//   vche2d run <experiment> [--config FILE] [--key=value ...] [--out DIR]
//   vche2d snapshot-dump FILE
//
// `run` prints the report body to stdout and, with --out, also writes
// <experiment>-report.txt, <experiment>-series.csv, and the experiment's
// final field snapshot into the directory. The exit status is 0 when every
// verdict row passes, 1 when any fails, and 2 on usage or configuration
// errors. Remaining --key=value arguments override config-file entries.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "vche/config.hpp"
#include "vche/experiments.hpp"
#include "vche/report.hpp"
#include "vche/snapshot.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Filtered-vorticity decay experiments"};
  app.require_subcommand(1);

  std::string experiment;
  std::string config_path;
  std::string out_dir;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("experiment", experiment, "experiment name")->required();
  run->add_option("--config", config_path, "flat key = value config file");
  run->add_option("--out", out_dir, "directory for report, CSV, snapshot");
  run->allow_extras();

  std::string snap_path;
  CLI::App* dump =
      app.add_subcommand("snapshot-dump", "print a snapshot header");
  dump->add_option("file", snap_path, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (dump->parsed()) {
      std::cout << vche::describe_snapshot(vche::read_snapshot(snap_path));
      return 0;
    }

    vche::ConfigMap config;
    if (!config_path.empty()) config = vche::load_config_file(config_path);
    for (const std::string& extra : run->remaining()) {
      vche::apply_override(config, extra);
    }
    if (!out_dir.empty()) config.set("out_dir", out_dir);

    vche::DecayReport report = vche::run_experiment(experiment, config);
    std::cout << vche::render_report(report);
    if (!out_dir.empty()) vche::write_report_files(report, out_dir);
    return vche::all_passed(report) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
