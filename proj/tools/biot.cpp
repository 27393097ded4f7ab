#include <CLI11.hpp>
#include <iostream>

#include "biot/app/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static poroelasticity with space-time finite elements"};
  app.require_subcommand(1);

  biot::app::RunOptions run_opt;
  std::string scheme, out_dir;
  auto* run = app.add_subcommand("run", "March a configuration file");
  run->add_option("config", run_opt.config, "INI configuration")->required();
  run->add_option("--scheme", scheme, "dg0, dg1, cg1, scheme1 or a per-slab list");
  run->add_option("--output-dir", out_dir, "Output directory (overrides the config)");
  run->add_flag("--force", run_opt.force, "Overwrite existing output files");
  run->add_flag("--no-timing", run_opt.no_timing, "Omit wall-clock data for byte-reproducible output");

  biot::app::BenchOptions bench_opt;
  std::string bench_dir;
  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* terz = bench->add_subcommand("terzaghi", "Four-scheme consolidation benchmark");
  terz->add_flag("--paper-order", bench_opt.paper_order, "2d section with Q2/RT1/Q1 elements");
  terz->add_option("--output-dir", bench_dir, "Output directory");
  terz->add_flag("--force", bench_opt.force, "Overwrite existing output files");

  bool full = false;
  auto* verify = app.add_subcommand("verify", "Run the self-check suite");
  verify->add_flag("--full", full, "Include the manufactured-solution convergence study");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : biot::app::kConfig;
  }

  if (*run) {
    if (!scheme.empty()) run_opt.scheme = scheme;
    if (!out_dir.empty()) run_opt.output_dir = out_dir;
    return biot::app::run(run_opt, std::cout, std::cerr);
  }
  if (*terz) {
    if (!bench_dir.empty()) bench_opt.output_dir = bench_dir;
    return biot::app::bench_terzaghi(bench_opt, std::cout, std::cerr);
  }
  return biot::app::verify(full, std::cout);
}
