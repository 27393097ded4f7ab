#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "biot/bench/scenario.hpp"

namespace biot::app {

/// A validated run description. `scenario.grid` follows `schemes`.
struct RunConfig {
  std::string source;
  bench::Scenario scenario;
  double T = 0.0;
  int N = 0;
  std::string schemes;
  std::filesystem::path output_dir = "output";
  std::vector<double> snapshots;
};

/// Parses an INI-style file. Every problem found is reported in one
/// ConfigError whose issues name the offending field as section.key.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>");

/// Per-slab schemes from `dg0`, `dg1`, `cg1`, `scheme1` or a whitespace list of
/// labels with optional repeat counts (`dg1*1 cg1*499`). Throws ConfigError.
std::vector<TimeScheme> parse_schemes(const std::string& spec, int N);

/// Replaces the time discretization of `cfg`.
void set_schemes(RunConfig& cfg, const std::string& spec);

}  // namespace biot::app
