#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "warplab/warp.hpp"

namespace warplab {

/// Resolved run configuration. Defaults here are the documented defaults;
/// a config file and then command-line flags override them in that order.
struct RunConfig {
  std::string warp = "theorem-b";
  int k = 4;
  double integrator_tol = 1e-10;
  double quadrature_tol = 1e-10;
  double distance_tol = 1e-9;
  double r_max = 1000.0;
  double grid_resolution = 0.05;
  double r_step = 0.1;       // curvature-scan grid step
  double r_stop = 100.0;     // curvature-scan grid end
  double margin = 1e-12;     // positivity margin
  long l = 1;
  long l_max = 8;
  std::vector<double> T_list = {10.0, 100.0, 1000.0};
  double T_max = 1000.0;
  double eps = 16.0;
  double trace_length = 50.0;
  unsigned long seed = 12345;
  int parallel = 0;          // 0 = hardware concurrency
  bool no_timestamp = false;
  std::string out = "-";     // "-" = stdout

  void validate() const;
  int effective_parallel() const;
  WarpFamily family() const { return WarpFamily::parse(warp); }

  /// Canonical key/value echo embedded in every output artifact.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses a plain-text `key = value` file ('#' starts a comment). Unknown
/// keys, type mismatches and out-of-range values are rejected.
RunConfig load_config(const std::filesystem::path& path,
                      RunConfig base = RunConfig{});

/// Applies one key/value pair with full validation (shared by file parsing
/// and flag overrides).
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

}  // namespace warplab
