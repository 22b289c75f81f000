#pragma once

#include "msnet/block_solver.hpp"
#include "msnet/evolution.hpp"
#include "msnet/presets.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace msnet {

/// Run configuration, read from "key = value" lines ('#' starts a comment).
struct Config {
  std::string scenario = "concentric";  // preset name, or "file"
  std::string network_file;             // used when scenario = file
  double H = 4.0;
  int N_c = 1;
  int N_f = 128;
  int vertices = 128;
  std::vector<double> sigma;            // empty: preset default
  double tau = 6.4e-2;
  double T = 0.5;
  std::string scheme = "conservative";
  double solver_tol = 1e-10;
  int solver_max_iter = 2000;
  std::string solver_precond = "lu";
  double fp_tol = 0.0;                  // 0: 1e-10 * H
  int fp_max = 100;
  std::string output_dir = "msnet_out";
  int snapshot_every = 0;               // 0: initial and final only
  bool coupling_lumped = false;
  double disk_radius = -1.0;
  double surgery_threshold = -1.0;      // negative: automatic, 0: off

  bool operator==(const Config&) const = default;
};

/// Throws ParseError (with line number) or ValidationError.
Config parse_config(std::istream& is);
Config parse_config_file(const std::string& path);
Config parse_config_string(const std::string& text);

/// Throws ValidationError.
void validate_config(const Config& cfg);

/// Every key, one per line; parse_config(write_config(c)) == c.
std::string write_config(const Config& cfg);

/// Network for the config's scenario.
CurveNetwork build_scenario(const Config& cfg);

RunOptions run_options(const Config& cfg);

}  // namespace msnet
