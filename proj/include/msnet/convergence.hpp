#pragma once

#include "msnet/config.hpp"

#include <iosfwd>
#include <vector>

namespace msnet {

struct ConvergenceRow {
  int level = 0;
  double h_f = 0.0;
  double h_gamma = 0.0;         // max curve edge length at the final time
  double potential_error = 0.0; // max over steps
  double curve_error = 0.0;     // max over steps
  int K = 0;                    // bulk nodes of the last mesh
  int N = 0;                    // curve vertices
  double vdelta = 0.0;          // max over steps, absolute
  double vdelta_rel = 0.0;      // max over steps, relative, bounded phases
  int steps = 0;
  int energy_violations = 0;
  int fp_stalls = 0;
  bool mesh_audit_ok = true;
  double wall_time = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<double> eoc_curve;     // between consecutive rows
  std::vector<double> eoc_potential;
};

/// Level i: N_f = 2^(7+i), N_c = 4^i, tau = 4^(3-i) 1e-3, 2^(7+i) vertices
/// per circle. Scheme, H, T and solver settings come from `base`.
Config level_config(const Config& base, int level);

ConvergenceRow run_level(const Config& base, int level);

ConvergenceTable run_convergence(const Config& base, const std::vector<int>& levels, std::ostream* progress = nullptr);

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);

}  // namespace msnet
