#pragma once

#include "msnet/curve_network.hpp"
#include "msnet/evolution.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace msnet {

/// Columns t, energy, dirichlet_energy, area_1..area_<num_phases>, vdelta,
/// solver_iters, fp_iters. Areas are keyed by phase label; removed phases
/// report 0.
void write_diagnostics_csv(std::ostream& os, const std::vector<Diagnostics>& history, int num_phases);
void write_diagnostics_csv_file(const std::string& path, const std::vector<Diagnostics>& history, int num_phases);

/// Writes <dir>/snap_<step>.txt.
std::string write_snapshot(const std::string& dir, int step, const CurveNetwork& network);

void write_surgery_log(const std::string& path, const std::vector<SurgeryEvent>& events);

/// Creates the directory (and parents). Throws IOError.
void ensure_directory(const std::string& dir);

}  // namespace msnet
