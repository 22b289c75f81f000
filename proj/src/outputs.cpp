#include "msnet/outputs.hpp"

#include "msnet/error.hpp"
#include "msnet/network_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace msnet {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_diagnostics_csv(std::ostream& os, const std::vector<Diagnostics>& history, int num_phases) {
  os << "t,energy,dirichlet_energy";
  for (int p = 0; p < num_phases; ++p) os << ",area_" << p + 1;
  os << ",vdelta,solver_iters,fp_iters\n";
  for (const auto& d : history) {
    os << fmt(d.t) << "," << fmt(d.energy) << "," << fmt(d.dirichlet_energy);
    for (int p = 0; p < num_phases; ++p) {
      double a = 0.0;
      for (std::size_t k = 0; k < d.phase_ids.size(); ++k)
        if (d.phase_ids[k] == p) a = d.areas[k];
      os << "," << fmt(a);
    }
    os << "," << fmt(d.vdelta) << "," << d.solver_iters << "," << d.fp_iters << "\n";
  }
}

void write_diagnostics_csv_file(const std::string& path, const std::vector<Diagnostics>& history, int num_phases) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IOError, "cannot write " + path);
  write_diagnostics_csv(f, history, num_phases);
  if (!f) throw Error(ErrorKind::IOError, "write failed for " + path);
}

std::string write_snapshot(const std::string& dir, int step, const CurveNetwork& network) {
  const std::string path = (std::filesystem::path(dir) / ("snap_" + std::to_string(step) + ".txt")).string();
  write_network_file(path, network);
  return path;
}

void write_surgery_log(const std::string& path, const std::vector<SurgeryEvent>& events) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IOError, "cannot write " + path);
  f << "t,curve,area,from_phase,to_phase,phase_removed\n";
  for (const auto& e : events)
    f << fmt(e.time) << "," << e.curve_id << "," << fmt(e.area) << "," << e.from_phase_id + 1 << ","
      << e.to_phase_id + 1 << "," << (e.phase_dropped ? 1 : 0) << "\n";
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error(ErrorKind::IOError, "cannot create directory " + dir);
}

}  // namespace msnet
