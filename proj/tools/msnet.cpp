// msnet: run, converge and validate front-tracking Mullins-Sekerka networks.
#include "msnet/bulk_mesh.hpp"
#include "msnet/config.hpp"
#include "msnet/convergence.hpp"
#include "msnet/error.hpp"
#include "msnet/interface_coupling.hpp"
#include "msnet/network_io.hpp"
#include "msnet/outputs.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

namespace {

using namespace msnet;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::IOError: return 3;
    case ErrorKind::NoConvergence:
    case ErrorKind::EnergyIncrease:
    case ErrorKind::FixedPointStall:
    case ErrorKind::WalkFailure:
    case ErrorKind::StaleCuts:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NetworkOutsideDomain:
    case ErrorKind::OutsideDomain:
    case ErrorKind::NoBracket:
    case ErrorKind::TopologyMismatch:
    case ErrorKind::UnsupportedSurgery: return 2;
    default: return 1;
  }
}

std::vector<int> parse_levels(const std::string& s) {
  static const std::regex range(R"(^\s*(\d)\s*\.\.\s*(\d)\s*$)");
  std::smatch m;
  std::vector<int> out;
  if (std::regex_match(s, m, range)) {
    const int a = std::stoi(m[1]), b = std::stoi(m[2]);
    if (a > b) throw Error(ErrorKind::ValidationError, "empty level range " + s);
    for (int i = a; i <= b; ++i) out.push_back(i);
  } else {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw Error(ErrorKind::ValidationError, "bad level list '" + s + "'");
      }
    }
  }
  for (int l : out)
    if (l < 0 || l > 4) throw Error(ErrorKind::ValidationError, "levels must lie in 0..4");
  return out;
}

int cmd_run(const std::string& path) {
  const Config cfg = parse_config_file(path);
  const CurveNetwork net = build_scenario(cfg);
  ensure_directory(cfg.output_dir);
  const std::string dir = cfg.output_dir;
  write_snapshot(dir, 0, net);
  int last_written = 0;
  const RunResult res = run(net, run_options(cfg), [&](int step, const SchemeState& s) {
    if (cfg.snapshot_every > 0 && step > 0 && step % cfg.snapshot_every == 0) {
      write_snapshot(dir, step, s.network);
      last_written = step;
    }
  });
  const int steps = static_cast<int>(res.history.size()) - 1;
  if (steps > 0 && last_written != steps) write_snapshot(dir, steps, res.final_state.network);
  write_diagnostics_csv_file(dir + "/diagnostics.csv", res.history, net.topology.num_phases());
  write_surgery_log(dir + "/surgery.log", res.events);
  const auto& d = res.history.back();
  std::printf("t=%.6g steps=%d energy=%.10g vdelta=%.3e energy_violations=%d fp_stalls=%d surgeries=%zu\n", d.t,
              steps, d.energy, res.max_vdelta, res.energy_violations, res.fp_stalls, res.events.size());
  return 0;
}

int cmd_converge(const std::string& path, const std::string& levels) {
  const Config cfg = parse_config_file(path);
  const auto ls = parse_levels(levels);
  const ConvergenceTable t = run_convergence(cfg, ls, &std::cerr);
  ensure_directory(cfg.output_dir);
  const std::string out = cfg.output_dir + "/convergence.csv";
  std::ofstream os(out);
  if (!os) throw Error(ErrorKind::IOError, "cannot write " + out);
  write_convergence_csv(os, t);
  write_convergence_csv(std::cout, t);
  if (!os) throw Error(ErrorKind::IOError, "write failed: " + out);
  return 0;
}

int cmd_validate(const std::string& path) {
  const CurveNetwork net = read_network_file(path);
  validate_geometry(net);
  double H = 4.0;
  for (const auto& c : net.curves)
    for (const auto& v : c.vertices) H = std::max(H, 1.01 * v.lpNorm<Eigen::Infinity>());
  const BulkMesh mesh = BulkMesh::adaptive(net, H, 1, 128);
  const CutSegmentList cuts = clip_curves_to_mesh(mesh, net);
  const auto normals = vertex_normals(net);
  const auto coupling = assemble_coupling(mesh, net, cuts, normals, false);
  const auto rep = check_wellposedness(net, normals, coupling);
  std::printf("curves=%d phases=%d junctions=%d vertices=%d external_phase=%d\n", net.num_curves(),
              net.topology.num_phases(), static_cast<int>(net.topology.junctions.size()), net.total_vertices(),
              net.topology.external_phase + 1);
  std::printf("%s\n", rep.summary().c_str());
  if (!rep.ok()) {
    std::fprintf(stderr, "error: network fails the well-posedness check\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"msnet: multi-phase Mullins-Sekerka flow of curve networks"};
  app.require_subcommand(1);
  std::string config, levels = "0..2", network;
  auto* run = app.add_subcommand("run", "evolve the configured scenario");
  run->add_option("config", config, "config file")->required();
  auto* conv = app.add_subcommand("converge", "concentric-circle convergence table");
  conv->add_option("config", config, "config file")->required();
  conv->add_option("--levels", levels, "range a..b or comma list, within 0..4");
  auto* val = app.add_subcommand("validate", "check a network file");
  val->add_option("network", network, "network file")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    if (*run) return cmd_run(config);
    if (*conv) return cmd_converge(config, levels);
    return cmd_validate(network);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
