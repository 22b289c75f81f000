#include "msnet/config.hpp"

#include "msnet/error.hpp"
#include "msnet/network_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace msnet {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    bad(line, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) bad(line, "expected a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& v, int line) {
  std::size_t pos = 0;
  long d = 0;
  try {
    d = std::stol(v, &pos);
  } catch (const std::exception&) {
    bad(line, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) bad(line, "expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

bool to_bool(const std::string& v, int line) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  bad(line, "expected true/false, got '" + v + "'");
}

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

Config parse_config(std::istream& is) {
  Config c;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) bad(line, "expected key=value");
    const std::string k = trim(s.substr(0, eq)), v = trim(s.substr(eq + 1));
    if (k == "scenario") c.scenario = v;
    else if (k == "network_file") c.network_file = v;
    else if (k == "H") c.H = to_double(v, line);
    else if (k == "N_c") c.N_c = to_int(v, line);
    else if (k == "N_f") c.N_f = to_int(v, line);
    else if (k == "vertices") c.vertices = to_int(v, line);
    else if (k == "sigma") {
      c.sigma.clear();
      std::string item;
      std::istringstream ss(v);
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) c.sigma.push_back(to_double(item, line));
      }
    } else if (k == "tau") c.tau = to_double(v, line);
    else if (k == "T") c.T = to_double(v, line);
    else if (k == "scheme") c.scheme = v;
    else if (k == "solver.tol") c.solver_tol = to_double(v, line);
    else if (k == "solver.max_iter") c.solver_max_iter = to_int(v, line);
    else if (k == "solver.precond") c.solver_precond = v;
    else if (k == "fp_tol") c.fp_tol = to_double(v, line);
    else if (k == "fp_max") c.fp_max = to_int(v, line);
    else if (k == "output_dir") c.output_dir = v;
    else if (k == "snapshot_every") c.snapshot_every = to_int(v, line);
    else if (k == "coupling.lumped") c.coupling_lumped = to_bool(v, line);
    else if (k == "disk_radius") c.disk_radius = to_double(v, line);
    else if (k == "surgery_threshold") c.surgery_threshold = to_double(v, line);
    else bad(line, "unknown key '" + k + "'");
  }
  validate_config(c);
  return c;
}

Config parse_config_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_config(ss);
}

Config parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::IOError, "cannot open " + path);
  return parse_config(f);
}

void validate_config(const Config& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::ValidationError, m); };
  const auto& names = preset_names();
  if (c.scenario == "file") {
    if (c.network_file.empty()) fail("scenario=file needs network_file");
  } else if (std::find(names.begin(), names.end(), c.scenario) == names.end()) {
    fail("unknown scenario '" + c.scenario + "'");
  }
  if (!(c.H > 0.0)) fail("H must be positive");
  if (!power_of_two(c.N_c) || !power_of_two(c.N_f)) fail("N_c and N_f must be powers of two");
  if (c.N_c > c.N_f) fail("N_c must not exceed N_f");
  if (c.vertices < 3) fail("vertices must be at least 3");
  for (double s : c.sigma)
    if (!(s > 0.0)) fail("surface tensions must be positive");
  if (!(c.tau > 0.0)) fail("tau must be positive");
  if (!(c.T >= 0.0)) fail("T must be non-negative");
  if (c.scheme != "linear" && c.scheme != "conservative") fail("scheme must be linear or conservative");
  if (!(c.solver_tol > 0.0)) fail("solver.tol must be positive");
  if (c.solver_max_iter < 1) fail("solver.max_iter must be positive");
  if (c.solver_precond != "none" && c.solver_precond != "block_gs" && c.solver_precond != "lu")
    fail("solver.precond must be none, block_gs or lu");
  if (c.fp_tol < 0.0) fail("fp_tol must be non-negative");
  if (c.fp_max < 1) fail("fp_max must be positive");
  if (c.snapshot_every < 0) fail("snapshot_every must be non-negative");
}

std::string write_config(const Config& c) {
  std::ostringstream os;
  os << "scenario = " << c.scenario << "\n";
  if (!c.network_file.empty()) os << "network_file = " << c.network_file << "\n";
  os << "H = " << fmt(c.H) << "\n";
  os << "N_c = " << c.N_c << "\n";
  os << "N_f = " << c.N_f << "\n";
  os << "vertices = " << c.vertices << "\n";
  if (!c.sigma.empty()) {
    os << "sigma = ";
    for (std::size_t i = 0; i < c.sigma.size(); ++i) os << (i ? ", " : "") << fmt(c.sigma[i]);
    os << "\n";
  }
  os << "tau = " << fmt(c.tau) << "\n";
  os << "T = " << fmt(c.T) << "\n";
  os << "scheme = " << c.scheme << "\n";
  os << "solver.tol = " << fmt(c.solver_tol) << "\n";
  os << "solver.max_iter = " << c.solver_max_iter << "\n";
  os << "solver.precond = " << c.solver_precond << "\n";
  os << "fp_tol = " << fmt(c.fp_tol) << "\n";
  os << "fp_max = " << c.fp_max << "\n";
  os << "output_dir = " << c.output_dir << "\n";
  os << "snapshot_every = " << c.snapshot_every << "\n";
  os << "coupling.lumped = " << (c.coupling_lumped ? "true" : "false") << "\n";
  os << "disk_radius = " << fmt(c.disk_radius) << "\n";
  os << "surgery_threshold = " << fmt(c.surgery_threshold) << "\n";
  return os.str();
}

CurveNetwork build_scenario(const Config& c) {
  if (c.scenario == "file") {
    CurveNetwork net = read_network_file(c.network_file);
    if (!c.sigma.empty()) {
      if (c.sigma.size() != net.curves.size())
        throw Error(ErrorKind::ValidationError, "sigma list does not match the network");
      net = build_network(net.curves, net.topology, c.sigma);
    }
    return net;
  }
  PresetOptions p;
  p.vertices = c.vertices;
  p.sigma = c.sigma;
  p.disk_radius = c.disk_radius;
  return make_preset(c.scenario, p);
}

RunOptions run_options(const Config& c) {
  RunOptions r;
  r.tau = c.tau;
  r.T = c.T;
  r.surgery_threshold = c.surgery_threshold;
  auto& s = r.scheme;
  s.scheme = parse_scheme(c.scheme);
  s.H = c.H;
  s.N_c = c.N_c;
  s.N_f = c.N_f;
  s.lumped = c.coupling_lumped;
  s.solver.tol = c.solver_tol;
  s.solver.max_iter = c.solver_max_iter;
  s.solver.precond = parse_preconditioner(c.solver_precond);
  s.fp_tol = c.fp_tol > 0.0 ? c.fp_tol : 1e-10 * c.H;
  s.fp_max = c.fp_max;
  return r;
}

}  // namespace msnet
