#include "msnet/network_io.hpp"

#include "msnet/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace msnet {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct LineReader {
  std::istream& is;
  int line = 0;

  // Next non-blank line that is not a comment.
  std::istringstream next(const char* what) {
    std::string s;
    while (std::getline(is, s)) {
      ++line;
      const auto p = s.find_first_not_of(" \t\r");
      if (p == std::string::npos || s[p] == '#') continue;
      return std::istringstream(s);
    }
    fail(std::string("unexpected end of file, expected ") + what);
  }

  bool peek_more(std::string& out) {
    std::string s;
    while (std::getline(is, s)) {
      ++line;
      const auto p = s.find_first_not_of(" \t\r");
      if (p == std::string::npos || s[p] == '#') continue;
      out = s;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
  }
};

void expect(LineReader& r, std::istringstream& ss, const char* word) {
  std::string w;
  if (!(ss >> w) || w != word) r.fail(std::string("expected '") + word + "'");
}

}  // namespace

void write_network(std::ostream& os, const CurveNetwork& net) {
  const auto& topo = net.topology;
  os << "curves " << net.num_curves() << " phases " << topo.num_phases() << " junctions " << topo.num_junctions()
     << "\n";
  for (const auto& c : net.curves) {
    os << "curve " << c.id << " closed " << (c.closed ? 1 : 0) << " n " << c.num_vertices() << "\n";
    for (const auto& v : c.vertices) os << fmt(v.x()) << " " << fmt(v.y()) << "\n";
  }
  for (int p = 0; p < topo.num_phases(); ++p) {
    for (int i = 0; i < topo.num_curves(); ++i) os << (i ? " " : "") << topo.orientation(p, i);
    os << "\n";
  }
  for (const auto& j : topo.junctions) {
    os << "junction";
    for (int a = 0; a < 3; ++a) os << " " << j.curves[a] + 1 << " " << j.ends[a];
    os << "\n";
  }
  os << "sigma";
  for (double s : net.sigma) os << " " << fmt(s);
  os << "\n";
}

void write_network_file(const std::string& path, const CurveNetwork& network) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IOError, "cannot write " + path);
  write_network(f, network);
  if (!f) throw Error(ErrorKind::IOError, "write failed for " + path);
}

CurveNetwork read_network(std::istream& is) {
  LineReader r{is};
  auto head = r.next("header");
  int ic = 0, ip = 0, it = 0;
  expect(r, head, "curves");
  if (!(head >> ic)) r.fail("bad curve count");
  expect(r, head, "phases");
  if (!(head >> ip)) r.fail("bad phase count");
  expect(r, head, "junctions");
  if (!(head >> it)) r.fail("bad junction count");
  if (ic < 1 || ip < 2 || it < 0) r.fail("counts out of range");

  std::vector<Curve> curves(ic);
  for (int i = 0; i < ic; ++i) {
    auto ss = r.next("curve block");
    int id = 0, closed = 0, n = 0;
    expect(r, ss, "curve");
    if (!(ss >> id)) r.fail("bad curve id");
    expect(r, ss, "closed");
    if (!(ss >> closed) || (closed != 0 && closed != 1)) r.fail("closed flag must be 0 or 1");
    expect(r, ss, "n");
    if (!(ss >> n) || n < 2) r.fail("bad vertex count");
    curves[i].id = id;
    curves[i].closed = closed == 1;
    curves[i].vertices.resize(n);
    for (int k = 0; k < n; ++k) {
      auto vs = r.next("vertex");
      double x, y;
      if (!(vs >> x >> y)) r.fail("bad vertex coordinates");
      curves[i].vertices[k] = Vec2(x, y);
    }
  }
  PhaseTopology topo;
  topo.orientation.resize(ip, ic);
  for (int p = 0; p < ip; ++p) {
    auto ss = r.next("orientation row");
    for (int i = 0; i < ic; ++i)
      if (!(ss >> topo.orientation(p, i))) r.fail("short orientation row");
  }
  for (int k = 0; k < it; ++k) {
    auto ss = r.next("junction");
    expect(r, ss, "junction");
    JunctionSpec j;
    for (int a = 0; a < 3; ++a) {
      if (!(ss >> j.curves[a] >> j.ends[a])) r.fail("bad junction line");
      j.curves[a] -= 1;
    }
    topo.junctions.push_back(j);
  }
  std::vector<double> sigma(ic, 1.0);
  std::string rest;
  if (r.peek_more(rest)) {
    std::istringstream ss(rest);
    expect(r, ss, "sigma");
    for (int i = 0; i < ic; ++i)
      if (!(ss >> sigma[i])) r.fail("short sigma line");
  }
  return build_network(std::move(curves), std::move(topo), std::move(sigma));
}

CurveNetwork read_network_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::IOError, "cannot open " + path);
  return read_network(f);
}

}  // namespace msnet
