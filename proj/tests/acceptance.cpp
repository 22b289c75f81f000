// Acceptance checks; one line per criterion. Criterion 8 does not gate.

#include "msnet/block_solver.hpp"
#include "msnet/bulk_mesh.hpp"
#include "msnet/concentric_oracle.hpp"
#include "msnet/config.hpp"
#include "msnet/convergence.hpp"
#include "msnet/curve_network.hpp"
#include "msnet/error.hpp"
#include "msnet/evolution.hpp"
#include "msnet/interface_coupling.hpp"
#include "msnet/presets.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace msnet;

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool ok, const std::string& detail, bool gating = true) {
  std::printf("criterion %d: %s%s  %s\n", n, ok ? "PASS" : "FAIL", gating ? "" : " (non-gating)", detail.c_str());
  std::fflush(stdout);
  if (gating && !ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within2(double v, double ref) { return v <= 2.0 * ref && v >= 0.5 * ref; }

// returns false on any exception, filling `why`
bool guarded(const std::function<void()>& f, std::string& why) {
  try {
    f();
    return true;
  } catch (const std::exception& e) {
    why = e.what();
    return false;
  }
}

void criterion1() {
  const auto t0 = Clock::now();
  const auto R = radii(ConcentricConfig{}, 0.5);
  const double dt = seconds_since(t0);
  const double ref[3] = {1.60, 2.20, 2.75};
  bool ok = dt < 1.0;
  for (int i = 0; i < 3; ++i) ok = ok && std::abs(R[i] - ref[i]) <= 0.005;
  report(1, ok, fmt("R(0.5) = (%.5f, %.5f, %.5f) in %.3fs", R[0], R[1], R[2], dt));
}

void criterion2() {
  const ConcentricConfig cfg;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-4, 4), ut(0, 1.5);
  double zero_sum = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto w = chemical_potentials(cfg, Vec2(u(rng), u(rng)), ut(rng));
    zero_sum = std::max(zero_sum, std::abs(w[0] + w[1] + w[2]));
  }
  double gt = 0.0, fd = 0.0;
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    const auto R = radii(cfg, t);
    const double a = alpha_from_radii(R);
    const auto w1 = chemical_potentials_at_radius(R, a, R[0]);
    const auto w2 = chemical_potentials_at_radius(R, a, R[1]);
    const auto w3 = chemical_potentials_at_radius(R, a, R[2]);
    gt = std::max({gt, std::abs(w1[0] - w1[1] - 1 / R[0]), std::abs(w2[2] - w2[1] + 1 / R[1]),
                   std::abs(w3[2] - w3[0] - 1 / R[2])});
    const double h = 1e-4;
    const double expect[3][3] = {{-a / R[0], a / R[0], 0.0}, {0.0, -a / R[1], a / R[1]}, {a / R[2], 0.0, -a / R[2]}};
    for (int i = 0; i < 3; ++i) {
      const auto c = chemical_potentials_at_radius(R, a, R[i]);
      const auto o1 = chemical_potentials_at_radius(R, a, R[i] + h), o2 = chemical_potentials_at_radius(R, a, R[i] + 2 * h);
      const auto i1 = chemical_potentials_at_radius(R, a, R[i] - h), i2 = chemical_potentials_at_radius(R, a, R[i] - 2 * h);
      for (int j = 0; j < 3; ++j) {
        const double dout = (-3 * c[j] + 4 * o1[j] - o2[j]) / (2 * h);
        const double din = (3 * c[j] - 4 * i1[j] + i2[j]) / (2 * h);
        fd = std::max(fd, std::abs((dout - din) - expect[i][j]));
      }
    }
  }
  report(2, zero_sum <= 1e-12 && gt <= 1e-10 && fd <= 1e-4,
         fmt("zero-sum %.1e, Gibbs-Thomson %.1e, flux jumps %.1e", zero_sum, gt, fd));
}

struct GatingRuns {
  ConvergenceTable conservative, linear;
  bool ok = true;
  std::string why;
};

GatingRuns gating_runs() {
  GatingRuns g;
  Config base;
  g.ok = guarded([&] { g.conservative = run_convergence(base, {0, 1}); }, g.why);
  base.scheme = "linear";
  if (g.ok) g.ok = guarded([&] { g.linear = run_convergence(base, {0, 1}); }, g.why);
  return g;
}

void criterion3(const GatingRuns& g) {
  if (!g.ok || g.conservative.rows.size() != 2) return report(3, false, "run failed: " + g.why);
  const auto& r = g.conservative.rows;
  const double ce[2] = {1.3628e-2, 6.7806e-3}, pe[2] = {3.8031e-2, 1.3442e-2};
  bool ok = g.conservative.eoc_curve[0] >= 0.8;
  for (int i = 0; i < 2; ++i)
    ok = ok && within2(r[i].curve_error, ce[i]) && within2(r[i].potential_error, pe[i]) && r[i].vdelta < 1e-9;
  report(3, ok,
         fmt("curve %.4e %.4e, potential %.4e %.4e, EOC %.2f, vdelta %.1e %.1e (%.0fs + %.0fs)", r[0].curve_error,
             r[1].curve_error, r[0].potential_error, r[1].potential_error, g.conservative.eoc_curve[0], r[0].vdelta,
             r[1].vdelta, r[0].wall_time, r[1].wall_time));
}

void criterion4(const GatingRuns& g) {
  if (!g.ok || g.linear.rows.size() != 2) return report(4, false, "run failed: " + g.why);
  const auto& r = g.linear.rows;
  const double ratio = r[0].vdelta / r[1].vdelta;
  report(4, within2(r[0].vdelta, 3.8e-2) && within2(r[1].vdelta, 9.7e-3) && ratio >= 3.0,
         fmt("vdelta %.3e %.3e, ratio %.2f", r[0].vdelta, r[1].vdelta, ratio));
}

void criterion5(const GatingRuns& g) {
  if (!g.ok) return report(5, false, "run failed: " + g.why);
  int v = 0, steps = 0;
  for (const auto* t : {&g.conservative, &g.linear})
    for (const auto& r : t->rows) v += r.energy_violations, steps += r.steps;
  report(5, v == 0, fmt("%d violations over %d steps", v, steps));
}

void criterion6() {
  PresetOptions po;
  po.vertices = 4;
  const CurveNetwork net = make_preset("double_bubble", po);
  const BulkMesh mesh = BulkMesh::uniform(4.0, 4);
  const SparseMatrix A = assemble_stiffness(mesh);
  const auto normals = vertex_normals(net);
  const auto coupling = assemble_coupling(mesh, net, clip_curves_to_mesh(mesh, net), normals, false);
  const BlockSystem sys = build_reduced_system(A, coupling, assemble_curve_matrices(net, normals), net, 1e-2);

  const Eigen::MatrixXd D = sys.matrix;
  const Eigen::VectorXd ref = D.fullPivLu().solve(sys.rhs);
  SolverOptions o;
  o.precond = Preconditioner::BlockGS;
  o.tol = 1e-12;
  const auto a = solve(sys, o);
  std::mt19937 rng(8);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x0(sys.size());
  for (auto& v : x0) v = 10.0 * gauss(rng);
  const auto b = solve(sys, o, nullptr, &x0);
  const double agree = (a.x - ref).norm() / ref.norm();
  const double unique = (a.x - b.x).norm() / a.x.norm();
  const double omitted = omitted_phase_residual(sys, A, coupling, net, a);
  report(6, agree <= 1e-8 && unique <= 1e-8 && omitted <= 10 * o.tol,
         fmt("direct %.1e, two starts %.1e, omitted row %.1e", agree, unique, omitted));
}

void criterion7(const GatingRuns& g) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-0.2, 0.2);

  // lumped projection of the edge normals
  auto pts = circle_polygon(Vec2(0.3, -0.1), 1.3, 17, true);
  for (auto& p : pts) p += Vec2(u(rng), u(rng));
  Curve c;
  c.vertices = pts;
  c.closed = true;
  const auto w = vertex_normals(c);
  const auto nu = edge_normals(c);
  double proj = 0.0;
  for (int d = 0; d < 2; ++d) {
    std::vector<double> wd, nd, phi;
    for (const auto& x : w) wd.push_back(x[d]);
    for (const auto& x : nu) nd.push_back(x[d]);
    for (int l = 0; l < c.num_vertices(); ++l) phi.push_back(u(rng));
    const double lhs = lumped_inner_product(c, nodal_field(c, wd), nodal_field(c, phi));
    const double rhs = lumped_inner_product(c, edge_constant_field(c, nd), nodal_field(c, phi));
    proj = std::max(proj, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }

  // area difference against half-step normals, random deformations
  std::uniform_real_distribution<double> small(-0.05, 0.05);
  double area = 0.0;
  for (const char* name : {"concentric", "triple_bubble_shared_phase", "double_bubble_plus_disk"}) {
    PresetOptions o;
    o.vertices = 48;
    const auto n0 = make_preset(name, o);
    for (int trial = 0; trial < 5; ++trial) {
      CurveNetwork n1 = n0;
      int nd = 0;
      const auto dof = position_dof_map(n0, nd);
      std::vector<Vec2> d(nd);
      for (auto& v : d) v = Vec2(small(rng), small(rng));
      for (int i = 0; i < n1.num_curves(); ++i)
        for (int l = 0; l < n1.curves[i].num_vertices(); ++l) n1.curves[i].vertices[l] += d[dof[i][l]];
      const auto om = half_step_vertex_normals(n0, n1);
      const auto A0 = phase_areas(n0, 64.0), A1 = phase_areas(n1, 64.0);
      for (int p = 0; p < n0.topology.num_phases(); ++p) {
        double s = 0.0;
        for (int i = 0; i < n0.num_curves(); ++i) {
          const int opi = n0.topology.orientation(p, i);
          if (!opi) continue;
          const Eigen::VectorXd m = lumped_masses(n0.curves[i]);
          for (int l = 0; l < n0.curves[i].num_vertices(); ++l)
            s += opi * m[l] * (n1.curves[i].vertices[l] - n0.curves[i].vertices[l]).dot(om[i][l]);
        }
        area = std::max(area, std::abs(A1[p] - A0[p] - s) / std::max(1.0, std::abs(A0[p])));
      }
    }
  }

  // rows of B sum to the lumped masses
  PresetOptions o;
  o.vertices = 64;
  const auto net = make_preset("triple_bubble_shared_phase", o);
  const BulkMesh mesh = BulkMesh::adaptive(net, 4.0, 1, 64);
  const auto set = assemble_coupling(mesh, net, clip_curves_to_mesh(mesh, net), false);
  double rows = 0.0;
  for (int i = 0; i < net.num_curves(); ++i) {
    const Eigen::VectorXd r = set.B[i] * Eigen::VectorXd::Ones(mesh.num_vertices());
    const Eigen::VectorXd m = lumped_masses(net.curves[i]);
    rows = std::max(rows, (r - m).lpNorm<Eigen::Infinity>() / m.maxCoeff());
  }

  bool audits = g.ok;
  for (const auto* t : {&g.conservative, &g.linear})
    for (const auto& r : t->rows) audits = audits && r.mesh_audit_ok;
  report(7, proj <= 1e-12 && area <= 1e-12 && rows <= 1e-12 && audits,
         fmt("projection %.1e, area identity %.1e, row sums %.1e, mesh audits %s", proj, area, rows,
             audits ? "ok" : "failed"));
}

RunResult disk_run(double radius, double T, double tau) {
  Config cfg;
  cfg.scenario = "double_bubble_plus_disk";
  cfg.disk_radius = radius;
  cfg.vertices = 64;
  cfg.N_f = 64;
  cfg.tau = tau;
  cfg.T = T;
  validate_config(cfg);
  return run(build_scenario(cfg), run_options(cfg));
}

// the disk is the closed curve furthest to the right
double disk_area(const CurveNetwork& net) {
  double best = -INFINITY, a = 0.0;
  for (const auto& c : net.curves) {
    if (!c.closed) continue;
    double x = 0.0;
    for (const auto& v : c.vertices) x += v.x();
    x /= c.num_vertices();
    if (x > best) best = x, a = std::abs(flux_area(c));
  }
  return a;
}

void criterion8() {
  std::string why;
  RunResult small;
  const auto t0 = Clock::now();
  bool ok = guarded([&] { small = disk_run(0.625, 1.0, 1e-2); }, why);
  std::string detail;
  if (ok) {
    ok = !small.events.empty() && small.events[0].curve_id == 4;
    const double te = ok ? small.events[0].time : INFINITY;
    bool monotone = true;
    double drift = 0.0;
    for (std::size_t k = 1; k < small.history.size() && small.history[k].t < te; ++k) {
      monotone = monotone && small.history[k].energy <= small.history[k - 1].energy * (1 + 1e-10);
      drift = std::max(drift, small.history[k].vdelta_rel);
    }
    ok = ok && monotone && drift <= 1e-8;
    detail = fmt("r=5/8: disk removed at t=%.3g, energy %s, area drift %.1e (%.0fs)", te,
                 monotone ? "monotone" : "not monotone", drift, seconds_since(t0));
  } else {
    detail = "r=5/8 failed: " + why;
  }

  const auto t1 = Clock::now();
  RunResult big;
  bool ok_big = guarded([&] { big = disk_run(1.25, 4.0, 2e-2); }, why);
  if (ok_big) {
    const double a0 = kPi * 1.25 * 1.25;
    const double a4 = disk_area(big.final_state.network);
    ok_big = a4 > a0;
    detail += fmt("; r=5/4: disk area %.3f -> %.3f at t=4, %zu surgery events (%.0fs)", a0, a4, big.events.size(),
                  seconds_since(t1));
  } else {
    detail += "; r=5/4 failed: " + why;
  }
  report(8, ok && ok_big, detail, false);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  const GatingRuns g = gating_runs();
  criterion3(g);
  criterion4(g);
  criterion5(g);
  criterion6();
  criterion7(g);
  criterion8();
  std::printf("%s\n", failures ? "acceptance: FAIL" : "acceptance: PASS");
  return failures ? 1 : 0;
}
