#include "msnet/evolution.hpp"

#include "msnet/error.hpp"
#include "msnet/interface_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace msnet {

Scheme parse_scheme(const std::string& name) {
  if (name == "linear") return Scheme::Linear;
  if (name == "conservative") return Scheme::Conservative;
  throw Error(ErrorKind::ValidationError, "unknown scheme '" + name + "'");
}

const char* to_string(Scheme s) { return s == Scheme::Linear ? "linear" : "conservative"; }

namespace {

double dirichlet(const Eigen::MatrixXd& W, const SparseMatrix& A) {
  double s = 0.0;
  for (int j = 0; j < W.cols(); ++j) s += W.col(j).dot(A * W.col(j));
  return s;
}

CurveNetwork displaced(const CurveNetwork& net, const std::vector<std::vector<Vec2>>& dX) {
  CurveNetwork out = net;
  for (std::size_t i = 0; i < out.curves.size(); ++i)
    for (std::size_t l = 0; l < out.curves[i].vertices.size(); ++l) out.curves[i].vertices[l] += dX[i][l];
  return out;
}

double max_displacement(const CurveNetwork& a, const CurveNetwork& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.curves.size(); ++i)
    for (std::size_t l = 0; l < a.curves[i].vertices.size(); ++l)
      d = std::max(d, (a.curves[i].vertices[l] - b.curves[i].vertices[l]).lpNorm<Eigen::Infinity>());
  return d;
}

std::vector<Eigen::VectorXd> split_kappa(const BlockSystem& sys, const Eigen::VectorXd& kappa,
                                         const CurveNetwork& net) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < net.num_curves(); ++i)
    out.push_back(kappa.segment(sys.curve_offset[i], net.curves[i].num_vertices()));
  return out;
}

SchemeState do_step(const SchemeState& state, double tau, const SchemeOptions& opt, bool conservative,
                    StepCheck* check) {
  if (!(tau > 0.0)) throw Error(ErrorKind::ValidationError, "time step must be positive");
  const CurveNetwork& net = state.network;
  auto mesh = std::make_shared<const BulkMesh>(BulkMesh::adaptive(net, opt.H, opt.N_c, opt.N_f));
  const SparseMatrix A = assemble_stiffness(*mesh);
  const CutSegmentList cuts = clip_curves_to_mesh(*mesh, net);
  CouplingMatrixSet coupling = assemble_coupling(*mesh, net, cuts, opt.lumped);

  VertexNormalField omega = vertex_normals(net);
  std::unique_ptr<BlockPreconditioner> pc;
  CurveNetwork prev = net;
  CurveNetwork next;
  BlockSolution sol;
  BlockSystem sys;
  int iters = 0, solver_iters = 0;
  bool stalled = false;
  Eigen::VectorXd x_prev;
  for (;;) {
    apply_normals(coupling, omega);
    const CurveMatrixSet cm = assemble_curve_matrices(net, omega);
    sys = build_reduced_system(A, coupling, cm, net, tau);
    if (!pc) pc = std::make_unique<BlockPreconditioner>(sys, opt.solver.precond);
    sol = solve(sys, opt.solver, pc.get(), iters > 0 ? &x_prev : nullptr);
    x_prev = sol.x;
    ++iters;
    solver_iters += sol.report.iterations;
    next = displaced(net, sol.dX);
    if (!conservative) break;
    const double disp = max_displacement(next, prev);
    if (disp <= opt.fp_tol) break;
    if (iters >= opt.fp_max) {
      stalled = true;
      std::fprintf(stderr, "warning: FixedPointStall at t=%.6g after %d iterations (displacement %.3e)\n",
                   state.t + tau, iters, disp);
      break;
    }
    prev = next;
    omega = half_step_vertex_normals(net, next);
  }

  SchemeState out;
  out.t = state.t + tau;
  out.network = std::move(next);
  out.kappa = split_kappa(sys, sol.kappa, net);
  out.W = expand_solution(sol.W_hat);
  out.mesh = mesh;
  out.diag = compute_diagnostics(out.network, out.W, A, 4.0 * opt.H * opt.H, out.t);
  out.diag.solver_iters = solver_iters;
  out.diag.fp_iters = iters;
  out.diag.fp_stalled = stalled;
  out.diag.solver_residual = sol.report.relative_residual;
  out.diag.K = mesh->num_vertices();

  const double before = weighted_length(net);
  const double diss = tau * out.diag.dirichlet_energy;
  if (check) {
    check->energy_before = before;
    check->energy_after = out.diag.energy;
    check->dissipation = diss;
    check->violated = out.diag.energy + diss > before * (1.0 + opt.energy_slack);
  }
  return out;
}

}  // namespace

SchemeState initial_state(const CurveNetwork& network, const SchemeOptions& opt) {
  SchemeState s;
  s.t = 0.0;
  s.network = network;
  auto mesh = std::make_shared<const BulkMesh>(BulkMesh::adaptive(network, opt.H, opt.N_c, opt.N_f));
  s.mesh = mesh;
  s.W = Eigen::MatrixXd::Zero(mesh->num_vertices(), network.topology.num_phases());
  // Per-vertex least squares of  m_l kappa_l omega_l = -sigma (E X)_l.
  const auto omega = vertex_normals(network);
  for (int i = 0; i < network.num_curves(); ++i) {
    const Curve& c = network.curves[i];
    const Eigen::VectorXd m = lumped_masses(c);
    const SparseMatrix E = curve_stiffness(c);
    Eigen::MatrixXd X(c.num_vertices(), 2);
    for (int l = 0; l < c.num_vertices(); ++l) X.row(l) = c.vertices[l].transpose();
    const Eigen::MatrixXd EX = E * X;
    Eigen::VectorXd k(c.num_vertices());
    for (int l = 0; l < c.num_vertices(); ++l) {
      const double w2 = omega[i][l].squaredNorm();
      k[l] = w2 > 0.0 ? -network.sigma[i] * EX.row(l).dot(omega[i][l]) / (m[l] * w2) : 0.0;
    }
    s.kappa.push_back(k);
  }
  const SparseMatrix A = assemble_stiffness(*mesh);
  s.diag = compute_diagnostics(network, s.W, A, 4.0 * opt.H * opt.H, 0.0);
  s.diag.K = mesh->num_vertices();
  return s;
}

SchemeState step_linear(const SchemeState& state, double tau, const SchemeOptions& opt, StepCheck* check) {
  return do_step(state, tau, opt, false, check);
}

SchemeState step_conservative(const SchemeState& state, double tau, const SchemeOptions& opt, StepCheck* check) {
  if (!(opt.fp_tol > 0.0)) throw Error(ErrorKind::ValidationError, "fixed-point tolerance must be positive");
  return do_step(state, tau, opt, true, check);
}

Diagnostics compute_diagnostics(const CurveNetwork& network, const Eigen::MatrixXd& W, const SparseMatrix& A,
                                double domain_area, double t) {
  Diagnostics d;
  d.t = t;
  d.energy = weighted_length(network);
  d.dirichlet_energy = W.size() ? dirichlet(W, A) : 0.0;
  d.areas = phase_areas(network, domain_area);
  d.phase_ids = network.topology.phase_ids;
  d.equidistribution = equidistribution_ratio(network);
  return d;
}

double default_surgery_threshold(const CurveNetwork& network) {
  double best = INFINITY, mean = 0.0;
  for (const auto& c : network.curves) {
    const double l = c.length();
    if (l < best) {
      best = l;
      mean = l / c.num_edges();
    }
  }
  return 3.0 * mean;
}

RunResult run(const CurveNetwork& initial, const RunOptions& opt, const StepObserver& observer) {
  if (!(opt.tau > 0.0)) throw Error(ErrorKind::ValidationError, "tau must be positive");
  if (opt.T < 0.0) throw Error(ErrorKind::ValidationError, "T must be non-negative");
  RunResult res;
  SchemeState state = initial_state(initial, opt.scheme);
  const double threshold = opt.surgery_threshold < 0.0 ? default_surgery_threshold(initial) : opt.surgery_threshold;

  // Reference areas by phase id, shifted at surgery.
  std::map<int, double> base;
  for (int p = 0; p < initial.topology.num_phases(); ++p)
    base[initial.topology.phase_ids[p]] = state.diag.areas[p];
  auto set_vdelta = [&](Diagnostics& d, const PhaseTopology& topo) {
    d.vdelta = d.vdelta_rel = 0.0;
    for (int p = 0; p < topo.num_phases(); ++p) {
      const double b = base.at(topo.phase_ids[p]);
      d.vdelta = std::max(d.vdelta, std::abs(d.areas[p] - b));
      if (p != topo.external_phase) d.vdelta_rel = std::max(d.vdelta_rel, std::abs(d.areas[p] - b) / b);
    }
  };
  res.history.push_back(state.diag);
  if (observer) observer(0, state);

  const int steps = opt.T > 0.0 ? static_cast<int>(std::ceil(opt.T / opt.tau - 1e-9)) : 0;
  for (int m = 0; m < steps; ++m) {
    const double tau = std::min(opt.tau, opt.T - state.t);
    if (!(tau > 0.0)) break;
    StepCheck check;
    SchemeState next = opt.scheme.scheme == Scheme::Linear ? step_linear(state, tau, opt.scheme, &check)
                                                           : step_conservative(state, tau, opt.scheme, &check);
    if (m + 1 == steps) next.t = opt.T;
    if (next.diag.fp_stalled) ++res.fp_stalls;
    if (check.violated) {
      ++res.energy_violations;
      if (opt.throw_on_energy_increase) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "step %d: |G|+tau|grad W|^2 = %.15g exceeds %.15g", m + 1,
                      check.energy_after + check.dissipation, check.energy_before);
        throw Error(ErrorKind::EnergyIncrease, buf);
      }
    }
    set_vdelta(next.diag, next.network.topology);
    res.max_vdelta = std::max(res.max_vdelta, next.diag.vdelta);
    res.max_vdelta_rel = std::max(res.max_vdelta_rel, next.diag.vdelta_rel);

    if (threshold > 0.0) {
      auto sr = surgery(next.network, threshold, next.t);
      if (!sr.events.empty()) {
        const auto& old_topo = next.network.topology;
        for (const auto& ev : sr.events) {
          base[ev.to_phase_id] += ev.area;
          base[ev.from_phase_id] -= ev.area;
        }
        // Keep W columns and curvatures of surviving phases and curves.
        Eigen::MatrixXd W(next.W.rows(), sr.network.topology.num_phases());
        for (int p = 0; p < sr.network.topology.num_phases(); ++p) {
          const int id = sr.network.topology.phase_ids[p];
          const int old = static_cast<int>(std::find(old_topo.phase_ids.begin(), old_topo.phase_ids.end(), id) -
                                           old_topo.phase_ids.begin());
          W.col(p) = next.W.col(old);
        }
        std::vector<Eigen::VectorXd> kappa;
        for (std::size_t i = 0, j = 0; i < next.network.curves.size(); ++i) {
          const bool removed = std::any_of(sr.events.begin(), sr.events.end(),
                                           [&](const SurgeryEvent& e) { return e.curve_id == next.network.curves[i].id; });
          if (!removed) kappa.push_back(next.kappa[i]), ++j;
        }
        for (const auto& ev : sr.events) {
          std::fprintf(stderr, "surgery at t=%.6g: removed curve %d, area %.6g from phase %d to phase %d\n", ev.time,
                       ev.curve_id, ev.area, ev.from_phase_id + 1, ev.to_phase_id + 1);
          res.events.push_back(ev);
        }
        next.network = std::move(sr.network);
        next.W = std::move(W);
        next.kappa = std::move(kappa);
        next.diag.areas = phase_areas(next.network, 4.0 * opt.scheme.H * opt.scheme.H);
        next.diag.phase_ids = next.network.topology.phase_ids;
        next.diag.equidistribution = equidistribution_ratio(next.network);
      }
    }
    res.history.push_back(next.diag);
    state = std::move(next);
    if (observer) observer(m + 1, state);
    if (state.network.num_curves() == 0) break;
  }
  res.final_state = std::move(state);
  return res;
}

}  // namespace msnet
