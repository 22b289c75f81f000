#pragma once

#include "msnet/block_solver.hpp"
#include "msnet/bulk_mesh.hpp"
#include "msnet/curve_network.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace msnet {

enum class Scheme { Linear, Conservative };

Scheme parse_scheme(const std::string& name);
const char* to_string(Scheme s);

struct SchemeOptions {
  Scheme scheme = Scheme::Conservative;
  double H = 4.0;
  int N_c = 1;
  int N_f = 128;
  bool lumped = false;
  SolverOptions solver;
  double fp_tol = 4e-10;  // absolute, in length units
  int fp_max = 100;
  double energy_slack = 1e-10;
};

struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;
  double dirichlet_energy = 0.0;
  std::vector<double> areas;
  std::vector<int> phase_ids;  // labels of the entries of `areas`
  double vdelta = 0.0;      // max_p |area_p - area_p(0)|, all phases
  double vdelta_rel = 0.0;  // max over bounded phases of the relative change
  std::vector<double> equidistribution;
  int solver_iters = 0;
  int fp_iters = 0;
  bool fp_stalled = false;
  double solver_residual = 0.0;
  int K = 0;
};

/// One time level. W lives on `mesh`, the bulk mesh of the previous level
/// on which it was computed (the initial mesh at t = 0).
struct SchemeState {
  double t = 0.0;
  CurveNetwork network;
  std::vector<Eigen::VectorXd> kappa;
  Eigen::MatrixXd W;
  std::shared_ptr<const BulkMesh> mesh;
  Diagnostics diag;
};

/// Builds the t = 0 state: initial mesh, W = 0 and a least-squares curvature.
SchemeState initial_state(const CurveNetwork& network, const SchemeOptions& opt);

/// Energy-inequality record of one step.
struct StepCheck {
  double energy_before = 0.0;
  double energy_after = 0.0;
  double dissipation = 0.0;  // tau * sum_j W_j^T A W_j
  bool violated = false;
};

/// Linear scheme: one solve with the vertex normals of X^m.
SchemeState step_linear(const SchemeState& state, double tau, const SchemeOptions& opt, StepCheck* check = nullptr);

/// Structure-preserving scheme: lagged iteration on the half-step normals.
SchemeState step_conservative(const SchemeState& state, double tau, const SchemeOptions& opt,
                              StepCheck* check = nullptr);

Diagnostics compute_diagnostics(const CurveNetwork& network, const Eigen::MatrixXd& W, const SparseMatrix& A,
                                double domain_area, double t);

struct RunOptions {
  SchemeOptions scheme;
  double tau = 1e-2;
  double T = 0.0;
  /// Negative: three times the mean edge length of the shortest curve at t = 0.
  /// Zero disables surgery.
  double surgery_threshold = -1.0;
  bool throw_on_energy_increase = true;
};

struct RunResult {
  std::vector<Diagnostics> history;  // includes t = 0
  SchemeState final_state;
  std::vector<SurgeryEvent> events;
  int energy_violations = 0;
  int fp_stalls = 0;
  double max_vdelta = 0.0;
  double max_vdelta_rel = 0.0;
};

/// Called after every accepted step (and once for t = 0 with step = 0).
using StepObserver = std::function<void(int step, const SchemeState& state)>;

RunResult run(const CurveNetwork& initial, const RunOptions& opt, const StepObserver& observer = {});

double default_surgery_threshold(const CurveNetwork& network);

}  // namespace msnet
