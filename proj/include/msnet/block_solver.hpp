#pragma once

#include "msnet/curve_network.hpp"
#include "msnet/interface_coupling.hpp"

#include <Eigen/Core>
#include <Eigen/SparseLU>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace msnet {

/// Reduced saddle-point system in the unknowns (W_1..W_{IP-1}, kappa, dX),
/// with junction copies of dX merged into one unknown.
struct BlockSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  int K = 0;             // bulk nodes
  int num_phases = 0;    // I_P
  int N = 0;             // curve vertices, junction copies counted separately
  int N_merged = 0;      // distinct position unknowns
  double tau = 0.0;
  std::vector<int> curve_offset;                // start of each curve in the kappa block
  std::vector<std::vector<int>> position_dof;   // curve, vertex -> merged index

  int w_offset() const { return 0; }
  int kappa_offset() const { return (num_phases - 1) * K; }
  int x_offset() const { return (num_phases - 1) * K + N; }
  int size() const { return x_offset() + 2 * N_merged; }
};

/// `network` supplies the topology, tensions and the current positions X^m.
BlockSystem build_reduced_system(const SparseMatrix& A, const CouplingMatrixSet& coupling,
                                 const CurveMatrixSet& curve_matrices, const CurveNetwork& network, double tau);

enum class Preconditioner { None, BlockGS, LU };

Preconditioner parse_preconditioner(const std::string& name);
const char* to_string(Preconditioner p);

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 2000;
  int restart = 200;
  Preconditioner precond = Preconditioner::LU;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double wall_time = 0.0;
};

/// A fixed approximate inverse of a BlockSystem matrix.
class BlockPreconditioner {
 public:
  BlockPreconditioner(const BlockSystem& system, Preconditioner kind);
  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  Preconditioner kind() const { return kind_; }

 private:
  Preconditioner kind_;
  int n1_ = 0, n2_ = 0, n3_ = 0;
  Eigen::VectorXd d1_, d2_, d3_;
  SparseMatrix L21_, L32_;
  std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

struct BlockSolution {
  Eigen::VectorXd x;          // full reduced vector
  Eigen::MatrixXd W_hat;      // K x (I_P - 1)
  Eigen::VectorXd kappa;      // N
  std::vector<std::vector<Vec2>> dX;  // per curve and vertex, copies expanded
  SolveReport report;
};

/// Solves with GMRES; `precond` may be reused across systems with the same
/// sparsity. `x0` is the initial Krylov guess (zero if empty). Throws
/// NoConvergence.
BlockSolution solve(const BlockSystem& system, const SolverOptions& options,
                    const BlockPreconditioner* precond = nullptr, const Eigen::VectorXd* x0 = nullptr);

/// Unpacks a reduced solution vector.
BlockSolution unpack_solution(const BlockSystem& system, const Eigen::VectorXd& x);

/// Appends the last component so that nodal sums vanish: K x I_P.
Eigen::MatrixXd expand_solution(const Eigen::MatrixXd& W_hat);

/// Residual norm of the motion law tested with the omitted phase, relative to
/// the norm of the right-hand side.
double omitted_phase_residual(const BlockSystem& system, const SparseMatrix& A, const CouplingMatrixSet& coupling,
                              const CurveNetwork& network, const BlockSolution& sol);

/// "i j value" lines, 0-based.
void write_triplets(std::ostream& os, const SparseMatrix& m);

}  // namespace msnet
