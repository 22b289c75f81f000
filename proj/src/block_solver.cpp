#include "msnet/block_solver.hpp"

#include "msnet/error.hpp"
#include "msnet/gmres.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

namespace msnet {

BlockSystem build_reduced_system(const SparseMatrix& A, const CouplingMatrixSet& coupling,
                                 const CurveMatrixSet& curve_matrices, const CurveNetwork& network, double tau) {
  const auto& O = network.topology.orientation;
  const int ic = network.num_curves();
  if (static_cast<int>(coupling.B.size()) != ic || static_cast<int>(coupling.Nx.size()) != ic ||
      static_cast<int>(curve_matrices.curves.size()) != ic || O.cols() != ic)
    throw Error(ErrorKind::DimensionMismatch, "block inputs disagree on the number of curves");
  if (A.rows() != A.cols()) throw Error(ErrorKind::DimensionMismatch, "bulk stiffness is not square");

  BlockSystem s;
  s.K = static_cast<int>(A.rows());
  s.num_phases = static_cast<int>(O.rows());
  s.tau = tau;
  s.position_dof = position_dof_map(network, s.N_merged);
  s.curve_offset.resize(ic);
  for (int i = 0; i < ic; ++i) {
    const int n = network.curves[i].num_vertices();
    if (coupling.B[i].rows() != n || coupling.B[i].cols() != s.K || curve_matrices.curves[i].mass.size() != n)
      throw Error(ErrorKind::DimensionMismatch, "block sizes disagree for curve " + std::to_string(i + 1));
    s.curve_offset[i] = s.N;
    s.N += n;
  }
  const int ip = s.num_phases, K = s.K;
  const int ko = s.kappa_offset(), xo = s.x_offset();

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(ip - 1) * A.nonZeros() + 16 * s.N * (ip + 2));
  for (int j = 0; j + 1 < ip; ++j)
    for (int c = 0; c < A.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(A, c); it; ++it)
        t.emplace_back(j * K + it.row(), j * K + it.col(), tau * it.value());

  s.rhs = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < ic; ++i) {
    const Curve& curve = network.curves[i];
    const auto& cm = curve_matrices.curves[i];
    const auto& dof = s.position_dof[i];
    const int off = ko + s.curve_offset[i];
    for (int j = 0; j + 1 < ip; ++j) {
      const int on = O(j, i);
      const int ob = O(j, i) - O(ip - 1, i);
      if (on) {
        for (int c = 0; c < coupling.Nx[i].outerSize(); ++c)
          for (SparseMatrix::InnerIterator it(coupling.Nx[i], c); it; ++it)
            t.emplace_back(j * K + it.col(), xo + 2 * dof[it.row()], on * it.value());
        for (int c = 0; c < coupling.Ny[i].outerSize(); ++c)
          for (SparseMatrix::InnerIterator it(coupling.Ny[i], c); it; ++it)
            t.emplace_back(j * K + it.col(), xo + 2 * dof[it.row()] + 1, on * it.value());
      }
      if (ob) {
        for (int c = 0; c < coupling.B[i].outerSize(); ++c)
          for (SparseMatrix::InnerIterator it(coupling.B[i], c); it; ++it)
            t.emplace_back(off + it.row(), j * K + it.col(), ob * it.value());
      }
    }
    for (int l = 0; l < curve.num_vertices(); ++l) {
      t.emplace_back(off + l, off + l, cm.mass[l]);
      t.emplace_back(xo + 2 * dof[l], off + l, cm.mass_normal[l].x());
      t.emplace_back(xo + 2 * dof[l] + 1, off + l, cm.mass_normal[l].y());
    }
    for (int c = 0; c < cm.stiffness.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(cm.stiffness, c); it; ++it) {
        const double v = cm.sigma * it.value();
        const int r = dof[it.row()], q = dof[it.col()];
        const Vec2& X = curve.vertices[it.col()];
        for (int d = 0; d < 2; ++d) {
          t.emplace_back(xo + 2 * r + d, xo + 2 * q + d, v);
          s.rhs[xo + 2 * r + d] -= v * X[d];
        }
      }
  }
  s.matrix.resize(s.size(), s.size());
  s.matrix.setFromTriplets(t.begin(), t.end());
  s.matrix.makeCompressed();
  return s;
}

Preconditioner parse_preconditioner(const std::string& name) {
  if (name == "none") return Preconditioner::None;
  if (name == "block_gs") return Preconditioner::BlockGS;
  if (name == "lu") return Preconditioner::LU;
  throw Error(ErrorKind::ValidationError, "unknown preconditioner '" + name + "'");
}

const char* to_string(Preconditioner p) {
  switch (p) {
    case Preconditioner::None: return "none";
    case Preconditioner::BlockGS: return "block_gs";
    case Preconditioner::LU: return "lu";
  }
  return "?";
}

BlockPreconditioner::BlockPreconditioner(const BlockSystem& s, Preconditioner kind) : kind_(kind) {
  n1_ = s.kappa_offset();
  n2_ = s.N;
  n3_ = 2 * s.N_merged;
  if (kind == Preconditioner::LU) {
    lu_ = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
    lu_->analyzePattern(s.matrix);
    lu_->factorize(s.matrix);
    if (lu_->info() != Eigen::Success)
      throw Error(ErrorKind::NoConvergence, "sparse LU factorization failed: " + lu_->lastErrorMessage());
    return;
  }
  if (kind == Preconditioner::None) return;
  // Lower block triangle: diagonal of tau A, C, and the diagonal of E_Gamma.
  const Eigen::VectorXd diag = s.matrix.diagonal();
  d1_ = diag.head(n1_);
  d2_ = diag.segment(n1_, n2_);
  d3_ = diag.tail(n3_);
  for (Eigen::Index i = 0; i < d1_.size(); ++i)
    if (d1_[i] == 0.0) d1_[i] = 1.0;
  for (Eigen::Index i = 0; i < d3_.size(); ++i)
    if (d3_[i] == 0.0) d3_[i] = 1.0;
  L21_ = s.matrix.block(n1_, 0, n2_, n1_);
  L32_ = s.matrix.block(n1_ + n2_, n1_, n3_, n2_);
}

void BlockPreconditioner::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  switch (kind_) {
    case Preconditioner::None:
      out = in;
      return;
    case Preconditioner::LU:
      out = lu_->solve(in);
      return;
    case Preconditioner::BlockGS: {
      out.resize(in.size());
      out.head(n1_) = in.head(n1_).cwiseQuotient(d1_);
      out.segment(n1_, n2_) = (in.segment(n1_, n2_) - L21_ * out.head(n1_)).cwiseQuotient(d2_);
      out.tail(n3_) = (in.tail(n3_) - L32_ * out.segment(n1_, n2_)).cwiseQuotient(d3_);
      return;
    }
  }
}

BlockSolution unpack_solution(const BlockSystem& s, const Eigen::VectorXd& x) {
  BlockSolution sol;
  sol.x = x;
  sol.W_hat = Eigen::Map<const Eigen::MatrixXd>(x.data(), s.K, s.num_phases - 1);
  sol.kappa = x.segment(s.kappa_offset(), s.N);
  sol.dX.resize(s.position_dof.size());
  for (std::size_t i = 0; i < s.position_dof.size(); ++i) {
    sol.dX[i].resize(s.position_dof[i].size());
    for (std::size_t l = 0; l < s.position_dof[i].size(); ++l) {
      const int d = s.position_dof[i][l];
      sol.dX[i][l] = Vec2(x[s.x_offset() + 2 * d], x[s.x_offset() + 2 * d + 1]);
    }
  }
  return sol;
}

BlockSolution solve(const BlockSystem& s, const SolverOptions& opt, const BlockPreconditioner* precond,
                    const Eigen::VectorXd* x0) {
  const auto start = std::chrono::steady_clock::now();
  std::unique_ptr<BlockPreconditioner> own;
  if (!precond) {
    own = std::make_unique<BlockPreconditioner>(s, opt.precond);
    precond = own.get();
  }
  Eigen::VectorXd x = x0 && x0->size() == s.size() ? *x0 : Eigen::VectorXd::Zero(s.size());
  const LinearOperator op = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out = s.matrix * in; };
  const LinearOperator pc = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { precond->apply(in, out); };
  const GmresResult g = gmres(op, pc, s.rhs, x, opt.tol, opt.max_iter, opt.restart);
  if (!g.converged) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "GMRES stopped after %d iterations at relative residual %.3e", g.iterations,
                  g.relative_residual);
    throw Error(ErrorKind::NoConvergence, buf);
  }
  BlockSolution sol = unpack_solution(s, x);
  sol.report.iterations = g.iterations;
  sol.report.relative_residual = g.relative_residual;
  sol.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

Eigen::MatrixXd expand_solution(const Eigen::MatrixXd& W_hat) {
  Eigen::MatrixXd W(W_hat.rows(), W_hat.cols() + 1);
  W.leftCols(W_hat.cols()) = W_hat;
  W.col(W_hat.cols()) = -W_hat.rowwise().sum();
  return W;
}

double omitted_phase_residual(const BlockSystem& s, const SparseMatrix& A, const CouplingMatrixSet& coupling,
                              const CurveNetwork& network, const BlockSolution& sol) {
  const auto& O = network.topology.orientation;
  const int last = s.num_phases - 1;
  const Eigen::MatrixXd W = expand_solution(sol.W_hat);
  Eigen::VectorXd r = s.tau * (A * W.col(last));
  for (int i = 0; i < network.num_curves(); ++i) {
    if (!O(last, i)) continue;
    const int n = network.curves[i].num_vertices();
    Eigen::VectorXd dx(n), dy(n);
    for (int l = 0; l < n; ++l) {
      dx[l] = sol.dX[i][l].x();
      dy[l] = sol.dX[i][l].y();
    }
    r += O(last, i) * (coupling.Nx[i].transpose() * dx + coupling.Ny[i].transpose() * dy);
  }
  const double b = s.rhs.norm();
  return b > 0.0 ? r.norm() / b : r.norm();
}

void write_triplets(std::ostream& os, const SparseMatrix& m) {
  char buf[64];
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(it.row()),
                    static_cast<long long>(it.col()), it.value());
      os << buf;
    }
}

}  // namespace msnet
