#pragma once

#include <Eigen/Core>

#include <functional>

namespace msnet {

using LinearOperator = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Restarted GMRES with right preconditioning M^{-1}; `x` holds the initial
/// guess on entry. Modified Gram-Schmidt, Givens rotations.
GmresResult gmres(const LinearOperator& A, const LinearOperator& Minv, const Eigen::VectorXd& b,
                  Eigen::VectorXd& x, double tol, int max_iter, int restart);

}  // namespace msnet
