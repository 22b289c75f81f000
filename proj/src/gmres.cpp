#include "msnet/gmres.hpp"

#include <cmath>
#include <vector>

namespace msnet {

GmresResult gmres(const LinearOperator& A, const LinearOperator& Minv, const Eigen::VectorXd& b,
                  Eigen::VectorXd& x, double tol, int max_iter, int restart) {
  GmresResult res;
  const double bnorm = b.norm();
  if (x.size() != b.size()) x = Eigen::VectorXd::Zero(b.size());
  if (bnorm == 0.0) {
    x.setZero();
    res.converged = true;
    return res;
  }
  const Eigen::Index n = b.size();
  const int m = std::max(1, restart);
  Eigen::VectorXd r(n), w(n), z(n), Ax(n);
  std::vector<Eigen::VectorXd> V(m + 1, Eigen::VectorXd(n));
  Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);

  A(x, Ax);
  r = b - Ax;
  double beta = r.norm();
  res.relative_residual = beta / bnorm;
  while (res.relative_residual > tol && res.iterations < max_iter) {
    V[0] = r / beta;
    g.setZero();
    g[0] = beta;
    Hm.setZero();
    int k = 0;
    for (; k < m && res.iterations < max_iter; ++k) {
      ++res.iterations;
      Minv(V[k], z);
      A(z, w);
      for (int i = 0; i <= k; ++i) {
        Hm(i, k) = w.dot(V[i]);
        w -= Hm(i, k) * V[i];
      }
      Hm(k + 1, k) = w.norm();
      const bool breakdown = Hm(k + 1, k) <= 1e-300;
      if (!breakdown) V[k + 1] = w / Hm(k + 1, k);
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * Hm(i, k) + sn[i] * Hm(i + 1, k);
        Hm(i + 1, k) = -sn[i] * Hm(i, k) + cs[i] * Hm(i + 1, k);
        Hm(i, k) = t;
      }
      const double h = std::hypot(Hm(k, k), Hm(k + 1, k));
      cs[k] = Hm(k, k) / h;
      sn[k] = Hm(k + 1, k) / h;
      Hm(k, k) = h;
      Hm(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      res.relative_residual = std::abs(g[k + 1]) / bnorm;
      if (res.relative_residual <= tol || breakdown) {
        ++k;
        break;
      }
    }
    Eigen::VectorXd y = Hm.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) u += y[i] * V[i];
    Minv(u, z);
    x += z;
    A(x, Ax);
    r = b - Ax;
    beta = r.norm();
    res.relative_residual = beta / bnorm;
    if (beta == 0.0) break;
  }
  res.converged = res.relative_residual <= tol;
  return res;
}

}  // namespace msnet
