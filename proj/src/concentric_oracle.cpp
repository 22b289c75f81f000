#include "msnet/concentric_oracle.hpp"

#include "msnet/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>

namespace msnet {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson with absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

double inverse_speed(const ConcentricConfig& cfg, double u) {
  const double s2 = u * u - cfg.A2();
  if (s2 <= 0.0) return 0.0;
  return 1.0 / speed_F(cfg, u);
}

double lower_end(const ConcentricConfig& cfg) { return std::sqrt(cfg.A2()); }

}  // namespace

void validate(const ConcentricConfig& cfg) {
  if (!(cfg.R1_0 > 0.0 && cfg.R1_0 < cfg.R2_0 && cfg.R2_0 < cfg.R3_0))
    throw Error(ErrorKind::ValidationError, "concentric radii must satisfy 0 < R1 < R2 < R3");
}

double speed_F(const ConcentricConfig& cfg, double u) {
  const double a2 = cfg.A2(), a3 = cfg.A3();
  const double num = 1.0 / std::sqrt(u * u - a2) + 1.0 / u + 1.0 / std::sqrt(u * u + a3);
  return num / (u * std::log((u * u + a3) / (u * u - a2)));
}

double extinction_time(const ConcentricConfig& cfg, double tol) {
  validate(cfg);
  return adaptive_simpson([&](double u) { return inverse_speed(cfg, u); }, lower_end(cfg), cfg.R2_0, tol / 10.0);
}

double radius_R2(const ConcentricConfig& cfg, double t, double tol) {
  validate(cfg);
  if (t < 0.0) throw Error(ErrorKind::ValidationError, "time must be non-negative");
  if (t == 0.0) return cfg.R2_0;
  const double tstar = extinction_time(cfg, tol);
  if (t >= tstar) {
    std::ostringstream os;
    os << "t = " << t << " is beyond the extinction time " << tstar;
    throw Error(ErrorKind::NoBracket, os.str());
  }
  auto g = [&](double r) {
    return t - adaptive_simpson([&](double u) { return inverse_speed(cfg, u); }, r, cfg.R2_0, tol / 10.0);
  };
  const double lo = lower_end(cfg);
  const double hi = cfg.R2_0;
  std::uintmax_t iters = 200;
  auto stop = [&](double a, double b) { return std::abs(b - a) <= tol; };
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, g(lo), t, stop, iters);
  return 0.5 * (r.first + r.second);
}

std::array<double, 3> radii(const ConcentricConfig& cfg, double t) {
  const double r2 = radius_R2(cfg, t);
  return {std::sqrt(r2 * r2 - cfg.A2()), r2, std::sqrt(r2 * r2 + cfg.A3())};
}

double alpha_from_radii(const std::array<double, 3>& R) {
  return (1.0 / R[0] + 1.0 / R[1] + 1.0 / R[2]) / std::log(R[2] * R[2] / (R[0] * R[0]));
}

double alpha(const ConcentricConfig& cfg, double t) { return alpha_from_radii(radii(cfg, t)); }

std::array<double, 3> chemical_potentials_at_radius(const std::array<double, 3>& R, double a, double r) {
  const double R1 = R[0], R2 = R[1], R3 = R[2];
  const double b = -1.0 / (3.0 * R2) - 2.0 / (3.0 * R3);
  double w1, w2, w3;
  if (r <= R1) w1 = b + a / 3.0 * std::log(std::pow(R3, 4) / (std::pow(R1, 3) * R2));
  else if (r <= R3) w1 = b - a / 3.0 * std::log(R2 * std::pow(r, 3) / std::pow(R3, 4));
  else w1 = b + a / 3.0 * std::log(R3 / R2);

  if (r <= R1) w2 = -1.0 / R1 + b + a / 3.0 * std::log(std::pow(R3, 4) / (std::pow(R1, 3) * R2));
  else if (r <= R2) w2 = -1.0 / R1 + b + a / 3.0 * std::log(std::pow(R3, 4) * std::pow(r, 3) / (std::pow(R1, 6) * R2));
  else w2 = 2.0 / (3.0 * R2) + 1.0 / (3.0 * R3) + a / 3.0 * std::log(R2 * R2 / (R3 * R3));

  if (r < R2)
    w3 = -1.0 / R1 - 4.0 / (3.0 * R2) - 2.0 / (3.0 * R3) +
         a / 3.0 * std::log(R2 * R2 * std::pow(R3, 4) / std::pow(R1, 6));
  else if (r < R3) w3 = -1.0 / (3.0 * R2) + 1.0 / (3.0 * R3) + a / 3.0 * std::log(std::pow(r, 3) / (R2 * R3 * R3));
  else w3 = -1.0 / (3.0 * R2) + 1.0 / (3.0 * R3) + a / 3.0 * std::log(R3 / R2);
  return {w1, w2, w3};
}

std::array<double, 3> chemical_potentials(const ConcentricConfig& cfg, const Vec2& x, double t) {
  const auto R = radii(cfg, t);
  return chemical_potentials_at_radius(R, alpha_from_radii(R), x.norm());
}

double curve_error(const CurveNetwork& network, const ConcentricConfig& cfg, double t) {
  if (network.num_curves() != 3)
    throw Error(ErrorKind::TopologyMismatch, "curve error needs exactly three closed curves");
  for (const auto& c : network.curves)
    if (!c.closed) throw Error(ErrorKind::TopologyMismatch, "curve error needs closed curves");
  const auto R = radii(cfg, t);
  double e = 0.0;
  for (int i = 0; i < 3; ++i)
    for (const auto& q : network.curves[i].vertices) e = std::max(e, std::abs(q.norm() - R[i]));
  return e;
}

double potential_error(const Eigen::MatrixXd& W, const BulkMesh& mesh, const ConcentricConfig& cfg, double t) {
  if (W.cols() != 3 || W.rows() != mesh.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "potential field must be K x 3");
  const auto R = radii(cfg, t);
  const double a = alpha_from_radii(R);
  double e = 0.0;
  for (int k = 0; k < mesh.num_vertices(); ++k) {
    const auto w = chemical_potentials_at_radius(R, a, mesh.vertex(k).norm());
    for (int j = 0; j < 3; ++j) e = std::max(e, std::abs(W(k, j) - w[j]));
  }
  return e;
}

}  // namespace msnet
