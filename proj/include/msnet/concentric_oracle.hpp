#pragma once

#include "msnet/bulk_mesh.hpp"
#include "msnet/curve_network.hpp"

#include <array>

namespace msnet {

/// Exact three-circle solution with unit tensions.
struct ConcentricConfig {
  double R1_0 = 2.0, R2_0 = 2.5, R3_0 = 3.0;
  double A2() const { return R2_0 * R2_0 - R1_0 * R1_0; }
  double A3() const { return R3_0 * R3_0 - R2_0 * R2_0; }
};

/// Throws ValidationError unless 0 < R1_0 < R2_0 < R3_0.
void validate(const ConcentricConfig& cfg);

/// Right-hand side of R2' = -F(R2), for u > sqrt(A2).
double speed_F(const ConcentricConfig& cfg, double u);

/// Time at which R1 reaches zero.
double extinction_time(const ConcentricConfig& cfg, double tol = 1e-12);

/// Throws NoBracket beyond the extinction time.
double radius_R2(const ConcentricConfig& cfg, double t, double tol = 1e-12);

std::array<double, 3> radii(const ConcentricConfig& cfg, double t);

double alpha(const ConcentricConfig& cfg, double t);
double alpha_from_radii(const std::array<double, 3>& R);

/// (w1, w2, w3) at radius r for given radii and alpha; branches as printed.
std::array<double, 3> chemical_potentials_at_radius(const std::array<double, 3>& R, double alpha, double r);
std::array<double, 3> chemical_potentials(const ConcentricConfig& cfg, const Vec2& x, double t);

/// Max over curves and vertices of ||q| - R_i(t)|; curve i must be the
/// i-th circle. Throws TopologyMismatch.
double curve_error(const CurveNetwork& network, const ConcentricConfig& cfg, double t);

/// Max over phases and nodes of |W - I w(t)|; W is K x 3.
double potential_error(const Eigen::MatrixXd& W, const BulkMesh& mesh, const ConcentricConfig& cfg, double t);

}  // namespace msnet
