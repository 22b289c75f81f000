#include "msnet/bulk_mesh.hpp"
#include "msnet/concentric_oracle.hpp"
#include "msnet/error.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace msnet;
using namespace msnet::test;

// reference radii from oracles/concentric_radii.py (scipy quad + brentq)
TEST_CASE("radii against the independent oracle") {
  const ConcentricConfig cfg;
  const auto r0 = radii(cfg, 0.0);
  CHECK(r0[0] == 2.0);
  CHECK(r0[1] == 2.5);
  CHECK(r0[2] == 3.0);
  CHECK(radius_R2(cfg, 0.0) == 2.5);

  const auto a = radii(cfg, 0.25);
  CHECK(std::abs(a[0] - 1.806272336521414) < 1e-10);
  CHECK(std::abs(a[1] - 2.347896878843389) < 1e-10);
  CHECK(std::abs(a[2] - 2.874477300950996) < 1e-10);
  const auto b = radii(cfg, 0.5);
  CHECK(std::abs(b[0] - 1.603599167471881) < 1e-10);
  CHECK(std::abs(b[1] - 2.195798326330656) < 1e-10);
  CHECK(std::abs(b[2] - 2.751641381051773) < 1e-10);
  // three-figure values quoted for T = 1/2
  CHECK(std::abs(b[0] - 1.60) < 0.005);
  CHECK(std::abs(b[1] - 2.20) < 0.005);
  CHECK(std::abs(b[2] - 2.75) < 0.005);
  CHECK(std::abs(extinction_time(cfg) - 1.6189236462335528) < 1e-8);
}

TEST_CASE("radius ODE consistency") {
  const ConcentricConfig cfg;
  const double h = 1e-4, t = 0.25;
  const double d = (radius_R2(cfg, t + h) - radius_R2(cfg, t - h)) / (2 * h);
  const double F = speed_F(cfg, radius_R2(cfg, t));
  CHECK(rel(d, -F) < 1e-6);
  for (double s : {0.0, 0.1, 0.3, 0.7, 1.2}) {
    const auto R = radii(cfg, s);
    CHECK(std::abs(R[1] * R[1] - R[0] * R[0] - cfg.A2()) < 1e-12);
    CHECK(std::abs(R[2] * R[2] - R[1] * R[1] - cfg.A3()) < 1e-12);
  }
  CHECK_THROWS_AS(radius_R2(cfg, 2.0), Error);
  ConcentricConfig bad;
  bad.R2_0 = 1.5;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("alpha forms and velocities") {
  const ConcentricConfig cfg;
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (int k = 0; k < 100; ++k) {
    const double t = u(rng);
    const auto R = radii(cfg, t);
    const double a = std::log(R[2] * R[2] / (R[0] * R[0]));
    CHECK(rel(alpha(cfg, t), (1 / R[0] + 1 / R[1] + 1 / R[2]) / a) < 1e-12);
    CHECK(rel(alpha(cfg, t), alpha_from_radii(R)) < 1e-12);
  }
  // every circle shrinks with normal speed alpha / R_i
  const double h = 1e-4, t = 0.3;
  const auto p = radii(cfg, t + h), m = radii(cfg, t - h), R = radii(cfg, t);
  for (int i = 0; i < 3; ++i) CHECK(rel((p[i] - m[i]) / (2 * h), -alpha(cfg, t) / R[i]) < 1e-6);
}

TEST_CASE("chemical potentials") {
  const ConcentricConfig cfg;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-4, 4), ut(0, 1.5);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto w = chemical_potentials(cfg, Vec2(u(rng), u(rng)), ut(rng));
    worst = std::max(worst, std::abs(w[0] + w[1] + w[2]));
  }
  CHECK(worst <= 1e-12);

  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    CAPTURE(t);
    const auto R = radii(cfg, t);
    const double a = alpha_from_radii(R);
    const auto w1 = chemical_potentials_at_radius(R, a, R[0]);
    const auto w2 = chemical_potentials_at_radius(R, a, R[1]);
    const auto w3 = chemical_potentials_at_radius(R, a, R[2]);
    CHECK(std::abs(w1[0] - w1[1] - 1 / R[0]) < 1e-10);
    CHECK(std::abs(w2[2] - w2[1] + 1 / R[1]) < 1e-10);
    CHECK(std::abs(w3[2] - w3[0] - 1 / R[2]) < 1e-10);
    // each component is continuous across the circles
    for (int i = 0; i < 3; ++i) {
      const auto in = chemical_potentials_at_radius(R, a, R[i] * (1 - 1e-13));
      const auto out = chemical_potentials_at_radius(R, a, R[i] * (1 + 1e-13));
      for (int j = 0; j < 3; ++j) CHECK(std::abs(in[j] - out[j]) < 1e-10);
    }

    // radial derivative jumps by finite differences, step 1e-4
    const double h = 1e-4;
    const double expect[3][3] = {{-a / R[0], a / R[0], 0.0}, {0.0, -a / R[1], a / R[1]}, {a / R[2], 0.0, -a / R[2]}};
    for (int i = 0; i < 3; ++i) {
      const auto o1 = chemical_potentials_at_radius(R, a, R[i] + h), o2 = chemical_potentials_at_radius(R, a, R[i] + 2 * h);
      const auto i1 = chemical_potentials_at_radius(R, a, R[i] - h), i2 = chemical_potentials_at_radius(R, a, R[i] - 2 * h);
      const auto c = chemical_potentials_at_radius(R, a, R[i]);
      for (int j = 0; j < 3; ++j) {
        const double dout = (-3 * c[j] + 4 * o1[j] - o2[j]) / (2 * h);
        const double din = (3 * c[j] - 4 * i1[j] + i2[j]) / (2 * h);
        CHECK(std::abs((dout - din) - expect[i][j]) < 1e-4);
      }
    }
  }
  const auto a = chemical_potentials(cfg, Vec2(1.3, -2.1), 0.2);
  const double r = Vec2(1.3, -2.1).norm(), th = 0.77;
  const auto b = chemical_potentials(cfg, Vec2(r * std::cos(th), r * std::sin(th)), 0.2);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-15);
}

TEST_CASE("curve error") {
  const ConcentricConfig cfg;
  const auto net = concentric(64);
  CHECK(curve_error(net, cfg, 0.0) < 1e-15);
  CurveNetwork s = net;
  const double d = 1e-3;
  for (auto& c : s.curves)
    for (auto& v : c.vertices) v *= 1 + d;
  CHECK(std::abs(curve_error(s, cfg, 0.0) - 3.0 * d) < 1e-14);
  CHECK_THROWS_AS(curve_error(circle_network(1.0, 8), cfg, 0.0), Error);
}

TEST_CASE("potential error") {
  const ConcentricConfig cfg;
  const BulkMesh m = BulkMesh::adaptive(concentric(64), 4.0, 1, 32);
  const double t = 0.3;
  Eigen::MatrixXd W(m.num_vertices(), 3);
  for (int k = 0; k < m.num_vertices(); ++k) {
    const auto w = chemical_potentials(cfg, m.vertex(k), t);
    for (int j = 0; j < 3; ++j) W(k, j) = w[j];
  }
  CHECK(potential_error(W, m, cfg, t) < 1e-14);
  W.col(0).array() += 0.02;
  W.col(1).array() -= 0.02;
  CHECK(std::abs(potential_error(W, m, cfg, t) - 0.02) < 1e-12);
  CHECK_THROWS_AS(potential_error(W.leftCols(2), m, cfg, t), Error);
}
