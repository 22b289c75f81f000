#include "msnet/bulk_mesh.hpp"
#include "msnet/error.hpp"
#include "msnet/interface_coupling.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace msnet;
using namespace msnet::test;

namespace {

CurveNetwork single_edge_network(const Vec2& p, const Vec2& q) {
  // thin closed triangle, only its first edge is inspected
  PhaseTopology t;
  t.orientation = mat({{1}, {-1}});
  const Vec2 r = p + 0.5 * (q - p) + 1e-3 * perp(q - p);
  return build_network({polygon({p, q, r}, true)}, t, {1.0});
}

double seg_length(const CutSegment& s) { return (s.p1 - s.p0).norm(); }

}  // namespace

TEST_CASE("edge inside one triangle") {
  const BulkMesh m = BulkMesh::uniform(1.0, 1);
  // lower right triangle (2,0,1): below the diagonal y = x
  const auto net = single_edge_network(Vec2(0.2, -0.6), Vec2(0.6, -0.2));
  const auto cuts = clip_curves_to_mesh(m, net);
  const auto& segs = cuts.segments[0][0];
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].t0 == 0.0);
  CHECK(segs[0].t1 == 1.0);
}

TEST_CASE("edge crossing one mesh edge") {
  const BulkMesh m = BulkMesh::uniform(1.0, 1);
  const Vec2 p(0.5, -0.5), q(-0.5, 0.5 + 0.2);
  const auto net = single_edge_network(p, q);
  const auto cuts = clip_curves_to_mesh(m, net);
  const auto& segs = cuts.segments[0][0];
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].element != segs[1].element);
  CHECK(std::abs(seg_length(segs[0]) + seg_length(segs[1]) - (q - p).norm()) < 1e-15);
  // crossing point lies on y = x
  CHECK(std::abs(segs[0].p1.x() - segs[0].p1.y()) < 1e-15);
}

TEST_CASE("random edges partition exactly") {
  PhaseTopology t;
  t.orientation = mat({{-1, 0}, {0, -1}, {1, 1}});
  const auto ref = build_network({polygon(circle_polygon(Vec2(-1, 0.5), 1.1, 40, true), true),
                                  polygon(circle_polygon(Vec2(1.5, -1), 0.7, 30, true), true)},
                                 t, {1.0, 1.0});
  const BulkMesh m = BulkMesh::adaptive(ref, 4.0, 2, 64);
  REQUIRE(audit_mesh(m).ok());
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.9, 3.9), s(-0.6, 0.6);
  std::vector<Vec2> pts;
  Vec2 x(0, 0);
  for (int k = 0; k < 1000; ++k) {
    pts.push_back(x);
    x += Vec2(s(rng), s(rng));
    x = x.cwiseMax(Vec2(-3.9, -3.9)).cwiseMin(Vec2(3.9, 3.9));
  }
  PhaseTopology t1;
  t1.orientation = mat({{1}, {-1}});
  const auto walk = build_network({polygon(pts, true)}, t1, {1.0});
  const auto cuts = clip_curves_to_mesh(m, walk);
  const Curve& c = walk.curves[0];
  double worst = 0.0;
  for (int e = 0; e < c.num_edges(); ++e) {
    const auto& segs = cuts.segments[0][e];
    double sum = 0.0;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      sum += seg_length(segs[k]);
      if (k > 0) CHECK(segs[k].t0 == segs[k - 1].t1);
      // sub-segment midpoint lies in the element it is assigned to
      const Vec2 mid = 0.5 * (segs[k].p0 + segs[k].p1);
      CHECK(m.barycentric_in_node(m.leaf_node(segs[k].element), mid).minCoeff() > -1e-12);
    }
    CHECK(segs.front().t0 == 0.0);
    CHECK(segs.back().t1 == 1.0);
    worst = std::max(worst, std::abs(sum - c.edge_length(e)) / c.edge_length(e));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("coupling matrices") {
  const auto net = concentric(64);
  const BulkMesh m = BulkMesh::adaptive(net, 4.0, 1, 32);
  const auto cuts = clip_curves_to_mesh(m, net);
  for (bool lumped : {false, true}) {
    CAPTURE(lumped);
    const auto normals = vertex_normals(net);
    const auto set = assemble_coupling(m, net, cuts, normals, lumped);
    for (int i = 0; i < 3; ++i) {
      // rows sum to the lumped curve mass
      const Eigen::VectorXd rows = set.B[i] * Eigen::VectorXd::Ones(m.num_vertices());
      const Eigen::VectorXd mass = lumped_masses(net.curves[i]);
      CHECK((rows - mass).lpNorm<Eigen::Infinity>() < 1e-12 * mass.maxCoeff());
      // N = diag(omega) B
      for (int l = 0; l < net.curves[i].num_vertices(); l += 7) {
        const Eigen::VectorXd bx = set.B[i].row(l).transpose() * normals[i][l].x();
        const Eigen::VectorXd nx = set.Nx[i].row(l).transpose();
        CHECK((bx - nx).norm() < 1e-15);
        const Eigen::VectorXd by = set.B[i].row(l).transpose() * normals[i][l].y();
        const Eigen::VectorXd ny = set.Ny[i].row(l).transpose();
        CHECK((by - ny).norm() < 1e-15);
      }
    }
  }
}

TEST_CASE("entries against composite midpoint quadrature") {
  // closed triangle strictly inside one bulk element, P1 test functions on both sides
  const BulkMesh m = BulkMesh::uniform(1.0, 1);
  PhaseTopology t;
  t.orientation = mat({{1}, {-1}});
  const auto net = build_network({polygon({Vec2(0.15, -0.7), Vec2(0.75, -0.3), Vec2(0.6, -0.6)}, true)}, t, {1.0});
  const Curve& c = net.curves[0];
  const auto set = assemble_coupling(m, net, clip_curves_to_mesh(m, net), false);
  const Eigen::MatrixXd B = set.B[0];
  const int tri = m.locate(c.vertices[0]).element;
  const auto v = m.triangle(tri);
  const int n = 10000;
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      double q = 0.0;
      for (int e = 0; e < 3; ++e) {
        const Vec2 a = c.vertices[c.edge_start(e)], b = c.vertices[c.edge_end(e)];
        for (int j = 0; j < n; ++j) {
          const double s = (j + 0.5) / n;
          const double phi = c.edge_start(e) == l ? 1 - s : (c.edge_end(e) == l ? s : 0.0);
          q += phi * m.barycentric_in_node(m.leaf_node(tri), a + s * (b - a))[k] * (b - a).norm() / n;
        }
      }
      CHECK(std::abs(B(l, v[k]) - q) < 1e-9);
    }
}

TEST_CASE("stale cuts are detected") {
  const auto net = concentric(32);
  const BulkMesh m = BulkMesh::adaptive(net, 4.0, 1, 32);
  const auto cuts = clip_curves_to_mesh(m, net);
  CurveNetwork moved = net;
  moved.curves[0].vertices[0] *= 1.001;
  CHECK_THROWS_AS(assemble_coupling(m, moved, cuts, false), Error);
  const BulkMesh m2 = BulkMesh::adaptive(net, 4.0, 1, 32);
  CHECK_THROWS_AS(assemble_coupling(m2, net, cuts, false), Error);
}

TEST_CASE("well-posedness diagnostic") {
  const auto net = concentric(128);
  const BulkMesh m = BulkMesh::adaptive(net, 4.0, 1, 128);
  const auto normals = vertex_normals(net);
  const auto set = assemble_coupling(m, net, clip_curves_to_mesh(m, net), normals, false);
  const auto rep = check_wellposedness(net, normals, set);
  CHECK(rep.ok());
  CHECK(rep.coupling_rank == 2);

  auto zero = normals;
  for (auto& w : zero[1]) w.setZero();
  const auto bad = check_wellposedness(net, zero, set);
  CHECK_FALSE(bad.ok());
  CHECK_FALSE(bad.curve_has_normal[1]);
  CHECK(bad.curve_has_normal[0]);
  CHECK(bad.summary().find("2=ZERO") != std::string::npos);
}
