#include "msnet/concentric_oracle.hpp"
#include "msnet/error.hpp"
#include "msnet/evolution.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace msnet;
using namespace msnet::test;

namespace {

SchemeOptions coarse(Scheme s) {
  SchemeOptions o;
  o.scheme = s;
  o.N_f = 64;
  return o;
}

double mean_radius(const Curve& c) {
  double s = 0.0;
  for (const auto& v : c.vertices) s += v.norm();
  return s / c.num_vertices();
}

double max_diff(const CurveNetwork& a, const CurveNetwork& b) {
  double d = 0.0;
  for (int i = 0; i < a.num_curves(); ++i)
    for (int l = 0; l < a.curves[i].num_vertices(); ++l)
      d = std::max(d, (a.curves[i].vertices[l] - b.curves[i].vertices[l]).norm());
  return d;
}

}  // namespace

TEST_CASE("one linear step on the concentric circles follows the exact radii") {
  const auto net = concentric(64);
  const auto opt = coarse(Scheme::Linear);
  const auto s0 = initial_state(net, opt);
  CHECK(s0.diag.dirichlet_energy == 0.0);
  StepCheck check;
  const auto s1 = step_linear(s0, 0.05, opt, &check);
  CHECK_FALSE(check.violated);
  const auto R = radii(ConcentricConfig{}, 0.05);
  for (int i = 0; i < 3; ++i) {
    const double r = mean_radius(s1.network.curves[i]);
    CHECK(r < mean_radius(net.curves[i]));
    CHECK(std::abs(r - R[i]) < 0.02);
  }
}

TEST_CASE("circle curvature sign") {
  const double R = 1.5, sigma = 2.0;
  SchemeOptions opt = coarse(Scheme::Linear);
  opt.N_f = 128;
  for (bool ccw : {true, false}) {
    CAPTURE(ccw);
    const auto net = circle_network(R, 256, ccw, sigma);
    const auto s1 = step_linear(initial_state(net, opt), 1e-3, opt);
    // the clockwise circle has the outward normal
    const double expect = ccw ? sigma / R : -sigma / R;
    const Eigen::VectorXd& k = s1.kappa[0];
    CHECK(std::abs(k.mean() - expect) < 1e-3);
    CHECK((k.array() - expect).abs().maxCoeff() < 1e-2);
    const auto s0 = initial_state(net, opt);
    CHECK((s0.kappa[0].array() - expect).abs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("step halving") {
  const auto net = concentric(64);
  const auto opt = coarse(Scheme::Linear);
  auto diff = [&](double tau) {
    const auto s0 = initial_state(net, opt);
    const auto one = step_linear(s0, tau, opt);
    const auto two = step_linear(step_linear(s0, tau / 2, opt), tau / 2, opt);
    return max_diff(one.network, two.network);
  };
  const double d1 = diff(0.04), d2 = diff(0.02);
  MESSAGE("one step vs two half steps: " << d1 << " " << d2);
  CHECK(d1 < 1e-2);
  CHECK(d1 / d2 > 3.0);
}

TEST_CASE("conservative step keeps the phase areas") {
  const auto net = concentric(64);
  const auto opt = coarse(Scheme::Conservative);
  const auto s0 = initial_state(net, opt);
  StepCheck check;
  const auto s1 = step_conservative(s0, 0.064, opt, &check);
  CHECK_FALSE(check.violated);
  CHECK(check.energy_after + check.dissipation <= check.energy_before);
  CHECK(s1.diag.fp_iters > 1);
  CHECK_FALSE(s1.diag.fp_stalled);
  for (int p = 0; p < 3; ++p) CHECK(std::abs(s1.diag.areas[p] - s0.diag.areas[p]) < 1e-10 * s0.diag.areas[p]);

  const auto lin = step_linear(s0, 0.064, coarse(Scheme::Linear));
  CHECK(std::abs(lin.diag.areas[1] - s0.diag.areas[1]) > 1e-4);
}

TEST_CASE("fixed-point tolerance controls the area defect") {
  PresetOptions po;
  po.vertices = 32;
  const auto net = make_preset("double_bubble", po);
  SchemeOptions a = coarse(Scheme::Conservative), b = a;
  a.fp_tol = 1e-8;
  b.fp_tol = 1e-12;
  const auto s0 = initial_state(net, a);
  const auto sa = step_conservative(s0, 0.01, a), sb = step_conservative(s0, 0.01, b);
  CHECK(sb.diag.fp_iters >= sa.diag.fp_iters);
  for (int p = 0; p < 3; ++p) {
    CHECK(std::abs(sa.diag.areas[p] - sb.diag.areas[p]) < 1e-8);
    if (p != net.topology.external_phase) CHECK(std::abs(sb.diag.areas[p] - s0.diag.areas[p]) < 1e-11);
  }
}

TEST_CASE("fixed-point stall is reported, not thrown") {
  const auto net = concentric(32);
  SchemeOptions o = coarse(Scheme::Conservative);
  o.fp_max = 1;
  o.fp_tol = 1e-14;
  const auto s1 = step_conservative(initial_state(net, o), 0.064, o);
  CHECK(s1.diag.fp_stalled);
  CHECK(s1.diag.fp_iters == 1);
  o.fp_tol = 0.0;
  CHECK_THROWS_AS(step_conservative(initial_state(net, o), 0.064, o), Error);
}

TEST_CASE("run bookkeeping") {
  const auto net = concentric(32);
  RunOptions ro;
  ro.scheme = coarse(Scheme::Conservative);
  ro.tau = 0.064;
  ro.T = 0.0;
  const auto r0 = run(net, ro);
  CHECK(r0.history.size() == 1);
  CHECK(r0.final_state.t == 0.0);

  ro.T = 0.15;  // last step clipped
  int calls = 0;
  const auto r = run(net, ro, [&](int, const SchemeState&) { ++calls; });
  REQUIRE(r.history.size() == 4);
  CHECK(calls == 4);
  CHECK(std::abs(r.history[1].t - 0.064) < 1e-15);
  CHECK(r.final_state.t == 0.15);
  CHECK(r.energy_violations == 0);
  CHECK(r.max_vdelta < 1e-9);
  for (std::size_t m = 1; m < r.history.size(); ++m) CHECK(r.history[m].energy < r.history[m - 1].energy);

  ro.tau = -1.0;
  CHECK_THROWS_AS(run(net, ro), Error);
}

TEST_CASE("polygon energy") {
  const int N = 256;
  const auto net = concentric(N);
  const auto s0 = initial_state(net, coarse(Scheme::Linear));
  CHECK(rel(s0.diag.energy, 2.0 * N * 7.5 * std::sin(kPi / N)) < 1e-13);
}

TEST_CASE("small disk is removed by surgery and its area handed over") {
  // both disks belong to one phase, so the small one dissolves into the big one
  PhaseTopology t;
  t.orientation = mat({{-1, -1}, {1, 1}});
  const auto net = build_network({polygon(circle_polygon(Vec2(-1.5, 0), 1.0, 48, true), true),
                                  polygon(circle_polygon(Vec2(1.5, 0), 0.3, 12, true), true)},
                                 t, {1.0, 1.0});
  RunOptions ro;
  ro.scheme = coarse(Scheme::Conservative);
  ro.tau = 0.01;
  ro.T = 0.6;
  const auto r = run(net, ro);
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].curve_id == 2);
  CHECK_FALSE(r.events[0].phase_dropped);
  CHECK(r.final_state.network.num_curves() == 1);
  CHECK(r.final_state.network.topology.num_phases() == 2);
  CHECK(r.final_state.W.cols() == 2);
  // the big disk has absorbed the area up to the removed remnant
  const double before = r.history.front().areas[0];
  const double after = r.history.back().areas[0];
  CHECK(std::abs(after + r.events[0].area - before) < 1e-8);
  CHECK(r.energy_violations == 0);
  CHECK(r.max_vdelta < 1e-8);
}
