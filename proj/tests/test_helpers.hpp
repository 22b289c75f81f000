#pragma once

#include "msnet/curve_network.hpp"
#include "msnet/presets.hpp"

#include <cmath>
#include <random>

namespace msnet::test {

constexpr double kPi = 3.14159265358979323846;

inline Curve polygon(std::vector<Vec2> v, bool closed) {
  Curve c;
  c.vertices = std::move(v);
  c.closed = closed;
  return c;
}

inline Eigen::MatrixXi mat(std::initializer_list<std::initializer_list<int>> rows) {
  Eigen::MatrixXi m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (int v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Two-phase network of one closed circle.
inline CurveNetwork circle_network(double r, int n, bool ccw = true, double sigma = 1.0, Vec2 c = Vec2::Zero()) {
  PhaseTopology t;
  t.orientation = mat({{1}, {-1}});
  return build_network({polygon(circle_polygon(c, r, n, ccw), true)}, t, {sigma});
}

inline CurveNetwork concentric(int n) {
  PresetOptions o;
  o.vertices = n;
  return make_preset("concentric", o);
}

inline CurveNetwork tiny_double_bubble() {
  PresetOptions o;
  o.vertices = 4;
  return make_preset("double_bubble", o);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace msnet::test
