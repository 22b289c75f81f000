#include "msnet/presets.hpp"

#include "msnet/error.hpp"

#include <cmath>

namespace msnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Area between a chord and its circular arc with central angle theta.
double segment_area(double chord, double theta) {
  if (theta == 0.0) return 0.0;
  const double r = chord / (2.0 * std::sin(0.5 * theta));
  return 0.5 * r * r * (theta - std::sin(theta));
}

double arc_length(double chord, double theta) {
  return theta == 0.0 ? chord : chord / (2.0 * std::sin(0.5 * theta)) * theta;
}

// Arc angle in [4pi/3, 2pi) giving the requested segment area.
double solve_arc_angle(double chord, double area) {
  double lo = 4.0 * kPi / 3.0, hi = 2.0 * kPi - 1e-9;
  if (segment_area(chord, lo) > area) throw Error(ErrorKind::ValidationError, "bubble area too small for its wall");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (segment_area(chord, mid) < area ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Standard double bubble on a chord of length 2a: outer arcs 4pi/3 -+ w and a
// wall of angle w bulging into the larger bubble, so all angles are 120 deg.
struct DoubleBubbleShape {
  double a = 0.0;
  double th_small = 0.0, th_big = 0.0, th_wall = 0.0;
};

DoubleBubbleShape standard_double_bubble(double small, double big) {
  auto areas = [](double w, double a) {
    const double c = 2.0 * a;
    return std::pair(segment_area(c, 4.0 * kPi / 3.0 - w) + segment_area(c, w),
                     segment_area(c, 4.0 * kPi / 3.0 + w) - segment_area(c, w));
  };
  double lo = 0.0, hi = 2.0 * kPi / 3.0 - 1e-9;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto [s, b] = areas(mid, 1.0);
    (b / s < big / small ? lo : hi) = mid;
  }
  DoubleBubbleShape d;
  d.th_wall = 0.5 * (lo + hi);
  d.a = std::sqrt(small / areas(d.th_wall, 1.0).first);
  d.th_small = 4.0 * kPi / 3.0 - d.th_wall;
  d.th_big = 4.0 * kPi / 3.0 + d.th_wall;
  return d;
}

std::vector<Vec2> straight(const Vec2& p, const Vec2& q, int edges) {
  std::vector<Vec2> v(edges + 1);
  for (int k = 0; k <= edges; ++k) v[k] = p + (q - p) * (static_cast<double>(k) / edges);
  v.back() = q;
  return v;
}

struct Resolution {
  double h = 0.0;      // target edge length, or
  int per_curve = 0;   // fixed vertex count per curve
  int edges(double length, int min_edges) const {
    if (per_curve > 0) return std::max(min_edges, per_curve - 1);
    return std::max(min_edges, static_cast<int>(std::ceil(length / h - 1e-9)));
  }
};

Curve open_curve(std::vector<Vec2> v) {
  Curve c;
  c.vertices = std::move(v);
  c.closed = false;
  return c;
}

Curve closed_curve(std::vector<Vec2> v) {
  Curve c;
  c.vertices = std::move(v);
  c.closed = true;
  return c;
}

// Right arc, left arc and wall of a standard double bubble whose junctions
// sit at (wall_x, yc -+ a).
std::vector<Curve> double_bubble(double wall_x, double yc, double area_left, double area_right,
                                 const Resolution& res) {
  const bool left_small = area_left <= area_right;
  const DoubleBubbleShape d = standard_double_bubble(std::min(area_left, area_right), std::max(area_left, area_right));
  const double th_left = left_small ? d.th_small : d.th_big;
  const double th_right = left_small ? d.th_big : d.th_small;
  const double chord = 2.0 * d.a;
  const Vec2 top(wall_x, yc + d.a), bottom(wall_x, yc - d.a);
  std::vector<Curve> out;
  out.push_back(open_curve(circular_arc(top, bottom, th_right, false, res.edges(arc_length(chord, th_right), 3))));
  out.push_back(open_curve(circular_arc(top, bottom, th_left, true, res.edges(arc_length(chord, th_left), 3))));
  const int we = res.edges(arc_length(chord, d.th_wall), 2);
  if (d.th_wall < 1e-12) out.push_back(open_curve(straight(top, bottom, we)));
  else out.push_back(open_curve(circular_arc(top, bottom, d.th_wall, !left_small, we)));
  return out;
}

Eigen::MatrixXi matrix(std::initializer_list<std::initializer_list<int>> rows) {
  Eigen::MatrixXi m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (int v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

JunctionSpec junction(int c1, int e1, int c2, int e2, int c3, int e3) {
  JunctionSpec j;
  j.curves = {c1, c2, c3};
  j.ends = {e1, e2, e3};
  return j;
}

// Curves 1..6 of a triple bubble: left arc, top middle arc, bottom middle arc,
// right arc, left wall, right wall. Unit areas except the right bubble.
std::vector<Curve> triple_bubble(double area_right, const Resolution& res) {
  const double th_out = 4.0 * kPi / 3.0;
  const double r1 = std::sqrt(2.0 / (th_out - std::sin(th_out)));
  const double a = r1 * std::sin(0.5 * th_out);
  // Middle bubble: rectangle 2d x 2a plus two caps of angle pi/3 on chords 2d.
  const double cap = (kPi / 3.0 - std::sin(kPi / 3.0)) / (2.0 * std::pow(std::sin(kPi / 6.0), 2));
  // 4 a d + 2 cap d^2 = 1
  const double d = (-4.0 * a + std::sqrt(16.0 * a * a + 8.0 * cap)) / (4.0 * cap);
  const double th_right = area_right == 1.0 ? th_out : solve_arc_angle(2.0 * a, area_right);
  const Vec2 J1(-d, a), J2(-d, -a), J3(d, a), J4(d, -a);
  const auto arc_len = arc_length;
  std::vector<Curve> c;
  c.push_back(open_curve(circular_arc(J1, J2, th_out, true, res.edges(arc_len(2 * a, th_out), 3))));
  c.push_back(open_curve(circular_arc(J1, J3, kPi / 3.0, false, res.edges(arc_len(2 * d, kPi / 3.0), 3))));
  c.push_back(open_curve(circular_arc(J4, J2, kPi / 3.0, false, res.edges(arc_len(2 * d, kPi / 3.0), 3))));
  c.push_back(open_curve(circular_arc(J4, J3, th_right, true, res.edges(arc_len(2 * a, th_right), 3))));
  c.push_back(open_curve(straight(J1, J2, res.edges(2 * a, 2))));
  c.push_back(open_curve(straight(J4, J3, res.edges(2 * a, 2))));
  return c;
}

std::vector<JunctionSpec> triple_bubble_junctions() {
  return {junction(0, 0, 1, 0, 4, 0), junction(0, 1, 2, 1, 4, 1), junction(1, 1, 3, 1, 5, 1),
          junction(2, 0, 3, 0, 5, 0)};
}

std::vector<double> tensions(const PresetOptions& opt, int n) {
  if (opt.sigma.empty()) return std::vector<double>(n, 1.0);
  if (static_cast<int>(opt.sigma.size()) != n)
    throw Error(ErrorKind::ValidationError, "preset needs " + std::to_string(n) + " surface tensions");
  return opt.sigma;
}

}  // namespace

std::vector<Vec2> circular_arc(const Vec2& p, const Vec2& q, double theta, bool ccw, int edges) {
  const double L = (q - p).norm();
  const double r = L / (2.0 * std::sin(0.5 * theta));
  const Vec2 n = perp(q - p) / L;
  const Vec2 mid = 0.5 * (p + q);
  const Vec2 c = ccw ? Vec2(mid + n * r * std::cos(0.5 * theta)) : Vec2(mid - n * r * std::cos(0.5 * theta));
  const double phi0 = std::atan2(p.y() - c.y(), p.x() - c.x());
  const double s = ccw ? 1.0 : -1.0;
  std::vector<Vec2> v(edges + 1);
  for (int k = 0; k <= edges; ++k) {
    const double phi = phi0 + s * theta * k / edges;
    v[k] = c + r * Vec2(std::cos(phi), std::sin(phi));
  }
  v.front() = p;
  v.back() = q;
  return v;
}

std::vector<Vec2> circle_polygon(const Vec2& centre, double r, int vertices, bool ccw) {
  std::vector<Vec2> v(vertices);
  const double s = ccw ? 1.0 : -1.0;
  for (int k = 0; k < vertices; ++k) {
    const double phi = s * 2.0 * kPi * k / vertices;
    v[k] = centre + r * Vec2(std::cos(phi), std::sin(phi));
  }
  return v;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"concentric",
                                                 "double_bubble",
                                                 "double_bubble_plus_disk",
                                                 "triple_bubble_shared_phase",
                                                 "two_double_bubbles",
                                                 "triple_bubble_plus_disk"};
  return names;
}

CurveNetwork make_preset(const std::string& name, const PresetOptions& opt) {
  if (opt.vertices < 3) throw Error(ErrorKind::ValidationError, "need at least 3 vertices per curve");
  Resolution res;
  res.h = 2.0 * kPi / opt.vertices;
  PhaseTopology topo;
  std::vector<Curve> curves;

  if (name == "concentric") {
    const double R[3] = {2.0, 2.5, 3.0};
    const bool ccw[3] = {true, false, true};
    for (int i = 0; i < 3; ++i) curves.push_back(closed_curve(circle_polygon(Vec2::Zero(), R[i], opt.vertices, ccw[i])));
    topo.orientation = matrix({{-1, 0, 1}, {1, 1, 0}, {0, -1, -1}});
  } else if (name == "double_bubble") {
    Resolution fixed;
    fixed.per_curve = opt.vertices;
    curves = double_bubble(0.0, 0.0, 3.139, 3.139, fixed);
    topo.orientation = matrix({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
    topo.junctions = {junction(0, 0, 1, 0, 2, 0), junction(0, 1, 1, 1, 2, 1)};
  } else if (name == "double_bubble_plus_disk") {
    const double rd = opt.disk_radius > 0.0 ? opt.disk_radius : 0.625;
    curves = double_bubble(-1.2, 0.0, 3.139, 3.139, res);
    const int nd = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * rd / res.h)));
    curves.push_back(closed_curve(circle_polygon(Vec2(2.0, 0.0), rd, nd, true)));
    topo.orientation = matrix({{0, -1, 1, 0}, {1, 0, -1, -1}, {-1, 1, 0, 1}});
    topo.junctions = {junction(0, 0, 1, 0, 2, 0), junction(0, 1, 1, 1, 2, 1)};
  } else if (name == "triple_bubble_shared_phase") {
    curves = triple_bubble(1.5, res);
    topo.orientation = matrix({{-1, 0, 0, -1, 1, 1}, {0, 1, 1, 0, -1, -1}, {1, -1, -1, 1, 0, 0}});
    topo.junctions = triple_bubble_junctions();
  } else if (name == "triple_bubble_plus_disk") {
    const double rd = opt.disk_radius > 0.0 ? opt.disk_radius : 0.5;
    curves = triple_bubble(1.0, res);
    const int nd = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * rd / res.h)));
    curves.push_back(closed_curve(circle_polygon(Vec2(2.5, 0.0), rd, nd, true)));
    topo.orientation = matrix({{0, 0, 0, -1, 0, 1, -1},
                               {0, 1, 1, 0, -1, -1, 0},
                               {-1, 0, 0, 0, 1, 0, 0},
                               {1, -1, -1, 1, 0, 0, 1}});
    topo.junctions = triple_bubble_junctions();
  } else if (name == "two_double_bubbles") {
    curves = double_bubble(-0.5, 2.1, 3.14, 6.48, res);
    auto lower = double_bubble(0.0, -1.9, 3.64, 3.64, res);
    curves.insert(curves.end(), lower.begin(), lower.end());
    topo.orientation = matrix({{0, -1, 1, 0, -1, 1}, {1, 0, -1, 1, 0, -1}, {-1, 1, 0, -1, 1, 0}});
    topo.junctions = {junction(0, 0, 1, 0, 2, 0), junction(0, 1, 1, 1, 2, 1), junction(3, 0, 4, 0, 5, 0),
                      junction(3, 1, 4, 1, 5, 1)};
  } else {
    throw Error(ErrorKind::UnknownPreset, "unknown scenario '" + name + "'");
  }
  const int n = static_cast<int>(curves.size());
  return build_network(std::move(curves), std::move(topo), tensions(opt, n));
}

}  // namespace msnet
