#pragma once

#include "msnet/curve_network.hpp"

#include <string>
#include <vector>

namespace msnet {

struct PresetOptions {
  /// Concentric and double_bubble: vertices per curve. Other presets: a
  /// circle of unit radius would get this many vertices.
  int vertices = 128;
  std::vector<double> sigma;  // empty: all ones
  double disk_radius = -1.0;  // negative: scenario default
};

/// Scenario names: concentric, double_bubble, double_bubble_plus_disk,
/// triple_bubble_shared_phase, two_double_bubbles, triple_bubble_plus_disk.
/// Throws UnknownPreset.
CurveNetwork make_preset(const std::string& name, const PresetOptions& opt = {});

const std::vector<std::string>& preset_names();

/// Polyline along the circular arc from p to q with central angle theta,
/// traversed anticlockwise about its centre when `ccw`.
std::vector<Vec2> circular_arc(const Vec2& p, const Vec2& q, double theta, bool ccw, int edges);

/// Closed polygon on a circle, anticlockwise when `ccw`.
std::vector<Vec2> circle_polygon(const Vec2& centre, double r, int vertices, bool ccw);

}  // namespace msnet
