#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

namespace msnet {

using Vec2 = Eigen::Vector2d;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Anticlockwise rotation through pi/2: (a, b) -> (-b, a).
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// One 2D vector per vertex, per curve.
using VertexNormalField = std::vector<std::vector<Vec2>>;

}  // namespace msnet
