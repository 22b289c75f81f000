#pragma once

#include "msnet/types.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace msnet {

/// A polygonal curve. Edge e joins vertex e to vertex e + 1 (cyclically when
/// closed), and its normal is the anticlockwise rotation of the edge vector.
struct Curve {
  int id = 0;
  std::vector<Vec2> vertices;
  bool closed = false;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return closed ? num_vertices() : num_vertices() - 1; }
  int edge_start(int e) const { return e; }
  int edge_end(int e) const { return closed ? (e + 1) % num_vertices() : e + 1; }
  Vec2 edge_vector(int e) const { return vertices[edge_end(e)] - vertices[edge_start(e)]; }
  double edge_length(int e) const { return edge_vector(e).norm(); }
  double length() const;
};

/// Three curves meeting at a triple junction. `ends[k]` selects which endpoint
/// of `curves[k]` sits at the junction: 0 = first vertex, 1 = last vertex.
struct JunctionSpec {
  std::array<int, 3> curves{};
  std::array<int, 3> ends{};
};

struct PhaseTopology {
  /// Phases x curves, entries in {-1, 0, 1}; +1 means the curve normal points
  /// out of the phase.
  Eigen::MatrixXi orientation;
  std::vector<JunctionSpec> junctions;
  /// The single phase in contact with the domain boundary.
  int external_phase = -1;
  /// Stable phase labels; they survive phases being dropped by surgery.
  std::vector<int> phase_ids;

  int num_curves() const { return static_cast<int>(orientation.cols()); }
  int num_phases() const { return static_cast<int>(orientation.rows()); }
  int num_junctions() const { return static_cast<int>(junctions.size()); }
};

struct CurveNetwork {
  std::vector<Curve> curves;
  PhaseTopology topology;
  std::vector<double> sigma;

  int num_curves() const { return static_cast<int>(curves.size()); }
  int total_vertices() const;
};

/// Validates topology, tensions and geometry, snaps junction copies onto a
/// single stored value and determines the external phase.
CurveNetwork build_network(std::vector<Curve> curves, PhaseTopology topology,
                           std::vector<double> sigma);

/// O(N^2) segment test; adjacent edges sharing a vertex are not counted.
bool has_self_intersection(const Curve& curve);

/// On-demand geometric audit: self-intersections and crossings between
/// curves away from shared junction points. Throws InvalidTopology.
void validate_geometry(const CurveNetwork& network);

std::vector<Vec2> edge_normals(const Curve& curve);

/// Lumped L2 projection of the piecewise constant edge normals.
std::vector<Vec2> vertex_normals(const Curve& curve);
VertexNormalField vertex_normals(const CurveNetwork& network);

/// Vertex normals built from the time-averaged edge normals of the linear
/// interpolation between `old_curve` and `new_curve`, projected on the old curve.
std::vector<Vec2> half_step_vertex_normals(const Curve& old_curve, const Curve& new_curve);
VertexNormalField half_step_vertex_normals(const CurveNetwork& old_network,
                                           const CurveNetwork& new_network);

/// Values of a possibly discontinuous piecewise linear function on a curve:
/// per edge, the one-sided limits at the edge start and end.
struct EdgewiseField {
  std::vector<std::array<double, 2>> values;
};

EdgewiseField nodal_field(const Curve& curve, std::span<const double> nodal);
EdgewiseField edge_constant_field(const Curve& curve, std::span<const double> per_edge);

double lumped_inner_product(const Curve& curve, const EdgewiseField& u, const EdgewiseField& v);
double lumped_inner_product(const Curve& curve, std::span<const double> u,
                            std::span<const double> v);

/// Lumped measure of each vertex: half the sum of the adjacent edge lengths.
Eigen::VectorXd lumped_masses(const Curve& curve);

struct CurveMatrices {
  Eigen::VectorXd mass;             // diagonal of C
  std::vector<Vec2> mass_normal;    // diagonal of D: mass_l * omega_l
  SparseMatrix stiffness;           // E, unscaled
  double sigma = 1.0;
};

struct CurveMatrixSet {
  std::vector<CurveMatrices> curves;
};

CurveMatrixSet assemble_curve_matrices(const CurveNetwork& network,
                                       const VertexNormalField& normals);
SparseMatrix curve_stiffness(const Curve& curve);

double weighted_length(const CurveNetwork& network);

/// Half the boundary integral of x . nu over the curve, exact for polygons.
double flux_area(const Curve& curve);

/// Signed area sums  sum_i O_pi * flux_area(curve i)  per phase. Bounded
/// phases get their area; the external phase gets (its area - |domain|).
std::vector<double> phase_flux_areas(const CurveNetwork& network);

/// Per-phase areas; the external phase receives the complement in the domain.
std::vector<double> phase_areas(const CurveNetwork& network, double domain_area);

struct SurgeryEvent {
  double time = 0.0;
  int curve_id = 0;
  double area = 0.0;      // area handed from the enclosed phase to its neighbour
  int from_phase_id = -1;
  int to_phase_id = -1;
  bool phase_dropped = false;
};

struct SurgeryResult {
  CurveNetwork network;
  std::vector<SurgeryEvent> events;
};

/// Removes closed curves shorter than `length_threshold`. A junction curve
/// shorter than a third of it must bound a two-curve lens with another short
/// curve; the lens is removed and the remaining curve closed. Anything else
/// throws UnsupportedSurgery.
SurgeryResult surgery(const CurveNetwork& network, double length_threshold, double time = 0.0);

/// max edge length / min edge length, per curve.
std::vector<double> equidistribution_ratio(const CurveNetwork& network);

/// Per curve and vertex, the merged position unknown. Junction copies share
/// one index; the count is returned through `num_dofs`.
std::vector<std::vector<int>> position_dof_map(const CurveNetwork& network, int& num_dofs);

}  // namespace msnet
