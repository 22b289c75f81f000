#pragma once

#include "msnet/curve_network.hpp"
#include "msnet/types.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace msnet {

/// Node of the bisection forest. Vertices are stored as (v0, v1, v2) with
/// refinement edge v0-v1 and newest vertex v2.
struct MeshNode {
  std::array<int, 3> v{};
  int parent = -1;
  std::array<int, 2> child{-1, -1};
  int depth = 0;
  bool is_leaf() const { return child[0] < 0; }
};

struct Location {
  int element = -1;
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();
};

/// Conforming triangulation of [-H, H]^2 obtained by newest-vertex bisection
/// of two macro triangles. Leaves are numbered in depth-first order.
class BulkMesh {
 public:
  /// Uniform mesh with n x n squares (n a power of two), each split in two.
  static BulkMesh uniform(double H, int n);

  /// Fine elements (diameter about sqrt(2) 2H/N_f) near the curves, coarse
  /// (about sqrt(2) 2H/N_c) elsewhere.
  static BulkMesh adaptive(const CurveNetwork& network, double H, int N_c, int N_f);

  double H() const { return H_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(leaves_.size()); }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const Vec2& vertex(int i) const { return vertices_[i]; }
  std::array<int, 3> triangle(int t) const { return nodes_[leaves_[t]].v; }
  const std::vector<MeshNode>& nodes() const { return nodes_; }
  int leaf_node(int t) const { return leaves_[t]; }
  /// Leaf id of a tree node, or -1 for interior nodes.
  int leaf_id(int node) const { return leaf_of_node_[node]; }
  bool on_boundary(int v) const { return boundary_[v] != 0; }
  /// Changes whenever a mesh is built; used to detect stale cut data.
  std::uint64_t revision() const { return revision_; }

  double area(int t) const;
  double diameter(int t) const;

  /// Barycentric coordinates of x with respect to tree node `node`.
  Eigen::Vector3d barycentric_in_node(int node, const Vec2& x) const;

  /// Containing triangle; ties on shared edges go to the lowest leaf id.
  /// Throws OutsideDomain.
  Location locate(const Vec2& x) const;

  /// Value of the P1 function with nodal values `u` at x.
  double evaluate(const Eigen::VectorXd& u, const Vec2& x) const;

 private:
  explicit BulkMesh(double H);
  void bisect(int node);
  void refine(int node);
  int neighbour_across(int node, int a, int b) const;
  int midpoint(int a, int b);
  void finalize();

  double H_ = 1.0;
  std::vector<Vec2> vertices_;
  std::vector<MeshNode> nodes_;
  std::vector<int> leaves_;
  std::vector<int> leaf_of_node_;
  std::vector<char> boundary_;
  std::uint64_t revision_ = 0;

  // Build-time scratch: leaf owners and midpoint of each edge.
  struct EdgeSlot {
    std::array<int, 2> owner{-1, -1};
    int mid = -1;
  };
  std::unordered_map<std::uint64_t, EdgeSlot> edges_;
  void attach(int node);
  void detach(int node);
};

SparseMatrix assemble_stiffness(const BulkMesh& mesh);

/// Consistent P1 mass matrix; used for norms and tests.
SparseMatrix assemble_mass(const BulkMesh& mesh);

Eigen::VectorXd interpolate(const BulkMesh& mesh, const std::function<double(const Vec2&)>& f);

struct MeshAudit {
  bool conforming = true;
  bool positive_areas = true;
  bool covers_domain = true;
  std::string message;
  bool ok() const { return conforming && positive_areas && covers_domain; }
};

/// Full check: edge sharing, orientation, area sum and hanging nodes.
MeshAudit audit_mesh(const BulkMesh& mesh);

void write_mesh(std::ostream& os, const BulkMesh& mesh);

}  // namespace msnet
