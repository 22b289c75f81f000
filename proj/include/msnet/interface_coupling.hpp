#pragma once

#include "msnet/bulk_mesh.hpp"
#include "msnet/curve_network.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace msnet {

struct CutSegment {
  int element = -1;
  double t0 = 0.0, t1 = 1.0;  // parameter interval on the edge
  Vec2 p0, p1;
};

/// segments[curve][edge] partitions that edge into element-wise pieces.
struct CutSegmentList {
  std::vector<std::vector<std::vector<CutSegment>>> segments;
  std::uint64_t mesh_revision = 0;
  std::uint64_t network_hash = 0;
};

std::uint64_t network_fingerprint(const CurveNetwork& network);

/// Throws WalkFailure if an edge cannot be covered by mesh elements.
CutSegmentList clip_curves_to_mesh(const BulkMesh& mesh, const CurveNetwork& network);

/// Per curve: B (curve nodes x bulk nodes) and the normal-weighted copies
/// Nx = diag(omega_x) B, Ny = diag(omega_y) B.
struct CouplingMatrixSet {
  std::vector<SparseMatrix> B;
  std::vector<SparseMatrix> Nx, Ny;
  bool lumped = false;
};

/// Assembles B only; throws StaleCuts if `cuts` does not belong to (mesh, network).
CouplingMatrixSet assemble_coupling(const BulkMesh& mesh, const CurveNetwork& network,
                                    const CutSegmentList& cuts, bool lumped);

/// B plus normal-weighted blocks.
CouplingMatrixSet assemble_coupling(const BulkMesh& mesh, const CurveNetwork& network,
                                    const CutSegmentList& cuts, const VertexNormalField& normals,
                                    bool lumped);

/// Recomputes Nx, Ny from B for new normals.
void apply_normals(CouplingMatrixSet& set, const VertexNormalField& normals);

struct WellposednessReport {
  std::vector<bool> curve_has_normal;  // condition (a), per curve
  int coupling_rank = 0;               // condition (b) holds when this is 2
  std::vector<double> singular_values;
  bool ok() const;
  std::string summary() const;
};

WellposednessReport check_wellposedness(const CurveNetwork& network, const VertexNormalField& normals,
                                        const CouplingMatrixSet& coupling);

}  // namespace msnet
