#include "msnet/interface_coupling.hpp"

#include "msnet/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace msnet {

namespace {

constexpr double kBaryTol = 1e-12;

struct LeafInterval {
  int leaf;
  double t0, t1;  // widened by the barycentric tolerance
  double e0, e1;  // exact, empty when e0 > e1
};

// Parameter range of p + t (q - p), t in [lo, hi], inside tree node `node`,
// with barycentrics allowed down to -tol.
bool node_interval(const Eigen::Vector3d& lp, const Eigen::Vector3d& lq, double tol, double& lo, double& hi) {
  lo = 0.0;
  hi = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double d = lq[k] - lp[k];
    if (d > 0.0) lo = std::max(lo, (-tol - lp[k]) / d);
    else if (d < 0.0) hi = std::min(hi, (-tol - lp[k]) / d);
    else if (lp[k] < -tol) return false;
  }
  return lo <= hi;
}

void descend(const BulkMesh& mesh, int node, const Vec2& p, const Vec2& q, std::vector<LeafInterval>& out) {
  const Eigen::Vector3d lp = mesh.barycentric_in_node(node, p);
  const Eigen::Vector3d lq = mesh.barycentric_in_node(node, q);
  double lo, hi;
  if (!node_interval(lp, lq, kBaryTol, lo, hi)) return;
  const MeshNode& n = mesh.nodes()[node];
  if (n.is_leaf()) {
    double e0, e1;
    if (!node_interval(lp, lq, 0.0, e0, e1)) e0 = 1.0, e1 = 0.0;
    out.push_back({mesh.leaf_id(node), lo, hi, e0, e1});
    return;
  }
  descend(mesh, n.child[0], p, q, out);
  descend(mesh, n.child[1], p, q, out);
}

std::vector<CutSegment> clip_edge(const BulkMesh& mesh, const Vec2& p, const Vec2& q) {
  std::vector<LeafInterval> hits;
  descend(mesh, 0, p, q, hits);
  descend(mesh, 1, p, q, hits);
  const double len = (q - p).norm();
  const double tol = 1e-12 * mesh.H() / len;

  std::vector<double> bp = {0.0, 1.0};
  for (const auto& h : hits) {
    const double a = h.e0 <= h.e1 ? h.e0 : h.t0, b = h.e0 <= h.e1 ? h.e1 : h.t1;
    if (a > 0.0 && a < 1.0) bp.push_back(a);
    if (b > 0.0 && b < 1.0) bp.push_back(b);
  }
  std::sort(bp.begin(), bp.end());
  std::vector<double> merged = {0.0};
  for (double t : bp)
    if (t - merged.back() > tol) merged.push_back(t);
  if (1.0 - merged.back() > tol) merged.push_back(1.0);
  else merged.back() = 1.0;

  std::vector<CutSegment> segs;
  for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
    const double a = merged[k], b = merged[k + 1];
    int best = -1;
    for (const auto& h : hits)
      if (h.t0 <= a + tol && h.t1 >= b - tol && (best < 0 || h.leaf < best)) best = h.leaf;
    if (best < 0) {
      std::ostringstream os;
      os << "no element covers the edge (" << p.x() << ", " << p.y() << ")-(" << q.x() << ", " << q.y()
         << ") on [" << a << ", " << b << "]";
      throw Error(ErrorKind::WalkFailure, os.str());
    }
    if (!segs.empty() && segs.back().element == best) {
      segs.back().t1 = b;
    } else {
      segs.push_back({best, a, b, Vec2::Zero(), Vec2::Zero()});
    }
  }
  for (auto& s : segs) {
    s.p0 = p + s.t0 * (q - p);
    s.p1 = p + s.t1 * (q - p);
  }
  return segs;
}

Eigen::Vector3d bary_in_leaf(const BulkMesh& mesh, int leaf, const Vec2& x) {
  return mesh.barycentric_in_node(mesh.leaf_node(leaf), x);
}

}  // namespace

std::uint64_t network_fingerprint(const CurveNetwork& network) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(network.curves.size());
  for (const auto& c : network.curves) {
    mix(c.vertices.size());
    mix(c.closed);
    for (const auto& v : c.vertices) {
      std::uint64_t bits;
      std::memcpy(&bits, &v.x(), 8);
      mix(bits);
      std::memcpy(&bits, &v.y(), 8);
      mix(bits);
    }
  }
  return h;
}

CutSegmentList clip_curves_to_mesh(const BulkMesh& mesh, const CurveNetwork& network) {
  CutSegmentList out;
  out.mesh_revision = mesh.revision();
  out.network_hash = network_fingerprint(network);
  out.segments.resize(network.curves.size());
  for (std::size_t i = 0; i < network.curves.size(); ++i) {
    const Curve& c = network.curves[i];
    out.segments[i].resize(c.num_edges());
    for (int e = 0; e < c.num_edges(); ++e)
      out.segments[i][e] = clip_edge(mesh, c.vertices[c.edge_start(e)], c.vertices[c.edge_end(e)]);
  }
  return out;
}

CouplingMatrixSet assemble_coupling(const BulkMesh& mesh, const CurveNetwork& network, const CutSegmentList& cuts,
                                    bool lumped) {
  if (cuts.mesh_revision != mesh.revision() || cuts.network_hash != network_fingerprint(network) ||
      cuts.segments.size() != network.curves.size())
    throw Error(ErrorKind::StaleCuts, "cut segments do not match the current mesh and network");
  CouplingMatrixSet set;
  set.lumped = lumped;
  const double g = 0.5 / std::sqrt(3.0);
  for (std::size_t i = 0; i < network.curves.size(); ++i) {
    const Curve& c = network.curves[i];
    std::vector<Triplet> t;
    for (int e = 0; e < c.num_edges(); ++e) {
      const auto& segs = cuts.segments[i][e];
      const int ka = c.edge_start(e), kb = c.edge_end(e);
      const Vec2 p = c.vertices[ka], q = c.vertices[kb];
      const double len = (q - p).norm();
      if (lumped) {
        const int ea = segs.front().element, eb = segs.back().element;
        const auto va = mesh.triangle(ea), vb = mesh.triangle(eb);
        const Eigen::Vector3d la = bary_in_leaf(mesh, ea, p), lb = bary_in_leaf(mesh, eb, q);
        for (int k = 0; k < 3; ++k) {
          t.emplace_back(ka, va[k], 0.5 * len * la[k]);
          t.emplace_back(kb, vb[k], 0.5 * len * lb[k]);
        }
        continue;
      }
      for (const auto& s : segs) {
        const auto v = mesh.triangle(s.element);
        const double w = 0.5 * len * (s.t1 - s.t0);
        for (double r : {0.5 - g, 0.5 + g}) {
          const double tt = s.t0 + r * (s.t1 - s.t0);
          const Eigen::Vector3d l = bary_in_leaf(mesh, s.element, p + tt * (q - p));
          for (int k = 0; k < 3; ++k) {
            t.emplace_back(ka, v[k], w * (1.0 - tt) * l[k]);
            t.emplace_back(kb, v[k], w * tt * l[k]);
          }
        }
      }
    }
    SparseMatrix B(c.num_vertices(), mesh.num_vertices());
    B.setFromTriplets(t.begin(), t.end());
    B.prune(0.0);
    set.B.push_back(std::move(B));
  }
  return set;
}

void apply_normals(CouplingMatrixSet& set, const VertexNormalField& normals) {
  if (normals.size() != set.B.size()) throw Error(ErrorKind::DimensionMismatch, "normal field does not match coupling");
  set.Nx.resize(set.B.size());
  set.Ny.resize(set.B.size());
  for (std::size_t i = 0; i < set.B.size(); ++i) {
    const auto& w = normals[i];
    if (static_cast<Eigen::Index>(w.size()) != set.B[i].rows())
      throw Error(ErrorKind::DimensionMismatch, "normal field does not match coupling rows");
    Eigen::VectorXd wx(w.size()), wy(w.size());
    for (std::size_t l = 0; l < w.size(); ++l) {
      wx[l] = w[l].x();
      wy[l] = w[l].y();
    }
    set.Nx[i] = wx.asDiagonal() * set.B[i];
    set.Ny[i] = wy.asDiagonal() * set.B[i];
  }
}

CouplingMatrixSet assemble_coupling(const BulkMesh& mesh, const CurveNetwork& network, const CutSegmentList& cuts,
                                    const VertexNormalField& normals, bool lumped) {
  auto set = assemble_coupling(mesh, network, cuts, lumped);
  apply_normals(set, normals);
  return set;
}

bool WellposednessReport::ok() const {
  return coupling_rank == 2 && std::all_of(curve_has_normal.begin(), curve_has_normal.end(), [](bool b) { return b; });
}

std::string WellposednessReport::summary() const {
  std::ostringstream os;
  os << "normals:";
  for (std::size_t i = 0; i < curve_has_normal.size(); ++i)
    os << " " << (i + 1) << "=" << (curve_has_normal[i] ? "ok" : "ZERO");
  os << " coupling_rank=" << coupling_rank;
  return os.str();
}

WellposednessReport check_wellposedness(const CurveNetwork& network, const VertexNormalField& normals,
                                        const CouplingMatrixSet& coupling) {
  WellposednessReport r;
  for (std::size_t i = 0; i < network.curves.size(); ++i) {
    const Curve& c = network.curves[i];
    bool any = false;
    const int lo = c.closed ? 0 : 1, hi = c.closed ? c.num_vertices() : c.num_vertices() - 1;
    for (int l = lo; l < hi; ++l) any = any || normals[i][l].norm() > 1e-12;
    r.curve_has_normal.push_back(any);
  }
  const auto& O = network.topology.orientation;
  const int ip = static_cast<int>(O.rows());
  // Column k of G_i holds sum_l omega_l B_{l,k}; combine per reduced phase.
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  std::vector<Eigen::MatrixXd> per_curve;
  for (std::size_t i = 0; i < network.curves.size(); ++i) {
    Eigen::MatrixXd W(2, normals[i].size());
    for (std::size_t l = 0; l < normals[i].size(); ++l) W.col(l) = normals[i][l];
    per_curve.push_back(W * coupling.B[i]);
  }
  for (int j = 0; j + 1 < ip; ++j) {
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(2, coupling.B.empty() ? 0 : coupling.B[0].cols());
    for (std::size_t i = 0; i < per_curve.size(); ++i) {
      const int coef = O(j, i) - O(ip - 1, i);
      if (coef) V += coef * per_curve[i];
    }
    gram += V * V.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gram);
  const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  r.singular_values = {ev[1], ev[0]};
  r.coupling_rank = 0;
  for (double s : r.singular_values)
    if (s > 1e-10 * r.singular_values[0]) ++r.coupling_rank;
  if (r.singular_values[0] == 0.0) r.coupling_rank = 0;
  return r;
}

}  // namespace msnet
