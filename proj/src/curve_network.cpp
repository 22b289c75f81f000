#include "msnet/curve_network.hpp"

#include "msnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace msnet {

namespace {

void require_nondegenerate(const Curve& c) {
  const int nmin = c.closed ? 3 : 2;
  if (c.num_vertices() < nmin) {
    std::ostringstream os;
    os << "curve " << c.id << " has " << c.num_vertices() << " vertices (need " << nmin << ")";
    throw Error(ErrorKind::DegenerateCurve, os.str());
  }
  for (int e = 0; e < c.num_edges(); ++e) {
    const double len = c.edge_length(e);
    if (!(len > 0.0) || !std::isfinite(len)) {
      std::ostringstream os;
      os << "curve " << c.id << " edge " << e << " has length " << len;
      throw Error(ErrorKind::DegenerateCurve, os.str());
    }
  }
}

int endpoint_index(const Curve& c, int end) { return end == 0 ? 0 : c.num_vertices() - 1; }

// (curve, end) -> junction index, with full validation of the junction list.
std::map<std::pair<int, int>, int> junction_lookup(const PhaseTopology& topo,
                                                   const std::vector<Curve>& curves) {
  std::map<std::pair<int, int>, int> owner;
  for (int k = 0; k < topo.num_junctions(); ++k) {
    const auto& j = topo.junctions[k];
    for (int a = 0; a < 3; ++a) {
      const int c = j.curves[a];
      if (c < 0 || c >= static_cast<int>(curves.size()))
        throw Error(ErrorKind::InvalidTopology, "junction " + std::to_string(k) + " references missing curve");
      if (j.ends[a] != 0 && j.ends[a] != 1)
        throw Error(ErrorKind::InvalidTopology, "junction endpoint selector must be 0 or 1");
      if (curves[c].closed)
        throw Error(ErrorKind::InvalidTopology, "closed curve " + std::to_string(c + 1) + " used in a junction");
      if (a > 0 && j.curves[a] <= j.curves[a - 1])
        throw Error(ErrorKind::InvalidTopology, "junction curves must be distinct and ascending");
      if (!owner.emplace(std::make_pair(c, j.ends[a]), k).second)
        throw Error(ErrorKind::InvalidTopology, "curve endpoint used by two junctions");
    }
  }
  for (int c = 0; c < static_cast<int>(curves.size()); ++c) {
    if (curves[c].closed) continue;
    for (int end = 0; end < 2; ++end)
      if (!owner.count({c, end}))
        throw Error(ErrorKind::InvalidTopology,
                    "open curve " + std::to_string(c + 1) + " has a free endpoint");
  }
  return owner;
}

void check_orientation(const Eigen::MatrixXi& O) {
  if (O.rows() < 2 || O.cols() < 1) throw Error(ErrorKind::InvalidTopology, "orientation matrix too small");
  for (int i = 0; i < O.cols(); ++i) {
    int plus = 0, minus = 0;
    for (int p = 0; p < O.rows(); ++p) {
      const int v = O(p, i);
      if (v == 1) ++plus;
      else if (v == -1) ++minus;
      else if (v != 0) throw Error(ErrorKind::InvalidTopology, "orientation entries must lie in {-1,0,1}");
    }
    if (plus != 1 || minus != 1)
      throw Error(ErrorKind::InvalidTopology,
                  "orientation column " + std::to_string(i + 1) + " needs exactly one +1 and one -1");
  }
}

void check_phase_chains(const CurveNetwork& net) {
  const auto& topo = net.topology;
  std::map<std::pair<int, int>, int> owner;
  for (int k = 0; k < topo.num_junctions(); ++k)
    for (int a = 0; a < 3; ++a) owner[{topo.junctions[k].curves[a], topo.junctions[k].ends[a]}] = k;
  for (int p = 0; p < topo.num_phases(); ++p) {
    std::vector<int> count(topo.num_junctions(), 0);
    for (int i = 0; i < topo.num_curves(); ++i) {
      if (topo.orientation(p, i) == 0 || net.curves[i].closed) continue;
      ++count[owner.at({i, 0})];
      ++count[owner.at({i, 1})];
    }
    for (int n : count)
      if (n != 0 && n != 2)
        throw Error(ErrorKind::OpenChainNotClosed,
                    "boundary of phase " + std::to_string(p + 1) + " is not a union of closed loops");
  }
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_seg = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
           std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
  };
  if (d1 == 0 && on_seg(a, b, c)) return true;
  if (d2 == 0 && on_seg(a, b, d)) return true;
  if (d3 == 0 && on_seg(c, d, a)) return true;
  if (d4 == 0 && on_seg(c, d, b)) return true;
  return false;
}

}  // namespace

double Curve::length() const {
  double s = 0.0;
  for (int e = 0; e < num_edges(); ++e) s += edge_length(e);
  return s;
}

int CurveNetwork::total_vertices() const {
  int n = 0;
  for (const auto& c : curves) n += c.num_vertices();
  return n;
}

CurveNetwork build_network(std::vector<Curve> curves, PhaseTopology topology, std::vector<double> sigma) {
  if (curves.empty()) throw Error(ErrorKind::InvalidTopology, "network has no curves");
  const int ic = static_cast<int>(curves.size());
  if (topology.num_curves() != ic)
    throw Error(ErrorKind::InvalidTopology, "orientation matrix has " + std::to_string(topology.num_curves()) +
                                                " columns for " + std::to_string(ic) + " curves");
  if (static_cast<int>(sigma.size()) != ic)
    throw Error(ErrorKind::TensionViolation, "need one surface tension per curve");
  check_orientation(topology.orientation);
  for (auto& c : curves) require_nondegenerate(c);
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::TensionViolation, "surface tensions must be positive");

  for (auto& j : topology.junctions) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return j.curves[a] < j.curves[b]; });
    JunctionSpec s;
    for (int a = 0; a < 3; ++a) {
      s.curves[a] = j.curves[idx[a]];
      s.ends[a] = j.ends[idx[a]];
    }
    j = s;
  }
  junction_lookup(topology, curves);

  double scale = 1.0;
  for (const auto& c : curves)
    for (const auto& v : c.vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  for (int k = 0; k < topology.num_junctions(); ++k) {
    const auto& j = topology.junctions[k];
    const Vec2 p = curves[j.curves[0]].vertices[endpoint_index(curves[j.curves[0]], j.ends[0])];
    for (int a = 1; a < 3; ++a) {
      Vec2& q = curves[j.curves[a]].vertices[endpoint_index(curves[j.curves[a]], j.ends[a])];
      if ((q - p).norm() > 1e-12 * scale)
        throw Error(ErrorKind::InvalidTopology, "junction " + std::to_string(k + 1) + " endpoints do not coincide");
      q = p;
    }
    const double s1 = sigma[j.curves[0]], s2 = sigma[j.curves[1]], s3 = sigma[j.curves[2]];
    if (s1 > s2 + s3 || s2 > s1 + s3 || s3 > s1 + s2)
      throw Error(ErrorKind::TensionViolation,
                  "tensions at junction " + std::to_string(k + 1) + " violate the triangle inequality");
  }
  for (const auto& c : curves) require_nondegenerate(c);

  if (topology.phase_ids.empty()) {
    topology.phase_ids.resize(topology.num_phases());
    std::iota(topology.phase_ids.begin(), topology.phase_ids.end(), 0);
  } else if (static_cast<int>(topology.phase_ids.size()) != topology.num_phases()) {
    throw Error(ErrorKind::InvalidTopology, "phase id list does not match phase count");
  }

  CurveNetwork net{std::move(curves), std::move(topology), std::move(sigma)};
  for (int i = 0; i < ic; ++i) net.curves[i].id = i + 1;
  check_phase_chains(net);
  const auto a = phase_flux_areas(net);
  net.topology.external_phase = static_cast<int>(std::min_element(a.begin(), a.end()) - a.begin());
  return net;
}

bool has_self_intersection(const Curve& curve) {
  const int ne = curve.num_edges();
  for (int e = 0; e < ne; ++e) {
    for (int f = e + 1; f < ne; ++f) {
      const bool adjacent = (f == e + 1) || (curve.closed && e == 0 && f == ne - 1);
      const Vec2 &a = curve.vertices[curve.edge_start(e)], &b = curve.vertices[curve.edge_end(e)];
      const Vec2 &c = curve.vertices[curve.edge_start(f)], &d = curve.vertices[curve.edge_end(f)];
      if (adjacent) {
        // Adjacent edges share one vertex; they only intersect if they fold back.
        const Vec2 u = b - a, v = d - c;
        if (cross(u, v) == 0.0 && u.dot(v) < 0.0) return true;
        continue;
      }
      if (segments_cross(a, b, c, d)) return true;
    }
  }
  return false;
}

void validate_geometry(const CurveNetwork& network) {
  for (const auto& c : network.curves)
    if (has_self_intersection(c))
      throw Error(ErrorKind::InvalidTopology, "curve " + std::to_string(c.id) + " self-intersects");
  const int ic = network.num_curves();
  for (int i = 0; i < ic; ++i) {
    for (int k = i + 1; k < ic; ++k) {
      const Curve &a = network.curves[i], &b = network.curves[k];
      for (int e = 0; e < a.num_edges(); ++e) {
        const Vec2 &p = a.vertices[a.edge_start(e)], &q = a.vertices[a.edge_end(e)];
        for (int f = 0; f < b.num_edges(); ++f) {
          const Vec2 &r = b.vertices[b.edge_start(f)], &s = b.vertices[b.edge_end(f)];
          if (!segments_cross(p, q, r, s)) continue;
          // Contact through a shared junction point is allowed.
          const bool shared = p == r || p == s || q == r || q == s;
          if (!shared)
            throw Error(ErrorKind::InvalidTopology,
                        "curves " + std::to_string(a.id) + " and " + std::to_string(b.id) + " intersect");
        }
      }
    }
  }
}

std::vector<Vec2> edge_normals(const Curve& curve) {
  require_nondegenerate(curve);
  std::vector<Vec2> nu(curve.num_edges());
  for (int e = 0; e < curve.num_edges(); ++e) {
    const Vec2 d = curve.edge_vector(e);
    nu[e] = perp(d) / d.norm();
  }
  return nu;
}

namespace {

// Vertex weighting shared by the plain and half-step normals: `a[e]` is the
// (possibly averaged) edge vector, `len[e]` the edge length used as weight.
std::vector<Vec2> weighted_vertex_normals(const Curve& c, const std::vector<Vec2>& a,
                                          const std::vector<double>& len) {
  const int n = c.num_vertices(), ne = c.num_edges();
  std::vector<Vec2> w(n);
  for (int j = 0; j < n; ++j) {
    const int prev = c.closed ? (j - 1 + ne) % ne : j - 1;
    const int next = c.closed ? j : (j < ne ? j : -1);
    Vec2 s = Vec2::Zero();
    double l = 0.0;
    if (prev >= 0) {
      s += perp(a[prev]);
      l += len[prev];
    }
    if (next >= 0) {
      s += perp(a[next]);
      l += len[next];
    }
    w[j] = s / l;
  }
  return w;
}

}  // namespace

std::vector<Vec2> vertex_normals(const Curve& curve) {
  require_nondegenerate(curve);
  std::vector<Vec2> a(curve.num_edges());
  std::vector<double> len(curve.num_edges());
  for (int e = 0; e < curve.num_edges(); ++e) {
    a[e] = curve.edge_vector(e);
    len[e] = a[e].norm();
  }
  return weighted_vertex_normals(curve, a, len);
}

VertexNormalField vertex_normals(const CurveNetwork& network) {
  VertexNormalField out;
  out.reserve(network.curves.size());
  for (const auto& c : network.curves) out.push_back(vertex_normals(c));
  return out;
}

std::vector<Vec2> half_step_vertex_normals(const Curve& old_curve, const Curve& new_curve) {
  if (old_curve.num_vertices() != new_curve.num_vertices() || old_curve.closed != new_curve.closed)
    throw Error(ErrorKind::ConnectivityMismatch, "curve " + std::to_string(old_curve.id) + " changed connectivity");
  require_nondegenerate(old_curve);
  const int ne = old_curve.num_edges();
  std::vector<Vec2> a(ne);
  std::vector<double> len(ne);
  for (int e = 0; e < ne; ++e) {
    a[e] = 0.5 * (old_curve.edge_vector(e) + new_curve.edge_vector(e));
    len[e] = old_curve.edge_length(e);
  }
  return weighted_vertex_normals(old_curve, a, len);
}

VertexNormalField half_step_vertex_normals(const CurveNetwork& old_network, const CurveNetwork& new_network) {
  if (old_network.curves.size() != new_network.curves.size())
    throw Error(ErrorKind::ConnectivityMismatch, "curve count changed");
  VertexNormalField out;
  out.reserve(old_network.curves.size());
  for (std::size_t i = 0; i < old_network.curves.size(); ++i)
    out.push_back(half_step_vertex_normals(old_network.curves[i], new_network.curves[i]));
  return out;
}

EdgewiseField nodal_field(const Curve& curve, std::span<const double> nodal) {
  if (static_cast<int>(nodal.size()) != curve.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "nodal field size does not match curve");
  EdgewiseField f;
  f.values.resize(curve.num_edges());
  for (int e = 0; e < curve.num_edges(); ++e)
    f.values[e] = {nodal[curve.edge_start(e)], nodal[curve.edge_end(e)]};
  return f;
}

EdgewiseField edge_constant_field(const Curve& curve, std::span<const double> per_edge) {
  if (static_cast<int>(per_edge.size()) != curve.num_edges())
    throw Error(ErrorKind::DimensionMismatch, "edge field size does not match curve");
  EdgewiseField f;
  f.values.resize(curve.num_edges());
  for (int e = 0; e < curve.num_edges(); ++e) f.values[e] = {per_edge[e], per_edge[e]};
  return f;
}

double lumped_inner_product(const Curve& curve, const EdgewiseField& u, const EdgewiseField& v) {
  if (static_cast<int>(u.values.size()) != curve.num_edges() || static_cast<int>(v.values.size()) != curve.num_edges())
    throw Error(ErrorKind::DimensionMismatch, "edgewise field size does not match curve");
  double s = 0.0;
  for (int e = 0; e < curve.num_edges(); ++e)
    s += 0.5 * curve.edge_length(e) * (u.values[e][0] * v.values[e][0] + u.values[e][1] * v.values[e][1]);
  return s;
}

double lumped_inner_product(const Curve& curve, std::span<const double> u, std::span<const double> v) {
  return lumped_inner_product(curve, nodal_field(curve, u), nodal_field(curve, v));
}

Eigen::VectorXd lumped_masses(const Curve& curve) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(curve.num_vertices());
  for (int e = 0; e < curve.num_edges(); ++e) {
    const double h = 0.5 * curve.edge_length(e);
    m[curve.edge_start(e)] += h;
    m[curve.edge_end(e)] += h;
  }
  return m;
}

SparseMatrix curve_stiffness(const Curve& curve) {
  require_nondegenerate(curve);
  const int n = curve.num_vertices();
  std::vector<Triplet> t;
  t.reserve(4 * curve.num_edges());
  for (int e = 0; e < curve.num_edges(); ++e) {
    const int a = curve.edge_start(e), b = curve.edge_end(e);
    const double k = 1.0 / curve.edge_length(e);
    t.emplace_back(a, a, k);
    t.emplace_back(b, b, k);
    t.emplace_back(a, b, -k);
    t.emplace_back(b, a, -k);
  }
  SparseMatrix E(n, n);
  E.setFromTriplets(t.begin(), t.end());
  return E;
}

CurveMatrixSet assemble_curve_matrices(const CurveNetwork& network, const VertexNormalField& normals) {
  if (normals.size() != network.curves.size())
    throw Error(ErrorKind::DimensionMismatch, "normal field does not match network");
  CurveMatrixSet set;
  set.curves.reserve(network.curves.size());
  for (std::size_t i = 0; i < network.curves.size(); ++i) {
    const Curve& c = network.curves[i];
    if (static_cast<int>(normals[i].size()) != c.num_vertices())
      throw Error(ErrorKind::DimensionMismatch, "normal field does not match curve");
    CurveMatrices m;
    m.mass = lumped_masses(c);
    m.mass_normal.resize(c.num_vertices());
    for (int l = 0; l < c.num_vertices(); ++l) m.mass_normal[l] = m.mass[l] * normals[i][l];
    m.stiffness = curve_stiffness(c);
    m.sigma = network.sigma[i];
    set.curves.push_back(std::move(m));
  }
  return set;
}

double weighted_length(const CurveNetwork& network) {
  double s = 0.0;
  for (std::size_t i = 0; i < network.curves.size(); ++i) s += network.sigma[i] * network.curves[i].length();
  return s;
}

double flux_area(const Curve& curve) {
  double s = 0.0;
  for (int e = 0; e < curve.num_edges(); ++e) {
    const Vec2& a = curve.vertices[curve.edge_start(e)];
    const Vec2& b = curve.vertices[curve.edge_end(e)];
    s += 0.5 * (a + b).dot(perp(b - a));
  }
  return 0.5 * s;
}

std::vector<double> phase_flux_areas(const CurveNetwork& network) {
  const auto& O = network.topology.orientation;
  std::vector<double> s(network.curves.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = flux_area(network.curves[i]);
  std::vector<double> a(O.rows(), 0.0);
  for (int p = 0; p < O.rows(); ++p)
    for (int i = 0; i < O.cols(); ++i) a[p] += O(p, i) * s[i];
  return a;
}

std::vector<double> phase_areas(const CurveNetwork& network, double domain_area) {
  check_phase_chains(network);
  auto a = phase_flux_areas(network);
  const int ext = network.topology.external_phase;
  if (ext >= 0) a[ext] += domain_area;
  return a;
}

namespace {

void erase_curve(CurveNetwork& net, int i) {
  auto& topo = net.topology;
  Eigen::MatrixXi O(topo.num_phases(), topo.num_curves() - 1);
  for (int k = 0, col = 0; k < topo.num_curves(); ++k)
    if (k != i) O.col(col++) = topo.orientation.col(k);
  topo.orientation = O;
  net.curves.erase(net.curves.begin() + i);
  net.sigma.erase(net.sigma.begin() + i);
  for (auto& j : topo.junctions)
    for (int& cc : j.curves)
      if (cc > i) --cc;
}

// Two junction curves i, d joining the same pair of junctions, both short,
// with a common third curve e: the lens between i and d is removed and e is
// closed up. Returns false if the configuration is anything else.
bool collapse_lens(CurveNetwork& net, int i, double threshold, double time, std::vector<SurgeryEvent>& events) {
  auto& topo = net.topology;
  std::vector<int> js;
  for (int k = 0; k < topo.num_junctions(); ++k)
    for (int cc : topo.junctions[k].curves)
      if (cc == i) js.push_back(k);
  if (js.size() != 2) return false;
  auto others = [&](int k) {
    std::vector<int> o;
    for (int cc : topo.junctions[k].curves)
      if (cc != i) o.push_back(cc);
    std::sort(o.begin(), o.end());
    return o;
  };
  const auto o0 = others(js[0]), o1 = others(js[1]);
  if (o0.size() != 2 || o0 != o1) return false;
  int d = -1, e = -1;
  for (int cc : o0) {
    if (net.curves[cc].length() < threshold && d < 0) d = cc;
    else e = cc;
  }
  if (d < 0 || e < 0) return false;
  int lens = -1, outer = -1;
  for (int p = 0; p < topo.num_phases(); ++p) {
    if (topo.orientation(p, i) != 0 && topo.orientation(p, d) != 0 && topo.orientation(p, e) == 0) lens = p;
    else if (topo.orientation(p, i) != 0) outer = p;
  }
  if (lens < 0 || outer < 0) return false;

  SurgeryEvent ev;
  ev.time = time;
  ev.curve_id = net.curves[i].id;
  ev.area = std::abs(topo.orientation(lens, i) * flux_area(net.curves[i]) +
                     topo.orientation(lens, d) * flux_area(net.curves[d]));
  ev.from_phase_id = topo.phase_ids[lens];
  ev.to_phase_id = topo.phase_ids[outer];
  SurgeryEvent ev2 = ev;
  ev2.curve_id = net.curves[d].id;
  ev2.area = 0.0;

  net.curves[e].closed = true;
  const int a = std::max(js[0], js[1]), b = std::min(js[0], js[1]);
  topo.junctions.erase(topo.junctions.begin() + a);
  topo.junctions.erase(topo.junctions.begin() + b);
  erase_curve(net, std::max(i, d));
  erase_curve(net, std::min(i, d));

  if (topo.orientation.row(lens).cwiseAbs().sum() == 0 && lens != topo.external_phase) {
    Eigen::MatrixXi R(topo.num_phases() - 1, topo.num_curves());
    for (int p = 0, row = 0; p < topo.num_phases(); ++p)
      if (p != lens) R.row(row++) = topo.orientation.row(p);
    topo.orientation = R;
    topo.phase_ids.erase(topo.phase_ids.begin() + lens);
    if (topo.external_phase > lens) --topo.external_phase;
    ev.phase_dropped = ev2.phase_dropped = true;
  }
  events.push_back(ev);
  events.push_back(ev2);
  return true;
}

}  // namespace

SurgeryResult surgery(const CurveNetwork& network, double length_threshold, double time) {
  SurgeryResult res{network, {}};
  CurveNetwork& net = res.network;
  for (int i = 0; i < net.num_curves();) {
    const Curve& c = net.curves[i];
    // junction curves may get short without vanishing; only give up once
    // they are down to about one edge
    const double limit = c.closed ? length_threshold : length_threshold / 3.0;
    if (c.length() >= limit) {
      ++i;
      continue;
    }
    if (!c.closed) {
      if (!collapse_lens(net, i, length_threshold, time, res.events))
        throw Error(ErrorKind::UnsupportedSurgery,
                    "junction curve " + std::to_string(c.id) + " degenerated");
      i = 0;
      continue;
    }
    auto& topo = net.topology;
    if (net.num_curves() == 1)
      throw Error(ErrorKind::UnsupportedSurgery, "cannot remove the last curve of the network");
    const double s = flux_area(c);
    int inner = -1, outer = -1;
    for (int p = 0; p < topo.num_phases(); ++p) {
      if (topo.orientation(p, i) * s > 0) inner = p;
      else if (topo.orientation(p, i) != 0) outer = p;
    }
    SurgeryEvent ev;
    ev.time = time;
    ev.curve_id = c.id;
    ev.area = std::abs(s);
    ev.from_phase_id = topo.phase_ids[inner];
    ev.to_phase_id = topo.phase_ids[outer];

    Eigen::MatrixXi O(topo.num_phases(), topo.num_curves() - 1);
    for (int k = 0, col = 0; k < topo.num_curves(); ++k)
      if (k != i) O.col(col++) = topo.orientation.col(k);
    net.curves.erase(net.curves.begin() + i);
    net.sigma.erase(net.sigma.begin() + i);
    for (auto& j : topo.junctions)
      for (int& cc : j.curves)
        if (cc > i) --cc;

    if (O.row(inner).cwiseAbs().sum() == 0 && inner != topo.external_phase) {
      Eigen::MatrixXi R(O.rows() - 1, O.cols());
      for (int p = 0, row = 0; p < O.rows(); ++p)
        if (p != inner) R.row(row++) = O.row(p);
      O = R;
      topo.phase_ids.erase(topo.phase_ids.begin() + inner);
      if (topo.external_phase > inner) --topo.external_phase;
      ev.phase_dropped = true;
    }
    topo.orientation = O;
    res.events.push_back(ev);
  }
  for (int i = 0; i < net.num_curves(); ++i) net.curves[i].id = i + 1;
  return res;
}

std::vector<double> equidistribution_ratio(const CurveNetwork& network) {
  std::vector<double> r;
  r.reserve(network.curves.size());
  for (const auto& c : network.curves) {
    double lo = INFINITY, hi = 0.0;
    for (int e = 0; e < c.num_edges(); ++e) {
      const double l = c.edge_length(e);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
    r.push_back(hi / lo);
  }
  return r;
}

std::vector<std::vector<int>> position_dof_map(const CurveNetwork& network, int& num_dofs) {
  const auto& topo = network.topology;
  std::map<std::pair<int, int>, int> owner;
  for (int k = 0; k < topo.num_junctions(); ++k)
    for (int a = 0; a < 3; ++a) owner[{topo.junctions[k].curves[a], topo.junctions[k].ends[a]}] = k;
  std::vector<int> jdof(topo.num_junctions(), -1);
  std::vector<std::vector<int>> map(network.curves.size());
  int next = 0;
  for (int i = 0; i < network.num_curves(); ++i) {
    const Curve& c = network.curves[i];
    map[i].resize(c.num_vertices());
    for (int l = 0; l < c.num_vertices(); ++l) {
      int k = -1;
      if (!c.closed && (l == 0 || l == c.num_vertices() - 1)) {
        auto it = owner.find({i, l == 0 ? 0 : 1});
        if (it != owner.end()) k = it->second;
      }
      if (k < 0) {
        map[i][l] = next++;
      } else {
        if (jdof[k] < 0) jdof[k] = next++;
        map[i][l] = jdof[k];
      }
    }
  }
  num_dofs = next;
  return map;
}

}  // namespace msnet
