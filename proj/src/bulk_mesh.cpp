#include "msnet/bulk_mesh.hpp"

#include "msnet/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>

namespace msnet {

namespace {

std::atomic<std::uint64_t> g_revision{1};

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

int log2_exact(int n, const char* what) {
  if (n < 1 || (n & (n - 1)) != 0) throw Error(ErrorKind::ValidationError, std::string(what) + " must be a power of two");
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// Slab test of segment pq against the box [lo, hi].
bool segment_hits_box(const Vec2& p, const Vec2& q, const Vec2& lo, const Vec2& hi) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = q - p;
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (p[k] < lo[k] || p[k] > hi[k]) return false;
      continue;
    }
    double a = (lo[k] - p[k]) / d[k], b = (hi[k] - p[k]) / d[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 > t1) return false;
  }
  return true;
}

constexpr double kBaryTol = 1e-12;

}  // namespace

BulkMesh::BulkMesh(double H) : H_(H) {
  if (!(H > 0.0)) throw Error(ErrorKind::ValidationError, "domain half-width must be positive");
  vertices_ = {Vec2(-H, -H), Vec2(H, -H), Vec2(H, H), Vec2(-H, H)};
  // Both macro triangles are anticlockwise and share the diagonal as
  // refinement edge, which makes the initial labelling compatible.
  MeshNode a, b;
  a.v = {2, 0, 1};
  b.v = {0, 2, 3};
  nodes_ = {a, b};
  attach(0);
  attach(1);
}

void BulkMesh::attach(int node) {
  const auto& v = nodes_[node].v;
  for (int k = 0; k < 3; ++k) {
    auto& s = edges_[edge_key(v[k], v[(k + 1) % 3])];
    if (s.owner[0] < 0) s.owner[0] = node;
    else s.owner[1] = node;
  }
}

void BulkMesh::detach(int node) {
  const auto& v = nodes_[node].v;
  for (int k = 0; k < 3; ++k) {
    auto& s = edges_[edge_key(v[k], v[(k + 1) % 3])];
    if (s.owner[0] == node) {
      s.owner[0] = s.owner[1];
      s.owner[1] = -1;
    } else if (s.owner[1] == node) {
      s.owner[1] = -1;
    }
  }
}

int BulkMesh::neighbour_across(int node, int a, int b) const {
  auto it = edges_.find(edge_key(a, b));
  if (it == edges_.end()) return -1;
  const auto& o = it->second.owner;
  return o[0] == node ? o[1] : o[0];
}

int BulkMesh::midpoint(int a, int b) {
  auto& s = edges_[edge_key(a, b)];
  if (s.mid < 0) {
    s.mid = static_cast<int>(vertices_.size());
    vertices_.push_back(0.5 * (vertices_[a] + vertices_[b]));
  }
  return s.mid;
}

void BulkMesh::bisect(int node) {
  const auto v = nodes_[node].v;
  const int m = midpoint(v[0], v[1]);
  detach(node);
  MeshNode c0, c1;
  c0.v = {v[2], v[0], m};
  c1.v = {v[1], v[2], m};
  c0.parent = c1.parent = node;
  c0.depth = c1.depth = nodes_[node].depth + 1;
  const int i0 = static_cast<int>(nodes_.size());
  nodes_.push_back(c0);
  nodes_.push_back(c1);
  nodes_[node].child = {i0, i0 + 1};
  attach(i0);
  attach(i0 + 1);
}

void BulkMesh::refine(int node) {
  while (nodes_[node].is_leaf()) {
    const int a = nodes_[node].v[0], b = nodes_[node].v[1];
    const int nb = neighbour_across(node, a, b);
    if (nb < 0) {
      bisect(node);
      return;
    }
    const auto& w = nodes_[nb].v;
    if (edge_key(w[0], w[1]) == edge_key(a, b)) {
      bisect(node);
      bisect(nb);
      return;
    }
    refine(nb);
  }
}

void BulkMesh::finalize() {
  leaves_.clear();
  leaf_of_node_.assign(nodes_.size(), -1);
  std::vector<int> stack = {1, 0};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    if (nodes_[n].is_leaf()) {
      leaf_of_node_[n] = static_cast<int>(leaves_.size());
      leaves_.push_back(n);
    } else {
      stack.push_back(nodes_[n].child[1]);
      stack.push_back(nodes_[n].child[0]);
    }
  }
  boundary_.assign(vertices_.size(), 0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2& p = vertices_[i];
    if (std::abs(std::abs(p.x()) - H_) <= 1e-14 * H_ || std::abs(std::abs(p.y()) - H_) <= 1e-14 * H_)
      boundary_[i] = 1;
  }
  edges_.clear();
  revision_ = g_revision.fetch_add(1);
}

BulkMesh BulkMesh::uniform(double H, int n) {
  const int depth = 2 * log2_exact(n, "N");
  BulkMesh mesh(H);
  for (std::size_t i = 0; i < mesh.nodes_.size(); ++i)
    if (mesh.nodes_[i].is_leaf() && mesh.nodes_[i].depth < depth) mesh.refine(static_cast<int>(i));
  mesh.finalize();
  return mesh;
}

BulkMesh BulkMesh::adaptive(const CurveNetwork& network, double H, int N_c, int N_f) {
  const int depth_c = 2 * log2_exact(N_c, "N_c");
  const int depth_f = 2 * log2_exact(N_f, "N_f");
  if (N_c > N_f) throw Error(ErrorKind::ValidationError, "N_c must not exceed N_f");
  for (const auto& c : network.curves)
    for (const auto& v : c.vertices)
      if (!(std::abs(v.x()) < H && std::abs(v.y()) < H))
        throw Error(ErrorKind::NetworkOutsideDomain,
                    "curve " + std::to_string(c.id) + " leaves the domain");

  std::vector<std::pair<Vec2, Vec2>> segs;
  for (const auto& c : network.curves)
    for (int e = 0; e < c.num_edges(); ++e)
      segs.emplace_back(c.vertices[c.edge_start(e)], c.vertices[c.edge_end(e)]);
  const double pad = 2.0 * H / N_f;

  BulkMesh mesh(H);
  std::vector<std::vector<int>> cand(2);
  for (auto& cl : cand) {
    cl.resize(segs.size());
    for (std::size_t s = 0; s < segs.size(); ++s) cl[s] = static_cast<int>(s);
  }
  std::vector<char> ready = {0, 0};
  for (std::size_t i = 0; i < mesh.nodes_.size(); ++i) {
    if (cand.size() < mesh.nodes_.size()) {
      cand.resize(mesh.nodes_.size());
      ready.resize(mesh.nodes_.size(), 0);
    }
    const MeshNode n = mesh.nodes_[i];
    if (!ready[i]) {
      // Filter the parent's candidates against this node's padded box.
      Vec2 lo = mesh.vertices_[n.v[0]], hi = lo;
      for (int k = 1; k < 3; ++k) {
        lo = lo.cwiseMin(mesh.vertices_[n.v[k]]);
        hi = hi.cwiseMax(mesh.vertices_[n.v[k]]);
      }
      lo.array() -= pad;
      hi.array() += pad;
      const auto& src = n.parent >= 0 ? cand[n.parent] : cand[i];
      std::vector<int> mine;
      for (int s : src)
        if (segment_hits_box(segs[s].first, segs[s].second, lo, hi)) mine.push_back(s);
      cand[i] = std::move(mine);
      ready[i] = 1;
    }
    if (!n.is_leaf()) continue;
    const bool mark = (n.depth < depth_f && !cand[i].empty()) || n.depth < depth_c;
    if (mark) mesh.refine(static_cast<int>(i));
  }
  mesh.finalize();
  return mesh;
}

double BulkMesh::area(int t) const {
  const auto v = triangle(t);
  return 0.5 * cross(vertices_[v[1]] - vertices_[v[0]], vertices_[v[2]] - vertices_[v[0]]);
}

double BulkMesh::diameter(int t) const {
  const auto v = triangle(t);
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, (vertices_[v[k]] - vertices_[v[(k + 1) % 3]]).norm());
  return d;
}

Eigen::Vector3d BulkMesh::barycentric_in_node(int node, const Vec2& x) const {
  const auto& v = nodes_[node].v;
  const Vec2 &a = vertices_[v[0]], &b = vertices_[v[1]], &c = vertices_[v[2]];
  const double det = cross(b - a, c - a);
  const double l1 = cross(x - a, c - a) / det;
  const double l2 = cross(b - a, x - a) / det;
  return {1.0 - l1 - l2, l1, l2};
}

Location BulkMesh::locate(const Vec2& x) const {
  auto inside = [&](int node) { return barycentric_in_node(node, x).minCoeff() >= -kBaryTol; };
  int n = inside(0) ? 0 : (inside(1) ? 1 : -1);
  if (n < 0) {
    std::ostringstream os;
    os << "point (" << x.x() << ", " << x.y() << ") is outside the domain";
    throw Error(ErrorKind::OutsideDomain, os.str());
  }
  while (!nodes_[n].is_leaf()) {
    const int c0 = nodes_[n].child[0];
    n = inside(c0) ? c0 : nodes_[n].child[1];
  }
  return {leaf_of_node_[n], barycentric_in_node(n, x)};
}

double BulkMesh::evaluate(const Eigen::VectorXd& u, const Vec2& x) const {
  const Location loc = locate(x);
  const auto v = triangle(loc.element);
  return loc.bary[0] * u[v[0]] + loc.bary[1] * u[v[1]] + loc.bary[2] * u[v[2]];
}

SparseMatrix assemble_stiffness(const BulkMesh& mesh) {
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_triangles());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto v = mesh.triangle(e);
    const Vec2 &p0 = mesh.vertex(v[0]), &p1 = mesh.vertex(v[1]), &p2 = mesh.vertex(v[2]);
    const double area = 0.5 * cross(p1 - p0, p2 - p0);
    // Gradient of the hat at vertex k is perp of the opposite edge / (2 area).
    const std::array<Vec2, 3> g = {perp(p2 - p1), perp(p0 - p2), perp(p1 - p0)};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) t.emplace_back(v[a], v[b], g[a].dot(g[b]) / (4.0 * area));
  }
  SparseMatrix A(mesh.num_vertices(), mesh.num_vertices());
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

SparseMatrix assemble_mass(const BulkMesh& mesh) {
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_triangles());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto v = mesh.triangle(e);
    const double area = mesh.area(e);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) t.emplace_back(v[a], v[b], area * (a == b ? 2.0 : 1.0) / 12.0);
  }
  SparseMatrix M(mesh.num_vertices(), mesh.num_vertices());
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

Eigen::VectorXd interpolate(const BulkMesh& mesh, const std::function<double(const Vec2&)>& f) {
  Eigen::VectorXd u(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) u[i] = f(mesh.vertex(i));
  return u;
}

MeshAudit audit_mesh(const BulkMesh& mesh) {
  MeshAudit r;
  std::ostringstream msg;
  const double H = mesh.H();
  std::unordered_map<std::uint64_t, int> count;
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double a = mesh.area(t);
    total += a;
    if (!(a > 0.0)) {
      r.positive_areas = false;
      msg << "triangle " << t << " has area " << a << "; ";
    }
    const auto v = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) ++count[edge_key(v[k], v[(k + 1) % 3])];
  }
  for (const auto& [key, n] : count) {
    const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
    const Vec2 &pa = mesh.vertex(a), &pb = mesh.vertex(b);
    const double tol = 1e-14 * H;
    const bool bnd = (std::abs(std::abs(pa.x()) - H) < tol && std::abs(pa.x() - pb.x()) < tol) ||
                     (std::abs(std::abs(pa.y()) - H) < tol && std::abs(pa.y() - pb.y()) < tol);
    if (n > 2 || (n == 1 && !bnd) || (n == 2 && bnd)) {
      r.conforming = false;
      msg << "edge " << a << "-" << b << " shared by " << n << " triangles; ";
    }
  }
  if (std::abs(total - 4.0 * H * H) > 1e-12 * 4.0 * H * H) {
    r.covers_domain = false;
    msg << "area sum " << total << " differs from domain area; ";
  }
  r.message = msg.str();
  return r;
}

void write_mesh(std::ostream& os, const BulkMesh& mesh) {
  char buf[64];
  os << "vertices " << mesh.num_vertices() << "\n";
  for (const auto& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    os << buf;
  }
  os << "triangles " << mesh.num_triangles() << "\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = mesh.triangle(t);
    os << v[0] << " " << v[1] << " " << v[2] << "\n";
  }
}

}  // namespace msnet
