#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "geoweave/base.hpp"

namespace geoweave {

// A point on the surface: a face plus barycentric coordinates w.r.t. that
// face's vertex order. Coordinates are kept normalized (sum to 1, each >= 0).
struct SurfacePoint {
  int face = -1;
  std::array<double, 3> bary = {0.0, 0.0, 0.0};

  // Local vertex index if the point sits (numerically) on a corner, else -1.
  int corner(double tol = 1e-9) const {
    for (int i = 0; i < 3; ++i)
      if (bary[i] >= 1.0 - tol) return i;
    return -1;
  }
  // Local side index if the point sits on a side (bary of opposite corner
  // ~ 0), else -1. Side i joins local vertices i and (i+1)%3, so the
  // vanishing coordinate is (i+2)%3.
  int side(double tol = 1e-9) const {
    for (int i = 0; i < 3; ++i)
      if (bary[(i + 2) % 3] <= tol && bary[i] > tol && bary[(i + 1) % 3] > tol) return i;
    return -1;
  }
};

inline SurfacePoint clamp_bary(SurfacePoint p, double tol = 1e-9) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    require(p.bary[i] > -tol, ErrorCode::InvalidInput, "barycentric coordinate out of range");
    if (p.bary[i] < 0.0) p.bary[i] = 0.0;
    sum += p.bary[i];
  }
  require(sum > tol, ErrorCode::InvalidInput, "barycentric coordinates sum to zero");
  for (int i = 0; i < 3; ++i) p.bary[i] /= sum;
  return p;
}

// Closed orientable triangulated surface with intrinsic metric: all geometry
// is derived from per-edge lengths. An optional R^3 embedding rides along for
// I/O and rendering but never feeds computations.
class IntrinsicMesh {
 public:
  int n_vertices = 0;
  std::vector<std::array<int, 3>> faces;       // CCW vertex triples
  std::vector<std::array<int, 2>> edge_verts;  // edge -> (u, v) with u < v
  std::vector<double> edge_length;
  std::vector<std::array<int, 3>> face_edges;     // side i joins corners i, i+1
  std::vector<std::array<int, 2>> edge_faces;     // the two incident faces
  std::vector<std::array<int, 3>> face_neighbor;  // face across side i
  std::vector<std::array<int, 3>> neighbor_side;  // matching side index in that face
  std::vector<std::array<double, 3>> corner_angle;
  std::vector<std::vector<std::pair<int, int>>> vertex_star;  // (face, corner), CCW order
  std::vector<double> cone_angle_;
  std::vector<Vec3> positions;  // optional embedding, empty when intrinsic-only

  int n_edges() const { return static_cast<int>(edge_verts.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int euler_characteristic() const { return n_vertices - n_edges() + n_faces(); }
  int genus() const { return (2 - euler_characteristic()) / 2; }
  bool has_embedding() const { return !positions.empty(); }

  double max_edge_length() const {
    double h = 0.0;
    for (double l : edge_length) h = std::max(h, l);
    return h;
  }
  double min_edge_length() const {
    double h = std::numeric_limits<double>::infinity();
    for (double l : edge_length) h = std::min(h, l);
    return h;
  }

  double side_length(int f, int i) const { return edge_length[face_edges[f][i]]; }

  double face_area(int f) const {
    // Kahan's numerically stable Heron variant.
    double a = side_length(f, 0), b = side_length(f, 1), c = side_length(f, 2);
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    if (b < c) std::swap(b, c);
    double t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    return 0.25 * std::sqrt(std::max(t, 0.0));
  }

  double total_area() const {
    double s = 0.0;
    for (int f = 0; f < n_faces(); ++f) s += face_area(f);
    return s;
  }

  double cone_angle(int v) const { return cone_angle_[v]; }
  double angle_defect(int v) const { return kTwoPi - cone_angle_[v]; }

  // Canonical planar layout of a face: corner 0 at the origin, corner 1 on
  // the positive x-axis, corner 2 in the upper half plane (CCW).
  std::array<Vec2, 3> face_layout(int f) const {
    double s0 = side_length(f, 0), s2 = side_length(f, 2);
    double a = corner_angle[f][0];
    return {Vec2{0.0, 0.0}, Vec2{s0, 0.0}, Vec2{s2 * std::cos(a), s2 * std::sin(a)}};
  }

  // Given face f laid out in some plane, lay out the face across side i in
  // the same plane so the shared edge coincides. Returns (neighbor face,
  // neighbor layout). Orientation stays CCW for both.
  std::pair<int, std::array<Vec2, 3>> unfold_across(int f, int i,
                                                    const std::array<Vec2, 3>& layout) const {
    int g = face_neighbor[f][i];
    int j = neighbor_side[f][i];
    // f traverses the shared edge A->B; g traverses it B->A.
    Vec2 a = layout[i], b = layout[(i + 1) % 3];
    std::array<Vec2, 3> out;
    out[j] = b;
    out[(j + 1) % 3] = a;
    Vec2 dir = normalized(a - b);
    double ang = corner_angle[g][j];
    out[(j + 2) % 3] = b + rotate(dir, ang) * side_length(g, j == 0 ? 2 : j - 1);
    return {g, out};
  }

  Vec2 point_in_layout(const SurfacePoint& p, const std::array<Vec2, 3>& layout) const {
    return layout[0] * p.bary[0] + layout[1] * p.bary[1] + layout[2] * p.bary[2];
  }

  // Inverse of point_in_layout: barycentric coordinates of a planar point
  // w.r.t. a (nondegenerate) laid-out face. No clamping.
  static std::array<double, 3> bary_in_layout(const Vec2& p, const std::array<Vec2, 3>& layout) {
    double area2 = cross(layout[1] - layout[0], layout[2] - layout[0]);
    return {cross(layout[1] - p, layout[2] - p) / area2,
            cross(layout[2] - p, layout[0] - p) / area2,
            cross(layout[0] - p, layout[1] - p) / area2};
  }

  // Some face having v as a corner, as (face, corner index).
  std::pair<int, int> corner_of_vertex(int v) const { return vertex_star[v].front(); }

  SurfacePoint vertex_point(int v) const {
    auto [f, c] = corner_of_vertex(v);
    SurfacePoint p;
    p.face = f;
    p.bary[c] = 1.0;
    return p;
  }

  // Vertex id if p sits on a corner, else -1.
  int vertex_of_point(const SurfacePoint& p, double tol = 1e-9) const {
    int c = p.corner(tol);
    return c < 0 ? -1 : faces[p.face][c];
  }

  int edge_between(int u, int v) const {
    auto it = edge_lookup_.find(u < v ? std::make_pair(u, v) : std::make_pair(v, u));
    return it == edge_lookup_.end() ? -1 : it->second;
  }

  // Build the full adjacency from faces + per-edge lengths, validating that
  // the input is a closed connected orientable manifold with nondegenerate
  // triangles. `lengths` is keyed like the returned edge table; call sites
  // normally go through the free functions below instead.
  static IntrinsicMesh build(int n_vertices, std::vector<std::array<int, 3>> faces,
                             const std::map<std::pair<int, int>, double>& lengths,
                             std::vector<Vec3> positions = {});

 private:
  std::map<std::pair<int, int>, int> edge_lookup_;
};

inline IntrinsicMesh IntrinsicMesh::build(int n_vertices, std::vector<std::array<int, 3>> faces,
                                          const std::map<std::pair<int, int>, double>& lengths,
                                          std::vector<Vec3> positions) {
  IntrinsicMesh m;
  m.n_vertices = n_vertices;
  m.faces = std::move(faces);
  m.positions = std::move(positions);
  require(n_vertices >= 3, ErrorCode::InvalidInput, "mesh needs at least 3 vertices");
  require(!m.faces.empty(), ErrorCode::InvalidInput, "mesh has no faces");
  if (!m.positions.empty())
    require(static_cast<int>(m.positions.size()) == n_vertices, ErrorCode::InvalidInput,
            "embedding size does not match vertex count");

  for (auto& f : m.faces) {
    for (int v : f)
      require(v >= 0 && v < n_vertices, ErrorCode::InvalidInput, "face references missing vertex");
    require(f[0] != f[1] && f[1] != f[2] && f[0] != f[2], ErrorCode::DegenerateFace,
            "face repeats a vertex");
  }

  // Edge table; count directed traversals to catch orientation flips.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> directed;  // (u,v) -> (face,side)
  for (int f = 0; f < m.n_faces(); ++f)
    for (int i = 0; i < 3; ++i)
      directed[{m.faces[f][i], m.faces[f][(i + 1) % 3]}].push_back({f, i});

  m.face_edges.assign(m.n_faces(), {-1, -1, -1});
  m.face_neighbor.assign(m.n_faces(), {-1, -1, -1});
  m.neighbor_side.assign(m.n_faces(), {-1, -1, -1});
  for (auto& [uv, sides] : directed) {
    auto [u, v] = uv;
    if (u > v) continue;  // handle each undirected edge once, from its (u<v) key
    auto rev = directed.find({v, u});
    size_t fwd_count = sides.size();
    size_t rev_count = rev == directed.end() ? 0 : rev->second.size();
    require(fwd_count + rev_count <= 2, ErrorCode::NonManifoldEdge,
            "edge " + std::to_string(u) + "-" + std::to_string(v) + " borders > 2 faces");
    require(fwd_count + rev_count == 2, ErrorCode::NonManifoldEdge,
            "edge " + std::to_string(u) + "-" + std::to_string(v) +
                " borders only one face; surface must be closed");
    require(fwd_count == 1 && rev_count == 1, ErrorCode::NonOrientable,
            "edge " + std::to_string(u) + "-" + std::to_string(v) +
                " traversed twice in the same direction");

    int e = m.n_edges();
    m.edge_verts.push_back({u, v});
    m.edge_lookup_[{u, v}] = e;
    auto it = lengths.find({u, v});
    require(it != lengths.end(), ErrorCode::InvalidInput,
            "missing length for edge " + std::to_string(u) + "-" + std::to_string(v));
    require(it->second > 0.0 && std::isfinite(it->second), ErrorCode::InvalidInput,
            "edge length must be finite and positive");
    m.edge_length.push_back(it->second);

    auto [f1, i1] = sides[0];
    auto [f2, i2] = rev->second[0];
    m.edge_faces.push_back({f1, f2});
    m.face_edges[f1][i1] = e;
    m.face_edges[f2][i2] = e;
    m.face_neighbor[f1][i1] = f2;
    m.face_neighbor[f2][i2] = f1;
    m.neighbor_side[f1][i1] = i2;
    m.neighbor_side[f2][i2] = i1;
  }

  // Corner angles; rejects metric-degenerate triangles.
  m.corner_angle.assign(m.n_faces(), {0.0, 0.0, 0.0});
  for (int f = 0; f < m.n_faces(); ++f) {
    double s[3] = {m.side_length(f, 0), m.side_length(f, 1), m.side_length(f, 2)};
    for (int i = 0; i < 3; ++i)
      require(s[i] < s[(i + 1) % 3] + s[(i + 2) % 3] - 1e-12 * s[i], ErrorCode::DegenerateFace,
              "face " + std::to_string(f) + " violates the triangle inequality");
    for (int i = 0; i < 3; ++i) {
      double adj1 = s[i], adj2 = s[(i + 2) % 3], opp = s[(i + 1) % 3];
      double c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2);
      m.corner_angle[f][i] = std::acos(std::clamp(c, -1.0, 1.0));
    }
  }

  // Vertex stars in CCW cyclic order, walking across the incoming side at
  // each corner. Also catches non-manifold vertices (star not a single cycle).
  std::vector<std::vector<std::pair<int, int>>> incident(n_vertices);
  for (int f = 0; f < m.n_faces(); ++f)
    for (int i = 0; i < 3; ++i) incident[m.faces[f][i]].push_back({f, i});
  m.vertex_star.assign(n_vertices, {});
  m.cone_angle_.assign(n_vertices, 0.0);
  for (int v = 0; v < n_vertices; ++v) {
    require(!incident[v].empty(), ErrorCode::InvalidInput,
            "vertex " + std::to_string(v) + " belongs to no face");
    auto [f0, c0] = incident[v][0];
    int f = f0, c = c0;
    do {
      m.vertex_star[v].push_back({f, c});
      m.cone_angle_[v] += m.corner_angle[f][c];
      int g = m.face_neighbor[f][(c + 2) % 3];  // CCW: cross the side arriving at v
      int gj = m.neighbor_side[f][(c + 2) % 3];
      f = g;
      c = gj;  // the neighbor traverses the shared edge away from v
      require(m.faces[f][c] == v, ErrorCode::NonManifoldEdge, "inconsistent vertex star");
    } while (!(f == f0 && c == c0));
    require(m.vertex_star[v].size() == incident[v].size(), ErrorCode::NonManifoldEdge,
            "vertex " + std::to_string(v) + " has a disconnected star");
  }

  // Connectivity over face adjacency.
  std::vector<char> seen(m.n_faces(), 0);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!bfs.empty()) {
    int f = bfs.front();
    bfs.pop();
    for (int i = 0; i < 3; ++i) {
      int g = m.face_neighbor[f][i];
      if (!seen[g]) {
        seen[g] = 1;
        ++reached;
        bfs.push(g);
      }
    }
  }
  require(reached == m.n_faces(), ErrorCode::InvalidInput, "surface is not connected");

  return m;
}

// Build from an embedding: edge lengths are the chordal distances.
inline IntrinsicMesh mesh_from_positions(const std::vector<Vec3>& positions,
                                         std::vector<std::array<int, 3>> faces) {
  std::map<std::pair<int, int>, double> lengths;
  for (auto& f : faces)
    for (int i = 0; i < 3; ++i) {
      int u = f[i], v = f[(i + 1) % 3];
      if (u > v) std::swap(u, v);
      if (u >= 0 && v < static_cast<int>(positions.size()))
        lengths[{u, v}] = norm(positions[u] - positions[v]);
    }
  return IntrinsicMesh::build(static_cast<int>(positions.size()), std::move(faces), lengths,
                              positions);
}

inline IntrinsicMesh mesh_from_lengths(int n_vertices, std::vector<std::array<int, 3>> faces,
                                       const std::map<std::pair<int, int>, double>& lengths) {
  return IntrinsicMesh::build(n_vertices, std::move(faces), lengths);
}

// Gauss-Bonnet residual: sum of angle defects minus 2*pi*chi. Zero (to
// rounding) on any valid closed mesh; exposed for validation and tests.
inline double gauss_bonnet_residual(const IntrinsicMesh& m) {
  double sum = 0.0;
  for (int v = 0; v < m.n_vertices; ++v) sum += m.angle_defect(v);
  return sum - kTwoPi * m.euler_characteristic();
}

}  // namespace geoweave
