#pragma once

// Built-in surface families. All spheres start from a regular icosahedron
// with vertices at the poles and subdivide `res` times (4-to-1 splits with
// midpoints pushed back to the sphere), so faces grow as 20 * 4^res and the
// poles survive as vertices at every resolution.
//
// - sphere / ellipsoid: edge lengths are chordal distances of the embedding.
// - bumpy_sphere: a zonal conformal metric on the round sphere. Edge lengths
//   are chordal lengths scaled by exp(eps * (cos(freq*th_p) + cos(freq*th_q))/2)
//   where th is the polar angle of each endpoint; the round embedding is kept
//   only for rendering and never feeds the metric. Meridians are geodesics of
//   every zonal metric (reflection symmetry), and for freq = 2 the equator
//   becomes a short stable waist of length 2*pi*r*exp(-eps).
// - flat_torus: an n x m diagonally-split grid on [0,a] x [0,b] with wrapped
//   indexing (vertex (i,j) has id j*n + i). Purely intrinsic: cone angles are
//   exactly 2*pi and there is no embedding. Needs n, m >= 3 so the grid stays
//   simplicial.

#include <map>
#include <string>
#include <vector>

#include "geoweave/mesh.hpp"

namespace geoweave {

namespace detail {

struct TriSoup {
  std::vector<Vec3> pos;
  std::vector<std::array<int, 3>> faces;
};

inline TriSoup icosahedron() {
  TriSoup s;
  double phi = std::atan(0.5);  // ring latitude
  double cz = std::sin(phi), cr = std::cos(phi);
  s.pos.push_back({0, 0, 1});
  for (int i = 0; i < 5; ++i) {
    double a = kTwoPi * i / 5.0;
    s.pos.push_back({cr * std::cos(a), cr * std::sin(a), cz});
  }
  for (int i = 0; i < 5; ++i) {
    double a = kTwoPi * (i + 0.5) / 5.0;
    s.pos.push_back({cr * std::cos(a), cr * std::sin(a), -cz});
  }
  s.pos.push_back({0, 0, -1});
  auto up = [](int i) { return 1 + i % 5; };
  auto lo = [](int i) { return 6 + i % 5; };
  for (int i = 0; i < 5; ++i) {
    s.faces.push_back({0, up(i), up(i + 1)});
    s.faces.push_back({up(i), lo(i), up(i + 1)});
    s.faces.push_back({up(i + 1), lo(i), lo(i + 1)});
    s.faces.push_back({11, lo(i + 1), lo(i)});
  }
  return s;
}

inline TriSoup subdivide_on_sphere(const TriSoup& in) {
  TriSoup out;
  out.pos = in.pos;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int u, int v) {
    auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    int id = static_cast<int>(out.pos.size());
    out.pos.push_back(normalized(out.pos[u] + out.pos[v]));
    mid[key] = id;
    return id;
  };
  for (auto& f : in.faces) {
    int m01 = midpoint(f[0], f[1]), m12 = midpoint(f[1], f[2]), m20 = midpoint(f[2], f[0]);
    out.faces.push_back({f[0], m01, m20});
    out.faces.push_back({f[1], m12, m01});
    out.faces.push_back({f[2], m20, m12});
    out.faces.push_back({m01, m12, m20});
  }
  return out;
}

inline TriSoup unit_icosphere(int res) {
  require(res >= 0, ErrorCode::InvalidInput, "subdivision level must be >= 0");
  require(res <= 8, ErrorCode::InvalidInput, "subdivision level > 8 is past any useful budget");
  TriSoup s = icosahedron();
  for (int i = 0; i < res; ++i) s = subdivide_on_sphere(s);
  return s;
}

}  // namespace detail

inline IntrinsicMesh make_sphere(double radius, int res) {
  require(radius > 0.0, ErrorCode::InvalidInput, "radius must be positive");
  detail::TriSoup s = detail::unit_icosphere(res);
  for (auto& p : s.pos) p = p * radius;
  return mesh_from_positions(s.pos, std::move(s.faces));
}

inline IntrinsicMesh make_ellipsoid(double a, double b, double c, int res) {
  require(a > 0.0 && b > 0.0 && c > 0.0, ErrorCode::InvalidInput, "semi-axes must be positive");
  detail::TriSoup s = detail::unit_icosphere(res);
  for (auto& p : s.pos) p = {a * p.x, b * p.y, c * p.z};
  return mesh_from_positions(s.pos, std::move(s.faces));
}

inline IntrinsicMesh make_bumpy_sphere(double radius, double eps, int freq, int res) {
  require(radius > 0.0, ErrorCode::InvalidInput, "radius must be positive");
  require(eps >= 0.0 && eps < 1.0, ErrorCode::InvalidInput, "bump amplitude must be in [0, 1)");
  require(freq >= 1, ErrorCode::InvalidInput, "bump frequency must be >= 1");
  detail::TriSoup s = detail::unit_icosphere(res);
  auto scale = [&](const Vec3& p) {
    double theta = std::acos(std::clamp(p.z, -1.0, 1.0));
    return std::cos(freq * theta);
  };
  std::map<std::pair<int, int>, double> len;
  for (auto& f : s.faces)
    for (int i = 0; i < 3; ++i) {
      int u = f[i], v = f[(i + 1) % 3];
      if (u > v) std::swap(u, v);
      double chordal = radius * norm(s.pos[u] - s.pos[v]);
      len[{u, v}] = chordal * std::exp(eps * 0.5 * (scale(s.pos[u]) + scale(s.pos[v])));
    }
  for (auto& p : s.pos) p = p * radius;
  return IntrinsicMesh::build(static_cast<int>(s.pos.size()), std::move(s.faces), len, s.pos);
}

inline IntrinsicMesh make_flat_torus(double a, double b, int n, int m) {
  require(a > 0.0 && b > 0.0, ErrorCode::InvalidInput, "torus side lengths must be positive");
  require(n >= 3 && m >= 3, ErrorCode::InvalidInput,
          "flat torus grid needs n, m >= 3 to stay simplicial");
  double du = a / n, dv = b / m, diag = std::hypot(du, dv);
  auto id = [&](int i, int j) { return ((j % m + m) % m) * n + ((i % n + n) % n); };
  std::vector<std::array<int, 3>> faces;
  std::map<std::pair<int, int>, double> len;
  auto add_len = [&](int u, int v, double l) {
    if (u > v) std::swap(u, v);
    len[{u, v}] = l;
  };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      faces.push_back({v00, v10, v11});
      faces.push_back({v00, v11, v01});
      add_len(v00, v10, du);
      add_len(v00, v01, dv);
      add_len(v00, v11, diag);
    }
  return mesh_from_lengths(n * m, std::move(faces), len);
}

// Vertex whose embedded position is nearest to `target`. Embedded meshes only.
inline int nearest_vertex(const IntrinsicMesh& mesh, const Vec3& target) {
  require(mesh.has_embedding(), ErrorCode::InvalidInput,
          "nearest_vertex needs an embedded mesh");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.n_vertices; ++v) {
    double d = norm(mesh.positions[v] - target);
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

// String-keyed generator dispatch used by the CLI and file loaders.
struct SurfaceSpec {
  std::string kind = "sphere";
  double radius = 1.0;               // sphere, bumpy_sphere
  double a = 1.0, b = 1.0, c = 1.0;  // ellipsoid semi-axes; flat_torus uses a, b
  double eps = 0.3;                  // bumpy_sphere amplitude
  int freq = 2;                      // bumpy_sphere frequency
  int res = 3;                       // subdivision level for sphere kinds
  int nx = 16, ny = 16;              // flat_torus grid
};

inline IntrinsicMesh generate_surface(const SurfaceSpec& spec) {
  if (spec.kind == "sphere") return make_sphere(spec.radius, spec.res);
  if (spec.kind == "ellipsoid") return make_ellipsoid(spec.a, spec.b, spec.c, spec.res);
  if (spec.kind == "bumpy_sphere")
    return make_bumpy_sphere(spec.radius, spec.eps, spec.freq, spec.res);
  if (spec.kind == "flat_torus") return make_flat_torus(spec.a, spec.b, spec.nx, spec.ny);
  fail(ErrorCode::UnsupportedKind, "unknown surface kind '" + spec.kind + "'");
}

}  // namespace geoweave
