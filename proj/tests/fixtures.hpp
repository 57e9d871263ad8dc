#pragma once

// Small hand-built meshes shared across test files.

#include <map>

#include "geoweave/mesh.hpp"

namespace fixtures {

using geoweave::IntrinsicMesh;
using geoweave::Vec3;

// Regular tetrahedron with unit edges, intrinsic only.
inline IntrinsicMesh unit_tetrahedron() {
  std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  std::map<std::pair<int, int>, double> len;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) len[{u, v}] = 1.0;
  return geoweave::mesh_from_lengths(4, faces, len);
}

// Regular tetrahedron embedded on the unit sphere.
inline IntrinsicMesh embedded_tetrahedron() {
  double s = 1.0 / std::sqrt(3.0);
  std::vector<Vec3> pos = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  return geoweave::mesh_from_positions(pos, faces);
}

// Regular octahedron (vertices on the coordinate axes), edge length sqrt(2).
inline IntrinsicMesh octahedron() {
  std::vector<Vec3> pos = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<std::array<int, 3>> faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                           {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return geoweave::mesh_from_positions(pos, faces);
}

// Two equilateral triangles glued along all three edges: the degenerate
// "pillow" sphere. Valid as an abstract surface; exercises tiny stars.
inline IntrinsicMesh pillow() {
  std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 2, 1}};
  std::map<std::pair<int, int>, double> len = {{{0, 1}, 1.0}, {{0, 2}, 1.0}, {{1, 2}, 1.0}};
  return geoweave::mesh_from_lengths(3, faces, len);
}

// Locate the point (x, y) on a mesh built by make_flat_torus(a, b, n, m).
// Grid cell (i, j) owns faces 2*(j*n+i) (lower-right triangle, below the
// diagonal) and 2*(j*n+i)+1 (upper-left).
inline geoweave::SurfacePoint torus_point(double a, double b, int n, int m, double x, double y) {
  double du = a / n, dv = b / m;
  x = std::fmod(std::fmod(x, a) + a, a);
  y = std::fmod(std::fmod(y, b) + b, b);
  int i = std::min(static_cast<int>(x / du), n - 1);
  int j = std::min(static_cast<int>(y / dv), m - 1);
  double xi = (x - i * du) / du, eta = (y - j * dv) / dv;
  geoweave::SurfacePoint p;
  if (eta <= xi) {
    p.face = 2 * (j * n + i);
    p.bary = {1.0 - xi, xi - eta, eta};
  } else {
    p.face = 2 * (j * n + i) + 1;
    p.bary = {1.0 - eta, xi, eta - xi};
  }
  return geoweave::clamp_bary(p);
}

// Inverse of torus_point: (x, y) coordinates of a surface point.
inline std::pair<double, double> torus_coord(double a, double b, int n, int m,
                                             const geoweave::SurfacePoint& p) {
  double du = a / n, dv = b / m;
  int cell = p.face / 2;
  int i = cell % n, j = cell / n;
  double xi, eta;
  if (p.face % 2 == 0) {
    xi = p.bary[1] + p.bary[2];
    eta = p.bary[2];
  } else {
    xi = p.bary[1];
    eta = p.bary[1] + p.bary[2];
  }
  return {i * du + xi * du, j * dv + eta * dv};
}

// Exact flat-torus distance between parameter points.
inline double torus_distance(double a, double b, double x1, double y1, double x2, double y2) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l)
      best = std::min(best, std::hypot(x2 - x1 + k * a, y2 - y1 + l * b));
  return best;
}

}  // namespace fixtures
