#include <catch2/catch_amalgamated.hpp>

#include "geoweave/generate.hpp"

using namespace geoweave;
using Catch::Approx;

TEST_CASE("icosphere counts, area, and curvature", "[generate]") {
  IntrinsicMesh m = make_sphere(1.0, 3);
  CHECK(m.n_faces() == 20 * 64);
  CHECK(m.n_vertices == 10 * 64 + 2);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.total_area() == Approx(4.0 * kPi).epsilon(0.01));
  CHECK(gauss_bonnet_residual(m) == Approx(0.0).margin(1e-6));
  for (int v = 0; v < m.n_vertices; ++v) CHECK(m.angle_defect(v) > 0.0);

  // Outward CCW orientation: face normals point away from the center.
  for (int f = 0; f < m.n_faces(); ++f) {
    auto [a, b, c] = m.faces[f];
    Vec3 n = cross(m.positions[b] - m.positions[a], m.positions[c] - m.positions[a]);
    CHECK(dot(n, m.positions[a] + m.positions[b] + m.positions[c]) > 0.0);
  }

  // Poles survive subdivision; radius scales positions.
  int north = nearest_vertex(m, {0, 0, 1});
  CHECK(norm(m.positions[north] - Vec3{0, 0, 1}) == Approx(0.0).margin(1e-12));
  IntrinsicMesh big = make_sphere(2.0, 3);
  CHECK(big.total_area() == Approx(16.0 * kPi).epsilon(0.01));

  // One subdivision level roughly halves the mesh scale.
  double ratio = make_sphere(1.0, 4).max_edge_length() / m.max_edge_length();
  CHECK(ratio > 0.45);
  CHECK(ratio < 0.55);
}

TEST_CASE("ellipsoid area matches the closed form", "[generate]") {
  // Prolate spheroid a = b = 1, c = 1.5:
  // S = 2*pi*a^2 * (1 + c/(a*e) * asin(e)), e = sqrt(1 - a^2/c^2).
  double c = 1.5;
  double e = std::sqrt(1.0 - 1.0 / (c * c));
  double oracle = 2.0 * kPi * (1.0 + c / e * std::asin(e));
  CHECK(oracle == Approx(16.9175).epsilon(1e-4));  // sanity-pin the formula itself

  IntrinsicMesh m = make_ellipsoid(1.0, 1.0, c, 4);
  CHECK(m.total_area() == Approx(oracle).epsilon(0.01));
  CHECK(m.euler_characteristic() == 2);
  CHECK(gauss_bonnet_residual(m) == Approx(0.0).margin(1e-6));
}

TEST_CASE("bumpy sphere scales lengths conformally", "[generate]") {
  double eps = 0.4;
  IntrinsicMesh m = make_bumpy_sphere(1.0, eps, 2, 3);
  IntrinsicMesh round = make_sphere(1.0, 3);
  CHECK(m.has_embedding());
  CHECK(gauss_bonnet_residual(m) == Approx(0.0).margin(1e-6));

  for (int e = 0; e < m.n_edges(); ++e) {
    double chordal = norm(m.positions[m.edge_verts[e][0]] - m.positions[m.edge_verts[e][1]]);
    double f = m.edge_length[e] / chordal;
    CHECK(f > std::exp(-eps) - 1e-9);
    CHECK(f < std::exp(eps) + 1e-9);
  }

  // freq = 2: stretched at the poles, squeezed at the equator.
  int north = nearest_vertex(m, {0, 0, 1});
  for (auto [f, c] : m.vertex_star[north]) {
    int e = m.face_edges[f][c];  // side leaving the pole
    double chordal = norm(m.positions[m.edge_verts[e][0]] - m.positions[m.edge_verts[e][1]]);
    CHECK(m.edge_length[e] > 1.2 * chordal);
  }
  int eq = nearest_vertex(m, {1, 0, 0});
  for (auto [f, c] : m.vertex_star[eq]) {
    int e = m.face_edges[f][c];
    double chordal = norm(m.positions[m.edge_verts[e][0]] - m.positions[m.edge_verts[e][1]]);
    CHECK(m.edge_length[e] < 0.85 * chordal);
  }

  // Same combinatorics as the round sphere, different metric.
  CHECK(m.n_faces() == round.n_faces());
  CHECK(m.total_area() < round.total_area());  // squeezing wins for freq = 2
}

TEST_CASE("flat torus is flat and intrinsic-only", "[generate]") {
  IntrinsicMesh m = make_flat_torus(1.0, 1.0, 8, 8);
  CHECK(m.n_vertices == 64);
  CHECK(m.n_edges() == 192);
  CHECK(m.n_faces() == 128);
  CHECK(m.euler_characteristic() == 0);
  CHECK(m.genus() == 1);
  CHECK_FALSE(m.has_embedding());
  CHECK(m.total_area() == Approx(1.0));
  for (int v = 0; v < m.n_vertices; ++v)
    CHECK(m.angle_defect(v) == Approx(0.0).margin(1e-12));
  CHECK(gauss_bonnet_residual(m) == Approx(0.0).margin(1e-9));

  IntrinsicMesh rect = make_flat_torus(2.0, 1.0, 12, 6);
  CHECK(rect.total_area() == Approx(2.0));
  CHECK(rect.max_edge_length() == Approx(std::hypot(2.0 / 12, 1.0 / 6)));

  CHECK_THROWS_AS(make_flat_torus(1.0, 1.0, 2, 5), Error);
  CHECK_THROWS_AS(make_flat_torus(-1.0, 1.0, 5, 5), Error);
}

TEST_CASE("generator dispatch by kind", "[generate]") {
  SurfaceSpec spec;
  spec.kind = "flat_torus";
  spec.nx = 4;
  spec.ny = 4;
  CHECK(generate_surface(spec).genus() == 1);
  spec.kind = "twisted_pretzel";
  CHECK_THROWS_AS(generate_surface(spec), Error);
}
