#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "geoweave/mesh.hpp"

using namespace geoweave;
using Catch::Approx;

TEST_CASE("tetrahedron adjacency and angles", "[mesh]") {
  IntrinsicMesh m = fixtures::unit_tetrahedron();

  CHECK(m.n_vertices == 4);
  CHECK(m.n_edges() == 6);
  CHECK(m.n_faces() == 4);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.genus() == 0);
  CHECK(m.max_edge_length() == Approx(1.0));
  CHECK(m.min_edge_length() == Approx(1.0));
  CHECK(m.total_area() == Approx(std::sqrt(3.0)));

  for (int v = 0; v < 4; ++v) {
    CHECK(m.vertex_star[v].size() == 3);
    CHECK(m.cone_angle(v) == Approx(kPi));
    CHECK(m.angle_defect(v) == Approx(kPi));
  }
  CHECK(gauss_bonnet_residual(m) == Approx(0.0).margin(1e-12));

  // Every face, viewed from its each side, sees a distinct neighbor.
  for (int f = 0; f < 4; ++f)
    for (int i = 0; i < 3; ++i) {
      int g = m.face_neighbor[f][i];
      CHECK(g != f);
      CHECK(m.face_neighbor[g][m.neighbor_side[f][i]] == f);
    }

  CHECK(m.edge_between(0, 1) >= 0);
  CHECK(m.edge_between(1, 0) == m.edge_between(0, 1));
}

TEST_CASE("face layout and unfolding preserve the metric", "[mesh]") {
  IntrinsicMesh m = fixtures::unit_tetrahedron();

  auto layout = m.face_layout(0);
  CHECK(layout[0].x == Approx(0.0));
  CHECK(layout[1].x == Approx(1.0));
  CHECK(layout[1].y == Approx(0.0).margin(1e-12));
  CHECK(layout[2].x == Approx(0.5));
  CHECK(layout[2].y == Approx(std::sqrt(3.0) / 2.0));

  for (int i = 0; i < 3; ++i) {
    auto [g, glay] = m.unfold_across(0, i, layout);
    int j = m.neighbor_side[0][i];
    // Shared edge endpoints coincide (swapped order).
    CHECK(norm(glay[j] - layout[(i + 1) % 3]) == Approx(0.0).margin(1e-12));
    CHECK(norm(glay[(j + 1) % 3] - layout[i]) == Approx(0.0).margin(1e-12));
    // Neighbor's sides all have the right lengths.
    for (int s = 0; s < 3; ++s)
      CHECK(norm(glay[(s + 1) % 3] - glay[s]) == Approx(m.side_length(g, s)));
    // Third vertex lands strictly on the far side of the shared edge.
    Vec2 a = layout[i], b = layout[(i + 1) % 3];
    double side_f = cross(b - a, layout[(i + 2) % 3] - a);
    double side_g = cross(b - a, glay[(j + 2) % 3] - a);
    CHECK(side_f > 0.0);
    CHECK(side_g < 0.0);
  }
}

TEST_CASE("octahedron counts and curvature", "[mesh]") {
  IntrinsicMesh m = fixtures::octahedron();

  CHECK(m.n_vertices == 6);
  CHECK(m.n_edges() == 12);
  CHECK(m.n_faces() == 8);
  CHECK(m.euler_characteristic() == 2);
  CHECK(m.has_embedding());
  CHECK(m.max_edge_length() == Approx(std::sqrt(2.0)));
  for (int v = 0; v < 6; ++v) {
    CHECK(m.vertex_star[v].size() == 4);
    CHECK(m.cone_angle(v) == Approx(4.0 * kPi / 3.0));
  }
  CHECK(gauss_bonnet_residual(m) == Approx(0.0).margin(1e-12));
}

TEST_CASE("pillow surface is accepted", "[mesh]") {
  IntrinsicMesh m = fixtures::pillow();
  CHECK(m.euler_characteristic() == 2);
  for (int v = 0; v < 3; ++v) CHECK(m.cone_angle(v) == Approx(2.0 * kPi / 3.0));
  CHECK(gauss_bonnet_residual(m) == Approx(0.0).margin(1e-12));
}

TEST_CASE("embedded tetrahedron gets chordal lengths", "[mesh]") {
  IntrinsicMesh m = fixtures::embedded_tetrahedron();
  double expect = std::sqrt(8.0 / 3.0);  // chord between unit-sphere tet vertices
  for (double l : m.edge_length) CHECK(l == Approx(expect));
}

static ErrorCode build_error(int nv, std::vector<std::array<int, 3>> faces,
                             std::map<std::pair<int, int>, double> len) {
  try {
    geoweave::mesh_from_lengths(nv, std::move(faces), len);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected the build to throw");
  return ErrorCode::InvalidInput;
}

TEST_CASE("validation rejects bad inputs", "[mesh]") {
  std::map<std::pair<int, int>, double> unit;
  for (int u = 0; u < 8; ++u)
    for (int v = u + 1; v < 8; ++v) unit[{u, v}] = 1.0;

  SECTION("boundary edge") {
    CHECK(build_error(3, {{0, 1, 2}}, unit) == ErrorCode::NonManifoldEdge);
  }
  SECTION("three faces on one edge") {
    CHECK(build_error(5, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}, unit) == ErrorCode::NonManifoldEdge);
  }
  SECTION("flipped face orientation") {
    CHECK(build_error(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 2, 3}}, unit) ==
          ErrorCode::NonOrientable);
  }
  SECTION("repeated vertex in a face") {
    CHECK(build_error(4, {{0, 1, 1}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}, unit) ==
          ErrorCode::DegenerateFace);
  }
  SECTION("triangle inequality violation") {
    auto len = unit;
    len[{0, 1}] = 10.0;
    CHECK(build_error(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}, len) ==
          ErrorCode::DegenerateFace);
  }
  SECTION("missing edge length") {
    std::map<std::pair<int, int>, double> len = {{{0, 1}, 1.0}};
    CHECK(build_error(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}, len) ==
          ErrorCode::InvalidInput);
  }
  SECTION("nonpositive edge length") {
    auto len = unit;
    len[{0, 1}] = 0.0;
    CHECK(build_error(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}, len) ==
          ErrorCode::InvalidInput);
  }
  SECTION("disconnected surface") {
    std::vector<std::array<int, 3>> two_tets = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2},
                                                {4, 5, 6}, {4, 6, 7}, {4, 7, 5}, {5, 7, 6}};
    CHECK(build_error(8, two_tets, unit) == ErrorCode::InvalidInput);
  }
  SECTION("face references missing vertex") {
    CHECK(build_error(3, {{0, 1, 2}, {0, 2, 9}, {0, 9, 1}, {1, 9, 2}}, unit) ==
          ErrorCode::InvalidInput);
  }
}

TEST_CASE("surface point classification", "[mesh]") {
  SurfacePoint p;
  p.face = 0;
  p.bary = {1.0, 0.0, 0.0};
  CHECK(p.corner() == 0);
  CHECK(p.side() == -1);

  p.bary = {0.5, 0.5, 0.0};
  CHECK(p.corner() == -1);
  CHECK(p.side() == 0);  // side 0 joins corners 0 and 1

  p.bary = {0.2, 0.3, 0.5};
  CHECK(p.corner() == -1);
  CHECK(p.side() == -1);

  SurfacePoint q = clamp_bary({0, {1.0 + 3e-10, -3e-10, 0.0}});
  CHECK(q.bary[0] == Approx(1.0));
  CHECK(q.bary[1] == 0.0);
  CHECK_THROWS_AS(clamp_bary({0, {1.2, -0.2, 0.0}}), Error);

  IntrinsicMesh m = fixtures::unit_tetrahedron();
  for (int v = 0; v < 4; ++v) CHECK(m.vertex_of_point(m.vertex_point(v)) == v);
}
