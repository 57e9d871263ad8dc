#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "geoweave/generate.hpp"
#include "geoweave/path.hpp"

using namespace geoweave;
using Catch::Approx;

TEST_CASE("reexpress and common faces", "[path]") {
  IntrinsicMesh m = fixtures::unit_tetrahedron();

  // A point on side 0 of face 0, seen from both sides.
  SurfacePoint p{0, {0.7, 0.3, 0.0}};
  REQUIRE(p.side() == 0);
  int g = m.face_neighbor[0][0];
  SurfacePoint q = reexpress(m, p, g);
  CHECK(q.face == g);
  CHECK(same_point(m, p, q));
  CHECK(common_face(m, p, q) >= 0);

  // Vertex points are visible from the whole star.
  SurfacePoint vp = m.vertex_point(0);
  CHECK(faces_of(m, vp).size() == 3);
  for (int f : faces_of(m, vp)) CHECK(reexpress(m, vp, f).corner() >= 0);

  // Interior points see only their own face.
  SurfacePoint in{0, {0.2, 0.3, 0.5}};
  CHECK(faces_of(m, in) == std::vector<int>{0});
  CHECK_THROWS_AS(reexpress(m, in, 1), Error);
}

TEST_CASE("path length, sampling, and splitting", "[path]") {
  IntrinsicMesh m = fixtures::unit_tetrahedron();

  // Straight run along the edge between faces 0 and its side-0 neighbor.
  Path path;
  path.pts = {SurfacePoint{0, {1.0, 0.0, 0.0}}, SurfacePoint{0, {0.5, 0.5, 0.0}},
              SurfacePoint{0, {0.0, 1.0, 0.0}}};
  CHECK(path_length(m, path) == Approx(1.0));
  CHECK(max_bend(m, path) == Approx(0.0).margin(1e-9));

  auto cum = cumulative_lengths(m, path);
  CHECK(cum.back() == Approx(1.0));
  SurfacePoint mid = point_at(m, path, cum, 0.25);
  CHECK(segment_length(m, path.pts[0], mid) == Approx(0.25));

  auto pieces = split_at(m, path, {0.25, 0.75});
  REQUIRE(pieces.size() == 3);
  CHECK(path_length(m, pieces[0]) == Approx(0.25));
  CHECK(path_length(m, pieces[1]) == Approx(0.5));
  CHECK(path_length(m, pieces[2]) == Approx(0.25));
  CHECK(same_point(m, pieces[0].pts.back(), pieces[1].pts.front()));

  Path joined = concatenate(m, concatenate(m, pieces[0], pieces[1]), pieces[2]);
  CHECK(path_length(m, joined) == Approx(1.0));
  CHECK(same_point(m, joined.pts.front(), path.pts.front()));
  CHECK(same_point(m, joined.pts.back(), path.pts.back()));

  Path rev = reverse_path(path);
  CHECK(path_length(m, rev) == Approx(1.0));
  CHECK(same_point(m, rev.pts.front(), path.pts.back()));
}

TEST_CASE("bend angles at interior, edge, and vertex points", "[path]") {
  IntrinsicMesh m = fixtures::unit_tetrahedron();

  // Right-angle corner inside one face.
  Path bent;
  bent.pts = {SurfacePoint{0, {0.8, 0.1, 0.1}}, SurfacePoint{0, {0.6, 0.2, 0.2}},
              SurfacePoint{0, {0.6, 0.3, 0.1}}};
  double ang = bend_angle(m, bent, 1);
  CHECK(ang > 0.1);

  // Straight crossing of an edge: a tiny arc from the strip unfolding.
  // Midpoint of side 0, with symmetric neighbors on either face reexpressed
  // so the polyline continues straight across the fold.
  SurfacePoint on_edge{0, {0.5, 0.5, 0.0}};
  auto layout = m.face_layout(0);
  auto [g, glay] = m.unfold_across(0, 0, layout);
  Vec2 x = m.point_in_layout(on_edge, layout);
  Vec2 step = rotate(normalized(layout[1] - layout[0]), kPi / 2.0) * 0.1;
  SurfacePoint before, after;
  before.face = 0;
  before.bary = IntrinsicMesh::bary_in_layout(x + step, layout);
  after.face = g;
  after.bary = IntrinsicMesh::bary_in_layout(x - step, glay);  // across the edge
  Path crossing{{before, on_edge, after}, false};
  CHECK(bend_angle(m, crossing, 1) == Approx(0.0).margin(1e-9));

  // Through a tetrahedron vertex (cone angle pi) every passage bends.
  Path through;
  through.pts = {SurfacePoint{0, {0.5, 0.5, 0.0}}, m.vertex_point(0),
                 SurfacePoint{1, {0.5, 0.0, 0.5}}};
  through.pts[0] = SurfacePoint{0, {0.6, 0.0, 0.4}};
  CHECK(bend_angle(m, through, 1) >= kPi / 2.0 - 1e-9);
}

TEST_CASE("closed path bookkeeping", "[path]") {
  IntrinsicMesh m = make_flat_torus(1.0, 1.0, 4, 4);
  // Straight loop around the torus at constant y = 0.1.
  Path loop;
  loop.closed = true;
  for (int i = 0; i < 4; ++i) {
    // Cell entry (vertical edge) and the diagonal crossing inside the cell.
    loop.pts.push_back(fixtures::torus_point(1, 1, 4, 4, 0.25 * i, 0.1));
    loop.pts.push_back(fixtures::torus_point(1, 1, 4, 4, 0.25 * i + 0.1, 0.1));
  }
  CHECK(loop.n_segments() == 8);
  CHECK(path_length(m, loop) == Approx(1.0));

  Path cleaned = dedup_points(m, loop);
  CHECK(cleaned.pts.size() == loop.pts.size());  // nothing to drop
}
