#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "geoweave/cutlocus.hpp"
#include "geoweave/generate.hpp"
#include "geoweave/metric.hpp"
#include "fixtures.hpp"

using namespace geoweave;
using namespace fixtures;

namespace {

Vec3 embed(const IntrinsicMesh& m, const SurfacePoint& p) {
  Vec3 out{0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    Vec3 q = m.positions[m.faces[p.face][i]];
    out.x += p.bary[i] * q.x;
    out.y += p.bary[i] * q.y;
    out.z += p.bary[i] * q.z;
  }
  return out;
}

double angle_between_unit(const Vec3& a, const Vec3& b) {
  double la = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
  double lb = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
  double c = (a.x * b.x + a.y * b.y + a.z * b.z) / (la * lb);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

TEST_CASE("cut locus of a flat torus point is the dual cross", "[cutlocus]") {
  // On the unit square torus the cut locus of (sx, sy) is the pair of closed
  // geodesics x = sx + 1/2 and y = sy + 1/2: two circles of length 1 meeting
  // at the opposite point, so two independent cycles and total length 2.
  const int n = 16;
  const double h = std::sqrt(2.0) / n;
  auto m = make_flat_torus(1.0, 1.0, n, n);
  auto src = torus_point(1.0, 1.0, n, n, 0.23, 0.37);
  auto cl = cut_locus(m, src);

  REQUIRE(!cl.nodes.empty());
  CHECK(!cl.degenerate_point);
  CHECK(cl.components() == 1);
  CHECK(cl.first_betti() == 2);

  double max_off = 0.0, min_dist = 1e9, deepest = 0.0;
  for (const auto& nd : cl.nodes) {
    auto [x, y] = torus_coord(1.0, 1.0, n, n, nd.pos);
    double dx = std::min(std::abs(x - 0.73), 1.0 - std::abs(x - 0.73));
    double dy = std::min(std::abs(y - 0.87), 1.0 - std::abs(y - 0.87));
    max_off = std::max(max_off, std::min(dx, dy));
    min_dist = std::min(min_dist, nd.dist);
    deepest = std::max(deepest, nd.dist);
  }
  CHECK(max_off < h / 4.0);               // nodes sit on the cross
  CHECK(min_dist == Catch::Approx(0.5).margin(0.01));      // waist of the cut
  CHECK(deepest == Catch::Approx(std::sqrt(0.5)).margin(0.01));  // opposite point
  CHECK(cl.total_length() == Catch::Approx(2.0).margin(0.1));
  CHECK(cl.nodes[cl.deepest()].dist == Catch::Approx(deepest));

  // Labels: interior cut points join exactly two distance sheets, and the
  // crossing of the two circles joins four, so at least one node must be
  // labeled >= 3 and none may claim a single geodesic.
  int junctions = 0;
  for (const auto& nd : cl.nodes) {
    CHECK(nd.multiplicity >= 2);
    if (nd.multiplicity >= 3) ++junctions;
  }
  CHECK(junctions >= 1);

  // Cross-check the labels against the independent enumerator on a sample of
  // nodes. The two draw their candidate sheets differently (cut-graph
  // neighbourhoods vs a fresh ring search), so agreement is a property, not
  // an identity; mismatches are reported, and at most 10% may disagree.
  auto field = distance_field(m, src);
  int sampled = 0, agreed = 0;
  std::string mismatches;
  for (std::size_t i = 0; i < cl.nodes.size(); i += 5) {
    auto gs = minimizing_geodesics(m, field, cl.nodes[i].pos);
    ++sampled;
    if (static_cast<int>(gs.size()) == cl.nodes[i].multiplicity)
      ++agreed;
    else
      mismatches += "node " + std::to_string(i) + ": label " +
                    std::to_string(cl.nodes[i].multiplicity) + " vs enumerated " +
                    std::to_string(gs.size()) + "; ";
  }
  INFO("label/enumeration mismatches: " << (mismatches.empty() ? "none" : mismatches));
  CHECK(agreed * 10 >= sampled * 9);
}

TEST_CASE("cut locus of a sphere point degenerates to the antipode", "[cutlocus]") {
  // A round sphere's cut locus is a single point. The discrete detector finds
  // only a below-resolution tangle near the antipode, prunes it, and reports
  // the farthest point instead, flagged as degenerate.
  auto m = make_sphere(1.0, 4);
  int v0 = 17;
  auto cl = cut_locus(m, m.vertex_point(v0));

  REQUIRE(cl.nodes.size() == 1);
  CHECK(cl.degenerate_point);
  CHECK(cl.arcs.empty());
  CHECK(cl.first_betti() == 0);
  Vec3 p0 = m.positions[v0];
  Vec3 anti{-p0.x, -p0.y, -p0.z};
  CHECK(angle_between_unit(embed(m, cl.nodes[0].pos), anti) < 0.05);
  CHECK(cl.nodes[0].dist == Catch::Approx(kPi).margin(0.05));
  // At a conjugate point whole fans of directions minimize; the label must
  // report several distinct certified classes, not a lone geodesic.
  CHECK(cl.nodes[0].multiplicity >= 3);
}

TEST_CASE("cut locus of an ellipsoid from an end is a far-side tree", "[cutlocus]") {
  auto m = make_ellipsoid(1.0, 0.8, 0.6, 4);
  double h = m.max_edge_length();
  int v0 = 0;
  for (int v = 0; v < m.n_vertices; ++v)
    if (m.positions[v].x > m.positions[v0].x) v0 = v;
  CutLocusOptions opt;
  opt.label_multiplicities = false;  // labels are not under test here
  auto cl = cut_locus(m, m.vertex_point(v0), opt);

  REQUIRE(cl.nodes.size() >= 5);
  CHECK(!cl.degenerate_point);
  CHECK(cl.components() == 1);
  CHECK(cl.first_betti() == 0);  // genus 0: the cut graph is a tree
  for (const auto& nd : cl.nodes) CHECK(embed(m, nd.pos).x < -0.8);
  CHECK(cl.total_length() > 5.0 * h);  // a genuine segment, not point noise
}

TEST_CASE("cut graph cycle rank equals twice the genus", "[cutlocus]") {
  struct Case {
    IntrinsicMesh mesh;
    SurfacePoint src;
    int genus;
  };
  std::vector<Case> cases;
  {
    auto m = make_flat_torus(1.0, 1.0, 12, 12);
    auto p = torus_point(1.0, 1.0, 12, 12, 0.30, 0.55);
    cases.push_back({std::move(m), p, 1});
  }
  {
    auto m = make_flat_torus(1.0, 1.0, 16, 16);
    auto p = torus_point(1.0, 1.0, 16, 16, 0.05, 0.71);
    cases.push_back({std::move(m), p, 1});
  }
  {
    auto m = make_sphere(1.0, 3);
    auto p = m.vertex_point(5);
    cases.push_back({std::move(m), p, 0});
  }
  {
    auto m = make_ellipsoid(1.0, 0.8, 0.6, 3);
    auto p = m.vertex_point(9);
    cases.push_back({std::move(m), p, 0});
  }
  CutLocusOptions opt;
  opt.label_multiplicities = false;  // labels are not under test here
  for (const auto& c : cases) {
    REQUIRE(c.mesh.genus() == c.genus);
    auto cl = cut_locus(c.mesh, c.src, opt);
    INFO("genus " << c.genus << ", nodes " << cl.nodes.size());
    CHECK(cl.first_betti() == 2 * c.genus);
  }
}

TEST_CASE("two distinct sheet geodesics reach a cut node", "[cutlocus]") {
  const int n = 16;
  auto m = make_flat_torus(1.0, 1.0, n, n);
  auto src = torus_point(1.0, 1.0, n, n, 0.23, 0.37);
  auto field = distance_field(m, src);
  CutLocusOptions opt;
  opt.label_multiplicities = false;  // labels are not under test here
  auto cl = cut_locus(m, src, opt);

  // The nearest edge-carried node: the waist of the cut, distance 1/2.
  int waist = -1;
  for (int i = 0; i < static_cast<int>(cl.nodes.size()); ++i)
    if (cl.nodes[i].edge >= 0 && (waist < 0 || cl.nodes[i].dist < cl.nodes[waist].dist))
      waist = i;
  REQUIRE(waist >= 0);

  auto [ga, gb] = geodesics_to_cut_node(m, field, cl, waist);
  CHECK(ga.converged);
  CHECK(gb.converged);
  auto [nx, ny] = torus_coord(1.0, 1.0, n, n, cl.nodes[waist].pos);
  double exact = torus_distance(1.0, 1.0, 0.23, 0.37, nx, ny);
  // Both sheets realize the true distance: no path can beat it, and the
  // shortened representatives must come within discretization slack of it.
  CHECK(ga.length >= exact - 1e-9);
  CHECK(gb.length >= exact - 1e-9);
  CHECK(ga.length <= exact + 0.02);
  CHECK(gb.length <= exact + 0.02);
  CHECK(cl.nodes[waist].dist == Catch::Approx(exact).margin(0.02));

  // The two routes pass on opposite sides: their midpoints are far apart.
  auto midpoint = [&](const Path& p) {
    auto cum = cumulative_lengths(m, p);
    double half = cum.back() / 2.0;
    for (std::size_t i = 1; i < cum.size(); ++i)
      if (cum[i] >= half) return p.pts[i];
    return p.pts.back();
  };
  auto [ax, ay] = torus_coord(1.0, 1.0, n, n, midpoint(ga.path));
  auto [bx, by] = torus_coord(1.0, 1.0, n, n, midpoint(gb.path));
  CHECK(torus_distance(1.0, 1.0, ax, ay, bx, by) > 0.3);
}

TEST_CASE("sheet extraction rejects nodes without sheet data", "[cutlocus]") {
  auto m = make_sphere(1.0, 3);
  auto src = m.vertex_point(5);
  auto field = distance_field(m, src);
  CutLocusOptions opt;
  opt.label_multiplicities = false;  // labels are not under test here
  auto cl = cut_locus(m, src, opt);
  // Degenerate fallback nodes carry no crossed edge.
  if (cl.degenerate_point) {
    CHECK_THROWS_AS(geodesics_to_cut_node(m, field, cl, 0), Error);
  }
  CHECK_THROWS_AS(geodesics_to_cut_node(m, field, cl, -1), Error);
  CHECK_THROWS_AS(geodesics_to_cut_node(m, field, cl, 999999), Error);
}

TEST_CASE("cut locus is stable under the detector's tunable gates", "[cutlocus]") {
  const int n = 16;
  auto m = make_flat_torus(1.0, 1.0, n, n);
  auto src = torus_point(1.0, 1.0, n, n, 0.23, 0.37);
  for (double opp : {0.1, 0.25, 0.4}) {
    CutLocusOptions opt;
    opt.opposing_dot_max = opp;
    opt.label_multiplicities = false;  // labels are not under test here
    auto cl = cut_locus(m, src, opt);
    INFO("opposing_dot_max " << opp);
    CHECK(cl.first_betti() == 2);
    CHECK(cl.components() == 1);
    CHECK(cl.total_length() == Catch::Approx(2.0).margin(0.1));
  }
}
