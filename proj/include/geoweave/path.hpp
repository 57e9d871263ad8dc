#pragma once

// Piecewise-straight curves on the surface. A Path is a polyline of surface
// points where every consecutive pair lies in (the closure of) a common face,
// so each segment is a straight line in that face's layout and lengths are
// exact. Edge crossings appear as explicit points on the shared edge.

#include <optional>
#include <vector>

#include "geoweave/mesh.hpp"

namespace geoweave {

// Faces whose closure contains p: 1 (interior), 2 (on a side), or the whole
// star (at a vertex).
inline std::vector<int> faces_of(const IntrinsicMesh& m, const SurfacePoint& p) {
  int c = p.corner();
  if (c >= 0) {
    std::vector<int> out;
    for (auto [f, cc] : m.vertex_star[m.faces[p.face][c]]) out.push_back(f);
    return out;
  }
  int s = p.side();
  if (s >= 0) return {p.face, m.face_neighbor[p.face][s]};
  return {p.face};
}

inline int common_face(const IntrinsicMesh& m, const SurfacePoint& p, const SurfacePoint& q) {
  auto fp = faces_of(m, p), fq = faces_of(m, q);
  int best = -1;
  for (int a : fp)
    for (int b : fq)
      if (a == b && (best < 0 || a < best)) best = a;
  return best;
}

// Rewrite p's barycentric coordinates relative to face f, which must contain
// p in its closure.
inline SurfacePoint reexpress(const IntrinsicMesh& m, const SurfacePoint& p, int f) {
  if (p.face == f) return p;
  SurfacePoint out;
  out.face = f;
  int c = p.corner();
  if (c >= 0) {
    int v = m.faces[p.face][c];
    for (int i = 0; i < 3; ++i)
      if (m.faces[f][i] == v) {
        out.bary[i] = 1.0;
        return out;
      }
    fail(ErrorCode::InvalidInput, "point is not on the requested face");
  }
  int s = p.side();
  require(s >= 0 && m.face_neighbor[p.face][s] == f, ErrorCode::InvalidInput,
          "point is not on the requested face");
  int j = m.neighbor_side[p.face][s];
  // Side s of p.face runs A->B; side j of f runs B->A.
  out.bary[j] = p.bary[(s + 1) % 3];
  out.bary[(j + 1) % 3] = p.bary[s];
  return out;
}

inline double segment_length(const IntrinsicMesh& m, const SurfacePoint& p,
                             const SurfacePoint& q) {
  int f = common_face(m, p, q);
  require(f >= 0, ErrorCode::InvalidInput, "segment endpoints share no face");
  auto layout = m.face_layout(f);
  Vec2 a = m.point_in_layout(reexpress(m, p, f), layout);
  Vec2 b = m.point_in_layout(reexpress(m, q, f), layout);
  return norm(a - b);
}

struct Path {
  std::vector<SurfacePoint> pts;
  bool closed = false;

  int n_segments() const {
    int n = static_cast<int>(pts.size());
    return closed ? n : std::max(0, n - 1);
  }
};

inline double path_length(const IntrinsicMesh& m, const Path& path) {
  double total = 0.0;
  int n = static_cast<int>(path.pts.size());
  for (int i = 0; i < path.n_segments(); ++i)
    total += segment_length(m, path.pts[i], path.pts[(i + 1) % n]);
  return total;
}

// Prefix arc lengths: entry i is the length up to pts[i]; for closed paths an
// extra final entry carries the total (back at pts[0]).
inline std::vector<double> cumulative_lengths(const IntrinsicMesh& m, const Path& path) {
  int n = static_cast<int>(path.pts.size());
  std::vector<double> cum(1, 0.0);
  for (int i = 0; i < path.n_segments(); ++i)
    cum.push_back(cum.back() + segment_length(m, path.pts[i], path.pts[(i + 1) % n]));
  return cum;
}

inline Path reverse_path(Path p) {
  std::reverse(p.pts.begin(), p.pts.end());
  return p;
}

// True when the two points coincide on the surface (not merely equal coords:
// the same point can be written in up to deg(v) faces).
inline bool same_point(const IntrinsicMesh& m, const SurfacePoint& p, const SurfacePoint& q,
                       double tol = 1e-9) {
  int f = common_face(m, p, q);
  if (f < 0) return false;
  auto layout = m.face_layout(f);
  return norm(m.point_in_layout(reexpress(m, p, f), layout) -
              m.point_in_layout(reexpress(m, q, f), layout)) <= tol;
}

inline Path concatenate(const IntrinsicMesh& m, const Path& a, const Path& b) {
  require(!a.closed && !b.closed, ErrorCode::InvalidInput, "cannot concatenate closed paths");
  require(!a.pts.empty() && !b.pts.empty(), ErrorCode::InvalidInput, "empty path");
  require(same_point(m, a.pts.back(), b.pts.front(), 1e-7), ErrorCode::InvalidInput,
          "paths do not share an endpoint");
  Path out = a;
  out.pts.insert(out.pts.end(), b.pts.begin() + 1, b.pts.end());
  return out;
}

// Point at arc length s along the path (clamped to [0, total]).
inline SurfacePoint point_at(const IntrinsicMesh& m, const Path& path,
                             const std::vector<double>& cum, double s) {
  int n = static_cast<int>(path.pts.size());
  s = std::clamp(s, 0.0, cum.back());
  int seg = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin()) - 1;
  seg = std::clamp(seg, 0, path.n_segments() - 1);
  const SurfacePoint& a = path.pts[seg];
  const SurfacePoint& b = path.pts[(seg + 1) % n];
  double len = cum[seg + 1] - cum[seg];
  double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
  int f = common_face(m, a, b);
  SurfacePoint pa = reexpress(m, a, f), pb = reexpress(m, b, f);
  SurfacePoint out;
  out.face = f;
  for (int i = 0; i < 3; ++i) out.bary[i] = (1.0 - t) * pa.bary[i] + t * pb.bary[i];
  return clamp_bary(out);
}

inline SurfacePoint point_at(const IntrinsicMesh& m, const Path& path, double s) {
  return point_at(m, path, cumulative_lengths(m, path), s);
}

// Arc-length-uniform samples along the path, spaced at most `spacing` apart
// (first and last samples are the path ends; closed paths wrap, so the last
// sample repeats the first).
inline std::vector<SurfacePoint> sample_uniform(const IntrinsicMesh& m, const Path& p,
                                                double spacing) {
  require(spacing > 0.0, ErrorCode::InvalidInput, "sample spacing must be positive");
  auto cum = cumulative_lengths(m, p);
  double total = cum.back();
  int n = std::max(1, static_cast<int>(std::ceil(total / spacing)));
  std::vector<SurfacePoint> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(point_at(m, p, cum, total * i / n));
  return out;
}

// Angle of planar direction d relative to the start of corner c's wedge in
// face f (the side leaving that corner), measured CCW, given f's layout.
inline double wedge_angle(const IntrinsicMesh& m, int f, int c, const std::array<Vec2, 3>& layout,
                          const Vec2& d) {
  Vec2 ref = layout[(c + 1) % 3] - layout[c];
  double a = std::atan2(cross(ref, d), dot(ref, d));
  if (a < 0.0) a += kTwoPi;
  return a;
}

// Direction angle of q as seen from vertex v, measured CCW from the wedge
// start of star face 0, in [0, cone_angle). q must lie in a star face of v.
inline double angle_at_vertex(const IntrinsicMesh& m, int v, const SurfacePoint& q) {
  double offset = 0.0;
  for (auto [f, c] : m.vertex_star[v]) {
    for (int qf : faces_of(m, q))
      if (qf == f) {
        auto layout = m.face_layout(f);
        Vec2 d = m.point_in_layout(reexpress(m, q, f), layout) - layout[c];
        if (norm(d) > 0.0) return offset + std::clamp(wedge_angle(m, f, c, layout, d), 0.0,
                                                      m.corner_angle[f][c]);
      }
    offset += m.corner_angle[f][c];
  }
  fail(ErrorCode::InvalidInput, "point is not adjacent to the vertex");
}

// CCW angle at which the path leaves its starting point, in a chart that is
// consistent for every path out of that point: the face chart when the start
// is face-interior, the chart extended across the edge when it is
// edge-interior, and the cone coordinate of the vertex star when it is a
// vertex. Distinct geodesics out of one point get distinct, circularly
// ordered values.
inline double departure_angle(const IntrinsicMesh& m, const Path& p) {
  require(p.pts.size() >= 2, ErrorCode::InvalidInput, "path too short for a departure angle");
  const SurfacePoint& x = p.pts.front();
  std::size_t j = 1;
  while (j < p.pts.size() && same_point(m, x, p.pts[j])) ++j;
  require(j < p.pts.size(), ErrorCode::InvalidInput, "path never leaves its start point");
  const SurfacePoint& q = p.pts[j];

  int c = x.corner();
  if (c >= 0) return angle_at_vertex(m, m.faces[x.face][c], q);

  int f = x.face;
  auto layout = m.face_layout(f);
  Vec2 pp = m.point_in_layout(x, layout);
  for (int qf : faces_of(m, q))
    if (qf == f) {
      Vec2 d = m.point_in_layout(reexpress(m, q, f), layout) - pp;
      double a = std::atan2(d.y, d.x);
      return a < 0.0 ? a + kTwoPi : a;
    }
  int s = x.side();
  if (s >= 0) {
    auto [g, glay] = m.unfold_across(f, s, layout);
    for (int qf : faces_of(m, q))
      if (qf == g) {
        Vec2 d = m.point_in_layout(reexpress(m, q, g), glay) - pp;
        double a = std::atan2(d.y, d.x);
        return a < 0.0 ? a + kTwoPi : a;
      }
  }
  fail(ErrorCode::InvalidInput, "departure step leaves the start point's charts");
}

// How far the polyline is from straight at interior point i, in radians:
// 0 means the two segments continue each other exactly; at a cone vertex the
// bend is pi minus the smaller of the two side angles (0 when both sides can
// absorb pi, which needs cone angle >= 2*pi).
inline double bend_angle(const IntrinsicMesh& m, const Path& path, int i) {
  int n = static_cast<int>(path.pts.size());
  const SurfacePoint& p = path.pts[i];
  const SurfacePoint& a = path.pts[(i + n - 1) % n];
  const SurfacePoint& b = path.pts[(i + 1) % n];

  int corner = p.corner();
  if (corner >= 0) {
    int v = m.faces[p.face][corner];
    double cone = m.cone_angle(v);
    double ta = angle_at_vertex(m, v, a);
    double tb = angle_at_vertex(m, v, b);
    double left = std::fmod(tb - ta + 2.0 * cone, cone);
    double right = cone - left;
    return std::max(0.0, kPi - std::min(left, right));
  }

  int s = p.side();
  if (s < 0) {
    // Interior point: both neighbors are in p's face.
    int f = p.face;
    auto layout = m.face_layout(f);
    Vec2 pp = m.point_in_layout(p, layout);
    Vec2 da = m.point_in_layout(reexpress(m, a, f), layout) - pp;
    Vec2 db = m.point_in_layout(reexpress(m, b, f), layout) - pp;
    double ang = std::acos(std::clamp(dot(da, db) / (norm(da) * norm(db)), -1.0, 1.0));
    return kPi - ang;
  }

  // Point on an edge interior: unfold the neighbor so the wedge is planar.
  int f = p.face;
  auto layout = m.face_layout(f);
  auto [g, glay] = m.unfold_across(f, s, layout);
  Vec2 pp = m.point_in_layout(p, layout);
  auto dir_to = [&](const SurfacePoint& x) {
    for (int xf : faces_of(m, x)) {
      if (xf == f) return m.point_in_layout(reexpress(m, x, f), layout) - pp;
      if (xf == g) return m.point_in_layout(reexpress(m, x, g), glay) - pp;
    }
    fail(ErrorCode::InvalidInput, "polyline neighbor too far from edge point");
  };
  Vec2 da = dir_to(a), db = dir_to(b);
  double ang = std::acos(std::clamp(dot(da, db) / (norm(da) * norm(db)), -1.0, 1.0));
  return kPi - ang;
}

// Largest bend over the interior (all points for closed paths): the
// straightness certificate. A path is a discrete geodesic when this is small.
inline double max_bend(const IntrinsicMesh& m, const Path& path) {
  int n = static_cast<int>(path.pts.size());
  double worst = 0.0;
  int lo = path.closed ? 0 : 1;
  int hi = path.closed ? n : n - 1;
  for (int i = lo; i < hi; ++i) {
    // Skip zero-length corners: duplicate points carry no direction.
    const SurfacePoint& prev = path.pts[(i + n - 1) % n];
    const SurfacePoint& next = path.pts[(i + 1) % n];
    if (same_point(m, path.pts[i], prev) || same_point(m, path.pts[i], next)) continue;
    worst = std::max(worst, bend_angle(m, path, i));
  }
  return worst;
}

// Split an open path at increasing arc-length stations, returning one subpath
// per consecutive pair of stations (stations are clamped and deduplicated).
inline std::vector<Path> split_at(const IntrinsicMesh& m, const Path& path,
                                  std::vector<double> stations) {
  require(!path.closed, ErrorCode::InvalidInput, "split_at expects an open path");
  auto cum = cumulative_lengths(m, path);
  std::sort(stations.begin(), stations.end());
  std::vector<double> st = {0.0};
  for (double s : stations)
    if (s > st.back() + 1e-12 && s < cum.back() - 1e-12) st.push_back(s);
  st.push_back(cum.back());

  std::vector<Path> out;
  for (size_t k = 0; k + 1 < st.size(); ++k) {
    Path piece;
    piece.pts.push_back(point_at(m, path, cum, st[k]));
    for (size_t i = 0; i < path.pts.size(); ++i)
      if (cum[i] > st[k] + 1e-12 && cum[i] < st[k + 1] - 1e-12) piece.pts.push_back(path.pts[i]);
    piece.pts.push_back(point_at(m, path, cum, st[k + 1]));
    out.push_back(std::move(piece));
  }
  return out;
}

// Drop consecutive duplicate points (within tol) so segments have direction.
inline Path dedup_points(const IntrinsicMesh& m, const Path& path, double tol = 1e-9) {
  Path out;
  out.closed = path.closed;
  for (const auto& p : path.pts)
    if (out.pts.empty() || !same_point(m, out.pts.back(), p, tol)) out.pts.push_back(p);
  if (path.closed && out.pts.size() > 1 && same_point(m, out.pts.front(), out.pts.back(), tol))
    out.pts.pop_back();
  return out;
}

}  // namespace geoweave
