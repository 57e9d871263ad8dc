#pragma once

// Exact short-range geodesics. local_geodesic enumerates every unfolded
// edge strip out of the source with branch-and-bound pruning (direction
// cones narrow monotonically; strips whose entry edge is already farther
// than the best candidate die), so within the requested cap the returned
// arc is the true shortest path. trace_geodesic walks a straight line from
// a point and direction, unfolding face by face.

#include <limits>
#include <optional>
#include <set>

#include "geoweave/path.hpp"

namespace geoweave {

namespace detail {

inline double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double t = norm2(ab) > 0.0 ? std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0) : 0.0;
  return norm(p - (a + ab * t));
}

// CCW angular interval of directions from the source, width <= pi once
// narrowed. `full` marks the initial all-directions state.
struct Cone {
  Vec2 right{1.0, 0.0}, left{1.0, 0.0};
  bool full = true;

  bool contains(const Vec2& d, double tol) const {
    if (full) return true;
    double n = norm(d);
    if (n == 0.0) return true;
    Vec2 u = d / n;
    return cross(right, u) >= -tol && cross(u, left) >= -tol;
  }

  // Intersect with the interval subtended by segment endpoints at offsets
  // a, b from the source. False when empty (or the segment hits the source).
  bool clip(Vec2 a, Vec2 b, double tol) {
    double n1 = norm(a), n2 = norm(b);
    if (n1 < 1e-300 || n2 < 1e-300) return false;
    a = a / n1;
    b = b / n2;
    double cr = cross(a, b);
    if (cr < 0.0) {
      std::swap(a, b);
      cr = -cr;
    }
    if (cr == 0.0 && dot(a, b) < 0.0) return false;  // source on the segment's line
    if (full) {
      right = a;
      left = b;
      full = false;
      return true;
    }
    Vec2 r = cross(right, a) >= 0.0 ? a : right;
    Vec2 l = cross(b, left) >= 0.0 ? b : left;
    if (cross(r, l) < -tol) return false;
    if (cross(r, l) <= 0.0 && dot(r, l) < 0.0) return false;
    right = r;
    left = l;
    return true;
  }
};

struct Crossing {
  int face;  // face whose side is crossed (the side's owner before unfolding)
  int side;
  Vec2 a, b;  // planar endpoints of that side in the strip's plane
};

struct StripSearch {
  const IntrinsicMesh& m;
  double cap;
  double ang_tol = 1e-9;
  int max_depth = 64;  // constructor scales this with cap / min edge
  int node_budget = 200000;

  std::vector<std::pair<int, SurfacePoint>> q_images;  // q rewritten per face

  Vec2 p0;  // source image in the current start plane
  std::vector<Crossing> stack;

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  bool exhausted = false;  // budget/depth ran out: exactness no longer assured
  std::vector<Crossing> best_stack;
  Vec2 best_p0{}, best_q{};
  std::set<int> fat_vertices;  // cone angle > 2*pi seen within reach

  StripSearch(const IntrinsicMesh& mesh, const SurfacePoint& q, double cap_)
      : m(mesh), cap(cap_) {
    // A strip of length `cap` crosses O(cap / edge) faces, and each flat
    // vertex it threads adds a full star of crossings; 40 edges' worth of
    // slack per unit length covers both with a wide margin.
    double min_edge = std::max(mesh.min_edge_length(), 1e-30);
    max_depth = std::min(100000.0, 64.0 + 40.0 * cap / min_edge);
    for (int f : faces_of(m, q)) q_images.push_back({f, reexpress(m, q, f)});
  }

  double limit() const { return std::min(cap, best); }

  void try_candidate(int f, const std::array<Vec2, 3>& layout, const Cone& cone) {
    for (auto& [qf, qp] : q_images) {
      if (qf != f) continue;
      Vec2 img = m.point_in_layout(qp, layout);
      Vec2 d = img - p0;
      double len = norm(d);
      if (len > limit() + 1e-12) continue;
      if (!cone.contains(d, ang_tol)) continue;
      if (len >= best - 1e-15) continue;
      // The chord must cross every stacked edge strictly inside unless the
      // grazed vertex is flat (cone angle exactly 2*pi). For sharper or
      // fatter vertices a grazing chord is not a real path; the genuine
      // optimum crosses interiors in a sibling strip and is found there.
      bool ok = true;
      for (const auto& c : stack) {
        double dn = cross(d, c.b - c.a);
        double t = dn != 0.0 ? cross(d, p0 - c.a) / dn : 0.5;
        // Fraction of the chord where this edge is met: the cone guarantees
        // the ray crosses the edge, but on a wrapping strip q's image can
        // sit closer than the edge, which makes the chord fictitious.
        double u = dn != 0.0 ? cross(c.a - p0, c.b - c.a) / dn : 0.0;
        if (u < -1e-9 || u > 1.0 + 1e-9) {
          ok = false;
          break;
        }
        int vtx = -1;
        if (t < 1e-9) vtx = m.faces[c.face][c.side];
        else if (t > 1.0 - 1e-9) vtx = m.faces[c.face][(c.side + 1) % 3];
        if (vtx >= 0 && std::abs(m.cone_angle(vtx) - kTwoPi) > 1e-9) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      best = len;
      found = true;
      best_stack = stack;
      best_p0 = p0;
      best_q = img;
    }
  }

  // `advanced` is the progress frontier: the distance from p0 of the last
  // vertex this strip threaded. Chords cross stacked edges in order, so a
  // confined window at or behind the frontier is a phantom re-crossing of a
  // vertex already passed, never a continuation.
  void dfs(int f, const std::array<Vec2, 3>& layout, const Cone& cone, int entry_side,
           int depth, double advanced = 0.0) {
    if (--node_budget < 0) {
      exhausted = true;
      return;
    }
    try_candidate(f, layout, cone);
    for (int i = 0; i < 3; ++i) {
      int v = m.faces[f][i];
      if (m.cone_angle(v) > kTwoPi + 1e-9 && norm(layout[i] - p0) <= limit())
        fat_vertices.insert(v);
    }
    if (depth >= max_depth) {
      exhausted = true;
      return;
    }
    for (int i = 0; i < 3; ++i) {
      if (i == entry_side) continue;
      Vec2 a = layout[i], b = layout[(i + 1) % 3];
      if (dist_point_segment(p0, a, b) > limit() + 1e-12) continue;
      Cone child = cone;
      if (!child.clip(a - p0, b - p0, ang_tol)) continue;
      // Funnel prune: admissible rays meet this edge only inside the window
      // cut out by the cone's boundary rays. Any path through the strip is
      // at least as long as the distance to that window, which grows
      // monotonically along the strip and kills wandering branches.
      if (!child.full) {
        auto ray_param = [&](const Vec2& r) {
          double dn = cross(r, b - a);
          return dn != 0.0 ? cross(r, p0 - a) / dn
                           : std::numeric_limits<double>::infinity();
        };
        double tr = ray_param(child.right), tl = ray_param(child.left);
        double t0 = 0.0, t1 = 1.0;
        if (std::isfinite(tr) && std::isfinite(tl)) {
          t0 = std::clamp(std::min(tr, tl), 0.0, 1.0);
          t1 = std::clamp(std::max(tr, tl), 0.0, 1.0);
        }
        Vec2 w0 = a + (b - a) * t0, w1 = a + (b - a) * t1;
        if (dist_point_segment(p0, w0, w1) > limit() + 1e-12) continue;
        // Window confined to a corner: every surviving chord passes through
        // (or within tolerance of) that vertex. Geodesics pass a vertex only
        // when its cone angle is exactly 2*pi -- sharper vertices always
        // have a strictly shorter route around one side (found in a sibling
        // strip), and fatter ones are covered by two-leg concatenation.
        // Flat passages are handled atomically; expanding them as ordinary
        // children spirals forever, because around a flat vertex the
        // development is periodic and the funnel distance plateaus.
        const double eps_t = 1e-6;
        if (t1 <= eps_t || t0 >= 1.0 - eps_t) {
          bool v_at_tail = t1 <= eps_t;
          int vloc = v_at_tail ? i : (i + 1) % 3;
          if (norm(layout[vloc] - p0) <= advanced + 1e-12) continue;  // behind frontier
          if (std::abs(m.cone_angle(m.faces[f][vloc]) - kTwoPi) > 1e-9) continue;
          thread_vertex(f, layout, i, v_at_tail, depth);
          continue;
        }
      }
      auto [g, glay] = m.unfold_across(f, i, layout);
      stack.push_back({f, i, a, b});
      dfs(g, glay, child, m.neighbor_side[f][i], depth + 1, advanced);
      stack.pop_back();
    }
  }

  // Thread the strip through a flat vertex: the chord continues straight
  // past the vertex's planar image, so wind around the vertex in one fixed
  // rotational sense, recording each crossed star edge, until the continuing
  // ray enters a face's wedge; resume the ordinary search there with the
  // cone pinched to the exact ray. Visits each star face at most once.
  void thread_vertex(int f, std::array<Vec2, 3> lay, int side0, bool v_at_tail, int depth) {
    int vloc = v_at_tail ? side0 : (side0 + 1) % 3;
    int v = m.faces[f][vloc];
    Vec2 vp = lay[vloc];
    if (norm(vp - p0) < 1e-12) return;  // source sits at the vertex itself
    Vec2 out_dir = normalized(vp - p0);
    int cf = f;
    int cs = side0;
    int star = static_cast<int>(m.vertex_star[v].size());
    size_t base = stack.size();
    for (int k = 0; k <= star; ++k) {
      if (depth + static_cast<int>(stack.size() - base) + 1 >= max_depth) {
        exhausted = true;
        break;
      }
      stack.push_back({cf, cs, lay[cs], lay[(cs + 1) % 3]});
      auto [g, glay] = m.unfold_across(cf, cs, lay);
      int j = m.neighbor_side[cf][cs];
      // v is one endpoint of the crossed side; in g it sits at the opposite
      // end of side j (side directions reverse across an edge).
      int gc = v_at_tail ? (j + 1) % 3 : j;
      Vec2 e0 = glay[(gc + 1) % 3] - glay[gc];
      Vec2 e1 = glay[(gc + 2) % 3] - glay[gc];
      bool inside = cross(e0, out_dir) >= -ang_tol * norm(e0) &&
                    cross(out_dir, e1) >= -ang_tol * norm(e1);
      if (inside || k == star) {  // wedges sum to 2*pi, so the last one catches
        Cone ray;
        ray.right = ray.left = out_dir;
        ray.full = false;
        dfs(g, glay, ray, j, depth + static_cast<int>(stack.size() - base), norm(vp - p0));
        break;
      }
      cf = g;
      lay = glay;
      cs = v_at_tail ? gc : (gc + 2) % 3;  // next star edge, same winding sense
    }
    stack.resize(base);
  }
};

}  // namespace detail

struct LocalArc {
  Path path;
  double length = 0.0;
};

// Shortest geodesic arc from p to q among all paths of length <= cap.
// Exhaustive within the cap, hence exact; nullopt when no such path exists.
// vertex_depth > 0 additionally considers routes through cone points of
// angle > 2*pi (where geodesics may legally pass a vertex).
inline std::optional<LocalArc> local_geodesic(const IntrinsicMesh& m, const SurfacePoint& p,
                                              const SurfacePoint& q, double cap,
                                              int vertex_depth = 1) {
  if (same_point(m, p, q)) return LocalArc{Path{{p, q}, false}, 0.0};

  detail::StripSearch search(m, q, cap);
  std::set<int> started;
  for (int f0 : faces_of(m, p)) {
    if (!started.insert(f0).second) continue;
    auto layout = m.face_layout(f0);
    search.p0 = m.point_in_layout(reexpress(m, p, f0), layout);
    search.stack.clear();
    search.dfs(f0, layout, detail::Cone{}, -1, 0);
  }
  require(!search.exhausted, ErrorCode::MaxIterExceeded,
          "local geodesic strip search ran out of budget; result would not be exact");

  std::optional<LocalArc> out;
  if (search.found) {
    Path path;
    path.pts.push_back(p);
    Vec2 prev = search.best_p0;
    for (const auto& c : search.best_stack) {
      Vec2 d = search.best_q - search.best_p0;
      double denom = cross(d, c.b - c.a);
      double t = denom != 0.0 ? cross(d, search.best_p0 - c.a) / denom : 0.5;
      t = std::clamp(t, 0.0, 1.0);
      Vec2 x = c.a + (c.b - c.a) * t;
      if (norm(x - prev) < 1e-12) continue;  // grazing a corner: skip duplicates
      prev = x;
      SurfacePoint sp;
      sp.face = c.face;
      sp.bary[c.side] = 1.0 - t;
      sp.bary[(c.side + 1) % 3] = t;
      path.pts.push_back(sp);
    }
    path.pts.push_back(q);
    out = LocalArc{dedup_points(m, path, 1e-12), search.best};
    if (out->path.pts.size() < 2) out->path.pts = {p, q};
  }

  // Routes through fat cone points (angle > 2*pi), two legs at a time.
  if (vertex_depth > 0) {
    for (int v : search.fat_vertices) {
      SurfacePoint vp = m.vertex_point(v);
      double budget = out ? out->length : cap;
      auto leg1 = local_geodesic(m, p, vp, budget, vertex_depth - 1);
      if (!leg1) continue;
      auto leg2 = local_geodesic(m, vp, q, budget - leg1->length, vertex_depth - 1);
      if (!leg2) continue;
      double total = leg1->length + leg2->length;
      if (!out || total < out->length - 1e-15)
        out = LocalArc{dedup_points(m, concatenate(m, leg1->path, leg2->path), 1e-12), total};
    }
  }
  return out;
}

// Intrinsic distance between two points when it is <= cap, else nullopt.
inline std::optional<double> point_distance_capped(const IntrinsicMesh& m, const SurfacePoint& p,
                                                   const SurfacePoint& q, double cap) {
  auto arc = local_geodesic(m, p, q, cap);
  if (!arc) return std::nullopt;
  return arc->length;
}

// ---------------------------------------------------------------------------
// Straight-line tracing.

// Walk a geodesic of the given length from a start point and direction.
// Direction convention: for interior and edge points, the angle is measured
// in the canonical layout of `from.face`; for a vertex, CCW from the wedge
// start of the vertex's first star face, in [0, cone angle). When the line
// runs into a vertex it is nudged 1e-7 * h sideways unless `strict`, in
// which case VertexHit is raised.
inline Path trace_geodesic(const IntrinsicMesh& m, const SurfacePoint& from, double angle,
                           double length, bool strict = false) {
  require(length >= 0.0 && std::isfinite(length), ErrorCode::InvalidInput,
          "trace length must be finite and nonnegative");
  double h = m.max_edge_length();

  int f;
  std::array<Vec2, 3> layout;
  Vec2 pos, dir;
  int entry_side = -1;

  int corner = from.corner();
  if (corner >= 0) {
    // Pick the star wedge the angle falls in.
    int v = m.faces[from.face][corner];
    double cone = m.cone_angle(v);
    double a = std::fmod(angle, cone);
    if (a < 0.0) a += cone;
    f = -1;
    for (auto [sf, sc] : m.vertex_star[v]) {
      double w = m.corner_angle[sf][sc];
      if (a <= w || std::make_pair(sf, sc) == m.vertex_star[v].back()) {
        f = sf;
        layout = m.face_layout(sf);
        pos = layout[sc];
        dir = rotate(normalized(layout[(sc + 1) % 3] - layout[sc]), std::min(a, w));
        break;
      }
      a -= w;
    }
  } else {
    f = from.face;
    layout = m.face_layout(f);
    pos = m.point_in_layout(from, layout);
    dir = {std::cos(angle), std::sin(angle)};
    // If the start sits on an edge and the direction points out of the face,
    // hop across until it points inward.
    for (int guard = 0; guard < 64 && from.side() >= 0; ++guard) {
      int side = -1;
      for (int i = 0; i < 3; ++i) {
        Vec2 a = layout[i], b = layout[(i + 1) % 3];
        if (detail::dist_point_segment(pos, a, b) < 1e-9 * h && cross(b - a, dir) < 0.0) side = i;
      }
      if (side < 0) break;
      auto [g, glay] = m.unfold_across(f, side, layout);
      entry_side = m.neighbor_side[f][side];
      f = g;
      layout = glay;
    }
  }

  Path path;
  path.pts.push_back(from);
  double remaining = length;
  int max_steps = static_cast<int>(20.0 * length / std::max(m.min_edge_length(), 1e-12)) + 64;
  for (int step = 0; step < max_steps && remaining > 1e-12 * h; ++step) {
    // Exit through the nearest side ahead.
    int exit_side = -1;
    double exit_t = std::numeric_limits<double>::infinity();
    double exit_s = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (i == entry_side) continue;
      Vec2 a = layout[i], b = layout[(i + 1) % 3];
      double denom = cross(dir, b - a);
      if (denom == 0.0) continue;
      double t = cross(a - pos, b - a) / denom;  // distance along the ray
      double s = cross(a - pos, dir) / denom;    // position along the side
      if (t > 1e-12 * h && s >= -1e-9 && s <= 1.0 + 1e-9 && t < exit_t) {
        exit_t = t;
        exit_s = s;
        exit_side = i;
      }
    }
    if (exit_side < 0 || exit_t >= remaining) {
      // Ends inside this face (or numerically on its boundary).
      Vec2 end = pos + dir * std::min(remaining, exit_t);
      SurfacePoint sp;
      sp.face = f;
      sp.bary = IntrinsicMesh::bary_in_layout(end, layout);
      path.pts.push_back(clamp_bary(sp, 1e-7));
      return path;
    }

    double elen = m.side_length(f, exit_side);
    double delta = 1e-7 * h / elen;
    if (exit_s < delta || exit_s > 1.0 - delta) {
      if (strict) fail(ErrorCode::VertexHit, "trace ran into a vertex");
      exit_s = std::clamp(exit_s, delta, 1.0 - delta);
    }
    Vec2 a = layout[exit_side], b = layout[(exit_side + 1) % 3];
    Vec2 x = a + (b - a) * exit_s;
    remaining -= norm(x - pos);
    pos = x;

    SurfacePoint sp;
    sp.face = f;
    sp.bary[exit_side] = 1.0 - exit_s;
    sp.bary[(exit_side + 1) % 3] = exit_s;
    path.pts.push_back(sp);

    auto [g, glay] = m.unfold_across(f, exit_side, layout);
    entry_side = m.neighbor_side[f][exit_side];
    f = g;
    layout = glay;
  }
  if (remaining > 1e-9 * h)
    fail(ErrorCode::MaxIterExceeded, "trace exceeded its step budget");
  path.pts.push_back(path.pts.back());
  return path;
}

// Launch angle (in the trace_geodesic convention) of the path's first
// segment as seen from its start point.
inline double launch_angle(const IntrinsicMesh& m, const Path& path) {
  require(path.pts.size() >= 2, ErrorCode::InvalidInput, "path too short for a direction");
  const SurfacePoint& p = path.pts.front();
  size_t k = 1;
  while (k < path.pts.size() && same_point(m, p, path.pts[k])) ++k;
  require(k < path.pts.size(), ErrorCode::InvalidInput, "degenerate path has no direction");
  const SurfacePoint& nxt = path.pts[k];

  int corner = p.corner();
  if (corner >= 0) return angle_at_vertex(m, m.faces[p.face][corner], nxt);

  auto layout = m.face_layout(p.face);
  Vec2 pp = m.point_in_layout(p, layout);
  Vec2 img;
  int cf = common_face(m, p, nxt);
  require(cf >= 0, ErrorCode::InvalidInput, "consecutive path points share no face");
  if (cf == p.face) {
    img = m.point_in_layout(reexpress(m, nxt, cf), layout);
  } else {
    // p must sit on the side shared with cf; unfold cf into p's plane.
    int s = p.side();
    require(s >= 0 && m.face_neighbor[p.face][s] == cf, ErrorCode::InvalidInput,
            "next path point is not across the start point's edge");
    auto [g, glay] = m.unfold_across(p.face, s, layout);
    img = m.point_in_layout(reexpress(m, nxt, g), glay);
  }
  Vec2 d = img - pp;
  return std::atan2(d.y, d.x);
}

}  // namespace geoweave
