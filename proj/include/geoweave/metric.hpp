#pragma once
// Global metric machinery built on top of the exact local solver: distance
// fields over the whole surface, descent polylines through a field, globally
// shortest geodesics (field + descent + curve shortening), diameter search,
// and farthest-point queries.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "geoweave/base.hpp"
#include "geoweave/mesh.hpp"
#include "geoweave/path.hpp"
#include "geoweave/shorten.hpp"

namespace geoweave {

namespace detail {

// Wavefront update within one triangle. Corners A and B carry tentative
// distances ua and ub; lab = |AB|, lac = |AC|, lbc = |BC|. The triangle is
// laid flat, the virtual planar source consistent with (ua, ub) is placed on
// the far side of AB, and |SC| is the candidate for C — but only when the
// straight ray S->C actually enters through the open segment AB. Otherwise
// the wave reaches C around a corner and only the edge relaxations apply.
// Wavefront update within one triangle, in a local frame with A at the
// origin, B at (lab, 0), and C above the axis. Reports which support the
// wave mainly came through (`carrier`: 0 for A, 1 for B) and the virtual
// planar source `origin` consistent with the winning value at C.
struct WaveUpdate {
  double value = std::numeric_limits<double>::infinity();
  int carrier = 0;
  Vec2 origin;  // virtual source in the local frame
};

inline WaveUpdate wavefront_update_full(double ua, double ub, double lab, double lac,
                                        double lbc) {
  WaveUpdate out;
  if (ua + lac <= ub + lbc) {
    out.value = ua + lac;
    out.carrier = 0;
    out.origin = Vec2{0.0, 0.0};  // wave pivots around A
  } else {
    out.value = ub + lbc;
    out.carrier = 1;
    out.origin = Vec2{lab, 0.0};
  }
  if (!(lab > 0.0)) return out;
  double cx = (lab * lab + lac * lac - lbc * lbc) / (2.0 * lab);
  double cy2 = lac * lac - cx * cx;
  if (cy2 <= 0.0) return out;
  double sx = (ua * ua - ub * ub + lab * lab) / (2.0 * lab);
  double sy2 = ua * ua - sx * sx;
  if (sy2 < 0.0) return out;  // no planar source matches (ua, ub)
  double sy = -std::sqrt(sy2);
  double cy = std::sqrt(cy2);
  double xcross = sx + (cx - sx) * (-sy / (cy - sy));
  if (!(xcross > 0.0 && xcross < lab)) return out;
  double through = std::hypot(cx - sx, cy - sy);
  if (through < out.value) {
    out.value = through;
    out.carrier = xcross < 0.5 * lab ? 0 : 1;
    out.origin = Vec2{sx, sy};
  }
  return out;
}

inline double wavefront_update(double ua, double ub, double lab, double lac, double lbc,
                               int* carrier = nullptr) {
  WaveUpdate w = wavefront_update_full(ua, ub, lab, lac, lbc);
  if (carrier) *carrier = w.carrier;
  return w.value;
}

// |corner i, corner j| in face f for distinct local indices. Side i joins
// corners i and i+1, so the pair (i, i+1) is side i and (i, i+2) is side i+2
// (which joins corners i+2 and i).
inline double corner_gap(const IntrinsicMesh& m, int f, int i, int j) {
  return j == (i + 1) % 3 ? m.side_length(f, i) : m.side_length(f, j);
}

}  // namespace detail

// Distance field from a set of source points, sampled at vertices. Values
// propagate by per-triangle wavefront updates with label correction (a vertex
// re-opens whenever a later wave improves it), so on non-obtuse meshes the
// values match the true distance to first order in the edge length and the
// field is 1-Lipschitz along every edge.
struct DistanceField {
  std::vector<SurfacePoint> sources;
  std::vector<double> vertex_dist;
  std::vector<int> pred;     // wave predecessor per vertex; -1 at source-face corners
  std::vector<int> av_face;  // face whose update set the vertex (-1: none recorded)
  std::vector<Vec2> av_dir;  // incoming wave direction there, in face_layout(av_face) frame
  int argmax = -1;           // vertex farthest from the source set
  double max_dist = 0.0;

  double at_vertex(int v) const { return vertex_dist[v]; }

  // Field value at an arbitrary point: the straight in-face run to any source
  // sharing a face with p (exact near that source), else barycentric
  // interpolation of the corner values.
  double operator()(const IntrinsicMesh& m, const SurfacePoint& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sources)
      if (common_face(m, p, s) >= 0) best = std::min(best, segment_length(m, p, s));
    double interp = 0.0;
    for (int c = 0; c < 3; ++c) interp += p.bary[c] * vertex_dist[m.faces[p.face][c]];
    return std::min(best, interp);
  }
};

inline DistanceField distance_field(const IntrinsicMesh& m, std::vector<SurfacePoint> sources) {
  require(!sources.empty(), ErrorCode::InvalidInput, "distance field needs at least one source");
  DistanceField out;
  out.sources = std::move(sources);
  int nv = m.n_vertices;
  auto& d = out.vertex_dist;
  d.assign(nv, std::numeric_limits<double>::infinity());
  out.pred.assign(nv, -1);
  out.av_face.assign(nv, -1);
  out.av_dir.assign(nv, Vec2{});

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (const auto& s : out.sources) {
    require(s.face >= 0 && s.face < m.n_faces(), ErrorCode::InvalidInput,
            "distance field source lies on no face");
    auto layout = m.face_layout(s.face);
    Vec2 sp = m.point_in_layout(s, layout);
    for (int c = 0; c < 3; ++c) {
      int v = m.faces[s.face][c];
      double dv = norm(layout[c] - sp);
      if (dv < d[v]) {
        d[v] = dv;
        if (dv > 1e-15) {
          out.av_face[v] = s.face;
          out.av_dir[v] = (layout[c] - sp) * (1.0 / dv);
        } else {
          out.av_face[v] = -1;  // source sits on the vertex: no direction
        }
        heap.push({dv, v});
      }
    }
  }

  long budget = 64L * nv + 1024;
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > d[u] + 1e-15) continue;  // stale entry
    require(--budget >= 0, ErrorCode::MaxIterExceeded, "distance field failed to settle");
    for (auto [f, c] : m.vertex_star[u]) {
      for (int k = 1; k <= 2; ++k) {
        int wc = (c + k) % 3, oc = (c + 3 - k) % 3;
        int w = m.faces[f][wc], o = m.faces[f][oc];
        detail::WaveUpdate up;
        if (std::isfinite(d[o])) {
          up = detail::wavefront_update_full(d[u], d[o], detail::corner_gap(m, f, c, oc),
                                             detail::corner_gap(m, f, c, wc),
                                             detail::corner_gap(m, f, oc, wc));
        } else {
          up.value = d[u] + detail::corner_gap(m, f, c, wc);
          up.carrier = 0;
          up.origin = Vec2{0.0, 0.0};
        }
        if (up.value < d[w] - 1e-15) {
          d[w] = up.value;
          int from = up.carrier == 1 ? o : u;
          // Keep pred chains strictly descending so ancestor walks terminate.
          out.pred[w] = d[from] < up.value ? from : (d[u] < up.value ? u : -1);
          // Arrival direction: map the local update frame (A at origin, B on
          // the +x axis, C above it) onto the face layout and record the ray
          // from the virtual source to w.
          auto lay = m.face_layout(f);
          Vec2 pa = lay[c], pb = lay[oc], pc = lay[wc];
          Vec2 ex = (pb - pa) * (1.0 / std::max(norm(pb - pa), 1e-300));
          Vec2 ey{-ex.y, ex.x};
          if (cross(pb - pa, pc - pa) < 0.0) ey = ey * -1.0;
          Vec2 origin = pa + ex * up.origin.x + ey * up.origin.y;
          double len = norm(pc - origin);
          if (len > 1e-15) {
            out.av_face[w] = f;
            out.av_dir[w] = (pc - origin) * (1.0 / len);
          }
          heap.push({up.value, w});
        }
      }
    }
  }

  for (int v = 0; v < nv; ++v) {
    require(std::isfinite(d[v]), ErrorCode::InvalidInput, "distance field left a vertex unreached");
    if (d[v] > out.max_dist) {
      out.max_dist = d[v];
      out.argmax = v;
    }
  }
  return out;
}

inline DistanceField distance_field(const IntrinsicMesh& m, const SurfacePoint& source) {
  return distance_field(m, std::vector<SurfacePoint>{source});
}

// Polyline from `from` down the field to the nearest source: it enters the
// one-ring, walks vertex to vertex along strictly decreasing field values,
// and finishes with a straight in-face run to the source. The result is a
// valid (face-sharing) path whose length is a crude upper bound on the true
// distance — feed it to birkhoff_shorten for a geodesic.
inline Path descent_path(const IntrinsicMesh& m, const DistanceField& field,
                         const SurfacePoint& from) {
  Path path;
  path.closed = false;
  path.pts.push_back(from);

  // Direct finish if the start already shares a face with a source and no
  // corner detour promises a shorter route.
  double direct_best = std::numeric_limits<double>::infinity();
  const SurfacePoint* direct_src = nullptr;
  for (const auto& s : field.sources) {
    if (common_face(m, from, s) < 0) continue;
    double len = segment_length(m, from, s);
    if (len < direct_best) {
      direct_best = len;
      direct_src = &s;
    }
  }
  int cur = -1;
  double via_best = std::numeric_limits<double>::infinity();
  for (int c = 0; c < 3; ++c) {
    int v = m.faces[from.face][c];
    double t = field.at_vertex(v) + segment_length(m, from, m.vertex_point(v));
    if (t < via_best) {
      via_best = t;
      cur = v;
    }
  }
  if (direct_src && direct_best <= via_best) {
    path.pts.push_back(*direct_src);
    return path;
  }

  path.pts.push_back(m.vertex_point(cur));
  int guard = m.n_vertices + 8;
  while (true) {
    require(--guard >= 0, ErrorCode::MaxIterExceeded, "descent failed to reach the source");

    // Finish when the current vertex is a corner of some source's face.
    double fin_best = std::numeric_limits<double>::infinity();
    const SurfacePoint* fin_src = nullptr;
    for (const auto& s : field.sources)
      for (int c = 0; c < 3; ++c)
        if (m.faces[s.face][c] == cur) {
          double len = segment_length(m, m.vertex_point(cur), s);
          if (len < fin_best) {
            fin_best = len;
            fin_src = &s;
          }
        }
    if (fin_src) {
      path.pts.push_back(*fin_src);
      return path;
    }

    int next = -1;
    double best_route = std::numeric_limits<double>::infinity();
    double dcur = field.at_vertex(cur);
    for (auto [f, c] : m.vertex_star[cur]) {
      int w = m.faces[f][(c + 1) % 3];
      double dw = field.at_vertex(w);
      if (dw >= dcur - 1e-15) continue;  // only strictly downhill steps
      double route = dw + detail::corner_gap(m, f, c, (c + 1) % 3);
      if (route < best_route) {
        best_route = route;
        next = w;
      }
    }
    require(next >= 0, ErrorCode::MaxIterExceeded,
            "descent stalled at a spurious local minimum of the distance field");
    path.pts.push_back(m.vertex_point(next));
    cur = next;
  }
}

// Globally shortest geodesic from a to b: distance field around b, descent
// polyline from a, then curve shortening with fixed endpoints. The returned
// path is a geodesic in the homotopy class the descent selects — the class
// of the field's gradient flow, i.e. a minimizing one.
inline ShortenResult shortest_path(const IntrinsicMesh& m, const SurfacePoint& a,
                                   const SurfacePoint& b, ShortenOptions opt = {}) {
  auto field = distance_field(m, b);
  Path seed = descent_path(m, field, a);
  return birkhoff_shorten(m, seed, ShortenMode::FixedEndpoints, opt);
}

inline double point_distance(const IntrinsicMesh& m, const SurfacePoint& a,
                             const SurfacePoint& b) {
  return shortest_path(m, a, b).length;
}

// Plain Dijkstra over the vertex-edge skeleton. Overestimates the surface
// distance (paths are confined to edges) but is cheap and exact as a graph
// metric; used for coarse upper bounds and seeding.
inline std::vector<double> graph_distances(const IntrinsicMesh& m, int src) {
  require(src >= 0 && src < m.n_vertices, ErrorCode::InvalidInput, "vertex out of range");
  std::vector<double> d(m.n_vertices, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  d[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > d[u] + 1e-15) continue;
    for (auto [f, c] : m.vertex_star[u]) {
      int w = m.faces[f][(c + 1) % 3];
      double cand = du + detail::corner_gap(m, f, c, (c + 1) % 3);
      if (cand < d[w] - 1e-15) {
        d[w] = cand;
        heap.push({cand, w});
      }
    }
  }
  return d;
}

inline int farthest_vertex(const IntrinsicMesh& m, const std::vector<SurfacePoint>& sources) {
  return distance_field(m, sources).argmax;
}

// Vertex-to-vertex diameter estimate. With few enough vertices every vertex
// serves as a source (exhaustive over vertex pairs; interior points can still
// exceed the result by O(h)). Larger meshes get farthest-point sampling
// followed by alternating maximization, which yields a certified lower bound
// with the witness pair attached.
struct DiameterResult {
  double value = 0.0;
  int va = -1, vb = -1;  // witness pair realizing `value`
  bool exhaustive = false;
};

inline DiameterResult diameter(const IntrinsicMesh& m, int sample_budget = 24,
                               int exhaustive_limit = 3000) {
  DiameterResult out;
  int nv = m.n_vertices;
  if (nv <= exhaustive_limit) {
    out.exhaustive = true;
    for (int v = 0; v < nv; ++v) {
      auto f = distance_field(m, m.vertex_point(v));
      if (f.max_dist > out.value) {
        out.value = f.max_dist;
        out.va = v;
        out.vb = f.argmax;
      }
    }
    return out;
  }

  // Farthest-point sampling keeps a running minimum over all placed sources;
  // each new sample is the vertex farthest from everything placed so far.
  std::vector<double> run_min(nv, std::numeric_limits<double>::infinity());
  int s = 0;
  for (int k = 0; k < std::max(sample_budget, 1); ++k) {
    auto f = distance_field(m, m.vertex_point(s));
    if (f.max_dist > out.value) {
      out.value = f.max_dist;
      out.va = s;
      out.vb = f.argmax;
    }
    int next = -1;
    double best = -1.0;
    for (int v = 0; v < nv; ++v) {
      run_min[v] = std::min(run_min[v], f.at_vertex(v));
      if (run_min[v] > best) {
        best = run_min[v];
        next = v;
      }
    }
    s = next;
  }

  // Alternating maximization from the best pair found.
  int cur = out.vb;
  for (int round = 0; round < 16 && cur >= 0; ++round) {
    auto f = distance_field(m, m.vertex_point(cur));
    if (f.max_dist <= out.value + 1e-12) break;
    out.value = f.max_dist;
    out.va = cur;
    out.vb = f.argmax;
    cur = f.argmax;
  }
  return out;
}

}  // namespace geoweave
