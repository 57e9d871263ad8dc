#pragma once
// Cut locus of a point: the graph of surface points reached by two or more
// minimizing geodesics from the source. Built from a distance field by
// classifying mesh edges whose endpoint waves flow into each other from
// opposite sheets, placing equidistant nodes on those edges, joining them
// through faces, then pruning below-resolution spurs and cycles.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "geoweave/base.hpp"
#include "geoweave/dedupe.hpp"
#include "geoweave/local.hpp"
#include "geoweave/mesh.hpp"
#include "geoweave/metric.hpp"
#include "geoweave/path.hpp"
#include "geoweave/shorten.hpp"

namespace geoweave {

namespace detail {

// Accumulated angle, walking CCW around v's star, from face fa's wedge-start
// leg to face fb's wedge-start leg. The wedge at (f, c) starts at the side-c
// direction (toward corner c+1) and spans corner_angle[f][c] CCW.
inline double star_angle_between(const IntrinsicMesh& m, int v, int fa, int fb) {
  const auto& star = m.vertex_star[v];
  int n = static_cast<int>(star.size());
  int ia = -1, ib = -1;
  for (int i = 0; i < n; ++i) {
    if (star[i].first == fa) ia = i;
    if (star[i].first == fb) ib = i;
  }
  require(ia >= 0 && ib >= 0, ErrorCode::InvalidInput, "faces do not share the vertex");
  double acc = 0.0;
  for (int i = ia; i != ib; i = (i + 1) % n) acc += m.corner_angle[star[i].first][star[i].second];
  return acc;
}

// The recorded incoming wave direction at vertex v, re-expressed in the
// layout frame of face f (which must contain v). Transport moves the back-
// pointing ray (toward the source) through the wedges around v, so it is
// exact on the cone geometry.
inline std::optional<Vec2> arrival_in_frame(const IntrinsicMesh& m, const DistanceField& fld,
                                            int v, int f, const std::array<Vec2, 3>& lay) {
  int fa = fld.av_face[v];
  if (fa < 0) return std::nullopt;
  int ca = -1, cf = -1;
  for (int i = 0; i < 3; ++i) {
    if (m.faces[fa][i] == v) ca = i;
    if (m.faces[f][i] == v) cf = i;
  }
  if (ca < 0 || cf < 0) return std::nullopt;
  // Transport the back-direction (v toward its virtual source): it lies
  // inside fa's wedge at v, so its cone coordinate is the planar angle there.
  Vec2 back = fld.av_dir[v] * -1.0;
  auto la = m.face_layout(fa);
  Vec2 leg_a = la[(ca + 1) % 3] - la[ca];
  double theta = std::atan2(cross(leg_a, back), dot(leg_a, back));
  // Cone-coordinate shift from fa's wedge start to f's wedge start.
  double alpha = star_angle_between(m, v, fa, f);
  Vec2 leg_f = lay[(cf + 1) % 3] - lay[cf];
  leg_f = leg_f * (1.0 / std::max(norm(leg_f), 1e-300));
  return rotate(leg_f, theta - alpha) * -1.0;  // back to the incoming direction
}

}  // namespace detail

struct CutNode {
  SurfacePoint pos;
  double dist = 0.0;     // distance back to the source
  int edge = -1;         // mesh edge carrying the node; -1 for junction/fallback nodes
  int branch_u = -1;     // sheet representatives: the crossed edge's endpoints
  int branch_v = -1;
  int multiplicity = 2;  // estimated count of minimizing geodesics from the source
};

struct CutArc {
  int a = -1, b = -1;
  double length = 0.0;
};

struct CutLocus {
  SurfacePoint source;
  std::vector<CutNode> nodes;
  std::vector<CutArc> arcs;
  bool degenerate_point = false;  // detection collapsed below resolution; one deepest node

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
      adj[arcs[i].a].push_back(i);
      adj[arcs[i].b].push_back(i);
    }
    return adj;
  }

  int degree(int n) const {
    int d = 0;
    for (const auto& a : arcs) d += (a.a == n) + (a.b == n);
    return d;
  }

  int components() const {
    int n = static_cast<int>(nodes.size());
    std::vector<int> root(n);
    for (int i = 0; i < n; ++i) root[i] = i;
    std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
    for (const auto& a : arcs) root[find(a.a)] = find(a.b);
    int c = 0;
    for (int i = 0; i < n; ++i) c += find(i) == i;
    return c;
  }

  // First Betti number: independent cycles of the cut graph. For a closed
  // orientable surface the cut locus deformation-retracts the punctured
  // surface, so this equals 2 * genus.
  int first_betti() const {
    return static_cast<int>(arcs.size()) - static_cast<int>(nodes.size()) + components();
  }

  double total_length() const {
    double s = 0.0;
    for (const auto& a : arcs) s += a.length;
    return s;
  }

  int deepest() const {
    int best = -1;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
      if (best < 0 || nodes[i].dist > nodes[best].dist) best = i;
    return best;
  }
};

struct CutLocusOptions {
  Tolerances tol;  // tol.h == 0 uses the mesh's max edge length
  // Sheet discriminator: cos of the angle between the two incoming wave
  // directions must lie below this. Genuine opposite-sheet meetings measure
  // <= 0 (head-on at the nearest cut point, ~90 deg at cut-graph junctions);
  // same-sheet refocusing noise measures >= 0.78 on a sphere. 0.25 splits the
  // measured gap with margin on both sides.
  double opposing_dot_max = 0.25;
  // Along-edge flow sanity gate: each wave may run at most this far past
  // perpendicular (radians) and still count as flowing toward the other end.
  // Arrival directions carry O(h) angular noise near cut-graph junctions
  // (measured ~0.04 rad); the discrimination itself is done by the gates above.
  double flow_slack = 0.15;
  bool allow_fallback = true;  // empty detection returns the farthest point instead
  // When set, only this face subset is searched: the result is the part of
  // the source's cut locus inside the domain. Must be non-empty and
  // edge-connected. The fallback point is then the farthest vertex on it.
  std::optional<std::vector<int>> domain;
  // Estimate each node's multiplicity by clustering the near-minimal
  // geodesics found through the sheets recorded on nearby nodes. When off,
  // labels fall back to the structural floor max(2, graph degree).
  bool label_multiplicities = true;
  double eps = -1.0;  // relative slack for the near-minimal window; < 0 uses tol.eps
};

namespace detail {

struct CutBuilder {
  const IntrinsicMesh& m;
  const DistanceField& fld;
  Tolerances tol;
  double opp_max;
  double flow_min;  // lower bound for dot(arrival, edge direction)
  std::vector<char> face_in;  // domain membership per face

  // Per mesh edge: node index or -1.
  std::vector<int> edge_node;
  std::vector<CutNode> nodes;
  std::vector<CutArc> arcs;

  CutBuilder(const IntrinsicMesh& mesh, const DistanceField& field, Tolerances t, double opp,
             double slack, std::vector<char> mask)
      : m(mesh),
        fld(field),
        tol(t),
        opp_max(opp),
        flow_min(-std::sin(slack)),
        face_in(std::move(mask)),
        edge_node(mesh.n_edges(), -1) {}

  void classify_edges() {
    for (int e = 0; e < m.n_edges(); ++e) {
      if (!face_in[m.edge_faces[e][0]] || !face_in[m.edge_faces[e][1]]) continue;
      int f = m.edge_faces[e][0];
      int s = -1;
      for (int i = 0; i < 3; ++i)
        if (m.face_edges[f][i] == e) s = i;
      int u = m.faces[f][s], v = m.faces[f][(s + 1) % 3];
      auto lay = m.face_layout(f);
      Vec2 pu = lay[s], pv = lay[(s + 1) % 3];
      auto au = arrival_in_frame(m, fld, u, f, lay);
      auto av = arrival_in_frame(m, fld, v, f, lay);
      if (!au || !av) continue;
      double luv = norm(pv - pu);
      Vec2 dir = (pv - pu) * (1.0 / luv);
      // Waves meet across the edge when each flows toward the other's end...
      if (dot(*au, dir) <= flow_min) continue;
      if (dot(*av, dir * -1.0) <= flow_min) continue;
      // ...arriving from genuinely different sheets (near-opposed directions,
      // which same-sheet focusing noise never produces)...
      if (dot(*au, *av) >= opp_max) continue;
      // ...with virtual sheet sources that are actually distinct.
      Vec2 cu = pu - *au * fld.at_vertex(u);
      Vec2 cv = pv - *av * fld.at_vertex(v);
      if (norm(cu - cv) <= tol.split_threshold) continue;
      // Equidistant point of the two sheet cones along the edge.
      Vec2 dS = cu - cv;
      double denom = dot(pv - pu, dS);
      if (std::abs(denom) < 1e-18) continue;
      double t = (0.5 * (dot(cu, cu) - dot(cv, cv)) - dot(pu, dS)) / denom;
      if (!(t > 0.005 && t < 0.995)) continue;
      Vec2 x = pu + (pv - pu) * t;
      CutNode node;
      node.edge = e;
      node.branch_u = u;
      node.branch_v = v;
      node.dist = 0.5 * (norm(x - cu) + norm(x - cv));
      node.pos.face = f;
      node.pos.bary = {0.0, 0.0, 0.0};
      node.pos.bary[s] = 1.0 - t;
      node.pos.bary[(s + 1) % 3] = t;
      node.pos = clamp_bary(node.pos);
      edge_node[e] = static_cast<int>(nodes.size());
      nodes.push_back(node);
    }
  }

  void march_faces() {
    for (int f = 0; f < m.n_faces(); ++f) {
      if (!face_in[f]) continue;
      std::vector<int> on_face;
      for (int i = 0; i < 3; ++i)
        if (edge_node[m.face_edges[f][i]] >= 0) on_face.push_back(edge_node[m.face_edges[f][i]]);
      if (on_face.size() == 2) {
        add_arc(on_face[0], on_face[1], f);
      } else if (on_face.size() == 3) {
        // Junction inside the face: a Steiner node joined to all three.
        CutNode mid;
        mid.pos.face = f;
        double dist = 0.0;
        for (int id : on_face) {
          auto p = reexpress(m, nodes[id].pos, f);
          for (int c = 0; c < 3; ++c) mid.pos.bary[c] += p.bary[c] / 3.0;
          dist += nodes[id].dist / 3.0;
        }
        mid.dist = dist;
        mid.pos = clamp_bary(mid.pos);
        int mid_id = static_cast<int>(nodes.size());
        nodes.push_back(mid);
        for (int id : on_face) add_arc(mid_id, id, f);
      }
      // 0 or 1 crossings: nothing to join here (1 = a branch tip).
    }
  }

  void add_arc(int a, int b, int f) {
    if (a == b) return;
    double len = segment_length(m, reexpress(m, nodes[a].pos, f), reexpress(m, nodes[b].pos, f));
    arcs.push_back({a, b, len});
  }

  // Iteratively remove dangling chains shorter than the spur threshold, then
  // contract cycles below the resolution floor (genuine cut-locus cycles are
  // noncontractible on the surface, hence macroscopic).
  void clean() {
    prune_spurs();
    collapse_small_cycles(2.0 * tol.spur_length);
    prune_spurs();
    drop_orphans();
  }

  void prune_spurs() {
    bool changed = true;
    while (changed) {
      changed = false;
      auto deg = degrees();
      for (int n = 0; n < static_cast<int>(nodes.size()); ++n) {
        if (deg[n] != 1) continue;
        // Walk the chain from the tip through degree-2 nodes.
        std::vector<int> chain_arcs;
        double len = 0.0;
        int cur = n, prev_arc = -1;
        while (true) {
          int next_arc = -1;
          for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
            if (arcs[i].a < 0) continue;
            if (i != prev_arc && (arcs[i].a == cur || arcs[i].b == cur)) {
              next_arc = i;
              break;
            }
          }
          if (next_arc < 0) break;  // isolated path end
          chain_arcs.push_back(next_arc);
          len += arcs[next_arc].length;
          int nxt = arcs[next_arc].a == cur ? arcs[next_arc].b : arcs[next_arc].a;
          if (deg[nxt] != 2) break;
          prev_arc = next_arc;
          cur = nxt;
        }
        if (len < tol.spur_length && !chain_arcs.empty()) {
          for (int i : chain_arcs) arcs[i].a = arcs[i].b = -1;  // tombstone
          changed = true;
          deg = degrees();
        }
      }
      compact_arcs();
    }
  }

  void collapse_small_cycles(double floor_len) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < static_cast<int>(arcs.size()) && !changed; ++i) {
        double alt = alt_path(arcs[i].a, arcs[i].b, i, floor_len - arcs[i].length);
        if (alt < 0.0) continue;
        // Contract: merge b into a everywhere.
        int a = arcs[i].a, b = arcs[i].b;
        nodes[a].dist = std::max(nodes[a].dist, nodes[b].dist);
        for (auto& arc : arcs) {
          if (arc.a == b) arc.a = a;
          if (arc.b == b) arc.b = a;
        }
        for (auto& arc : arcs)
          if (arc.a == arc.b) arc.a = arc.b = -1;
        compact_arcs();
        changed = true;
      }
    }
  }

  // Shortest alternative route a->b avoiding arc `skip`, capped; -1 if none.
  double alt_path(int a, int b, int skip, double cap) const {
    if (cap <= 0.0) return -1.0;
    std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[a] = 0.0;
    heap.push({0.0, a});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u] + 1e-15) continue;
      if (u == b) return du;
      for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
        if (i == skip || arcs[i].a < 0) continue;
        int w = -1;
        if (arcs[i].a == u) w = arcs[i].b;
        if (arcs[i].b == u) w = arcs[i].a;
        if (w < 0) continue;
        double cand = du + arcs[i].length;
        if (cand <= cap && cand < dist[w] - 1e-15) {
          dist[w] = cand;
          heap.push({cand, w});
        }
      }
    }
    return -1.0;
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(nodes.size(), 0);
    for (const auto& a : arcs)
      if (a.a >= 0) {
        deg[a.a]++;
        deg[a.b]++;
      }
    return deg;
  }

  void compact_arcs() {
    arcs.erase(std::remove_if(arcs.begin(), arcs.end(), [](const CutArc& a) { return a.a < 0; }),
               arcs.end());
  }

  void drop_orphans() {
    auto deg = degrees();
    std::vector<int> remap(nodes.size(), -1);
    std::vector<CutNode> kept;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
      if (deg[i] > 0) {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(nodes[i]);
      }
    for (auto& a : arcs) {
      a.a = remap[a.a];
      a.b = remap[a.b];
    }
    nodes = std::move(kept);
  }
};

}  // namespace detail

// One sheet's near-minimal path from the field's single source to `to`: the
// recorded wave predecessor chain from the via vertex back to the source
// seeds the curve, then shortening polishes it with both endpoints pinned.
// Distinct via vertices on distinct sheets yield distinct geodesics. `to`
// must lie in a face containing the via vertex (the path steps directly from
// it onto the chain).
inline ShortenResult sheet_geodesic(const IntrinsicMesh& m, const DistanceField& field,
                                    const SurfacePoint& to, int via, ShortenOptions opt = {}) {
  require(field.sources.size() == 1, ErrorCode::InvalidInput,
          "sheet extraction expects a single-source field");
  require(via >= 0 && via < m.n_vertices, ErrorCode::InvalidInput, "via vertex out of range");
  Path seed;
  seed.pts.push_back(to);
  int guard = m.n_vertices + 2;
  for (int w = via; w >= 0; w = field.pred[w]) {
    require(--guard >= 0, ErrorCode::MaxIterExceeded, "predecessor chain does not terminate");
    seed.pts.push_back(m.vertex_point(w));
  }
  seed.pts.push_back(field.sources[0]);
  return birkhoff_shorten(m, seed, ShortenMode::FixedEndpoints, opt);
}

namespace detail {

// Vertices of all faces within a breadth-first ring of p wide enough to cover
// the intrinsic radius `cap`.
inline std::vector<int> ring_vertices(const IntrinsicMesh& m, const SurfacePoint& p, double cap) {
  double hmin = m.edge_length.empty() ? 1.0 : *std::min_element(m.edge_length.begin(),
                                                                m.edge_length.end());
  int depth_limit = std::min(16, static_cast<int>(std::ceil(cap / std::max(hmin, 1e-12))) + 2);
  std::vector<char> seen(m.n_faces(), 0);
  std::vector<std::pair<int, int>> frontier;  // (face, depth)
  for (int f : faces_of(m, p))
    if (!seen[f]) {
      seen[f] = 1;
      frontier.push_back({f, 0});
    }
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    auto [f, d] = frontier[i];
    if (d >= depth_limit) continue;
    for (int s = 0; s < 3; ++s) {
      int g = m.face_neighbor[f][s];
      if (g >= 0 && !seen[g]) {
        seen[g] = 1;
        frontier.push_back({g, d + 1});
      }
    }
  }
  std::vector<char> vseen(m.n_vertices, 0);
  std::vector<int> out;
  for (auto [f, d] : frontier)
    for (int c = 0; c < 3; ++c) {
      int v = m.faces[f][c];
      if (!vseen[v]) {
        vseen[v] = 1;
        out.push_back(v);
      }
    }
  return out;
}

// Candidate-driven search for the near-minimal geodesics source -> p. Each
// via vertex seeds one curve: its wave predecessor chain from the source,
// finished by an exact local arc to p. Curve shortening polishes each seed in
// its own homotopy class; survivors are certified straight, cut off at
// (1+eps) times the best length found, deduplicated at the shared Frechet
// radius (shortest representative kept), and sorted CCW by departure
// direction at the source.
inline std::vector<ShortenResult> polish_via_candidates(const IntrinsicMesh& m,
                                                        const DistanceField& field,
                                                        const SurfacePoint& p,
                                                        std::vector<int> vias, double eps,
                                                        Tolerances tol) {
  const SurfacePoint& x = field.sources[0];
  const double cap = tol.locality_radius;
  const double d_est = field(m, p);

  std::sort(vias.begin(), vias.end());
  vias.erase(std::unique(vias.begin(), vias.end()), vias.end());

  struct Cand {
    int v = -1;
    double est = 0.0;
    Path tail;  // the local arc v -> p; empty when v is p itself
  };
  std::vector<Cand> cands;
  for (int v : vias) {
    if (std::abs(field.vertex_dist[v] - d_est) > cap + 2.0 * tol.h) continue;
    SurfacePoint vp = m.vertex_point(v);
    if (same_point(m, vp, p, 1e-12)) {
      cands.push_back({v, field.vertex_dist[v], Path{}});
      continue;
    }
    std::optional<LocalArc> arc;
    try {
      arc = local_geodesic(m, vp, p, cap);
    } catch (const Error&) {
      continue;  // local search exhausted around this via: unusable, not fatal
    }
    if (!arc) continue;
    cands.push_back({v, field.vertex_dist[v] + arc->length, std::move(arc->path)});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.est < b.est; });
  constexpr int kMaxCandidates = 32;  // spread of sheets reaching p's ring
  if (static_cast<int>(cands.size()) > kMaxCandidates) cands.resize(kMaxCandidates);

  // Build each candidate's seed polyline up front: source, the predecessor
  // chain down from the via, then the local arc onto p.
  std::vector<Path> seeds;
  for (auto& c : cands) {
    std::vector<int> chain;
    int guard = m.n_vertices + 2;
    for (int w = c.v; w >= 0; w = field.pred[w]) {
      require(--guard >= 0, ErrorCode::MaxIterExceeded, "predecessor chain does not terminate");
      chain.push_back(w);
    }
    Path seed;
    seed.pts.push_back(x);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      seed.pts.push_back(m.vertex_point(*it));
    if (c.tail.pts.empty())
      seed.pts.back() = p;  // the via vertex is p: state it in p's own chart
    else
      seed.pts.insert(seed.pts.end(), c.tail.pts.begin() + 1, c.tail.pts.end());
    seeds.push_back(std::move(seed));
  }

  // Seeds that already match pointwise within half the dedupe radius relax to
  // the same geodesic (the straight-line homotopy between them stays well
  // inside the scale at which classes are told apart), so polish only one
  // representative per such cluster. Neighbouring vias on a common distance
  // sheet produce near-identical chains; this skips most of them.
  ShortenOptions popt;
  popt.h = tol.h;
  std::vector<ShortenResult> certified;
  std::vector<const Path*> reps;
  for (auto& seed : seeds) {
    bool redundant = false;
    for (const Path* s : reps)
      if (matched_within(m, seed, *s, 0.5 * tol.dedupe_radius)) {
        redundant = true;
        break;
      }
    if (redundant) continue;
    reps.push_back(&seed);

    ShortenResult r;
    try {
      r = birkhoff_shorten(m, seed, ShortenMode::FixedEndpoints, popt);
    } catch (const Error&) {
      continue;
    }
    if (!r.converged || !is_geodesic(m, r.path, tol.theta_tol)) continue;
    certified.push_back(std::move(r));
  }
  if (certified.empty()) return {};

  std::sort(certified.begin(), certified.end(),
            [](const ShortenResult& a, const ShortenResult& b) { return a.length < b.length; });
  double best = certified.front().length;
  std::vector<ShortenResult> kept;
  for (auto& r : certified) {
    if (r.length > best * (1.0 + eps) + 1e-12) break;
    bool dup = false;
    for (const auto& k : kept)
      if (same_geodesic(m, r.path, k.path, tol.dedupe_radius)) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(std::move(r));
  }

  std::vector<double> angle(kept.size(), 0.0);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    try {
      angle[i] = departure_angle(m, kept[i].path);
    } catch (const Error&) {
      angle[i] = 0.0;
    }
  }
  std::vector<int> order(kept.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return angle[a] != angle[b] ? angle[a] < angle[b] : kept[a].length < kept[b].length;
  });
  std::vector<ShortenResult> out;
  out.reserve(kept.size());
  for (int i : order) out.push_back(std::move(kept[i]));
  return out;
}

// Sheet-representative vertices recorded on cut nodes within `rings` arc hops
// of node i (plus node i itself): via candidates covering every geodesic
// class that meets the locus there.
inline std::vector<int> sheet_vias_near(const CutLocus& cl, int i, int rings) {
  std::vector<char> seen(cl.nodes.size(), 0);
  std::vector<int> layer{i}, out;
  seen[i] = 1;
  auto add_branches = [&](int n) {
    if (cl.nodes[n].branch_u >= 0) out.push_back(cl.nodes[n].branch_u);
    if (cl.nodes[n].branch_v >= 0) out.push_back(cl.nodes[n].branch_v);
  };
  add_branches(i);
  for (int r = 0; r < rings && !layer.empty(); ++r) {
    std::vector<int> next;
    for (const auto& a : cl.arcs) {
      for (int n : layer) {
        int other = a.a == n ? a.b : (a.b == n ? a.a : -1);
        if (other >= 0 && !seen[other]) {
          seen[other] = 1;
          next.push_back(other);
          add_branches(other);
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

}  // namespace detail

// All minimizing geodesics from the field's source to p, up to the shared
// Frechet distinctness radius: pairwise-distinct certified geodesics, each of
// length at most (1+eps) times the best length found, sorted CCW by
// departure direction at the source. eps below 0 uses tol.eps. The documented
// floor is eps >= 0.01: the discrete metric reproduces distances only to
// about 1% on the reference meshes, so a tighter window would select against
// discretization noise rather than geometry.
inline std::vector<ShortenResult> minimizing_geodesics(const IntrinsicMesh& m,
                                                       const DistanceField& field,
                                                       const SurfacePoint& p, double eps = -1.0,
                                                       Tolerances tol = {}) {
  if (tol.h <= 0.0) tol = Tolerances::for_h(m.max_edge_length());
  if (eps < 0.0) eps = tol.eps;
  require(eps >= 0.01, ErrorCode::InvalidInput, "eps below the documented floor of 0.01");
  require(field.sources.size() == 1, ErrorCode::InvalidInput,
          "minimizing geodesics expect a single-source field");
  require(!same_point(m, field.sources[0], p, 1e-12), ErrorCode::InvalidInput,
          "minimizing geodesics need distinct endpoints");
  return detail::polish_via_candidates(m, field, p,
                                       detail::ring_vertices(m, p, tol.locality_radius), eps, tol);
}

inline std::vector<ShortenResult> minimizing_geodesics(const IntrinsicMesh& m,
                                                       const SurfacePoint& x,
                                                       const SurfacePoint& p, double eps = -1.0,
                                                       Tolerances tol = {}) {
  return minimizing_geodesics(m, distance_field(m, x), p, eps, tol);
}

inline CutLocus cut_locus(const IntrinsicMesh& m, const SurfacePoint& source,
                          CutLocusOptions opt = {}) {
  if (opt.tol.h <= 0.0) opt.tol = Tolerances::for_h(m.max_edge_length());

  std::vector<char> mask(m.n_faces(), 1);
  if (opt.domain) {
    require(!opt.domain->empty(), ErrorCode::EmptyDomain, "cut locus domain is empty");
    mask.assign(m.n_faces(), 0);
    for (int f : *opt.domain) {
      require(f >= 0 && f < m.n_faces(), ErrorCode::InvalidInput,
              "cut locus domain face out of range");
      mask[f] = 1;
    }
    // The domain must form one edge-connected patch of faces: breadth-first
    // search from one member face must reach every other through shared edges.
    std::vector<char> seen(m.n_faces(), 0);
    std::vector<int> stack{opt.domain->front()};
    seen[stack.back()] = 1;
    int reached = 0;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      ++reached;
      for (int i = 0; i < 3; ++i) {
        int g = m.face_neighbor[f][i];
        if (g >= 0 && mask[g] && !seen[g]) {
          seen[g] = 1;
          stack.push_back(g);
        }
      }
    }
    int wanted = 0;
    for (int f = 0; f < m.n_faces(); ++f) wanted += mask[f] ? 1 : 0;
    require(reached == wanted, ErrorCode::InvalidInput,
            "cut locus domain is not edge-connected");
  }

  auto field = distance_field(m, source);

  detail::CutBuilder builder(m, field, opt.tol, opt.opposing_dot_max, opt.flow_slack, mask);
  builder.classify_edges();
  builder.march_faces();
  builder.clean();

  CutLocus out;
  out.source = source;
  out.nodes = std::move(builder.nodes);
  out.arcs = std::move(builder.arcs);
  {
    // Structural floor: edge interiors carry two sheets, junctions at least
    // their degree.
    std::vector<int> deg(out.nodes.size(), 0);
    for (const auto& a : out.arcs) {
      ++deg[a.a];
      ++deg[a.b];
    }
    for (int i = 0; i < static_cast<int>(out.nodes.size()); ++i)
      out.nodes[i].multiplicity = std::max(2, deg[i]);
  }
  if (out.nodes.empty() && opt.allow_fallback) {
    // No graph survived: the locus degenerates to (the cell around) the
    // farthest point of the domain, conventionally at least three sheets deep.
    int best = -1;
    double best_d = -1.0;
    for (int f = 0; f < m.n_faces(); ++f) {
      if (!mask[f]) continue;
      for (int c = 0; c < 3; ++c) {
        int v = m.faces[f][c];
        if (field.vertex_dist[v] > best_d) {
          best_d = field.vertex_dist[v];
          best = v;
        }
      }
    }
    require(best >= 0, ErrorCode::EmptyDomain, "cut locus domain has no vertices");
    CutNode far;
    far.pos = m.vertex_point(best);
    far.dist = best_d;
    far.multiplicity = 3;
    out.nodes.push_back(far);
    out.degenerate_point = true;
  }
  if (opt.label_multiplicities) {
    // Replace the structural floor with the measured count of distinct
    // near-minimal geodesic classes at each node, found through the sheets
    // recorded on the surrounding nodes (the ring sampler when none exist).
    double eps = opt.eps < 0.0 ? opt.tol.eps : opt.eps;
    eps = std::max(eps, 0.01);
    for (int i = 0; i < static_cast<int>(out.nodes.size()); ++i) {
      std::vector<int> vias = detail::sheet_vias_near(out, i, 1);
      if (vias.empty()) vias = detail::ring_vertices(m, out.nodes[i].pos, opt.tol.locality_radius);
      auto classes = detail::polish_via_candidates(m, field, out.nodes[i].pos, std::move(vias),
                                                   eps, opt.tol);
      if (!classes.empty()) out.nodes[i].multiplicity = static_cast<int>(classes.size());
    }
  }
  return out;
}

// The two minimizing geodesics from the source to a cut node, one per sheet.
// Seeds follow the recorded wave predecessor chains from the node's edge
// endpoints back to the source, then curve shortening polishes each within
// its own sheet (fixed endpoints, monotone length).
inline std::pair<ShortenResult, ShortenResult> geodesics_to_cut_node(
    const IntrinsicMesh& m, const DistanceField& field, const CutLocus& cl, int node,
    ShortenOptions opt = {}) {
  require(node >= 0 && node < static_cast<int>(cl.nodes.size()), ErrorCode::InvalidInput,
          "cut node out of range");
  const CutNode& cn = cl.nodes[node];
  require(cn.edge >= 0, ErrorCode::InvalidInput,
          "cut node carries no sheet information (junction or fallback node)");
  require(field.sources.size() == 1, ErrorCode::InvalidInput,
          "sheet extraction expects the single-source field of the cut locus");

  ShortenResult a = sheet_geodesic(m, field, cn.pos, cn.branch_u, opt);
  ShortenResult b = sheet_geodesic(m, field, cn.pos, cn.branch_v, opt);
  // sheet_geodesic builds node -> source; callers read source -> node.
  a.path = reverse_path(std::move(a.path));
  b.path = reverse_path(std::move(b.path));
  return {std::move(a), std::move(b)};
}

// Result of sliding a point on a cut-locus edge to the nearest graph vertex:
// the vertex reached and the deformation of the attached two-geodesic digon
// along the way, recorded as loops based at the source.
struct SlideResult {
  int node = -1;
  Homotopy homotopy;
};

// Slide `start` (which must lie within 2h of the cut graph) along the locus
// edges to the nearest node of graph degree != 2 — a junction, a leaf, or the
// degenerate fallback point. At sampled stations along the way the digon of
// two minimizing geodesics is re-solved and closed into a loop based at the
// source; stations are refined until successive loops differ by at most h_c,
// so the result is a valid based-loop homotopy whose frames stay within
// 2 (1+eps) max-distance-along-the-slide in length.
inline SlideResult slide_to_vertex(const IntrinsicMesh& m, const CutLocus& cl,
                                   const SurfacePoint& start, Tolerances tol = {},
                                   double eps = -1.0) {
  if (tol.h <= 0.0) tol = Tolerances::for_h(m.max_edge_length());
  if (eps < 0.0) eps = tol.eps;
  eps = std::max(eps, 0.01);
  require(!cl.nodes.empty(), ErrorCode::NotOnCutLocus, "cut locus is empty");

  // Locate the nearest graph sample: node positions plus arc midpoints
  // (charged to an endpoint), accepted within the 2h edge-proximity contract.
  const double locate_cap = 2.0 * tol.h;
  int n0 = -1;
  double n0_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](const SurfacePoint& q, int node) {
    if (auto d = point_distance_capped(m, start, q, locate_cap))
      if (*d < n0_dist) {
        n0_dist = *d;
        n0 = node;
      }
  };
  for (int i = 0; i < static_cast<int>(cl.nodes.size()); ++i) consider(cl.nodes[i].pos, i);
  for (const auto& a : cl.arcs) {
    int f = common_face(m, cl.nodes[a.a].pos, cl.nodes[a.b].pos);
    if (f < 0) continue;  // contracted arc: endpoints no longer share a face
    SurfacePoint pa = reexpress(m, cl.nodes[a.a].pos, f);
    SurfacePoint pb = reexpress(m, cl.nodes[a.b].pos, f);
    SurfacePoint mid;
    mid.face = f;
    for (int c = 0; c < 3; ++c) mid.bary[c] = 0.5 * (pa.bary[c] + pb.bary[c]);
    consider(mid, a.a);
    consider(mid, a.b);
  }
  require(n0 >= 0, ErrorCode::NotOnCutLocus, "start point is not within 2h of the cut graph");

  // Nearest graph vertex along the edges: Dijkstra over arcs, first settled
  // node of degree != 2 wins.
  std::vector<int> deg(cl.nodes.size(), 0);
  for (const auto& a : cl.arcs) {
    ++deg[a.a];
    ++deg[a.b];
  }
  std::vector<double> dist(cl.nodes.size(), std::numeric_limits<double>::infinity());
  std::vector<int> par(cl.nodes.size(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[n0] = 0.0;
  heap.push({0.0, n0});
  int target = -1;
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u] + 1e-15) continue;
    if (deg[u] != 2) {
      target = u;
      break;
    }
    for (const auto& a : cl.arcs) {
      int other = a.a == u ? a.b : (a.b == u ? a.a : -1);
      if (other < 0) continue;
      double nd = du + a.length;
      if (nd < dist[other] - 1e-15) {
        dist[other] = nd;
        par[other] = u;
        heap.push({nd, other});
      }
    }
  }
  require(target >= 0, ErrorCode::InvalidInput,
          "cut locus component has no graph vertex to slide to");

  std::vector<int> route;  // n0 .. target along the graph
  for (int u = target; u >= 0; u = par[u]) route.push_back(u);
  std::reverse(route.begin(), route.end());

  auto field = distance_field(m, cl.source);

  // The two-geodesic digon at a station, closed into a based loop. Candidate
  // vias come from the sheets recorded on the nodes around the station.
  auto classes_at = [&](const SurfacePoint& q, int na, int nb) {
    std::vector<int> vias = detail::sheet_vias_near(cl, na, 2);
    if (nb >= 0 && nb != na) {
      auto more = detail::sheet_vias_near(cl, nb, 2);
      vias.insert(vias.end(), more.begin(), more.end());
    }
    if (vias.empty()) vias = detail::ring_vertices(m, q, tol.locality_radius);
    auto gs = detail::polish_via_candidates(m, field, q, std::move(vias), eps, tol);
    require(!gs.empty(), ErrorCode::MaxIterExceeded, "no geodesic certified at a slide station");
    std::sort(gs.begin(), gs.end(),
              [](const ShortenResult& a, const ShortenResult& b) { return a.length < b.length; });
    return gs;
  };
  auto make_loop = [&](const Path& a, const Path& b) {
    Path loop;
    loop.closed = true;
    loop.pts = a.pts;
    for (int i = static_cast<int>(b.pts.size()) - 2; i >= 1; --i) loop.pts.push_back(b.pts[i]);
    return loop;
  };
  // Best digon loop at q: the pair and orientation nearest the previous frame
  // (the two shortest classes, CCW-first, when there is no previous frame).
  const double select_cap = 4.0 * tol.h_c;
  auto loop_at = [&](const SurfacePoint& q, int na, int nb, const Path* prev) {
    auto gs = classes_at(q, na, nb);
    if (gs.size() == 1) return make_loop(gs[0].path, gs[0].path);
    if (!prev) return make_loop(gs[0].path, gs[1].path);
    int limit = std::min<int>(static_cast<int>(gs.size()), 4);
    Path best_loop;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < limit; ++i)
      for (int j = 0; j < limit; ++j) {
        if (i == j) continue;
        Path cand = make_loop(gs[i].path, gs[j].path);
        double g = matched_gap(m, *prev, cand, select_cap);
        if (g < best_gap) {
          best_gap = g;
          best_loop = std::move(cand);
        }
      }
    return best_loop;
  };

  struct Frame {
    SurfacePoint q;
    int na = -1, nb = -1;  // nearby nodes whose sheets seed the digon
    Path loop;
  };
  std::vector<Frame> frames;
  for (std::size_t i = 0; i < route.size(); ++i) {
    Frame fr;
    fr.q = cl.nodes[route[i]].pos;
    fr.na = route[i];
    fr.nb = i + 1 < route.size() ? route[i + 1] : (i > 0 ? route[i - 1] : -1);
    fr.loop = loop_at(fr.q, fr.na, fr.nb, frames.empty() ? nullptr : &frames.back().loop);
    frames.push_back(std::move(fr));
  }

  // Refine between stations until successive loops are h_c-close.
  constexpr int kMaxFrames = 256;
  for (std::size_t i = 1; i < frames.size();) {
    double gap = matched_gap(m, frames[i - 1].loop, frames[i].loop, tol.h_c);
    if (gap <= tol.h_c) {
      ++i;
      continue;
    }
    auto sep = point_distance_capped(m, frames[i - 1].q, frames[i].q, tol.locality_radius);
    require(static_cast<int>(frames.size()) < kMaxFrames && sep && *sep > 1e-3 * tol.h,
            ErrorCode::MaxIterExceeded, "slide homotopy failed to become continuous");
    auto bridge = local_geodesic(m, frames[i - 1].q, frames[i].q, *sep + 2.0 * tol.h);
    require(bridge.has_value(), ErrorCode::MaxIterExceeded,
            "slide stations could not be bridged locally");
    Frame mid;
    mid.q = point_at(m, bridge->path, bridge->length * 0.5);
    mid.na = frames[i - 1].na;
    mid.nb = frames[i].na;
    mid.loop = loop_at(mid.q, mid.na, mid.nb, &frames[i - 1].loop);
    frames.insert(frames.begin() + i, std::move(mid));
  }

  SlideResult out;
  out.node = target;
  std::vector<Path> loops;
  loops.reserve(frames.size());
  for (auto& fr : frames) loops.push_back(std::move(fr.loop));
  out.homotopy = make_homotopy(m, std::move(loops), ShortenMode::BasedLoop);
  return out;
}

}  // namespace geoweave
