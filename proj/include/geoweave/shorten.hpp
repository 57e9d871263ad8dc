#pragma once

// Birkhoff curve shortening. A curve is held as anchor points joined by
// exact short geodesic links; each sweep replaces alternating anchors with
// midpoints of the exact arc connecting their neighbors. Every replacement
// is length non-increasing (the new arc is minimal over everything shorter
// than the cap, including the old two links), and because each arc stays
// inside a ball of radius below the local uniqueness scale, every sweep is
// a homotopy. The recorded frames witness that homotopy with bounded steps.

#include <limits>

#include "geoweave/local.hpp"

namespace geoweave {

enum class ShortenMode { FixedEndpoints, BasedLoop, FreeLoop };

struct ShortenOptions {
  double h = 0.0;           // mesh scale; 0 means max edge length
  int max_sweeps = 5000;
  bool record_frames = false;
};

struct ShortenResult {
  Path path;
  double length = 0.0;
  bool converged = false;   // length became stationary within step_tol
  bool collapsed = false;   // loop shrank below the collapse radius
  int sweeps = 0;
  int arc_failures = 0;     // midpoint arcs that fell back to the old links
  std::vector<Path> frames; // homotopy track (with record_frames), thinned
};

// Insert points along each segment so that no segment exceeds `spacing`.
// New points are collinear with the segment they subdivide, so the length
// is unchanged. The face structure of the input is preserved.
inline Path resample(const IntrinsicMesh& m, const Path& path, double spacing) {
  require(spacing > 0.0 && std::isfinite(spacing), ErrorCode::InvalidInput,
          "resample spacing must be positive");
  require(path.pts.size() >= 2 || path.closed, ErrorCode::InvalidInput,
          "cannot resample an empty path");
  Path out;
  out.closed = path.closed;
  int n = static_cast<int>(path.pts.size());
  for (int i = 0; i < path.n_segments(); ++i) {
    const SurfacePoint& a = path.pts[i];
    const SurfacePoint& b = path.pts[(i + 1) % n];
    out.pts.push_back(a);
    double len = segment_length(m, a, b);
    int k = static_cast<int>(std::ceil(len / spacing - 1e-12));
    if (k < 1) k = 1;
    if (k == 1) continue;
    int f = common_face(m, a, b);
    auto layout = m.face_layout(f);
    Vec2 pa = m.point_in_layout(reexpress(m, a, f), layout);
    Vec2 pb = m.point_in_layout(reexpress(m, b, f), layout);
    for (int j = 1; j < k; ++j) {
      SurfacePoint sp;
      sp.face = f;
      sp.bary = IntrinsicMesh::bary_in_layout(pa + (pb - pa) * (double(j) / k), layout);
      out.pts.push_back(clamp_bary(sp));
    }
  }
  if (!path.closed) out.pts.push_back(path.pts.back());
  return out;
}

// True when the path bends nowhere more than theta (straightness
// certificate for a discrete geodesic).
inline bool is_geodesic(const IntrinsicMesh& m, const Path& path, double theta) {
  return max_bend(m, path) <= theta;
}

namespace detail {

// Curve state during shortening: anchors[i] joined to anchors[i+1] by
// links[i], an exact short geodesic (cyclically for loops).
struct Curve {
  std::vector<SurfacePoint> anchors;
  std::vector<Path> links;
  bool closed = false;

  double length(const IntrinsicMesh& m) const {
    double total = 0.0;
    for (const auto& l : links) total += path_length(m, l);
    return total;
  }

  Path assemble(const IntrinsicMesh& m) const {
    Path out;
    out.closed = closed;
    for (size_t i = 0; i < links.size(); ++i) {
      const auto& pts = links[i].pts;
      size_t from = (i == 0) ? 0 : 1;
      out.pts.insert(out.pts.end(), pts.begin() + from, pts.end());
    }
    if (closed && out.pts.size() > 1) out.pts.pop_back();  // wrap duplicate
    return dedup_points(m, out, 1e-12);
  }
};

}  // namespace detail

// Shorten a curve by Birkhoff midpoint sweeps until the length is stationary
// (relative change below step_tol per sweep pair). Open paths keep their
// endpoints; BasedLoop keeps pts[0]; FreeLoop moves everything. Loops that
// drop below the collapse radius are reported collapsed (contractible).
inline ShortenResult birkhoff_shorten(const IntrinsicMesh& m, const Path& input, ShortenMode mode,
                                      ShortenOptions opt = {}) {
  bool loop = mode != ShortenMode::FixedEndpoints;
  require(input.closed == loop, ErrorCode::InvalidInput,
          "open paths take FixedEndpoints; closed paths take a loop mode");
  require(input.pts.size() >= 2, ErrorCode::InvalidInput, "path too short to shorten");

  double h = opt.h > 0.0 ? opt.h : m.max_edge_length();
  Tolerances tol = Tolerances::for_h(h);
  double cap = std::max(5.0 * h, 2.2 * tol.h_c);

  Path start = resample(m, input, tol.h_c);

  detail::Curve curve;
  curve.closed = loop;
  curve.anchors = start.pts;
  int n = static_cast<int>(curve.anchors.size());
  for (int i = 0; i < start.n_segments(); ++i)
    curve.links.push_back(Path{{curve.anchors[i], curve.anchors[(i + 1) % n]}, false});

  ShortenResult result;
  result.length = curve.length(m);
  if (opt.record_frames) result.frames.push_back(curve.assemble(m));

  // Accumulated anchor movement since the last recorded frame; a frame is
  // emitted before any anchor has moved 0.9 * h_c, so consecutive frames
  // stay uniformly close and witness the homotopy.
  std::vector<double> moved(curve.anchors.size(), 0.0);

  int interior_lo = loop ? 0 : 1;
  int interior_hi = loop ? n : n - 1;

  for (int sweep = 0; sweep < opt.max_sweeps && n >= 2; ++sweep) {
    double before = result.length;
    for (int parity : {1, 0}) {
      for (int i = interior_lo; i < interior_hi; ++i) {
        if (i % 2 != parity) continue;
        if (mode == ShortenMode::BasedLoop && i == 0) continue;
        int prev = (i + n - 1) % n, link_in = (i + n - 1) % n, link_out = i;
        if (!loop && (i == 0 || i == n - 1)) continue;
        const SurfacePoint& a = curve.anchors[prev];
        const SurfacePoint& b = curve.anchors[(i + 1) % n];
        double old_len =
            path_length(m, curve.links[link_in]) + path_length(m, curve.links[link_out]);
        std::optional<LocalArc> arc;
        try {
          arc = local_geodesic(m, a, b, std::min(cap, old_len + 1e-12));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::MaxIterExceeded) throw;
          arc.reset();  // budget ran out: fall back to the old links
        }
        if (!arc || arc->length > old_len + 1e-12) {
          ++result.arc_failures;
          continue;
        }
        if (arc->path.pts.size() < 2) arc->path.pts = {a, b};
        auto halves = split_at(m, arc->path, {0.0, arc->length / 2.0, arc->length});
        if (halves.size() != 2) continue;  // degenerate arc (a == b): keep links
        SurfacePoint mid = halves[0].pts.back();
        if (opt.record_frames) {
          auto d = point_distance_capped(m, curve.anchors[i], mid, tol.h_c);
          moved[i] += d ? *d : tol.h_c;
          if (moved[i] >= 0.9 * tol.h_c) {
            result.frames.push_back(curve.assemble(m));
            std::fill(moved.begin(), moved.end(), 0.0);
          }
        }
        curve.anchors[i] = mid;
        curve.links[link_in] = halves[0];
        curve.links[link_out] = halves[1];
      }
    }
    result.length = curve.length(m);
    result.sweeps = sweep + 1;
    if (loop && result.length < tol.collapse_radius) {
      result.collapsed = true;
      result.converged = true;
      break;
    }
    if (before - result.length <= tol.step_tol * std::max(before, h)) {
      result.converged = true;
      break;
    }
  }

  result.path = curve.assemble(m);
  result.length = path_length(m, result.path);
  if (opt.record_frames) result.frames.push_back(result.path);
  return result;
}

// A discrete homotopy: an ordered family of curves whose successive members
// stay uniformly close. Frames all share endpoints (FixedEndpoints), share
// the base point (BasedLoop), or are free loops.
struct Homotopy {
  std::vector<Path> frames;
  double max_length = 0.0;  // max frame length, exact
  ShortenMode mode = ShortenMode::FixedEndpoints;
};

inline Homotopy make_homotopy(const IntrinsicMesh& m, std::vector<Path> frames,
                              ShortenMode mode) {
  Homotopy h;
  h.mode = mode;
  h.frames = std::move(frames);
  for (const auto& f : h.frames) h.max_length = std::max(h.max_length, path_length(m, f));
  return h;
}

// Concatenate homotopies end to end (b continues where a stopped). The seam
// frames are both kept; continuity across the seam is the caller's claim,
// checkable with homotopy_max_gap.
inline Homotopy chain_homotopies(const IntrinsicMesh& m, const Homotopy& a, const Homotopy& b) {
  require(a.mode == b.mode, ErrorCode::InvalidInput, "cannot chain homotopies of different modes");
  Homotopy out = a;
  out.frames.insert(out.frames.end(), b.frames.begin(), b.frames.end());
  out.max_length = std::max(a.max_length, b.max_length);
  (void)m;
  return out;
}

// Largest matched-parameter gap between two curves: both are sampled at equal
// arc-length fractions and the max intrinsic sample gap is taken (an upper
// bound on the true Frechet gap). Gaps beyond `cap` count as infinity.
inline double matched_gap(const IntrinsicMesh& m, const Path& a, const Path& b, double cap) {
  auto ca = cumulative_lengths(m, a);
  auto cb = cumulative_lengths(m, b);
  int n = std::max(2, static_cast<int>(std::ceil(std::max(ca.back(), cb.back()) / (cap * 0.5))));
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    SurfacePoint pa = point_at(m, a, ca, ca.back() * k / n);
    SurfacePoint pb = point_at(m, b, cb, cb.back() * k / n);
    auto d = point_distance_capped(m, pa, pb, cap);
    if (!d) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, *d);
  }
  return worst;
}

// Largest matched-parameter gap between successive frames of a homotopy.
// A homotopy is h_c-continuous when this is <= h_c.
inline double homotopy_max_gap(const IntrinsicMesh& m, const Homotopy& H, double cap) {
  double worst = 0.0;
  for (std::size_t i = 1; i < H.frames.size(); ++i)
    worst = std::max(worst, matched_gap(m, H.frames[i - 1], H.frames[i], cap));
  return worst;
}

}  // namespace geoweave
