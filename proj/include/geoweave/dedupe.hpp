#pragma once
// One shared notion of "the same geodesic" for the whole library: two curves
// are the same when their discrete Frechet distance is at most the dedupe
// radius (5h by default). Sample gaps are measured intrinsically by capped
// local search, with a chordal lower-bound prefilter when an embedding is
// present. Loops are compared over both orientations and all cyclic shifts
// at sample granularity.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "geoweave/base.hpp"
#include "geoweave/local.hpp"
#include "geoweave/mesh.hpp"
#include "geoweave/path.hpp"

namespace geoweave {

namespace detail {

// Is the intrinsic distance between a and b at most r? Chordal distance in
// the embedding (when present) is a lower bound, so it can only rule out;
// the straight segment inside a shared face is an upper bound, so it can
// only rule in. The capped exact search settles what neither shortcut does.
inline bool within_radius(const IntrinsicMesh& m, const SurfacePoint& a, const SurfacePoint& b,
                          double r) {
  if (!m.positions.empty()) {
    Vec3 pa{0, 0, 0}, pb{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
      const Vec3& qa = m.positions[m.faces[a.face][i]];
      const Vec3& qb = m.positions[m.faces[b.face][i]];
      pa.x += a.bary[i] * qa.x, pa.y += a.bary[i] * qa.y, pa.z += a.bary[i] * qa.z;
      pb.x += b.bary[i] * qb.x, pb.y += b.bary[i] * qb.y, pb.z += b.bary[i] * qb.z;
    }
    double dx = pa.x - pb.x, dy = pa.y - pb.y, dz = pa.z - pb.z;
    if (dx * dx + dy * dy + dz * dz > r * r) return false;
  }
  if (int f = common_face(m, a, b); f >= 0) {
    auto layout = m.face_layout(f);
    if (norm(m.point_in_layout(reexpress(m, a, f), layout) -
             m.point_in_layout(reexpress(m, b, f), layout)) <= r)
      return true;
  }
  auto d = point_distance_capped(m, a, b, 1.02 * r);
  return d.has_value() && *d <= r;
}

// Discrete Frechet decision between two sample sequences.
inline bool frechet_samples_within(const IntrinsicMesh& m, const std::vector<SurfacePoint>& a,
                                   const std::vector<SurfacePoint>& b, double r) {
  int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  if (na == nb) {
    // Matched-parameter distance bounds Frechet from above: accept cheaply.
    bool diag = true;
    for (int i = 0; i < na && diag; ++i) diag = within_radius(m, a[i], b[i], r);
    if (diag) return true;
  }
  // reach[j]: cell (i, j) of row i is reachable by a monotone matching.
  std::vector<char> reach(nb, 0), next(nb, 0);
  std::vector<signed char> gap(nb, -1);  // memo for the current row: -1 unknown
  auto gap_ok = [&](int i, int j) {
    if (gap[j] < 0) gap[j] = within_radius(m, a[i], b[j], r) ? 1 : 0;
    return gap[j] == 1;
  };
  for (int j = 0; j < nb; ++j) {
    if (j > 0 && !reach[j - 1]) break;
    if (!gap_ok(0, j)) break;
    reach[j] = 1;
  }
  if (!reach[0]) return false;
  // A sample with no partner within r anywhere on the other curve blocks
  // every monotone matching outright. Now that the starts are known to match,
  // probing the middle samples catches the common reject geometry -- curves
  // sharing endpoints that bulge apart in between -- without grinding the
  // coupling table row by row. Scan partners outward from the matched-
  // parameter index so near-identical curves resolve in a probe or two.
  auto has_partner = [&](const std::vector<SurfacePoint>& s, const std::vector<SurfacePoint>& t,
                         int i) {
    int nt = static_cast<int>(t.size());
    int c = std::min(nt - 1, i * nt / std::max(1, static_cast<int>(s.size())));
    for (int off = 0; off < nt; ++off) {
      if (c + off < nt && within_radius(m, s[i], t[c + off], r)) return true;
      if (off > 0 && c - off >= 0 && within_radius(m, s[i], t[c - off], r)) return true;
    }
    return false;
  };
  if (!has_partner(a, b, na / 2) || !has_partner(b, a, nb / 2)) return false;
  for (int i = 1; i < na; ++i) {
    std::fill(gap.begin(), gap.end(), -1);
    std::fill(next.begin(), next.end(), 0);
    for (int j = 0; j < nb; ++j) {
      bool pred = reach[j] || (j > 0 && (reach[j - 1] || next[j - 1]));
      if (pred && gap_ok(i, j)) next[j] = 1;
    }
    reach.swap(next);
    if (std::none_of(reach.begin(), reach.end(), [](char c) { return c != 0; })) return false;
  }
  return reach[nb - 1] != 0;
}

}  // namespace detail

namespace detail {

// Sample both curves at r/8 arc-length steps with a shared sample count, so
// equal-length near-identical curves hit the cheap matched-parameter accept.
// The fine spacing is load-bearing: on a surface the distance between points
// interpolated linearly along two curves can bulge above its values at the
// sample pairs (the metric is not convex past the injectivity radius), so a
// coarse monotone matching can step right across a region where the true
// Frechet gap exceeds r. Measured on the flat torus: the two opposite
// geodesics of a digon are 0.5 apart in Frechet distance yet merge at r/2
// sampling with r = 5h ~ 0.44. Steps of r/8 are smaller than the narrowest
// bulge window the library must resolve (the digon case above).
inline std::pair<std::vector<SurfacePoint>, std::vector<SurfacePoint>> paired_samples(
    const IntrinsicMesh& m, const Path& a, const Path& b, double r) {
  auto ca = cumulative_lengths(m, a);
  auto cb = cumulative_lengths(m, b);
  int n = std::max({1, static_cast<int>(std::ceil(ca.back() / (r / 8.0))),
                    static_cast<int>(std::ceil(cb.back() / (r / 8.0)))});
  std::vector<SurfacePoint> sa, sb;
  sa.reserve(n + 1);
  sb.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    sa.push_back(point_at(m, a, ca, ca.back() * i / n));
    sb.push_back(point_at(m, b, cb, cb.back() * i / n));
  }
  return {std::move(sa), std::move(sb)};
}

// Matched-parameter closeness: both curves within r at equal arc-length
// fractions. Sufficient for Frechet closeness within r, so it is a sound
// cheap accept; a false result decides nothing.
inline bool matched_within(const IntrinsicMesh& m, const Path& a, const Path& b, double r) {
  auto [sa, sb] = paired_samples(m, a, b, r);
  for (std::size_t i = 0; i < sa.size(); ++i)
    if (!within_radius(m, sa[i], sb[i], r)) return false;
  return true;
}

}  // namespace detail

// Discrete Frechet distance between two open curves at most r? Orientation
// as given; sampled at r/8 arc-length steps (see paired_samples).
inline bool frechet_within(const IntrinsicMesh& m, const Path& a, const Path& b, double r) {
  require(r > 0.0, ErrorCode::InvalidInput, "dedupe radius must be positive");
  auto [sa, sb] = detail::paired_samples(m, a, b, r);
  return detail::frechet_samples_within(m, sa, sb, r);
}

// The shared dedupe predicate. Open paths compare as given plus reversed;
// closed loops compare over both orientations and all cyclic shifts of the
// sampled parameterization. Radius r is the distinctness radius: curves
// farther apart than r (in Frechet distance) are distinct geodesics.
inline bool same_geodesic(const IntrinsicMesh& m, const Path& a, const Path& b, double r) {
  require(a.closed == b.closed, ErrorCode::InvalidInput,
          "cannot compare a closed loop with an open path");
  auto [sa, sb] = detail::paired_samples(m, a, b, r);
  if (!a.closed) {
    if (detail::frechet_samples_within(m, sa, sb, r)) return true;
    std::reverse(sb.begin(), sb.end());
    return detail::frechet_samples_within(m, sa, sb, r);
  }
  // Closed: samples wrap (first == last); drop the duplicate, then try every
  // rotation of b in both orientations.
  sa.pop_back();
  sb.pop_back();
  if (sa.empty() || sb.empty()) return false;
  auto closed_try = [&](const std::vector<SurfacePoint>& rb) {
    // Re-close both for the monotone matching: a fixed at its start, b rotated.
    std::vector<SurfacePoint> ca = sa, cb = rb;
    ca.push_back(sa.front());
    cb.push_back(rb.front());
    return detail::frechet_samples_within(m, ca, cb, r);
  };
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<SurfacePoint> rb = sb;
    if (dir == 1) std::reverse(rb.begin(), rb.end());
    for (std::size_t shift = 0; shift < rb.size(); ++shift) {
      std::vector<SurfacePoint> rot(rb.begin() + shift, rb.end());
      rot.insert(rot.end(), rb.begin(), rb.begin() + shift);
      if (closed_try(rot)) return true;
    }
  }
  return false;
}

// Greedy maximal subset of pairwise-distinct curves, preserving order (keep
// the first representative of each equivalence cluster).
inline std::vector<Path> dedupe_paths(const IntrinsicMesh& m, const std::vector<Path>& cand,
                                      double r) {
  std::vector<Path> kept;
  for (const auto& c : cand) {
    bool dup = false;
    for (const auto& k : kept)
      if (same_geodesic(m, c, k, r)) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(c);
  }
  return kept;
}

}  // namespace geoweave
