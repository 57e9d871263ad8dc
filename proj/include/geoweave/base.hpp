#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoweave {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline double norm2(const Vec2& a) { return dot(a, a); }
inline Vec2 normalized(const Vec2& a) {
  double n = norm(a);
  return n > 0.0 ? a / n : Vec2{1.0, 0.0};
}
inline Vec2 rotate(const Vec2& a, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  return n > 0.0 ? a / n : Vec3{1.0, 0.0, 0.0};
}

// Error taxonomy shared across the library. The CLI maps these to exit codes.
enum class ErrorCode {
  InvalidInput,
  NonManifoldEdge,
  DegenerateFace,
  NonOrientable,
  UnsupportedKind,
  ResolutionTooCoarse,
  VertexHit,
  LocalityViolated,
  MaxIterExceeded,
  EmptyDomain,
  NotOnCutLocus,
  SingleGeodesic,
  BudgetExceeded,
  ObstructionMismatch,
  ResolutionStall,
  DegreeAmbiguous,
  ExtractionIncomplete,
  EnumerationIncomplete,
  NoShortGenerator,
  SchemaMismatch,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::VertexHit: return "VertexHit";
    case ErrorCode::LocalityViolated: return "LocalityViolated";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NotOnCutLocus: return "NotOnCutLocus";
    case ErrorCode::SingleGeodesic: return "SingleGeodesic";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ObstructionMismatch: return "ObstructionMismatch";
    case ErrorCode::ResolutionStall: return "ResolutionStall";
    case ErrorCode::DegreeAmbiguous: return "DegreeAmbiguous";
    case ErrorCode::ExtractionIncomplete: return "ExtractionIncomplete";
    case ErrorCode::EnumerationIncomplete: return "EnumerationIncomplete";
    case ErrorCode::NoShortGenerator: return "NoShortGenerator";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Resolution-scaled tolerances. Everything is derived from the max edge
// length h of the mesh in play; absolute defaults appear only where the
// contract pins them (barycentric clamping, Birkhoff step tolerance).
struct Tolerances {
  double h = 0.0;                // max edge length of the mesh
  double h_c = 0.0;              // curve sample spacing (default 3h)
  double locality_radius = 0.0;  // local-geodesic uniqueness radius (default 5h)
  double theta_tol = 0.0;        // straightness certificate, radians (default 10h)
  double dedupe_radius = 0.0;    // Frechet distinctness radius (default 5h)
  double eps = 0.03;             // relative slack for "minimizing"
  double step_tol = 1e-6;        // Birkhoff relative per-step stopping tolerance
  double split_threshold = 0.0;  // cut locus tree-disagreement threshold (default 2h)
  double spur_length = 0.0;      // cut locus spur pruning length (default 3h)
  double collapse_radius = 0.0;  // "converged to a point" radius (default 2h)
  double propagation_c = 1.0;    // distance-field error constant: |err| <= c*h
  uint64_t seed = 1;

  static Tolerances for_h(double h) {
    Tolerances t;
    t.h = h;
    t.h_c = 3.0 * h;
    t.locality_radius = 5.0 * h;
    t.theta_tol = 10.0 * h;
    t.dedupe_radius = 5.0 * h;
    t.split_threshold = 2.0 * h;
    t.spur_length = 3.0 * h;
    t.collapse_radius = 2.0 * h;
    return t;
  }

  // Additive slack granted to every theoretical bound check.
  double bound_slack() const { return 10.0 * propagation_c * h; }
};

}  // namespace geoweave
