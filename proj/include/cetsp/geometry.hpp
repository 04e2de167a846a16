#ifndef CETSP_GEOMETRY_HPP
#define CETSP_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "cetsp/core.hpp"
#include "cetsp/instance.hpp"

namespace cetsp {

enum class RegionKind { square, hexagon };

inline const char* to_string(RegionKind k) { return k == RegionKind::square ? "square" : "hexagon"; }

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class Sense { less_equal, greater_equal };

/// Constraint  y (<= | >=) slope * x + intercept.
struct HalfPlane {
  double slope = 0.0;
  double intercept = 0.0;
  Sense sense = Sense::less_equal;

  /// Signed amount by which p violates the constraint; <= 0 when it holds.
  double violation(Point p) const {
    const double above = p.y - (slope * p.x + intercept);
    return sense == Sense::less_equal ? above : -above;
  }
};

/// Convex inner approximation of a sensor disk: axis bounds plus slanted
/// half-planes (none for a square). Regions produced by intersect() keep the
/// kind and parent disk of their first operand.
struct ConvexRegion {
  RegionKind kind = RegionKind::square;
  Point center;
  double radius = 0.0;
  Interval x_bounds;
  Interval y_bounds;
  std::vector<HalfPlane> half_planes;

  bool is_box() const { return half_planes.empty(); }
};

inline constexpr double kContainsTol = 1e-9;

inline ConvexRegion point_region(RegionKind kind, Point c) {
  return {kind, c, 0.0, {c.x, c.x}, {c.y, c.y}, {}};
}

inline ConvexRegion inscribe_square(Point c, double r) {
  if (r <= 0.0) return point_region(RegionKind::square, c);
  const double half_side = r / std::numbers::sqrt2;
  return {RegionKind::square, c, r, {c.x - half_side, c.x + half_side},
          {c.y - half_side, c.y + half_side}, {}};
}

/// Vertices A..F counter-clockwise from A = (m + r, n).
inline std::array<Point, 6> hexagon_vertices(Point c, double r) {
  const double a = r * std::cos(std::numbers::pi / 3.0);
  const double b = r * std::sin(std::numbers::pi / 3.0);
  return {{{c.x + r, c.y},
           {c.x + a, c.y + b},
           {c.x - a, c.y + b},
           {c.x - r, c.y},
           {c.x - a, c.y - b},
           {c.x + a, c.y - b}}};
}

/// Line through two points in slope/intercept form.
inline HalfPlane line_through(Point p1, Point p2, Sense sense) {
  const double s = (p2.y - p1.y) / (p2.x - p1.x);
  return {s, p1.y - s * p1.x, sense};
}

inline ConvexRegion inscribe_hexagon(Point c, double r) {
  if (r <= 0.0) return point_region(RegionKind::hexagon, c);
  const auto v = hexagon_vertices(c, r);
  const double b = r * std::sin(std::numbers::pi / 3.0);
  ConvexRegion reg{RegionKind::hexagon, c, r, {c.x - r, c.x + r}, {c.y - b, c.y + b}, {}};
  // The hexagon lies below AB and CD and above DE and FA.
  reg.half_planes = {line_through(v[0], v[1], Sense::less_equal),
                     line_through(v[2], v[3], Sense::less_equal),
                     line_through(v[3], v[4], Sense::greater_equal),
                     line_through(v[5], v[0], Sense::greater_equal)};
  return reg;
}

inline ConvexRegion inscribe(RegionKind kind, Point c, double r) {
  return kind == RegionKind::square ? inscribe_square(c, r) : inscribe_hexagon(c, r);
}

inline std::vector<ConvexRegion> build_regions(const Instance& inst, RegionKind kind) {
  std::vector<ConvexRegion> out;
  out.reserve(inst.sensors.size());
  for (const Sensor& s : inst.sensors) out.push_back(inscribe(kind, s.center, s.radius));
  return out;
}

/// Corner points for drawing; empty for intersections of several regions.
inline std::vector<Point> region_outline(const ConvexRegion& reg) {
  if (reg.radius <= 0.0) return {reg.center};
  if (reg.kind == RegionKind::hexagon) {
    const auto v = hexagon_vertices(reg.center, reg.radius);
    return {v.begin(), v.end()};
  }
  return {{reg.x_bounds.lo, reg.y_bounds.lo},
          {reg.x_bounds.hi, reg.y_bounds.lo},
          {reg.x_bounds.hi, reg.y_bounds.hi},
          {reg.x_bounds.lo, reg.y_bounds.hi}};
}

inline bool contains(const ConvexRegion& reg, Point p, double tol = kContainsTol) {
  if (p.x < reg.x_bounds.lo - tol || p.x > reg.x_bounds.hi + tol) return false;
  if (p.y < reg.y_bounds.lo - tol || p.y > reg.y_bounds.hi + tol) return false;
  for (const HalfPlane& h : reg.half_planes)
    if (h.violation(p) > tol) return false;
  return true;
}

/// Intersection of two regions. May be empty; check with an LP before use.
inline ConvexRegion intersect(const ConvexRegion& a, const ConvexRegion& b) {
  ConvexRegion out = a;
  out.x_bounds = {std::max(a.x_bounds.lo, b.x_bounds.lo), std::min(a.x_bounds.hi, b.x_bounds.hi)};
  out.y_bounds = {std::max(a.y_bounds.lo, b.y_bounds.lo), std::min(a.y_bounds.hi, b.y_bounds.hi)};
  out.half_planes.insert(out.half_planes.end(), b.half_planes.begin(), b.half_planes.end());
  return out;
}

/// Partition of sensor ids 1..n into connected components of the strict
/// disk-overlap graph. Groups are ordered by smallest member; members ascend.
struct OverlapGroups {
  std::vector<std::vector<int>> groups;
};

inline constexpr double kOverlapEps = 1e-9;

inline bool disks_overlap(const Sensor& a, const Sensor& b) {
  const Point d = a.center - b.center;
  return std::hypot(d.x, d.y) < a.radius + b.radius - kOverlapEps;
}

inline OverlapGroups disk_overlap_groups(const Instance& inst) {
  const int n = static_cast<int>(inst.sensors.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (disks_overlap(inst.sensors[i], inst.sensors[j])) {
        int ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }

  OverlapGroups out;
  std::vector<int> slot(n, -1);
  for (int i = 1; i < n; ++i) {
    int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(out.groups.size());
      out.groups.emplace_back();
    }
    out.groups[slot[root]].push_back(i);
  }
  return out;
}

/// Orthogonal projection of p onto the line through a and b.
inline Point foot_of_perpendicular(Point p, Point a, Point b) {
  const Point dir = b - a;
  const double len2 = dot(dir, dir);
  if (len2 == 0.0) throw Error("foot_of_perpendicular: line points coincide");
  return a + (dot(p - a, dir) / len2) * dir;
}

/// Unit axis k (1-based) of the eight projection directions, at angle k*pi/8.
inline Point projection_axis(int k) {
  const double theta = k * std::numbers::pi / 8.0;
  return {std::cos(theta), std::sin(theta)};
}

inline std::array<double, 8> projection_lengths_8(Point delta) {
  std::array<double, 8> out{};
  for (int k = 1; k <= 8; ++k) out[k - 1] = std::abs(dot(delta, projection_axis(k)));
  return out;
}

inline double projection_sum_8(Point delta) {
  const auto p = projection_lengths_8(delta);
  return std::accumulate(p.begin(), p.end(), 0.0);
}

/// Farthest point along the segment from -> target that stays in the region,
/// found by bisection on the segment parameter to 1e-9 m.
inline Point clip_toward(const ConvexRegion& reg, Point from, Point target,
                         double tol = kContainsTol) {
  if (!contains(reg, from, tol)) throw Error("clip_toward: start point outside region");
  if (contains(reg, target, tol)) return target;
  const Point dir = target - from;
  const double len = std::hypot(dir.x, dir.y);
  double lo = 0.0, hi = 1.0;
  while ((hi - lo) * len > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (contains(reg, from + mid * dir, tol))
      lo = mid;
    else
      hi = mid;
  }
  return from + lo * dir;
}

}  // namespace cetsp

#endif  // CETSP_GEOMETRY_HPP
