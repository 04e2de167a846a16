#ifndef CETSP_MF_SOLVER_HPP
#define CETSP_MF_SOLVER_HPP

// Fragmented relocation solver.
//
//   1. Inscribe a convex region in every disk.
//   2. Collapse each group of overlapping disks into one super-node placed in
//      the intersection of the member regions.
//   3. Order the super-nodes with a TSP over Euclidean distances.
//   4. Sweep the tour, moving each hitting point to the best spot between its
//      neighbours (chunk i-1, i, i+1), then between its second neighbours
//      (chunk i-2, i, i+2), each followed by a perpendicular-foot move.
//   5. Re-solve the TSP on the moved points and repeat while the tour
//      improves.
//
// Every move is accepted only if the configured surrogate does not increase,
// so the recorded cost history is non-increasing.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cetsp/core.hpp"
#include "cetsp/geometry.hpp"
#include "cetsp/instance.hpp"
#include "cetsp/lp.hpp"
#include "cetsp/metrics.hpp"
#include "cetsp/tsp.hpp"

namespace cetsp {

struct SolverConfig {
  RegionKind region_kind = RegionKind::hexagon;
  ObjectiveConfig obj_cfg;
  std::optional<RegressionModel> regression;
  int max_outer_iters = 50;
  double improvement_tol = 1e-6;
  /// Cap on relocation passes between two TSP re-orderings.
  int max_inner_passes = 200;
};

inline void validate_config(const SolverConfig& cfg) {
  validate_objective(cfg.obj_cfg, cfg.regression);
  if (cfg.max_outer_iters <= 0 || cfg.max_inner_passes <= 0)
    throw ValidationError("iteration caps must be positive");
  if (!(cfg.improvement_tol > 0.0)) throw ValidationError("improvement_tol must be positive");
  if (cfg.obj_cfg.mode == CostMode::regression && (cfg.regression->c_dx < 0 || cfg.regression->c_dy < 0))
    throw ValidationError("regression coefficients must be non-negative for relocation");
}

struct RouteState {
  std::vector<int> order;  // permutation of node ids, order[0] == 0; closes back to 0
  std::vector<int> u;      // u[id] = position of id in order
  std::vector<Point> hitting_points;  // indexed by node id
  double manhattan_cost = 0.0;
  double euclidean_cost = 0.0;
  double surrogate_cost = 0.0;
  int iterations = 0;
  double time_ms = 0.0;
  /// Surrogate tour cost after every accepted step.
  std::vector<double> cost_history;
};

inline double cycle_cost(const std::vector<int>& order, const std::vector<Point>& pts,
                         double (*metric)(Point, Point)) {
  double c = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k)
    c += metric(pts[order[k]], pts[order[(k + 1) % order.size()]]);
  return c;
}

inline double surrogate_cycle_cost(const SolverConfig& cfg, const std::vector<int>& order,
                                   const std::vector<Point>& pts) {
  double c = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k)
    c += edge_cost(cfg.obj_cfg, cfg.regression, pts[order[k]], pts[order[(k + 1) % order.size()]]);
  return c;
}

// ---------------------------------------------------------------------------
// Single-point linear programs.

namespace detail {

struct PointVars {
  std::size_t x, y;
};

inline PointVars add_point_in_region(LpBuilder& lp, const ConvexRegion& reg) {
  PointVars v{lp.add_var(reg.x_bounds.lo, reg.x_bounds.hi), lp.add_var(reg.y_bounds.lo, reg.y_bounds.hi)};
  for (const HalfPlane& h : reg.half_planes)
    lp.add_row({{v.x, -h.slope}, {v.y, 1.0}},
               h.sense == Sense::less_equal ? RowSense::le : RowSense::ge, h.intercept);
  return v;
}

/// Adds weight_x |x - a.x| + weight_y |y - a.y| (+ projection terms) to the objective.
inline void add_leg(LpBuilder& lp, PointVars v, Point a, const SolverConfig& cfg) {
  double wx = 1.0, wy = 1.0;
  if (cfg.obj_cfg.mode == CostMode::regression) {
    wx = cfg.regression->c_dx;
    wy = cfg.regression->c_dy;
  }
  abs_gadget(lp, {{{v.x, 1.0}}, -a.x}, wx);
  abs_gadget(lp, {{{v.y, 1.0}}, -a.y}, wy);
  if (cfg.obj_cfg.projection8 && cfg.obj_cfg.projection_weight > 0.0)
    for (int k = 1; k <= 8; ++k) {
      const Point u = projection_axis(k);
      abs_gadget(lp, {{{v.x, u.x}, {v.y, u.y}}, -dot(a, u)}, cfg.obj_cfg.projection_weight);
    }
}

/// Optimal point with ties broken toward the middle of the optimal face:
/// the midpoint of the attainable x range, then of the y range at that x.
inline std::optional<Point> centered_optimum(LpBuilder lp, PointVars v) {
  const LpSolution first = solve_lp(lp.build());
  if (first.status != LpStatus::optimal) return std::nullopt;

  std::vector<Term> obj;
  const auto& c = lp.objective();
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != 0.0) obj.push_back({j, c[j]});
  const double slack = 1e-9 * std::max(1.0, std::abs(first.objective_value));
  if (!obj.empty()) lp.add_row(obj, RowSense::le, first.objective_value + slack);
  for (std::size_t j = 0; j < c.size(); ++j) lp.set_cost(j, 0.0);

  auto extreme = [&](std::size_t var, double sign, double fallback) {
    lp.set_cost(var, sign);
    const LpSolution s = solve_lp(lp.build());
    lp.set_cost(var, 0.0);
    return s.status == LpStatus::optimal ? s.values[var] : fallback;
  };
  const double x_lo = extreme(v.x, 1.0, first.values[v.x]);
  const double x_hi = extreme(v.x, -1.0, first.values[v.x]);
  const double x = 0.5 * (x_lo + x_hi);
  lp.set_bounds(v.x, x, x);
  const double y_lo = extreme(v.y, 1.0, first.values[v.y]);
  const double y_hi = extreme(v.y, -1.0, first.values[v.y]);
  if (y_lo > y_hi + 1e-6) return Point{first.values[v.x], first.values[v.y]};
  return Point{x, 0.5 * (y_lo + y_hi)};
}

/// argmin over [lo, hi] of |t - a| + |t - b|: midpoint of the overlap of the
/// two intervals, or the nearer end when they are disjoint.
inline double clamp_between(double a, double b, double lo, double hi) {
  const double l = std::max(lo, std::min(a, b));
  const double h = std::min(hi, std::max(a, b));
  if (l <= h) return 0.5 * (l + h);
  return std::clamp(0.5 * (a + b), lo, hi);
}

inline bool is_degenerate(const ConvexRegion& reg) {
  return reg.x_bounds.lo == reg.x_bounds.hi && reg.y_bounds.lo == reg.y_bounds.hi;
}

inline bool intersection_feasible(const ConvexRegion& reg) {
  if (reg.x_bounds.lo > reg.x_bounds.hi || reg.y_bounds.lo > reg.y_bounds.hi) return false;
  if (reg.is_box()) return true;
  LpBuilder lp;
  add_point_in_region(lp, reg);
  return solve_lp(lp.build()).status == LpStatus::optimal;
}

}  // namespace detail

/// Best point of the region for the two legs prev -> p -> next.
inline Point relocate_between(Point prev, Point next, const ConvexRegion& reg, const SolverConfig& cfg) {
  if (detail::is_degenerate(reg)) return {reg.x_bounds.lo, reg.y_bounds.lo};
  const bool weighted = cfg.obj_cfg.mode == CostMode::regression;
  const bool positive = !weighted || (cfg.regression->c_dx > 0 && cfg.regression->c_dy > 0);
  const bool projected = cfg.obj_cfg.projection8 && cfg.obj_cfg.projection_weight > 0.0;
  if (reg.is_box() && !projected && positive) {
    // Separable objective: each coordinate is a two-point median problem.
    return {detail::clamp_between(prev.x, next.x, reg.x_bounds.lo, reg.x_bounds.hi),
            detail::clamp_between(prev.y, next.y, reg.y_bounds.lo, reg.y_bounds.hi)};
  }
  LpBuilder lp;
  const auto v = detail::add_point_in_region(lp, reg);
  detail::add_leg(lp, v, prev, cfg);
  detail::add_leg(lp, v, next, cfg);
  if (auto p = detail::centered_optimum(std::move(lp), v)) return *p;
  throw Error("relocation LP failed on a nonempty region");
}

/// Chunk {i-1, i, i+1}.
inline Point relocate_geo(int /*node*/, Point prev, Point next, const ConvexRegion& reg,
                          const SolverConfig& cfg) {
  return relocate_between(prev, next, reg, cfg);
}

/// Chunk {i-2, i, i+2}.
inline Point relocate_geo1(int /*node*/, Point prev2, Point next2, const ConvexRegion& reg,
                           const SolverConfig& cfg) {
  return relocate_between(prev2, next2, reg, cfg);
}

inline double leg_pair_cost(const SolverConfig& cfg, Point prev, Point p, Point next) {
  return edge_cost(cfg.obj_cfg, cfg.regression, prev, p) + edge_cost(cfg.obj_cfg, cfg.regression, p, next);
}

/// Relative slack under which two costs count as tied. Flat Manhattan
/// optima make exact ties common; rounding must not decide them.
inline constexpr double kTieTol = 1e-12;

inline bool not_worse(double candidate, double current) {
  return candidate <= current + kTieTol * std::max(1.0, std::abs(current));
}

/// Moves the hitting point toward the foot of its perpendicular on the line
/// prev-next, as far as the region allows, if that is not worse.
inline Point ubiquit(int /*node*/, Point prev, Point next, Point current, const ConvexRegion& reg,
                     const SolverConfig& cfg) {
  if (!contains(reg, current)) throw Error("ubiquit: current point outside its region");
  const Point foot = prev == next ? prev : foot_of_perpendicular(current, prev, next);
  const Point candidate = clip_toward(reg, current, foot);
  return not_worse(leg_pair_cost(cfg, prev, candidate, next), leg_pair_cost(cfg, prev, current, next))
             ? candidate
             : current;
}

// ---------------------------------------------------------------------------
// Super-nodes.

struct SuperNode {
  std::vector<int> members;  // ascending sensor ids; {0} for the depot
  ConvexRegion region;       // intersection of member regions
  Point point;
};

namespace detail {

inline ConvexRegion intersect_all(const std::vector<ConvexRegion>& regions, const std::vector<int>& ids) {
  ConvexRegion r = regions[ids.front()];
  for (std::size_t k = 1; k < ids.size(); ++k) r = intersect(r, regions[ids[k]]);
  return r;
}

/// Point of the region minimizing the summed Manhattan distance to the anchors.
inline Point group_point(const ConvexRegion& reg, const std::vector<Point>& anchors) {
  LpBuilder lp;
  const auto v = add_point_in_region(lp, reg);
  for (const Point& a : anchors) {
    abs_gadget(lp, {{{v.x, 1.0}}, -a.x});
    abs_gadget(lp, {{{v.y, 1.0}}, -a.y});
  }
  if (auto p = centered_optimum(std::move(lp), v)) return *p;
  throw Error("group LP infeasible");
}

/// Splits a group whose regions have no common point: seed with the most
/// overlapping pair whose regions intersect, grow while feasible, repeat.
inline std::vector<std::vector<int>> split_group(const Instance& inst, const std::vector<ConvexRegion>& regions,
                                                 std::vector<int> rest) {
  std::vector<std::vector<int>> out;
  while (!rest.empty()) {
    double best_overlap = -kInf;
    std::size_t bi = 0, bj = 0;
    for (std::size_t a = 0; a < rest.size(); ++a)
      for (std::size_t b = a + 1; b < rest.size(); ++b) {
        const Sensor& sa = inst.sensors[rest[a]];
        const Sensor& sb = inst.sensors[rest[b]];
        if (!disks_overlap(sa, sb)) continue;
        const double overlap = sa.radius + sb.radius - euclidean(sa.center, sb.center);
        if (overlap > best_overlap &&
            intersection_feasible(intersect(regions[rest[a]], regions[rest[b]]))) {
          best_overlap = overlap;
          bi = a;
          bj = b;
        }
      }
    if (best_overlap == -kInf) {
      for (int id : rest) out.push_back({id});
      break;
    }
    std::vector<int> cluster{rest[bi], rest[bj]};
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(bj));
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(bi));
    ConvexRegion common = intersect(regions[cluster[0]], regions[cluster[1]]);
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        const int cand = rest[k];
        const bool touches = std::any_of(cluster.begin(), cluster.end(), [&](int m) {
          return disks_overlap(inst.sensors[m], inst.sensors[cand]);
        });
        if (!touches) continue;
        ConvexRegion next = intersect(common, regions[cand]);
        if (!intersection_feasible(next)) continue;
        common = std::move(next);
        cluster.push_back(cand);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
        grew = true;
        break;
      }
    }
    std::sort(cluster.begin(), cluster.end());
    out.push_back(std::move(cluster));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Super-node 0 is the depot; the rest follow the order of their smallest member.
inline std::vector<SuperNode> super_nodes(const Instance& inst, const std::vector<ConvexRegion>& regions) {
  std::vector<SuperNode> out;
  out.push_back({{0}, regions[0], inst.sensors[0].center});
  std::vector<std::vector<int>> parts;
  for (const auto& group : disk_overlap_groups(inst).groups) {
    if (group.size() == 1 || detail::intersection_feasible(detail::intersect_all(regions, group))) {
      parts.push_back(group);
    } else {
      for (auto& g : detail::split_group(inst, regions, group)) parts.push_back(std::move(g));
    }
  }
  std::sort(parts.begin(), parts.end());
  for (auto& members : parts) {
    SuperNode sn;
    sn.region = detail::intersect_all(regions, members);
    if (members.size() == 1) {
      sn.point = inst.sensors[members[0]].center;
    } else {
      std::vector<Point> anchors;
      for (int id : members) anchors.push_back(inst.sensors[id].center);
      sn.point = detail::group_point(sn.region, anchors);
    }
    sn.members = std::move(members);
    out.push_back(std::move(sn));
  }
  return out;
}

/// Per-sensor view of super_nodes(): every member shares its group's point.
inline std::vector<Point> super_node_points(const Instance& inst, const std::vector<ConvexRegion>& regions) {
  std::vector<Point> pts(inst.node_count());
  for (const SuperNode& sn : super_nodes(inst, regions))
    for (int id : sn.members) pts[id] = sn.point;
  return pts;
}

// ---------------------------------------------------------------------------

inline constexpr double kInitialCostSentinel = 1'200'000.0;

namespace detail {

inline DistanceMatrix surrogate_matrix(const SolverConfig& cfg, const std::vector<Point>& pts) {
  return DistanceMatrix::from(pts.size(), [&](std::size_t i, std::size_t j) {
    return edge_cost(cfg.obj_cfg, cfg.regression, pts[i], pts[j]);
  });
}

}  // namespace detail

inline RouteState solve_mf(const Instance& inst, const SolverConfig& cfg) {
  validate_instance(inst);
  validate_config(cfg);
  if (inst.node_count() < 2) throw ValidationError("solve_mf: need the depot and at least one sensor");
  const auto t0 = std::chrono::steady_clock::now();

  const auto regions = build_regions(inst, cfg.region_kind);
  const auto supers = super_nodes(inst, regions);
  const std::size_t S = supers.size();
  std::vector<Point> pts(S);
  for (std::size_t s = 0; s < S; ++s) pts[s] = supers[s].point;

  std::vector<int> order = solve_tsp(DistanceMatrix::from(S, [&](std::size_t i, std::size_t j) {
                                       return euclidean(pts[i], pts[j]);
                                     })).order;

  // Zero-length legs between members of one super-node cost edge_cost(p, p).
  const double intra_cost =
      static_cast<double>(inst.node_count() - S) * edge_cost(cfg.obj_cfg, cfg.regression, {}, {});
  auto tour_surrogate = [&] { return surrogate_cycle_cost(cfg, order, pts) + intra_cost; };

  RouteState rs;
  double cost = tour_surrogate();
  rs.cost_history.push_back(cost);

  auto relocate_step = [&](std::size_t k, bool two_hop) {
    const std::size_t s = order[k];
    const Point prev = pts[order[(k + S - 1) % S]];
    const Point next = pts[order[(k + 1) % S]];
    const double before = leg_pair_cost(cfg, prev, pts[s], next);
    Point cand = two_hop ? relocate_geo1(static_cast<int>(s), pts[order[(k + S - 2) % S]],
                                         pts[order[(k + 2) % S]], supers[s].region, cfg)
                         : relocate_geo(static_cast<int>(s), prev, next, supers[s].region, cfg);
    if (not_worse(leg_pair_cost(cfg, prev, cand, next), before)) pts[s] = cand;
    pts[s] = ubiquit(static_cast<int>(s), prev, next, pts[s], supers[s].region, cfg);
    const double after = tour_surrogate();
    assert(after <= cost + 1e-9 * std::max(1.0, std::abs(cost)));
    cost = after;
    rs.cost_history.push_back(cost);
  };

  double previous = kInitialCostSentinel;
  if (!(cost < previous)) previous = kInf;
  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    for (int pass = 0; pass < cfg.max_inner_passes && previous - cost > cfg.improvement_tol; ++pass) {
      previous = cost;
      for (std::size_t k = 1; k < S; ++k) relocate_step(k, false);
      if (S >= 3)
        for (std::size_t k = 1; k < S; ++k) relocate_step(k, true);
      ++rs.iterations;
    }
    if (S < 4) break;  // every cyclic order of <= 3 nodes costs the same
    Tour reordered = solve_tsp(detail::surrogate_matrix(cfg, pts));
    const double reordered_cost = reordered.cost + intra_cost;
    if (!(reordered_cost < cost - cfg.improvement_tol)) break;
    order = std::move(reordered.order);
    cost = reordered_cost;
    rs.cost_history.push_back(cost);
    previous = kInf;
  }

  // Expand super-nodes back to sensors.
  rs.hitting_points.assign(inst.node_count(), {});
  for (int s : order)
    for (int id : supers[s].members) {
      rs.order.push_back(id);
      rs.hitting_points[id] = pts[s];
    }
  rs.u.assign(inst.node_count(), 0);
  for (std::size_t k = 0; k < rs.order.size(); ++k) rs.u[rs.order[k]] = static_cast<int>(k);
  rs.manhattan_cost = cycle_cost(rs.order, rs.hitting_points, manhattan);
  rs.euclidean_cost = cycle_cost(rs.order, rs.hitting_points, euclidean);
  rs.surrogate_cost = surrogate_cycle_cost(cfg, rs.order, rs.hitting_points);
  rs.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rs;
}

// ---------------------------------------------------------------------------

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<int> sensors_outside;  // ids whose hitting point leaves the disk

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
  }
};

/// Checks route structure, disk membership of every hitting point against the
/// original circles, and the stored costs.
inline ValidationReport validate_solution(const Instance& inst, const RouteState& rs,
                                          double circle_tol = 1e-6, double cost_tol = 1e-6) {
  ValidationReport rep;
  const std::size_t N = inst.node_count();

  ValidationCheck route{"route", true, ""};
  std::vector<int> seen(N, 0);
  if (rs.order.size() != N || rs.order.empty() || rs.order[0] != 0) {
    route.passed = false;
    route.detail = "order must list every node once, starting at the depot";
  } else {
    for (int id : rs.order) {
      if (id < 0 || static_cast<std::size_t>(id) >= N || seen[id]++) {
        route.passed = false;
        route.detail = "invalid or repeated node id " + std::to_string(id);
        break;
      }
    }
  }
  if (route.passed && rs.u.size() == N) {
    for (std::size_t k = 0; k < N; ++k)
      if (rs.u[rs.order[k]] != static_cast<int>(k)) {
        route.passed = false;
        route.detail = "u does not match route positions";
      }
  }
  rep.checks.push_back(route);

  ValidationCheck circle{"circle", true, ""};
  if (rs.hitting_points.size() != N) {
    circle.passed = false;
    circle.detail = "hitting point count mismatch";
  } else {
    for (std::size_t i = 0; i < N; ++i) {
      const Sensor& s = inst.sensors[i];
      const Point d = rs.hitting_points[i] - s.center;
      if (dot(d, d) > s.radius * s.radius + circle_tol) rep.sensors_outside.push_back(static_cast<int>(i));
    }
    if (!rep.sensors_outside.empty()) {
      circle.passed = false;
      circle.detail = "sensor " + std::to_string(rep.sensors_outside.front()) + " outside its disk";
    }
  }
  rep.checks.push_back(circle);

  ValidationCheck costs{"costs", true, ""};
  if (route.passed && circle.detail != "hitting point count mismatch") {
    const double man = cycle_cost(rs.order, rs.hitting_points, manhattan);
    const double euc = cycle_cost(rs.order, rs.hitting_points, euclidean);
    if (std::abs(man - rs.manhattan_cost) > cost_tol) {
      costs.passed = false;
      costs.detail = "manhattan cost mismatch";
    } else if (std::abs(euc - rs.euclidean_cost) > cost_tol) {
      costs.passed = false;
      costs.detail = "euclidean cost mismatch";
    }
  } else {
    costs.passed = false;
    costs.detail = "skipped: route or points invalid";
  }
  rep.checks.push_back(costs);
  return rep;
}

}  // namespace cetsp

#endif  // CETSP_MF_SOLVER_HPP
