#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cetsp/mf_solver.hpp"
#include "cetsp/oracle.hpp"

using namespace cetsp;

namespace {

SolverConfig manhattan_cfg(RegionKind kind) {
  SolverConfig c;
  c.region_kind = kind;
  return c;
}

ConvexRegion box(double x0, double x1, double y0, double y1) {
  return {RegionKind::square, {(x0 + x1) / 2, (y0 + y1) / 2}, 1.0, {x0, x1}, {y0, y1}, {}};
}

Instance generated(std::size_t n, std::uint64_t seed, double rmin = 20, double rmax = 60) {
  GeneratorSpec g;
  g.sensors = n;
  g.seed = seed;
  g.r_min = rmin;
  g.r_max = rmax;
  return generate_instance(g);
}

double legs(const SolverConfig& cfg, Point a, Point p, Point b) {
  return edge_cost(cfg.obj_cfg, cfg.regression, a, p) + edge_cost(cfg.obj_cfg, cfg.regression, p, b);
}

}  // namespace

TEST(SuperNodes, SharedPointMidpointTieBreak) {
  const double r = 1.5 * std::sqrt(2.0);
  Instance inst = parse_instance("50 50 0\n0 0 " + std::to_string(r) + "\n1 0 " + std::to_string(r) + "\n");
  const auto regions = build_regions(inst, RegionKind::square);
  const auto pts = super_node_points(inst, regions);
  EXPECT_NEAR(pts[1].x, 0.5, 1e-9);
  EXPECT_NEAR(pts[1].y, 0.0, 1e-9);
  EXPECT_EQ(pts[1], pts[2]);
  EXPECT_NEAR(manhattan(pts[1], {0, 0}) + manhattan(pts[1], {1, 0}), 1.0, 1e-9);
}

TEST(SuperNodes, SingletonKeepsCenter) {
  const Instance inst = parse_instance("0 0 0\n100 40 10\n");
  const auto pts = super_node_points(inst, build_regions(inst, RegionKind::hexagon));
  EXPECT_EQ(pts[1], (Point{100, 40}));
  EXPECT_EQ(pts[0], (Point{0, 0}));
}

TEST(SuperNodes, DisjointRegionsSplit) {
  const Instance inst = parse_instance("50 50 0\n0 0 2.5\n4 0 2.5\n");
  ASSERT_EQ(disk_overlap_groups(inst).groups.size(), 1u);
  const auto sn = super_nodes(inst, build_regions(inst, RegionKind::square));
  ASSERT_EQ(sn.size(), 3u);
  EXPECT_EQ(sn[1].members, (std::vector<int>{1}));
  EXPECT_EQ(sn[2].members, (std::vector<int>{2}));
  EXPECT_EQ(sn[1].point, (Point{0, 0}));
  EXPECT_EQ(sn[2].point, (Point{4, 0}));
}

TEST(SuperNodes, GroupPointInsideEveryMemberRegion) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = generated(25, seed, 60, 150);
    for (RegionKind kind : {RegionKind::square, RegionKind::hexagon}) {
      const auto regions = build_regions(inst, kind);
      std::vector<int> seen(inst.node_count(), 0);
      for (const SuperNode& s : super_nodes(inst, regions))
        for (int id : s.members) {
          ++seen[id];
          EXPECT_TRUE(contains(regions[id], s.point, 1e-7)) << seed << " " << id;
        }
      for (int c : seen) EXPECT_EQ(c, 1);
    }
  }
}

TEST(RelocateGeo, Examples) {
  const SolverConfig cfg = manhattan_cfg(RegionKind::square);
  Point p = relocate_geo(1, {0, 0}, {10, 0}, box(2, 4, -1, 1), cfg);
  EXPECT_NEAR(p.x, 3, 1e-9);
  EXPECT_NEAR(p.y, 0, 1e-9);
  EXPECT_NEAR(legs(cfg, {0, 0}, p, {10, 0}), 10, 1e-9);

  p = relocate_geo(1, {5, 5}, {5, 5}, box(0, 1, 0, 1), cfg);
  EXPECT_NEAR(p.x, 1, 1e-9);
  EXPECT_NEAR(p.y, 1, 1e-9);
  EXPECT_NEAR(legs(cfg, {5, 5}, p, {5, 5}), 16, 1e-9);

  const ConvexRegion depot = point_region(RegionKind::square, {7, 7});
  EXPECT_EQ(relocate_geo(0, {0, 0}, {100, 3}, depot, cfg), (Point{7, 7}));
}

TEST(RelocateGeo1, Examples) {
  const SolverConfig cfg = manhattan_cfg(RegionKind::square);
  Point p = relocate_geo1(1, {0, 0}, {10, 0}, box(2, 4, -1, 1), cfg);
  EXPECT_NEAR(p.x, 3, 1e-9);
  EXPECT_NEAR(p.y, 0, 1e-9);
  p = relocate_geo1(1, {3, 8}, {3, -8}, box(0, 10, 2, 6), cfg);
  EXPECT_NEAR(p.x, 3, 1e-9);
  EXPECT_NEAR(p.y, 4, 1e-9);
  EXPECT_EQ(relocate_geo1(0, {1, 2}, {3, 4}, point_region(RegionKind::hexagon, {0, 0}), cfg), (Point{0, 0}));
}

TEST(RelocateGeo, ClosedFormMatchesLp) {
  // Square + Manhattan takes the closed form; a hexagon-free LP path is
  // forced by asking for the same box as an intersection with a no-op plane.
  SplitMix64 rng(31);
  const SolverConfig cfg = manhattan_cfg(RegionKind::square);
  for (int t = 0; t < 300; ++t) {
    const Point c{rng.uniform(0, 100), rng.uniform(0, 100)};
    const ConvexRegion sq = inscribe_square(c, rng.uniform(1, 20));
    ConvexRegion lp_form = sq;
    lp_form.half_planes.push_back({0.0, 1e6, Sense::less_equal});
    const Point a{rng.uniform(0, 100), rng.uniform(0, 100)}, b{rng.uniform(0, 100), rng.uniform(0, 100)};
    const Point p = relocate_geo(1, a, b, sq, cfg), q = relocate_geo(1, a, b, lp_form, cfg);
    // the LP path centers inside a face relaxed by ~1e-9 relative
    const double lp = legs(cfg, a, q, b);
    EXPECT_NEAR(legs(cfg, a, p, b), lp, 2e-9 * std::max(1.0, lp));
    EXPECT_NEAR(p.x, q.x, 1e-6);
    EXPECT_NEAR(p.y, q.y, 1e-6);
  }
}

TEST(RelocateGeo, OptimalOverRegionSamples) {
  SplitMix64 rng(12);
  for (bool proj : {false, true}) {
    SolverConfig cfg = manhattan_cfg(RegionKind::hexagon);
    cfg.obj_cfg.projection8 = proj;
    for (int t = 0; t < 100; ++t) {
      const Point c{rng.uniform(0, 100), rng.uniform(0, 100)};
      const double r = rng.uniform(2, 30);
      const ConvexRegion reg = inscribe_hexagon(c, r);
      const Point a{rng.uniform(-50, 150), rng.uniform(-50, 150)}, b{rng.uniform(-50, 150), rng.uniform(-50, 150)};
      const Point p = relocate_geo(1, a, b, reg, cfg);
      ASSERT_TRUE(contains(reg, p, 1e-7));
      const double best = legs(cfg, a, p, b);
      for (int s = 0; s < 300; ++s) {
        const Point q{rng.uniform(c.x - r, c.x + r), rng.uniform(c.y - r, c.y + r)};
        if (contains(reg, q, 0.0)) EXPECT_LE(best, legs(cfg, a, q, b) + 1e-7);
      }
    }
  }
}

TEST(Ubiquit, Examples) {
  const SolverConfig cfg = manhattan_cfg(RegionKind::square);
  const ConvexRegion reg = box(-1, 1, 0, 2);
  const Point p = ubiquit(1, {-5, 0}, {5, 0}, {0, 1}, reg, cfg);
  EXPECT_NEAR(p.x, 0, 1e-9);
  EXPECT_NEAR(p.y, 0, 1e-9);
  EXPECT_NEAR(legs(cfg, {-5, 0}, {0, 1}, {5, 0}), 12, 1e-12);
  EXPECT_NEAR(legs(cfg, {-5, 0}, p, {5, 0}), 10, 1e-9);

  // already on the line
  EXPECT_EQ(ubiquit(1, {-5, 1}, {5, 1}, {0, 1}, reg, cfg), (Point{0, 1}));

  // Moving onto the line past the segment end is worse under Manhattan.
  const ConvexRegion r2 = box(19, 21, 0, 3);
  const Point cur{20, 1}, prev{0, 0}, next{10, 1};
  const Point foot = foot_of_perpendicular(cur, prev, next);
  ASSERT_TRUE(contains(r2, foot));
  ASSERT_GT(legs(cfg, prev, foot, next), legs(cfg, prev, cur, next));
  EXPECT_EQ(ubiquit(1, prev, next, cur, r2, cfg), cur);

  // prev == next: the foot is that point itself
  const Point q = ubiquit(1, {0, 0}, {0, 0}, {20, 1}, r2, cfg);
  EXPECT_NEAR(q.x, 19, 1e-8);
  EXPECT_LE(legs(cfg, {0, 0}, q, {0, 0}), legs(cfg, {0, 0}, {20, 1}, {0, 0}));

  EXPECT_THROW(ubiquit(1, {0, 0}, {1, 1}, {9, 9}, r2, cfg), Error);
}

TEST(SolveMf, SingleSensorAnalytic) {
  const Instance inst = parse_instance("0 0 0\n10 0 1.4142135623730951\n");
  const RouteState rs = solve_mf(inst, manhattan_cfg(RegionKind::square));
  EXPECT_EQ(rs.order, (std::vector<int>{0, 1}));
  EXPECT_NEAR(rs.hitting_points[1].x, 9, 1e-6);
  EXPECT_NEAR(rs.hitting_points[1].y, 0, 1e-6);
  EXPECT_NEAR(rs.manhattan_cost, 18, 1e-6);
  EXPECT_NEAR(rs.euclidean_cost, 18, 1e-6);
}

TEST(SolveMf, Errors) {
  EXPECT_THROW(solve_mf(parse_instance("0 0 0"), {}), ValidationError);
  SolverConfig bad;
  bad.max_outer_iters = 0;
  EXPECT_THROW(solve_mf(generated(3, 1), bad), ValidationError);
  SolverConfig reg;
  reg.obj_cfg.mode = CostMode::regression;
  EXPECT_THROW(solve_mf(generated(3, 1), reg), ValidationError);
}

TEST(SolveMf, DeterministicAndMonotone) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SolverConfig cfg;
    cfg.obj_cfg.projection8 = seed % 2;
    if (seed % 3 == 0) {
      cfg.obj_cfg.mode = CostMode::regression;
      cfg.regression = reference_regression();
    }
    const Instance inst = generated(20, seed);
    const RouteState a = solve_mf(inst, cfg), b = solve_mf(inst, cfg);
    EXPECT_EQ(a.order, b.order);
    EXPECT_EQ(a.hitting_points, b.hitting_points);
    EXPECT_EQ(a.manhattan_cost, b.manhattan_cost);
    EXPECT_EQ(a.cost_history, b.cost_history);
    for (std::size_t k = 1; k < a.cost_history.size(); ++k)
      EXPECT_LE(a.cost_history[k], a.cost_history[k - 1] + 1e-9 * std::max(1.0, a.cost_history[k - 1]));
    EXPECT_NEAR(a.cost_history.back(), a.surrogate_cost, 1e-6 * std::max(1.0, a.surrogate_cost));
  }
}

TEST(SolveMf, AffineRegressionGivesSameRelocations) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = generated(15, seed, 30, 90);
    SolverConfig man;
    SolverConfig reg;
    reg.obj_cfg.mode = CostMode::regression;
    reg.regression = RegressionModel{0.7, 0.7, 300, 300, 500};  // constant term 80 > 0: no clamping
    const RouteState a = solve_mf(inst, man), b = solve_mf(inst, reg);
    EXPECT_EQ(a.order, b.order);
    ASSERT_EQ(a.hitting_points.size(), b.hitting_points.size());
    for (std::size_t i = 0; i < a.hitting_points.size(); ++i) {
      EXPECT_NEAR(a.hitting_points[i].x, b.hitting_points[i].x, 1e-6);
      EXPECT_NEAR(a.hitting_points[i].y, b.hitting_points[i].y, 1e-6);
    }
  }
}

TEST(SolveMf, NotBelowFixedOrderOptimum) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = generated(8, seed, 30, 100);
    for (RegionKind kind : {RegionKind::square, RegionKind::hexagon}) {
      const RouteState rs = solve_mf(inst, manhattan_cfg(kind));
      const auto fixed = optimal_fixed_order(inst, rs.order, build_regions(inst, kind));
      EXPECT_GE(rs.manhattan_cost, fixed.manhattan_cost - 1e-6);
    }
  }
}

TEST(ValidateSolution, HundredSolvedInstances) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance inst = generated(5 + seed % 20, seed, 10, 120);
    SolverConfig cfg;
    cfg.region_kind = seed % 2 ? RegionKind::hexagon : RegionKind::square;
    cfg.obj_cfg.projection8 = seed % 3 == 0;
    const RouteState rs = solve_mf(inst, cfg);
    const ValidationReport rep = validate_solution(inst, rs);
    EXPECT_TRUE(rep.ok()) << seed;
    EXPECT_TRUE(rep.sensors_outside.empty());
    const auto regions = build_regions(inst, cfg.region_kind);
    for (std::size_t i = 0; i < regions.size(); ++i) EXPECT_TRUE(contains(regions[i], rs.hitting_points[i], 1e-7));
  }
}

TEST(ValidateSolution, FlagsOutsidePointAndTamperedCost) {
  const Instance inst = generated(6, 4);
  RouteState rs = solve_mf(inst, {});
  ASSERT_TRUE(validate_solution(inst, rs).ok());

  RouteState outside = rs;
  outside.hitting_points[3] = inst.sensors[3].center + Point{inst.sensors[3].radius + 1, 0};
  outside.manhattan_cost = cycle_cost(outside.order, outside.hitting_points, manhattan);
  outside.euclidean_cost = cycle_cost(outside.order, outside.hitting_points, euclidean);
  const auto rep = validate_solution(inst, outside);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.sensors_outside, (std::vector<int>{3}));

  RouteState tampered = rs;
  tampered.euclidean_cost += 1.0;
  const auto rep2 = validate_solution(inst, tampered);
  EXPECT_FALSE(rep2.ok());
  EXPECT_TRUE(rep2.sensors_outside.empty());

  RouteState broken = rs;
  broken.order[1] = broken.order[2];
  EXPECT_FALSE(validate_solution(inst, broken).ok());
}

TEST(SolveMf, ScalesToFifty) {
  SolverConfig cfg;
  cfg.obj_cfg.projection8 = true;
  const RouteState rs = solve_mf(generated(50, 1), cfg);
  EXPECT_TRUE(validate_solution(generated(50, 1), rs).ok());
  EXPECT_LT(rs.time_ms, 60000.0);
}
