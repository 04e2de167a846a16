#ifndef CETSP_ORACLE_HPP
#define CETSP_ORACLE_HPP

// Exact Manhattan optimum for tiny instances: one LP per visiting order over
// all hitting points at once, enumerated over every order.

#include <algorithm>
#include <numeric>
#include <vector>

#include "cetsp/core.hpp"
#include "cetsp/geometry.hpp"
#include "cetsp/instance.hpp"
#include "cetsp/lp.hpp"
#include "cetsp/metrics.hpp"

namespace cetsp {

struct FixedOrderResult {
  std::vector<Point> points;  // indexed by node id
  double manhattan_cost = 0.0;
};

inline FixedOrderResult optimal_fixed_order(const Instance& inst, const std::vector<int>& order,
                                            const std::vector<ConvexRegion>& regions) {
  const std::size_t N = inst.node_count();
  if (order.size() != N || order.empty() || order[0] != 0)
    throw ValidationError("optimal_fixed_order: order must be a permutation starting at the depot");
  if (N == 1) return {{inst.sensors[0].center}, 0.0};

  LpBuilder lp;
  std::vector<std::size_t> vx(N), vy(N);
  for (std::size_t i = 0; i < N; ++i) {
    const ConvexRegion& reg = regions[i];
    vx[i] = lp.add_var(reg.x_bounds.lo, reg.x_bounds.hi);
    vy[i] = lp.add_var(reg.y_bounds.lo, reg.y_bounds.hi);
    for (const HalfPlane& h : reg.half_planes)
      lp.add_row({{vx[i], -h.slope}, {vy[i], 1.0}},
                 h.sense == Sense::less_equal ? RowSense::le : RowSense::ge, h.intercept);
  }
  for (std::size_t k = 0; k < N; ++k) {
    const int a = order[k], b = order[(k + 1) % N];
    abs_gadget(lp, {{{vx[b], 1.0}, {vx[a], -1.0}}, 0.0});
    abs_gadget(lp, {{{vy[b], 1.0}, {vy[a], -1.0}}, 0.0});
  }
  const LpSolution sol = solve_lp(lp.build());
  if (sol.status != LpStatus::optimal) throw Error("optimal_fixed_order: LP not optimal (regions empty?)");

  FixedOrderResult out;
  out.points.resize(N);
  for (std::size_t i = 0; i < N; ++i) out.points[i] = {sol.values[vx[i]], sol.values[vy[i]]};
  for (std::size_t k = 0; k < N; ++k)
    out.manhattan_cost += manhattan(out.points[order[k]], out.points[order[(k + 1) % N]]);
  return out;
}

struct OracleResult {
  std::vector<int> order;
  std::vector<Point> points;
  double manhattan_cost = 0.0;
  std::size_t orders_evaluated = 0;
};

inline constexpr std::size_t kOracleMaxNodes = 8;

/// Enumerates every directed order with the depot first. Ties keep the
/// lexicographically smallest order.
inline OracleResult brute_force_opt(const Instance& inst, const std::vector<ConvexRegion>& regions) {
  const std::size_t N = inst.node_count();
  if (N == 0 || N > kOracleMaxNodes) throw ValidationError("brute_force_opt: at most 8 nodes");
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);

  OracleResult best;
  best.manhattan_cost = kInf;
  do {
    FixedOrderResult r = optimal_fixed_order(inst, order, regions);
    ++best.orders_evaluated;
    if (r.manhattan_cost < best.manhattan_cost - 1e-9) {
      best.order = order;
      best.points = std::move(r.points);
      best.manhattan_cost = r.manhattan_cost;
    }
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

}  // namespace cetsp

#endif  // CETSP_ORACLE_HPP
