#ifndef CETSP_TSP_HPP
#define CETSP_TSP_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "cetsp/core.hpp"

namespace cetsp {

/// Row-major square cost matrix.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  template <class Fn>
  static DistanceMatrix from(std::size_t n, Fn&& cost) {
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) m(i, j) = cost(i, j);
    return m;
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

  bool symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

/// Closed tour starting at node 0; the edge back to 0 is implicit.
struct Tour {
  std::vector<int> order;
  double cost = 0.0;
};

inline double tour_cost(const DistanceMatrix& d, const std::vector<int>& order) {
  double c = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k)
    c += d(order[k], order[(k + 1) % order.size()]);
  return c;
}

inline constexpr std::size_t kHeldKarpMaxNodes = 16;

/// Exact dynamic program over subsets of nodes 1..n-1.
inline Tour held_karp(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2 || n > kHeldKarpMaxNodes) throw Error("held_karp: node count must be in [2, 16]");
  const std::size_t m = n - 1;  // nodes 1..n-1 map to bits 0..m-1
  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr double inf = std::numeric_limits<double>::infinity();
  // cost[mask * m + j]: cheapest path 0 -> ... -> (j+1) visiting exactly mask.
  std::vector<double> cost((full + 1) * m, inf);
  std::vector<std::int8_t> prev((full + 1) * m, -1);
  for (std::size_t j = 0; j < m; ++j) cost[(std::size_t{1} << j) * m + j] = d(0, j + 1);

  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double base = cost[mask * m + j];
      if (base == inf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double c = base + d(j + 1, k + 1);
        if (c < cost[next * m + k]) {
          cost[next * m + k] = c;
          prev[next * m + k] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  double best = inf;
  std::size_t last = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double c = cost[full * m + j] + d(j + 1, 0);
    if (c < best) {
      best = c;
      last = j;
    }
  }

  Tour t;
  t.cost = best;
  std::size_t mask = full;
  std::vector<int> rev;
  for (int j = static_cast<int>(last); j >= 0;) {
    rev.push_back(j + 1);
    const int p = prev[mask * m + j];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  t.order.push_back(0);
  t.order.insert(t.order.end(), rev.rbegin(), rev.rend());
  return t;
}

namespace detail {

inline double path_cost(const DistanceMatrix& d, const std::vector<int>& t, std::size_t from,
                        std::size_t to, bool reversed) {
  double c = 0.0;
  for (std::size_t k = from; k < to; ++k)
    c += reversed ? d(t[k + 1], t[k]) : d(t[k], t[k + 1]);
  return c;
}

}  // namespace detail

/// Nearest neighbour from the depot (ties to the lowest id) followed by
/// first-improvement 2-opt until no exchange helps.
inline Tour nn_two_opt(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2) throw Error("nn_two_opt: need at least 2 nodes");

  std::vector<int> t{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const int cur = t.back();
    int best = -1;
    for (std::size_t j = 0; j < n; ++j)
      if (!used[j] && (best < 0 || d(cur, j) < d(cur, best))) best = static_cast<int>(j);
    used[best] = true;
    t.push_back(best);
  }

  // Exchange edges (t[i], t[i+1]) and (t[j], t[j+1]) by reversing t[i+1..j].
  const bool sym = d.symmetric();
  constexpr double kImprove = 1e-10;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 2 < n && !improved; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        const int a = t[i], b = t[i + 1], c = t[j], e = t[(j + 1) % n];
        double delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
        if (!sym)
          delta += detail::path_cost(d, t, i + 1, j, true) - detail::path_cost(d, t, i + 1, j, false);
        if (delta < -kImprove) {
          std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i + 1),
                       t.begin() + static_cast<std::ptrdiff_t>(j + 1));
          improved = true;
          break;
        }
      }
    }
  }
  return {t, tour_cost(d, t)};
}

/// Exact for up to 16 nodes, heuristic beyond.
inline Tour solve_tsp(const DistanceMatrix& d) {
  if (d.size() == 0) throw Error("solve_tsp: empty matrix");
  if (d.size() == 1) return {{0}, 0.0};
  return d.size() <= kHeldKarpMaxNodes ? held_karp(d) : nn_two_opt(d);
}

}  // namespace cetsp

#endif  // CETSP_TSP_HPP
