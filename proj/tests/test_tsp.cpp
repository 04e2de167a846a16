#include <gtest/gtest.h>

#include <set>

#include "cetsp/metrics.hpp"
#include "cetsp/tsp.hpp"
#include "support.hpp"

using namespace cetsp;

namespace {
DistanceMatrix euclid(const std::vector<Point>& p) {
  return DistanceMatrix::from(p.size(), [&](std::size_t i, std::size_t j) { return euclidean(p[i], p[j]); });
}

void expect_valid(const Tour& t, std::size_t n) {
  ASSERT_EQ(t.order.size(), n);
  EXPECT_EQ(t.order[0], 0);
  EXPECT_EQ(std::set<int>(t.order.begin(), t.order.end()).size(), n);
}
}  // namespace

TEST(HeldKarp, UnitSquare) {
  const Tour t = held_karp(euclid({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
  EXPECT_NEAR(t.cost, 4.0, 1e-12);
  expect_valid(t, 4);
}

TEST(HeldKarp, TwoNodes) {
  DistanceMatrix d(2);
  d(0, 1) = 3;
  d(1, 0) = 5;
  const Tour t = held_karp(d);
  EXPECT_EQ(t.cost, 8.0);
  EXPECT_EQ(t.order, (std::vector<int>{0, 1}));
}

TEST(HeldKarp, SizeGuard) {
  EXPECT_THROW(held_karp(DistanceMatrix(1)), Error);
  EXPECT_THROW(held_karp(DistanceMatrix(17)), Error);
}

TEST(HeldKarp, MatchesEnumeration) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    for (bool sym : {true, false}) {
      const DistanceMatrix d = testsupport::random_matrix(8, seed, sym);
      const Tour t = held_karp(d);
      expect_valid(t, 8);
      EXPECT_EQ(t.cost, testsupport::exhaustive_tsp(d)) << seed;
      EXPECT_NEAR(tour_cost(d, t.order), t.cost, 1e-9);
    }
  }
}

TEST(NnTwoOpt, NotBetterThanExact) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const DistanceMatrix d = testsupport::random_matrix(10, seed, true);
    const Tour h = nn_two_opt(d);
    expect_valid(h, 10);
    EXPECT_GE(h.cost, held_karp(d).cost - 1e-9);
    EXPECT_NEAR(tour_cost(d, h.order), h.cost, 1e-9);
  }
}

TEST(NnTwoOpt, CollinearSweep) {
  std::vector<Point> p;
  for (int k : {3, 0, 5, 1, 4, 2}) p.push_back({double(k), 0});
  std::swap(p[0], p[1]);  // depot at x = 0
  const DistanceMatrix d = euclid(p);
  EXPECT_NEAR(nn_two_opt(d).cost, held_karp(d).cost, 1e-12);
  EXPECT_NEAR(nn_two_opt(d).cost, 10.0, 1e-12);
}

TEST(NnTwoOpt, Deterministic) {
  const DistanceMatrix d = testsupport::random_matrix(25, 77, true);
  EXPECT_EQ(nn_two_opt(d).order, nn_two_opt(d).order);
}

TEST(NnTwoOpt, TwoOptLocalOptimum) {
  for (std::size_t n = 4; n <= 30; n += 2) {
    const DistanceMatrix d = testsupport::random_matrix(n, n * 13, true);
    const Tour t = nn_two_opt(d);
    for (std::size_t i = 1; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::vector<int> alt = t.order;
        std::reverse(alt.begin() + i, alt.begin() + j + 1);
        EXPECT_GE(tour_cost(d, alt), t.cost - 1e-9) << n << " " << i << " " << j;
      }
  }
}

TEST(SolveTsp, DispatchesBySize) {
  const DistanceMatrix small = testsupport::random_matrix(9, 4, true);
  EXPECT_EQ(solve_tsp(small).cost, held_karp(small).cost);
  const DistanceMatrix big = testsupport::random_matrix(20, 4, true);
  EXPECT_EQ(solve_tsp(big).order, nn_two_opt(big).order);
  const Tour one = solve_tsp(DistanceMatrix(1));
  EXPECT_EQ(one.order, (std::vector<int>{0}));
  EXPECT_EQ(one.cost, 0.0);
}
