#ifndef CETSP_METRICS_HPP
#define CETSP_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cetsp/core.hpp"
#include "cetsp/geometry.hpp"
#include "cetsp/random.hpp"

namespace cetsp {

inline double euclidean(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

inline double manhattan(Point p, Point q) { return std::abs(p.x - q.x) + std::abs(p.y - q.y); }

/// Affine surrogate of the Euclidean length of a displacement:
///
///   pred(|dx|, |dy|) = c_dx * (|dx| - mean_dx) + c_dy * (|dy| - mean_dy) + bias
///
/// Inputs are centered on the sample means, so `bias` is the mean target.
struct RegressionModel {
  double c_dx = 1.0;
  double c_dy = 1.0;
  double mean_dx = 0.0;
  double mean_dy = 0.0;
  double bias = 0.0;

  double predict(double adx, double ady) const {
    return c_dx * (adx - mean_dx) + c_dy * (ady - mean_dy) + bias;
  }
  /// The part of every prediction that does not depend on the displacement.
  double constant_term() const { return bias - c_dx * mean_dx - c_dy * mean_dy; }

  friend bool operator==(const RegressionModel&, const RegressionModel&) = default;
};

/// Coefficients reported for the one-layer network trained on random
/// coordinates. The normalization scale 235.66 equals the standard deviation
/// of |dx| for coordinates uniform on [0, 1000] (1000 / sqrt(18)), so the
/// matching input means are 1000 / 3.
inline RegressionModel reference_regression() {
  return {170.98 / 235.656533, 168.928 / 235.695644, 1000.0 / 3.0, 1000.0 / 3.0, 503.279};
}

struct RegressionFit {
  RegressionModel model;
  double r_squared = 0.0;
};

/// Draws point pairs uniformly in [0, range]^2 and regresses the Euclidean
/// distance on (|dx|, |dy|) by ordinary least squares.
namespace detail {

// Uniform point pairs in [0, range]^2 -> (|dx|, |dy|, euclidean).
inline void sample_pairs(std::size_t n, double range, std::uint64_t seed, std::vector<double>& ax,
                         std::vector<double>& ay, std::vector<double>& target) {
  SplitMix64 rng(seed);
  ax.resize(n);
  ay.resize(n);
  target.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point p{rng.uniform(0, range), rng.uniform(0, range)};
    const Point q{rng.uniform(0, range), rng.uniform(0, range)};
    ax[i] = std::abs(p.x - q.x);
    ay[i] = std::abs(p.y - q.y);
    target[i] = euclidean(p, q);
  }
}

}  // namespace detail

inline RegressionFit fit_regression(std::size_t n_samples, double coord_range, std::uint64_t seed) {
  if (n_samples < 100) throw ValidationError("fit_regression needs at least 100 samples");
  if (!(coord_range > 0.0)) throw ValidationError("coordinate range must be positive");

  std::vector<double> ax, ay, target;
  detail::sample_pairs(n_samples, coord_range, seed, ax, ay, target);
  double sx = 0, sy = 0, st = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    sx += ax[i];
    sy += ay[i];
    st += target[i];
  }
  const double n = static_cast<double>(n_samples);
  const double mx = sx / n, my = sy / n, mt = st / n;

  // Normal equations on centered data: [sxx sxy; sxy syy] c = [sxt; syt].
  double sxx = 0, sxy = 0, syy = 0, sxt = 0, syt = 0, stt = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double dx = ax[i] - mx, dy = ay[i] - my, dt = target[i] - mt;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
    sxt += dx * dt;
    syt += dy * dt;
    stt += dt * dt;
  }
  const double det = sxx * syy - sxy * sxy;
  if (!(std::abs(det) > 1e-12 * std::max(1.0, sxx * syy)))
    throw Error("fit_regression: degenerate sample covariance");

  RegressionFit fit;
  fit.model.c_dx = (syy * sxt - sxy * syt) / det;
  fit.model.c_dy = (sxx * syt - sxy * sxt) / det;
  fit.model.mean_dx = mx;
  fit.model.mean_dy = my;
  fit.model.bias = mt;
  const double explained = fit.model.c_dx * sxt + fit.model.c_dy * syt;
  fit.r_squared = stt > 0 ? explained / stt : 1.0;
  return fit;
}

/// Coefficient of determination of `m` on a fresh sample set.
inline double evaluate_r_squared(const RegressionModel& m, std::size_t n_samples, double coord_range,
                                 std::uint64_t seed) {
  if (n_samples < 2) throw ValidationError("evaluate_r_squared needs at least 2 samples");
  std::vector<double> ax, ay, target;
  detail::sample_pairs(n_samples, coord_range, seed, ax, ay, target);
  const double mean = std::accumulate(target.begin(), target.end(), 0.0) / static_cast<double>(n_samples);
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double e = target[i] - m.predict(ax[i], ay[i]);
    ss_res += e * e;
    ss_tot += (target[i] - mean) * (target[i] - mean);
  }
  return ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
}

enum class CostMode { manhattan, regression };

inline const char* to_string(CostMode m) { return m == CostMode::manhattan ? "manhattan" : "regression"; }

struct ObjectiveConfig {
  CostMode mode = CostMode::manhattan;
  bool projection8 = false;
  double projection_weight = 1.0;
};

inline void validate_objective(const ObjectiveConfig& cfg, const std::optional<RegressionModel>& model) {
  if (!(cfg.projection_weight >= 0.0)) throw ValidationError("projection_weight must be >= 0");
  if (cfg.mode == CostMode::regression && !model)
    throw ValidationError("regression mode requires a regression model");
}

/// Surrogate cost of travelling p -> q. Regression predictions are clamped
/// at zero so that every edge cost stays non-negative.
inline double edge_cost(const ObjectiveConfig& cfg, const std::optional<RegressionModel>& model,
                        Point p, Point q) {
  const double adx = std::abs(q.x - p.x), ady = std::abs(q.y - p.y);
  double cost = 0.0;
  if (cfg.mode == CostMode::manhattan) {
    cost = adx + ady;
  } else {
    if (!model) throw ValidationError("regression mode requires a regression model");
    cost = std::max(0.0, model->predict(adx, ady));
  }
  if (cfg.projection8) cost += cfg.projection_weight * projection_sum_8(q - p);
  return cost;
}

}  // namespace cetsp

#endif  // CETSP_METRICS_HPP
