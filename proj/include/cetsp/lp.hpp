#ifndef CETSP_LP_HPP
#define CETSP_LP_HPP

// Dense two-phase tableau simplex with Bland's rule.
//
// Sized for the small continuous subproblems of the relocation heuristic and
// the fixed-order oracle (tens of variables and rows). Feasibility and
// optimality are judged with an absolute tolerance of 1e-7 on the phase-one
// objective; pivots below 1e-9 are treated as zero.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "cetsp/core.hpp"

namespace cetsp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLpFeasTol = 1e-7;

enum class RowSense { le, ge, eq };

struct LpConstraint {
  std::vector<double> coeffs;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

struct VarBounds {
  double lo = 0.0;
  double hi = kInf;
};

/// minimize objective . x  subject to constraints and per-variable bounds.
struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<VarBounds> bounds;
};

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc, std::vector<double>& reduced, double& obj) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    const double f = reduced[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c < cols_; ++c) reduced[c] -= f * at(pr, c);
      obj -= f * rhs(pr);
      reduced[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { optimal, unbounded };

// Minimizes with reduced costs `reduced` over columns [0, usable).
// `obj` tracks -(current objective) in the convention reduced = c - c_B B^-1 A.
inline PhaseResult run_simplex(Tableau& t, std::vector<double>& reduced, double& obj,
                               std::size_t usable) {
  constexpr double kPivotTol = 1e-9;
  constexpr double kCostTol = 1e-9;
  constexpr std::size_t kMaxPivots = 200000;
  for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
    std::size_t enter = usable;
    for (std::size_t c = 0; c < usable; ++c)
      if (reduced[c] < -kCostTol) {
        enter = c;
        break;
      }
    if (enter == usable) return PhaseResult::optimal;

    std::size_t leave = t.rows();
    double best = kInf;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(0.0, t.rhs(r)) / a;
      if (ratio < best - 1e-12) {
        best = ratio;
        leave = r;
      } else if (ratio <= best + 1e-12 && t.basis()[r] < t.basis()[leave]) {
        leave = r;  // Bland: lowest basic index among ties
      }
    }
    if (leave == t.rows()) return PhaseResult::unbounded;
    t.pivot(leave, enter, reduced, obj);
  }
  throw Error("simplex: pivot limit reached");
}

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& p) {
  const std::size_t n = p.num_vars;
  if (p.objective.size() != n || p.bounds.size() != n) throw Error("solve_lp: inconsistent sizes");
  for (const auto& row : p.constraints)
    if (row.coeffs.size() != n) throw Error("solve_lp: constraint length mismatch");
  for (const auto& b : p.bounds)
    if (!(b.lo <= b.hi)) return {LpStatus::infeasible, {}, 0.0};

  // Map every original variable onto non-negative columns:
  //   fixed  x = lo                 (no column)
  //   shift  x = lo + y             (+ row y <= hi - lo when hi is finite)
  //   mirror x = hi - y
  //   free   x = y1 - y2
  enum class Map { fixed, shift, mirror, free };
  struct VarMap {
    Map kind;
    double offset;
    std::size_t col;
  };
  std::vector<VarMap> maps(n);
  std::size_t ny = 0;
  std::vector<std::pair<std::size_t, double>> upper_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const auto [lo, hi] = p.bounds[j];
    if (lo == hi) {
      maps[j] = {Map::fixed, lo, 0};
    } else if (std::isfinite(lo)) {
      maps[j] = {Map::shift, lo, ny++};
      if (std::isfinite(hi)) upper_rows.emplace_back(maps[j].col, hi - lo);
    } else if (std::isfinite(hi)) {
      maps[j] = {Map::mirror, hi, ny++};
    } else {
      maps[j] = {Map::free, 0.0, ny};
      ny += 2;
    }
  }

  struct Row {
    std::vector<double> a;
    RowSense sense;
    double b;
  };
  std::vector<Row> rows;
  rows.reserve(p.constraints.size() + upper_rows.size());
  for (const auto& c : p.constraints) {
    Row r{std::vector<double>(ny, 0.0), c.sense, c.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.coeffs[j];
      if (a == 0.0) continue;
      const VarMap& m = maps[j];
      switch (m.kind) {
        case Map::fixed: r.b -= a * m.offset; break;
        case Map::shift: r.b -= a * m.offset; r.a[m.col] += a; break;
        case Map::mirror: r.b -= a * m.offset; r.a[m.col] -= a; break;
        case Map::free: r.a[m.col] += a; r.a[m.col + 1] -= a; break;
      }
    }
    rows.push_back(std::move(r));
  }
  for (const auto& [col, ub] : upper_rows) {
    Row r{std::vector<double>(ny, 0.0), RowSense::le, ub};
    r.a[col] = 1.0;
    rows.push_back(std::move(r));
  }
  for (Row& r : rows)
    if (r.b < 0.0) {
      for (double& v : r.a) v = -v;
      r.b = -r.b;
      if (r.sense == RowSense::le)
        r.sense = RowSense::ge;
      else if (r.sense == RowSense::ge)
        r.sense = RowSense::le;
    }

  std::size_t n_slack = 0, n_art = 0;
  for (const Row& r : rows) {
    if (r.sense != RowSense::eq) ++n_slack;
    if (r.sense != RowSense::le) ++n_art;
  }
  const std::size_t m = rows.size();
  const std::size_t art_begin = ny + n_slack;
  detail::Tableau t(m, art_begin + n_art);
  {
    std::size_t s = ny, a = art_begin;
    for (std::size_t i = 0; i < m; ++i) {
      const Row& r = rows[i];
      for (std::size_t j = 0; j < ny; ++j) t.at(i, j) = r.a[j];
      t.rhs(i) = r.b;
      if (r.sense == RowSense::le) {
        t.at(i, s) = 1.0;
        t.basis()[i] = s++;
      } else {
        if (r.sense == RowSense::ge) t.at(i, s++) = -1.0;
        t.at(i, a) = 1.0;
        t.basis()[i] = a++;
      }
    }
  }

  // Phase one: minimize the sum of artificials.
  std::vector<double> reduced(t.cols(), 0.0);
  double obj = 0.0;
  for (std::size_t c = art_begin; c < t.cols(); ++c) reduced[c] = 1.0;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis()[i] >= art_begin) {
      for (std::size_t c = 0; c < t.cols(); ++c) reduced[c] -= t.at(i, c);
      obj -= t.rhs(i);
    }
  if (n_art > 0) {
    detail::run_simplex(t, reduced, obj, t.cols());
    if (-obj > kLpFeasTol) return {LpStatus::infeasible, {}, 0.0};
    // Drive zero-valued artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < art_begin) continue;
      for (std::size_t c = 0; c < art_begin; ++c)
        if (std::abs(t.at(i, c)) > 1e-9) {
          t.pivot(i, c, reduced, obj);
          break;
        }
    }
  }

  // Phase two on the real objective, artificials barred from entering.
  std::vector<double> cost(t.cols(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double c = p.objective[j];
    const VarMap& mp = maps[j];
    switch (mp.kind) {
      case Map::fixed: break;
      case Map::shift: cost[mp.col] += c; break;
      case Map::mirror: cost[mp.col] -= c; break;
      case Map::free: cost[mp.col] += c; cost[mp.col + 1] -= c; break;
    }
  }
  reduced = cost;
  obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = cost[t.basis()[i]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c < t.cols(); ++c) reduced[c] -= cb * t.at(i, c);
    obj -= cb * t.rhs(i);
  }
  if (detail::run_simplex(t, reduced, obj, art_begin) == detail::PhaseResult::unbounded)
    return {LpStatus::unbounded, {}, 0.0};

  std::vector<double> y(t.cols(), 0.0);
  for (std::size_t i = 0; i < m; ++i) y[t.basis()[i]] = std::max(0.0, t.rhs(i));
  LpSolution sol{LpStatus::optimal, std::vector<double>(n, 0.0), 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const VarMap& mp = maps[j];
    switch (mp.kind) {
      case Map::fixed: sol.values[j] = mp.offset; break;
      case Map::shift: sol.values[j] = mp.offset + y[mp.col]; break;
      case Map::mirror: sol.values[j] = mp.offset - y[mp.col]; break;
      case Map::free: sol.values[j] = y[mp.col] - y[mp.col + 1]; break;
    }
    sol.objective_value += p.objective[j] * sol.values[j];
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Sparse builder used by the modelling code.

struct Term {
  std::size_t var;
  double coeff;
};

/// sum(coeff * var) + constant
struct LinearExpr {
  std::vector<Term> terms;
  double constant = 0.0;
};

class LpBuilder {
 public:
  std::size_t add_var(double lo, double hi, double cost = 0.0) {
    bounds_.push_back({lo, hi});
    objective_.push_back(cost);
    return bounds_.size() - 1;
  }

  void add_row(std::vector<Term> terms, RowSense sense, double rhs) {
    rows_.push_back({std::move(terms), sense, rhs});
  }

  void set_cost(std::size_t var, double cost) { objective_[var] = cost; }
  void set_bounds(std::size_t var, double lo, double hi) { bounds_[var] = {lo, hi}; }
  std::size_t num_vars() const { return bounds_.size(); }
  const std::vector<double>& objective() const { return objective_; }

  LpProblem build() const {
    LpProblem p;
    p.num_vars = bounds_.size();
    p.objective = objective_;
    p.bounds = bounds_;
    for (const auto& r : rows_) {
      LpConstraint c{std::vector<double>(p.num_vars, 0.0), r.sense, r.rhs};
      for (const Term& t : r.terms) c.coeffs[t.var] += t.coeff;
      p.constraints.push_back(std::move(c));
    }
    return p;
  }

 private:
  struct SparseRow {
    std::vector<Term> terms;
    RowSense sense;
    double rhs;
  };
  std::vector<VarBounds> bounds_;
  std::vector<double> objective_;
  std::vector<SparseRow> rows_;
};

struct AbsGadget {
  std::size_t plus;
  std::size_t minus;
};

/// Adds t+ - t- = expr with t+, t- >= 0 and objective weight * (t+ + t-).
/// Under minimization with weight > 0, t+ + t- equals |expr| at the optimum.
inline AbsGadget abs_gadget(LpBuilder& lp, const LinearExpr& expr, double weight = 1.0) {
  AbsGadget g{lp.add_var(0.0, kInf, weight), lp.add_var(0.0, kInf, weight)};
  std::vector<Term> terms{{g.plus, 1.0}, {g.minus, -1.0}};
  for (const Term& t : expr.terms) terms.push_back({t.var, -t.coeff});
  lp.add_row(std::move(terms), RowSense::eq, expr.constant);
  return g;
}

}  // namespace cetsp

#endif  // CETSP_LP_HPP
