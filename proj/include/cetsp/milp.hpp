#ifndef CETSP_MILP_HPP
#define CETSP_MILP_HPP

// Full CETSP mixed-integer models over inscribed regions, exported in CPLEX
// LP format for external solvers.
//
// With N = n + 1 nodes (depot included) and A = N (N - 1) directed arcs:
//
//   variables  binaries x_i_j             A
//              generals u_i (i >= 1)      N - 1
//              continuous u_0 (= 0)       1
//              continuous cx_i, cy_i      2 N
//              lin1: tx1/tx2/ty1/ty2      4 A
//              lin2: dx/dy                2 A
//              projection: g<k>_i_j       8 A
//
//   rows       out_i, in_i                2 N
//              anti_i_j (i < j)           A / 2
//              mtz_i_j (j != 0)           A - (N - 1)
//              region rows                4 (N - 1) square, 6 (N - 1) hexagon
//                                         (a sensor with r = 0 gets 4 either way)
//              lin1 equalities            2 A
//              lin2 big-M rows            4 A
//              projection rows            16 A
//
// The depot region is a single point and is written as fixed bounds.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cetsp/core.hpp"
#include "cetsp/geometry.hpp"
#include "cetsp/instance.hpp"
#include "cetsp/lp.hpp"
#include "cetsp/metrics.hpp"

namespace cetsp {

enum class Linearization { lin1, lin2 };

inline const char* to_string(Linearization l) { return l == Linearization::lin1 ? "lin1" : "lin2"; }

enum class VarType { continuous, integer, binary };

struct MilpVar {
  std::string name;
  VarType type = VarType::continuous;
  double lo = 0.0;
  double hi = kInf;
};

struct MilpRow {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

struct MilpModel {
  std::string name;
  RegionKind region = RegionKind::square;
  Linearization lin = Linearization::lin2;
  ObjectiveConfig objective_cfg;
  double big_m = 0.0;
  double projection_big_m = 0.0;
  std::vector<MilpVar> vars;
  std::vector<MilpRow> rows;
  std::vector<Term> objective;

  std::size_t var_index(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw Error("unknown variable " + n);
    return it->second;
  }
  std::size_t count(VarType t) const {
    return static_cast<std::size_t>(
        std::count_if(vars.begin(), vars.end(), [t](const MilpVar& v) { return v.type == t; }));
  }

  std::size_t add_var(std::string n, VarType t, double lo, double hi) {
    index_.emplace(n, vars.size());
    vars.push_back({std::move(n), t, lo, hi});
    return vars.size() - 1;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

/// Largest x- or y-extent between any two points of any two disks.
inline double big_m(const Instance& inst) {
  if (inst.sensors.empty()) throw ValidationError("big_m: empty instance");
  double xmin = inst.sensors[0].center.x, xmax = xmin;
  double ymin = inst.sensors[0].center.y, ymax = ymin;
  double rmax = 0.0;
  for (const Sensor& s : inst.sensors) {
    xmin = std::min(xmin, s.center.x);
    xmax = std::max(xmax, s.center.x);
    ymin = std::min(ymin, s.center.y);
    ymax = std::max(ymax, s.center.y);
    rmax = std::max(rmax, s.radius);
  }
  return std::max(xmax - xmin, ymax - ymin) + 2.0 * rmax;
}

/// max_k (|cos| + |sin|) over the eight projection axes.
inline double projection_scale() {
  double s = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const Point u = projection_axis(k);
    s = std::max(s, std::abs(u.x) + std::abs(u.y));
  }
  return s;
}

namespace detail {

inline std::string arc_suffix(int i, int j) { return std::to_string(i) + "_" + std::to_string(j); }

}  // namespace detail

inline MilpModel build_model(const Instance& inst, RegionKind region, Linearization lin,
                             const ObjectiveConfig& cfg,
                             const std::optional<RegressionModel>& reg = std::nullopt) {
  validate_instance(inst);
  validate_objective(cfg, reg);
  if (inst.sensor_count() == 0) throw ValidationError("build_model: instance has no sensors to visit");

  const int N = static_cast<int>(inst.node_count());
  const int n = N - 1;
  MilpModel m;
  m.name = inst.name;
  m.region = region;
  m.lin = lin;
  m.objective_cfg = cfg;
  m.big_m = big_m(inst);
  m.projection_big_m = m.big_m * projection_scale();

  std::vector<std::vector<std::size_t>> x(N, std::vector<std::size_t>(N, 0));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) x[i][j] = m.add_var("x_" + detail::arc_suffix(i, j), VarType::binary, 0, 1);
  std::vector<std::size_t> u(N), cx(N), cy(N);
  u[0] = m.add_var("u_0", VarType::continuous, 0, 0);
  for (int i = 1; i < N; ++i) u[i] = m.add_var("u_" + std::to_string(i), VarType::integer, 1, n);
  for (int i = 0; i < N; ++i) {
    const Point c = inst.sensors[i].center;
    const bool depot = i == 0;
    cx[i] = m.add_var("cx_" + std::to_string(i), VarType::continuous, depot ? c.x : -kInf,
                      depot ? c.x : kInf);
    cy[i] = m.add_var("cy_" + std::to_string(i), VarType::continuous, depot ? c.y : -kInf,
                      depot ? c.y : kInf);
  }

  for (int i = 0; i < N; ++i) {
    MilpRow out{"out_" + std::to_string(i), {}, RowSense::eq, 1.0};
    MilpRow in{"in_" + std::to_string(i), {}, RowSense::eq, 1.0};
    for (int j = 0; j < N; ++j)
      if (j != i) {
        out.terms.push_back({x[i][j], 1.0});
        in.terms.push_back({x[j][i], 1.0});
      }
    m.rows.push_back(std::move(out));
    m.rows.push_back(std::move(in));
  }
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      m.rows.push_back({"anti_" + detail::arc_suffix(i, j), {{x[i][j], 1.0}, {x[j][i], 1.0}},
                        RowSense::le, 1.0});
  for (int i = 0; i < N; ++i)
    for (int j = 1; j < N; ++j)
      if (i != j)
        m.rows.push_back({"mtz_" + detail::arc_suffix(i, j),
                          {{u[i], 1.0}, {u[j], -1.0}, {x[i][j], static_cast<double>(n)}},
                          RowSense::le, static_cast<double>(n - 1)});

  for (int i = 1; i < N; ++i) {
    const ConvexRegion reg_i = inscribe(region, inst.sensors[i].center, inst.sensors[i].radius);
    const std::string s = std::to_string(i);
    if (reg_i.is_box()) {
      m.rows.push_back({"xlo_" + s, {{cx[i], 1.0}}, RowSense::ge, reg_i.x_bounds.lo});
      m.rows.push_back({"xhi_" + s, {{cx[i], 1.0}}, RowSense::le, reg_i.x_bounds.hi});
      m.rows.push_back({"ylo_" + s, {{cy[i], 1.0}}, RowSense::ge, reg_i.y_bounds.lo});
      m.rows.push_back({"yhi_" + s, {{cy[i], 1.0}}, RowSense::le, reg_i.y_bounds.hi});
    } else {
      static const char* const kEdges[] = {"ab", "cd", "de", "fa"};
      for (std::size_t e = 0; e < reg_i.half_planes.size(); ++e) {
        const HalfPlane& h = reg_i.half_planes[e];
        m.rows.push_back({std::string("hex") + kEdges[e] + "_" + s, {{cy[i], 1.0}, {cx[i], -h.slope}},
                          h.sense == Sense::less_equal ? RowSense::le : RowSense::ge, h.intercept});
      }
      m.rows.push_back({"ylo_" + s, {{cy[i], 1.0}}, RowSense::ge, reg_i.y_bounds.lo});
      m.rows.push_back({"yhi_" + s, {{cy[i], 1.0}}, RowSense::le, reg_i.y_bounds.hi});
    }
  }

  const double wx = cfg.mode == CostMode::regression ? reg->c_dx : 1.0;
  const double wy = cfg.mode == CostMode::regression ? reg->c_dy : 1.0;
  const double M = m.big_m;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const std::string a = detail::arc_suffix(i, j);
      if (lin == Linearization::lin1) {
        // tx1 - tx2 = cx_j - cx_i, priced on every arc.
        const auto tx1 = m.add_var("tx1_" + a, VarType::continuous, 0, kInf);
        const auto tx2 = m.add_var("tx2_" + a, VarType::continuous, 0, kInf);
        const auto ty1 = m.add_var("ty1_" + a, VarType::continuous, 0, kInf);
        const auto ty2 = m.add_var("ty2_" + a, VarType::continuous, 0, kInf);
        m.rows.push_back({"linx_" + a, {{tx1, 1}, {tx2, -1}, {cx[j], -1}, {cx[i], 1}}, RowSense::eq, 0});
        m.rows.push_back({"liny_" + a, {{ty1, 1}, {ty2, -1}, {cy[j], -1}, {cy[i], 1}}, RowSense::eq, 0});
        m.objective.insert(m.objective.end(), {{tx1, wx}, {tx2, wx}, {ty1, wy}, {ty2, wy}});
      } else {
        const auto dx = m.add_var("dx_" + a, VarType::continuous, 0, kInf);
        const auto dy = m.add_var("dy_" + a, VarType::continuous, 0, kInf);
        // d >= +-(c_i - c_j) - M (1 - x_ij)
        m.rows.push_back({"bmx1_" + a, {{dx, 1}, {cx[i], -1}, {cx[j], 1}, {x[i][j], -M}}, RowSense::ge, -M});
        m.rows.push_back({"bmx2_" + a, {{dx, 1}, {cx[j], -1}, {cx[i], 1}, {x[i][j], -M}}, RowSense::ge, -M});
        m.rows.push_back({"bmy1_" + a, {{dy, 1}, {cy[i], -1}, {cy[j], 1}, {x[i][j], -M}}, RowSense::ge, -M});
        m.rows.push_back({"bmy2_" + a, {{dy, 1}, {cy[j], -1}, {cy[i], 1}, {x[i][j], -M}}, RowSense::ge, -M});
        m.objective.insert(m.objective.end(), {{dx, wx}, {dy, wy}});
      }
      if (cfg.mode == CostMode::regression) m.objective.push_back({x[i][j], reg->constant_term()});
      if (cfg.projection8) {
        const double Mp = m.projection_big_m;
        for (int k = 1; k <= 8; ++k) {
          const Point ax = projection_axis(k);
          const std::string g_name = "g" + std::to_string(k) + "_" + a;
          const auto g = m.add_var(g_name, VarType::continuous, 0, kInf);
          // g >= +-<c_j - c_i, axis> - M' (1 - x_ij)
          for (int sgn : {1, -1}) {
            const double s = sgn;
            m.rows.push_back({g_name + (sgn > 0 ? "_p" : "_m"),
                              {{g, 1}, {cx[j], -s * ax.x}, {cx[i], s * ax.x}, {cy[j], -s * ax.y},
                               {cy[i], s * ax.y}, {x[i][j], -Mp}},
                              RowSense::ge, -Mp});
          }
          m.objective.push_back({g, cfg.projection_weight});
        }
      }
    }
  return m;
}

/// File name stem: <instance>__<region>__<lin>[__reg][__proj8].lp
inline std::string model_file_name(const MilpModel& m) {
  std::string f = m.name + "__" + to_string(m.region) + "__" + to_string(m.lin);
  if (m.objective_cfg.mode == CostMode::regression) f += "__reg";
  if (m.objective_cfg.projection8) f += "__proj8";
  return f + ".lp";
}

namespace detail {

inline std::string lp_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void append_expr(std::string& out, const MilpModel& m, const std::vector<Term>& terms) {
  constexpr std::size_t kTermsPerLine = 8;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Term& t = terms[k];
    if (k > 0 && k % kTermsPerLine == 0) out += "\n   ";
    const double a = std::abs(t.coeff);
    out += t.coeff < 0 ? " - " : (k == 0 ? " " : " + ");
    if (a != 1.0) out += lp_number(a) + " ";
    out += m.vars[t.var].name;
  }
  if (terms.empty()) out += " 0";
}

}  // namespace detail

inline std::string export_lp(const MilpModel& m) {
  std::string out = "\\ CETSP model " + m.name + " (" + to_string(m.region) + ", " +
                    to_string(m.lin) + ", " + to_string(m.objective_cfg.mode) +
                    (m.objective_cfg.projection8 ? ", proj8" : "") + ")\n";
  out += "\\ big M = " + detail::lp_number(m.big_m) + "\n";
  out += "Minimize\n obj:";
  detail::append_expr(out, m, m.objective);
  out += "\nSubject To\n";
  for (const MilpRow& r : m.rows) {
    out += " " + r.name + ":";
    detail::append_expr(out, m, r.terms);
    out += r.sense == RowSense::le ? " <= " : r.sense == RowSense::ge ? " >= " : " = ";
    out += detail::lp_number(r.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const MilpVar& v : m.vars) {
    if (v.type == VarType::binary) continue;
    if (v.lo == v.hi) {
      out += " " + v.name + " = " + detail::lp_number(v.lo) + "\n";
    } else if (!std::isfinite(v.lo) && !std::isfinite(v.hi)) {
      out += " " + v.name + " free\n";
    } else if (std::isfinite(v.hi)) {
      out += " " + detail::lp_number(v.lo) + " <= " + v.name + " <= " + detail::lp_number(v.hi) + "\n";
    }
    // lo = 0, hi = inf is the LP-format default.
  }
  auto list_section = [&](const char* title, VarType t) {
    std::vector<std::string> names;
    for (const MilpVar& v : m.vars)
      if (v.type == t) names.push_back(v.name);
    if (names.empty()) return;
    out += title;
    out += "\n";
    for (std::size_t k = 0; k < names.size(); ++k)
      out += (k % 10 == 0 ? (k ? "\n " : " ") : " ") + names[k];
    out += "\n";
  };
  list_section("Generals", VarType::integer);
  list_section("Binaries", VarType::binary);
  out += "End\n";
  return out;
}

// ---------------------------------------------------------------------------
// Substituting a tour into the model.

/// Values for every model variable induced by a tour and its hitting points.
/// Arc auxiliaries take their tightest feasible values: |difference| on
/// selected arcs, zero elsewhere (lin1 prices every arc, so it takes the
/// absolute difference on all arcs).
inline std::vector<double> tour_assignment(const MilpModel& m, const std::vector<int>& order,
                                           const std::vector<Point>& points) {
  const int N = static_cast<int>(points.size());
  std::vector<double> val(m.vars.size(), 0.0);
  std::vector<std::vector<bool>> sel(N, std::vector<bool>(N, false));
  for (std::size_t k = 0; k < order.size(); ++k) {
    sel[order[k]][order[(k + 1) % order.size()]] = true;
    val[m.var_index("u_" + std::to_string(order[k]))] = static_cast<double>(k);
  }
  for (int i = 0; i < N; ++i) {
    val[m.var_index("cx_" + std::to_string(i))] = points[i].x;
    val[m.var_index("cy_" + std::to_string(i))] = points[i].y;
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const std::string a = detail::arc_suffix(i, j);
      const Point d = points[j] - points[i];
      val[m.var_index("x_" + a)] = sel[i][j] ? 1.0 : 0.0;
      if (m.lin == Linearization::lin1) {
        val[m.var_index("tx1_" + a)] = std::max(0.0, d.x);
        val[m.var_index("tx2_" + a)] = std::max(0.0, -d.x);
        val[m.var_index("ty1_" + a)] = std::max(0.0, d.y);
        val[m.var_index("ty2_" + a)] = std::max(0.0, -d.y);
      } else if (sel[i][j]) {
        val[m.var_index("dx_" + a)] = std::abs(d.x);
        val[m.var_index("dy_" + a)] = std::abs(d.y);
      }
      if (m.objective_cfg.projection8 && sel[i][j])
        for (int k = 1; k <= 8; ++k)
          val[m.var_index("g" + std::to_string(k) + "_" + a)] = std::abs(dot(d, projection_axis(k)));
    }
  return val;
}

/// Non-negative when the row holds; equality rows report -|violation|.
inline double row_slack(const MilpRow& r, const std::vector<double>& val) {
  double lhs = 0.0;
  for (const Term& t : r.terms) lhs += t.coeff * val[t.var];
  switch (r.sense) {
    case RowSense::le: return r.rhs - lhs;
    case RowSense::ge: return lhs - r.rhs;
    case RowSense::eq: return -std::abs(lhs - r.rhs);
  }
  return 0.0;
}

inline double objective_value(const MilpModel& m, const std::vector<double>& val) {
  double z = 0.0;
  for (const Term& t : m.objective) z += t.coeff * val[t.var];
  return z;
}

}  // namespace cetsp

#endif  // CETSP_MILP_HPP
