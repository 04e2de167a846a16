#ifndef CETSP_REPORT_HPP
#define CETSP_REPORT_HPP

// Serialization, benchmark tables and SVG trajectory plots.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "cetsp/core.hpp"
#include "cetsp/geometry.hpp"
#include "cetsp/instance.hpp"
#include "cetsp/metrics.hpp"
#include "cetsp/mf_solver.hpp"

namespace cetsp {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Files and JSON.

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

inline Instance read_instance_file(const std::filesystem::path& p) {
  return parse_instance(read_text_file(p), p.stem().string());
}

inline json regression_to_json(const RegressionModel& m) {
  return {{"c_dx", m.c_dx}, {"c_dy", m.c_dy}, {"mean_dx", m.mean_dx}, {"mean_dy", m.mean_dy}, {"bias", m.bias}};
}

inline RegressionModel regression_from_json(const json& j) {
  RegressionModel m;
  m.c_dx = j.at("c_dx").get<double>();
  m.c_dy = j.at("c_dy").get<double>();
  m.mean_dx = j.at("mean_dx").get<double>();
  m.mean_dy = j.at("mean_dy").get<double>();
  m.bias = j.at("bias").get<double>();
  return m;
}

inline RegionKind region_from_string(const std::string& s) {
  if (s == "square") return RegionKind::square;
  if (s == "hexagon") return RegionKind::hexagon;
  throw ValidationError("unknown region kind '" + s + "'");
}

inline CostMode mode_from_string(const std::string& s) {
  if (s == "manhattan") return CostMode::manhattan;
  if (s == "regression") return CostMode::regression;
  throw ValidationError("unknown objective mode '" + s + "'");
}

inline json config_to_json(const SolverConfig& c) {
  json j{{"region", to_string(c.region_kind)},
         {"mode", to_string(c.obj_cfg.mode)},
         {"projection8", c.obj_cfg.projection8},
         {"projection_weight", c.obj_cfg.projection_weight},
         {"max_outer_iters", c.max_outer_iters},
         {"improvement_tol", c.improvement_tol}};
  if (c.regression) j["regression"] = regression_to_json(*c.regression);
  return j;
}

/// Overrides the fields present in `j`; others keep their value in `base`.
inline SolverConfig config_from_json(const json& j, SolverConfig base = {}) {
  if (j.contains("region")) base.region_kind = region_from_string(j["region"].get<std::string>());
  if (j.contains("mode")) base.obj_cfg.mode = mode_from_string(j["mode"].get<std::string>());
  if (j.contains("projection8")) base.obj_cfg.projection8 = j["projection8"].get<bool>();
  if (j.contains("projection_weight")) base.obj_cfg.projection_weight = j["projection_weight"].get<double>();
  if (j.contains("max_outer_iters")) base.max_outer_iters = j["max_outer_iters"].get<int>();
  if (j.contains("improvement_tol")) base.improvement_tol = j["improvement_tol"].get<double>();
  if (j.contains("regression")) base.regression = regression_from_json(j["regression"]);
  return base;
}

/// Route is written closed: it starts and ends with the depot.
inline json solution_to_json(const Instance& inst, const SolverConfig& cfg, const RouteState& rs,
                             bool include_time = true) {
  json route = rs.order;
  route.push_back(0);
  json pts = json::array();
  for (const Point& p : rs.hitting_points) pts.push_back({p.x, p.y});
  json j{{"instance", inst.name},
         {"config", config_to_json(cfg)},
         {"route", route},
         {"hitting_points", pts},
         {"manhattan_cost", rs.manhattan_cost},
         {"euclidean_cost", rs.euclidean_cost},
         {"surrogate_cost", rs.surrogate_cost},
         {"iterations", rs.iterations}};
  if (include_time) j["time_ms"] = rs.time_ms;
  return j;
}

inline RouteState solution_from_json(const json& j) {
  RouteState rs;
  auto route = j.at("route").get<std::vector<int>>();
  if (route.size() >= 2 && route.back() == route.front()) route.pop_back();
  rs.order = route;
  for (const auto& p : j.at("hitting_points")) rs.hitting_points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  rs.u.assign(rs.hitting_points.size(), 0);
  for (std::size_t k = 0; k < rs.order.size(); ++k)
    if (rs.order[k] >= 0 && static_cast<std::size_t>(rs.order[k]) < rs.u.size()) rs.u[rs.order[k]] = static_cast<int>(k);
  rs.manhattan_cost = j.at("manhattan_cost").get<double>();
  rs.euclidean_cost = j.at("euclidean_cost").get<double>();
  rs.surrogate_cost = j.value("surrogate_cost", 0.0);
  rs.iterations = j.value("iterations", 0);
  rs.time_ms = j.value("time_ms", 0.0);
  return rs;
}

// ---------------------------------------------------------------------------
// Comparison metrics.

inline double relative_error(double ac, double bc) {
  if (!(bc > 0.0)) throw ValidationError("relative_error: best cost must be positive");
  return (ac - bc) / bc;
}

inline double average_relative_error(const std::vector<double>& re) {
  if (re.empty()) throw ValidationError("average_relative_error: empty suite");
  return std::accumulate(re.begin(), re.end(), 0.0) / static_cast<double>(re.size());
}

// ---------------------------------------------------------------------------
// Benchmark.

struct BenchConfig {
  std::string label;
  SolverConfig cfg;
};

/// Labels follow P{C|S|H}[-ABS|-Lin1|-Lin2][-Reg][-Proj], e.g. "PH-Lin2-Reg-Proj".
/// The linearization part names the full-model variant it mirrors; inside
/// the relocation subproblems every variant prices |.| identically.
inline BenchConfig parse_config_label(const std::string& label, const std::optional<RegressionModel>& reg) {
  static const std::regex re(R"(^P([CSH])(-(ABS|Lin1|Lin2))?(-Reg)?(-Proj)?$)");
  std::smatch m;
  if (!std::regex_match(label, m, re)) throw ValidationError("bad configuration label '" + label + "'");
  BenchConfig bc;
  bc.label = label;
  bc.cfg.region_kind = m[1] == "H" ? RegionKind::hexagon : RegionKind::square;
  if (m[4].matched) {
    if (!reg) throw ValidationError("configuration " + label + " needs a regression model");
    bc.cfg.obj_cfg.mode = CostMode::regression;
    bc.cfg.regression = reg;
  }
  bc.cfg.obj_cfg.projection8 = m[5].matched;
  return bc;
}

struct BenchRow {
  std::string instance;
  std::string config;
  double manhattan = 0.0;
  double euclidean = 0.0;
  double time_s = 0.0;
  bool best = false;
  double re = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;                        // instance-major, configs in given order
  std::vector<std::pair<std::string, double>> are;  // per config
  std::vector<std::string> skipped;                  // unreadable inputs with reason
};

/// Best cost and relative error are judged on the Euclidean length.
inline BenchResult bench(const std::vector<Instance>& instances, const std::vector<BenchConfig>& configs,
                         unsigned threads = std::thread::hardware_concurrency()) {
  BenchResult res;
  const std::size_t total = instances.size() * configs.size();
  res.rows.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next++) < total;) {
      const Instance& inst = instances[t / configs.size()];
      const BenchConfig& bc = configs[t % configs.size()];
      const RouteState rs = solve_mf(inst, bc.cfg);
      res.rows[t] = {inst.name, bc.label, rs.manhattan_cost, rs.euclidean_cost, rs.time_ms / 1000.0, false, 0.0};
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total))); ++k)
    pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<std::vector<double>> re_by_config(configs.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto first = res.rows.begin() + static_cast<std::ptrdiff_t>(i * configs.size());
    auto last = first + static_cast<std::ptrdiff_t>(configs.size());
    double best = kInf;
    for (auto it = first; it != last; ++it) best = std::min(best, it->euclidean);
    for (auto it = first; it != last; ++it) {
      it->best = it->euclidean <= best;
      it->re = best > 0.0 ? relative_error(it->euclidean, best) : 0.0;
      re_by_config[static_cast<std::size_t>(it - first)].push_back(it->re);
    }
  }
  for (std::size_t c = 0; c < configs.size(); ++c)
    if (!re_by_config[c].empty()) res.are.emplace_back(configs[c].label, average_relative_error(re_by_config[c]));
  return res;
}

/// Loads every *.txt file in `dir` (sorted by name), recording unreadable ones.
inline std::vector<Instance> load_instance_dir(const std::filesystem::path& dir, std::vector<std::string>& skipped) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Instance> out;
  for (const auto& f : files) {
    try {
      out.push_back(read_instance_file(f));
    } catch (const Error& e) {
      skipped.push_back(f.filename().string() + ": " + e.what());
    }
  }
  return out;
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

/// Columns: instance,config,manhattan,euclidean,time_s,best,re. Costs carry
/// 6 decimals and time 3. Summary rows follow with instance "ARE" and only
/// the config and re columns filled.
inline std::string bench_csv(const BenchResult& r, bool include_time = true) {
  std::string out = "instance,config,manhattan,euclidean,time_s,best,re\n";
  for (const BenchRow& row : r.rows) {
    out += row.instance + "," + row.config + "," + detail::fmt("%.6f", row.manhattan) + "," +
           detail::fmt("%.6f", row.euclidean) + "," + (include_time ? detail::fmt("%.3f", row.time_s) : "") +
           "," + (row.best ? "1" : "0") + "," + detail::fmt("%.6f", row.re) + "\n";
  }
  for (const auto& [label, are] : r.are) out += "ARE," + label + ",,,,," + detail::fmt("%.6f", are) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// SVG.

inline std::string render_svg(const Instance& inst, const RouteState& rs,
                              RegionKind region = RegionKind::hexagon) {
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const Sensor& s : inst.sensors) {
    xmin = std::min(xmin, s.center.x - s.radius);
    xmax = std::max(xmax, s.center.x + s.radius);
    ymin = std::min(ymin, s.center.y - s.radius);
    ymax = std::max(ymax, s.center.y + s.radius);
  }
  const double margin = std::max(10.0, 0.05 * std::max(xmax - xmin, ymax - ymin));
  xmin -= margin;
  xmax += margin;
  ymin -= margin;
  ymax += margin;
  const double w = xmax - xmin, h = ymax - ymin;
  const double marker = std::max(w, h) / 150.0;
  auto n = [](double v) { return detail::fmt("%.3f", v); };
  // SVG y grows downward; mirror so north is up.
  auto sx = [&](double x) { return n(x); };
  auto sy = [&](double y) { return n(ymax + ymin - y); };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + n(xmin) + " " + n(ymin) + " " +
         n(w) + " " + n(h) + "\" width=\"800\" height=\"" + n(800.0 * h / w) + "\">\n";
  out += "<title>" + inst.name + "</title>\n";
  out += "<rect x=\"" + n(xmin) + "\" y=\"" + n(ymin) + "\" width=\"" + n(w) + "\" height=\"" + n(h) +
         "\" fill=\"white\"/>\n";

  out += "<g id=\"disks\" fill=\"#dbe9f6\" stroke=\"#4a78a8\" stroke-width=\"" + n(marker / 4) + "\">\n";
  for (std::size_t i = 1; i < inst.sensors.size(); ++i) {
    const Sensor& s = inst.sensors[i];
    out += "<circle cx=\"" + sx(s.center.x) + "\" cy=\"" + sy(s.center.y) + "\" r=\"" + n(s.radius) + "\"/>\n";
  }
  out += "</g>\n";

  out += "<g id=\"regions\" fill=\"#b7d3ee\" stroke=\"#2f5f8f\" stroke-width=\"" + n(marker / 5) + "\">\n";
  for (std::size_t i = 1; i < inst.sensors.size(); ++i) {
    const Sensor& s = inst.sensors[i];
    if (s.radius <= 0.0) continue;
    std::string pts;
    for (const Point& p : region_outline(inscribe(region, s.center, s.radius)))
      pts += (pts.empty() ? "" : " ") + sx(p.x) + "," + sy(p.y);
    out += "<polygon points=\"" + pts + "\"/>\n";
  }
  out += "</g>\n";

  if (!rs.order.empty() && rs.hitting_points.size() == inst.sensors.size()) {
    std::string pts;
    for (int id : rs.order) pts += sx(rs.hitting_points[id].x) + "," + sy(rs.hitting_points[id].y) + " ";
    const Point first = rs.hitting_points[rs.order.front()];
    pts += sx(first.x) + "," + sy(first.y);
    out += "<polyline id=\"route\" points=\"" + pts + "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"" +
           n(marker / 2) + "\"/>\n";
    out += "<g id=\"hitting-points\" fill=\"#1e1e1e\">\n";
    for (std::size_t i = 1; i < rs.hitting_points.size(); ++i) {
      const Point p = rs.hitting_points[i];
      out += "<rect x=\"" + n(p.x - marker / 2) + "\" y=\"" + n(ymax + ymin - p.y - marker / 2) + "\" width=\"" +
             n(marker) + "\" height=\"" + n(marker) + "\"/>\n";
    }
    out += "</g>\n";
  }

  out += "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"" + n(marker * 3) + "\" fill=\"#333\">\n";
  for (std::size_t i = 1; i < inst.sensors.size(); ++i)
    out += "<text x=\"" + sx(inst.sensors[i].center.x + marker) + "\" y=\"" + sy(inst.sensors[i].center.y + marker) +
           "\">" + std::to_string(i) + "</text>\n";
  out += "</g>\n";

  const Point depot = inst.sensors[0].center;
  out += "<circle id=\"depot\" cx=\"" + sx(depot.x) + "\" cy=\"" + sy(depot.y) + "\" r=\"" + n(marker * 1.5) +
         "\" fill=\"#27ae60\" stroke=\"black\" stroke-width=\"" + n(marker / 4) + "\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace cetsp

#endif  // CETSP_REPORT_HPP
