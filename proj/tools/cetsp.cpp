// cetsp command line front end.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cetsp/cetsp.hpp"

namespace fs = std::filesystem;
using namespace cetsp;

namespace {

struct SolveOpts {
  std::string region = "hexagon";
  std::string mode = "manhattan";
  bool proj = false;
  double proj_weight = 1.0;
  std::string reg_model;  // JSON file; empty -> reference coefficients
  std::string config;     // JSON override file
  int max_outer = 50;
};

void add_solve_opts(CLI::App* app, SolveOpts& o) {
  app->add_option("--region", o.region, "square | hexagon")->check(CLI::IsMember({"square", "hexagon"}));
  app->add_option("--mode", o.mode, "manhattan | regression")->check(CLI::IsMember({"manhattan", "regression"}));
  app->add_flag("--proj", o.proj, "add the 8-axis projection term");
  app->add_option("--proj-weight", o.proj_weight, "weight of the projection term");
  app->add_option("--reg-model", o.reg_model, "regression model JSON (default: reference fit)");
  app->add_option("--max-outer", o.max_outer, "outer iteration cap");
  app->add_option("--config", o.config, "JSON file overriding the flags");
}

RegressionModel load_regression(const std::string& path) {
  if (path.empty()) return reference_regression();
  const json j = json::parse(read_text_file(path));
  return regression_from_json(j.contains("model") ? j["model"] : j);
}

SolverConfig make_config(const SolveOpts& o) {
  SolverConfig cfg;
  cfg.region_kind = region_from_string(o.region);
  cfg.obj_cfg.mode = mode_from_string(o.mode);
  cfg.obj_cfg.projection8 = o.proj;
  cfg.obj_cfg.projection_weight = o.proj_weight;
  cfg.max_outer_iters = o.max_outer;
  if (cfg.obj_cfg.mode == CostMode::regression || !o.reg_model.empty()) cfg.regression = load_regression(o.reg_model);
  if (!o.config.empty()) cfg = config_from_json(json::parse(read_text_file(o.config)), cfg);
  if (cfg.obj_cfg.mode == CostMode::regression && !cfg.regression) cfg.regression = reference_regression();
  validate_config(cfg);
  return cfg;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Close-enough TSP toolkit"};
  app.require_subcommand(1);

  // solve
  SolveOpts so;
  std::string solve_in, solve_out;
  bool solve_no_time = false;
  auto* solve = app.add_subcommand("solve", "run the fragmented heuristic on one instance");
  solve->add_option("instance", solve_in, "instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("-o,--output", solve_out, "solution JSON (default stdout)");
  solve->add_flag("--no-time", solve_no_time, "omit time_ms for byte-stable output");
  add_solve_opts(solve, so);

  // export-lp
  SolveOpts eo;
  std::string exp_in, exp_dir = ".", exp_lin = "lin2";
  bool exp_stdout = false;
  auto* exp = app.add_subcommand("export-lp", "write the full MILP in CPLEX LP format");
  exp->add_option("instance", exp_in, "instance file")->required()->check(CLI::ExistingFile);
  exp->add_option("--lin", exp_lin, "lin1 | lin2")->check(CLI::IsMember({"lin1", "lin2"}));
  exp->add_option("-d,--dir", exp_dir, "output directory");
  exp->add_flag("--stdout", exp_stdout, "print instead of writing a file");
  add_solve_opts(exp, eo);

  // fit-reg
  std::size_t fit_n = 100000, fit_holdout = 10000;
  double fit_range = 1200.0;
  std::uint64_t fit_seed = 1;
  std::string fit_out;
  auto* fit = app.add_subcommand("fit-reg", "fit the |dx|,|dy| -> distance regression");
  fit->add_option("--samples", fit_n, "training pairs");
  fit->add_option("--holdout", fit_holdout, "held-out pairs for R^2 (0 to skip)");
  fit->add_option("--range", fit_range, "coordinate range");
  fit->add_option("--seed", fit_seed, "sampling seed");
  fit->add_option("-o,--output", fit_out, "model JSON (default stdout)");

  // gen
  GeneratorSpec gs;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("-n,--sensors", gs.sensors, "number of sensors");
  gen->add_option("--width", gs.width);
  gen->add_option("--height", gs.height);
  gen->add_option("--rmin", gs.r_min);
  gen->add_option("--rmax", gs.r_max);
  gen->add_option("--seed", gs.seed);
  gen->add_option("-o,--output", gen_out, "instance file (default stdout)");

  // render
  std::string ren_in, ren_sol, ren_out;
  auto* ren = app.add_subcommand("render", "draw a solution as SVG");
  ren->add_option("instance", ren_in)->required()->check(CLI::ExistingFile);
  ren->add_option("solution", ren_sol, "solution JSON from solve")->required()->check(CLI::ExistingFile);
  ren->add_option("-o,--output", ren_out, "SVG file (default stdout)");

  // oracle
  std::string or_in, or_region = "hexagon", or_out;
  bool or_fixture = false;
  int or_first = 1, or_last = 20;
  GeneratorSpec or_gen;
  or_gen.sensors = 6;
  or_gen.r_min = 40;
  or_gen.r_max = 120;
  double or_threshold = 0.25;
  auto* orc = app.add_subcommand("oracle", "exact Manhattan optimum by order enumeration");
  orc->add_option("instance", or_in, "instance file")->check(CLI::ExistingFile);
  orc->add_option("--region", or_region)->check(CLI::IsMember({"square", "hexagon"}));
  orc->add_flag("--fixture", or_fixture, "generate seeded instances and write certified optima as CSV");
  orc->add_option("--first-seed", or_first);
  orc->add_option("--last-seed", or_last);
  orc->add_option("-n,--sensors", or_gen.sensors);
  orc->add_option("--width", or_gen.width);
  orc->add_option("--height", or_gen.height);
  orc->add_option("--rmin", or_gen.r_min);
  orc->add_option("--rmax", or_gen.r_max);
  orc->add_option("--gap-threshold", or_threshold, "median gap gate recorded in the fixture");
  orc->add_option("-o,--output", or_out);

  // bench
  std::vector<std::string> bench_in, bench_cfgs{"PH-ABS", "PH-Lin2-Reg-Proj"};
  std::string bench_out, bench_reg;
  unsigned bench_threads = 0;
  bool bench_no_time = false;
  auto* ben = app.add_subcommand("bench", "run configurations over instances and tabulate");
  ben->add_option("inputs", bench_in, "instance directory or files")->required();
  ben->add_option("-c,--configs", bench_cfgs, "labels like PH-Lin2-Reg-Proj")->delimiter(',');
  ben->add_option("--reg-model", bench_reg, "regression model JSON (default: reference fit)");
  ben->add_option("-j,--threads", bench_threads, "worker threads (0 = hardware)");
  ben->add_flag("--no-time", bench_no_time, "blank the time column");
  ben->add_option("-o,--output", bench_out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const Instance inst = read_instance_file(solve_in);
      const SolverConfig cfg = make_config(so);
      const RouteState rs = solve_mf(inst, cfg);
      emit(solution_to_json(inst, cfg, rs, !solve_no_time).dump(2) + "\n", solve_out);
    } else if (*exp) {
      const Instance inst = read_instance_file(exp_in);
      const SolverConfig cfg = make_config(eo);
      const MilpModel m =
          build_model(inst, cfg.region_kind, exp_lin == "lin1" ? Linearization::lin1 : Linearization::lin2,
                      cfg.obj_cfg, cfg.regression);
      if (exp_stdout) {
        std::cout << export_lp(m);
      } else {
        const fs::path p = fs::path(exp_dir) / model_file_name(m);
        write_text_file(p, export_lp(m));
        std::cout << p.string() << "\n";
      }
    } else if (*fit) {
      const RegressionFit f = fit_regression(fit_n, fit_range, fit_seed);
      json j{{"model", regression_to_json(f.model)}, {"r_squared_train", f.r_squared},
             {"samples", fit_n}, {"range", fit_range}, {"seed", fit_seed}};
      if (fit_holdout > 0) j["r_squared_holdout"] = evaluate_r_squared(f.model, fit_holdout, fit_range, fit_seed + 1);
      emit(j.dump(2) + "\n", fit_out);
    } else if (*gen) {
      emit(write_instance(generate_instance(gs)), gen_out);
    } else if (*ren) {
      const Instance inst = read_instance_file(ren_in);
      const json sol = json::parse(read_text_file(ren_sol));
      const RegionKind kind = region_from_string(sol.at("config").value("region", "hexagon"));
      emit(render_svg(inst, solution_from_json(sol), kind), ren_out);
    } else if (*orc) {
      const RegionKind kind = region_from_string(or_region);
      if (or_fixture) {
        std::string csv = "# certified Manhattan optima from order enumeration\n";
        csv += "# generator: sensors=" + std::to_string(or_gen.sensors) + " width=" + detail::format_fixed6(or_gen.width) +
               " height=" + detail::format_fixed6(or_gen.height) + " r_min=" + detail::format_fixed6(or_gen.r_min) +
               " r_max=" + detail::format_fixed6(or_gen.r_max) + " region=" + or_region + "\n";
        csv += "# median_gap_threshold=" + detail::format_fixed6(or_threshold) + "\n";
        csv += "seed,n,optimal_cost\n";
        for (int s = or_first; s <= or_last; ++s) {
          GeneratorSpec g = or_gen;
          g.seed = static_cast<std::uint64_t>(s);
          const Instance inst = generate_instance(g);
          const OracleResult r = brute_force_opt(inst, build_regions(inst, kind));
          char line[128];
          std::snprintf(line, sizeof line, "%d,%zu,%.9f\n", s, g.sensors, r.manhattan_cost);
          csv += line;
        }
        emit(csv, or_out);
      } else {
        if (or_in.empty()) throw ValidationError("oracle needs an instance file or --fixture");
        const Instance inst = read_instance_file(or_in);
        const OracleResult r = brute_force_opt(inst, build_regions(inst, kind));
        json route = r.order;
        route.push_back(0);
        json pts = json::array();
        for (const Point& p : r.points) pts.push_back({p.x, p.y});
        emit(json{{"instance", inst.name}, {"region", or_region}, {"route", route}, {"hitting_points", pts},
                  {"manhattan_cost", r.manhattan_cost}, {"orders_evaluated", r.orders_evaluated}}
                     .dump(2) + "\n",
             or_out);
      }
    } else if (*ben) {
      std::vector<std::string> skipped;
      std::vector<Instance> instances;
      for (const std::string& in : bench_in) {
        if (fs::is_directory(in)) {
          auto more = load_instance_dir(in, skipped);
          instances.insert(instances.end(), more.begin(), more.end());
        } else {
          try {
            instances.push_back(read_instance_file(in));
          } catch (const Error& e) {
            skipped.push_back(in + ": " + e.what());
          }
        }
      }
      std::sort(instances.begin(), instances.end(),
                [](const Instance& a, const Instance& b) { return a.name < b.name; });
      for (const std::string& s : skipped) std::cerr << "skipped " << s << "\n";
      if (instances.empty()) throw ValidationError("bench: no readable instances");
      const RegressionModel reg = load_regression(bench_reg);
      std::vector<BenchConfig> cfgs;
      for (const std::string& label : bench_cfgs) cfgs.push_back(parse_config_label(label, reg));
      BenchResult r = bench(instances, cfgs, bench_threads ? bench_threads : std::thread::hardware_concurrency());
      emit(bench_csv(r, !bench_no_time), bench_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
