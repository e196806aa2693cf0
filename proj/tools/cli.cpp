#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>
#include <json.hpp>

#include "spiral/experiments.hpp"
#include "spiral/io.hpp"
#include "spiral/levelset.hpp"
#include "spiral/scenario.hpp"
#include "spiral/sheet_height.hpp"

namespace spiral::cli {

namespace {

Scenario resolve_scenario(const std::string& source) {
  if (std::filesystem::exists(source)) return load_scenario_file(source);
  return preset(source);
}

std::string positive_int_check(const std::string& value) {
  try {
    if (std::stoll(value) >= 1) return {};
  } catch (const std::exception&) {
  }
  return "s must be >= 1";
}

std::vector<double> uniform_times(double t_end, int intervals) {
  std::vector<double> out;
  for (int k = 0; k <= intervals; ++k) out.push_back(t_end * k / intervals);
  return out;
}

int cmd_run_ode(const std::string& scenario_src, double tmax, double dt, int samples,
                const std::string& out_dir) {
  Scenario sc = resolve_scenario(scenario_src);
  const double t_end = tmax > 0.0 ? tmax : sc.t_end;
  IntegrationOptions opts;
  opts.dt = dt;
  Trajectory traj = simulate(sc.shape, sc.params, t_end, uniform_times(t_end, samples), opts);

  std::ostringstream rows;
  rows << "t,k,d...\n";
  std::ostringstream poly;
  poly << "t,j,x,y\n";
  for (const TrajectorySample& sample : traj.samples) {
    rows << format_double(sample.t) << "," << sample.state.k();
    for (double d : sample.state.d) rows << "," << format_double(d);
    rows << "\n";
    for (int j = 0; j <= sample.polyline.k(); ++j) {
      const Vec2& y = sample.polyline.y[static_cast<std::size_t>(j)];
      poly << format_double(sample.t) << "," << j << "," << format_double(y.x) << ","
           << format_double(y.y) << "\n";
    }
  }
  atomic_write(out_dir + "/ode_samples.csv", rows.str());
  atomic_write(out_dir + "/ode_polyline.csv", poly.str());
  std::cout << "wrote " << out_dir << "/ode_samples.csv (" << traj.samples.size()
            << " samples, final k=" << traj.final_state.k() << ")\n";
  return 0;
}

int cmd_run_levelset(const std::string& scenario_src, int s, const std::string& rho_text,
                     double tmax, int samples, double eps, double dt, double u0_override,
                     bool have_u0, const std::string& out_dir) {
  Scenario sc = resolve_scenario(scenario_src);
  const double t_end = tmax > 0.0 ? tmax : sc.t_end;
  RhoMode mode = RhoMode::parse(rho_text, true);
  if (have_u0) sc.u0 = u0_override;

  LevelSetConfig cfg = LevelSetConfig::make(s, mode.resolve(0.02 / s), sc.params, sc.xi_form,
                                            sc.density, sc.u0, dt, eps);
  std::vector<double> times = uniform_times(t_end, std::max(1, samples));
  std::vector<ScalarField> snaps = solve(cfg, initial_field(cfg), t_end, times);

  const Grid& g = *cfg.grid;
  for (std::size_t q = 0; q < snaps.size(); ++q) {
    std::ostringstream field;
    field << "i,j,x,y,u\n";
    for (int i = -g.n(); i <= g.n(); ++i) {
      for (int j = -g.n(); j <= g.n(); ++j) {
        if (!g.active(i, j)) continue;
        field << i << "," << j << "," << format_double(g.coord(i)) << ","
              << format_double(g.coord(j)) << "," << format_double(snaps[q].u[g.idx(i, j)])
              << "\n";
      }
    }
    std::ostringstream contour;
    contour << "t,poly,x,y\n";
    auto polylines = extract_contour(snaps[q], cfg);
    for (std::size_t p = 0; p < polylines.size(); ++p)
      for (const Vec2& v : polylines[p])
        contour << format_double(snaps[q].t) << "," << p << "," << format_double(v.x) << ","
                << format_double(v.y) << "\n";
    const std::string tag = std::to_string(q);
    atomic_write(out_dir + "/field_" + tag + ".csv", field.str());
    atomic_write(out_dir + "/contour_" + tag + ".csv", contour.str());
  }
  std::cout << "wrote " << snaps.size() << " field/contour snapshots to " << out_dir << "\n";
  return 0;
}

int cmd_compare(const std::string& scenario_src, int s, const std::string& rho_mode_text,
                double eps, double ode_dt, int intervals, const std::string& out_dir) {
  Scenario sc = resolve_scenario(scenario_src);
  RhoMode mode = RhoMode::parse(rho_mode_text, false);
  ComparisonOptions opts;
  opts.intervals = intervals;
  opts.ode_dt = ode_dt;
  opts.eps_override = eps;
  DiffSeries series = run_comparison(sc, s, mode, opts);

  const std::string stem = sc.name + "_s" + std::to_string(s) + "_" + mode.label();
  atomic_write(out_dir + "/diff_" + stem + ".csv", series.to_csv());
  std::ostringstream summary;
  summary << "scenario,s,rho,maxD,runtime_s\n"
          << series.scenario << "," << series.s << "," << format_double(series.rho) << ","
          << format_double(series.max_value()) << "," << format_double(series.runtime_seconds)
          << "\n";
  atomic_write(out_dir + "/summary.csv", summary.str());
  std::cout << stem << ": max D = " << series.max_value() << " (eps=" << series.eps
            << ", rho=" << format_double(series.rho) << ")\n";
  return 0;
}

int cmd_sweep(const std::string& plan_path, int jobs_override) {
  SweepPlan plan = load_plan_file(plan_path);
  if (jobs_override > 0) plan.jobs = jobs_override;
  SweepResult result = run_sweep(plan);
  for (const DiffSeries& s : result.series)
    std::cout << s.scenario << " s=" << s.s << " " << s.mode.label() << ": max D = "
              << s.max_value() << "\n";
  for (const std::string& f : result.failures) std::cerr << "FAILED " << f << "\n";
  return result.failures.empty() ? 0 : 2;
}

int cmd_dual(const std::string& source) {
  Scenario sc = resolve_scenario(source);
  const EnergyDensity& d = sc.density;
  std::cout << "n-vectors of gamma for " << sc.name << ":\n";
  for (int j = 0; j < d.count(); ++j) {
    std::cout << "  n_" << j << " = (" << format_double(d.vectors[static_cast<std::size_t>(j)].x)
              << ", " << format_double(d.vectors[static_cast<std::size_t>(j)].y)
              << ")  r=" << format_double(d.radii[static_cast<std::size_t>(j)])
              << " theta=" << format_double(d.angles[static_cast<std::size_t>(j)]) << "\n";
  }
  return 0;
}

std::vector<Vec2> parse_vector_list(const std::string& text) {
  std::vector<Vec2> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("vectors must be x,y pairs separated by ';'");
    out.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
  }
  return out;
}

int cmd_validate(const std::string& source, const std::string& vectors_text) {
  if (!vectors_text.empty()) {
    SectorReport report = validate_sectors(parse_vector_list(vectors_text));
    for (std::size_t j = 0; j < report.sectors.size(); ++j) {
      const SectorInfo& s = report.sectors[j];
      std::cout << "P_" << j << ": " << (s.nonempty ? "nonempty" : "EMPTY");
      if (s.nonempty && !s.neighbors_only) std::cout << " (not cut by neighbors alone)";
      std::cout << "\n";
    }
    std::cout << (report.pass ? "sector check passed" : "sector check FAILED") << "\n";
    return report.pass ? 0 : 2;
  }
  Scenario sc = resolve_scenario(source);  // construction runs (γ1)-(γ3)
  NormalizationReport norm = normalization_check(sc.support, sc.shape);
  std::cout << "scenario " << sc.name << ": assumptions hold, normalization "
            << (norm.pass ? "passed" : "FAILED") << "\n";
  return norm.pass ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"spiralcc: crystalline spiral growth, discrete facet ODE vs level-set"};
  app.footer("Thread count is capped by OMP_NUM_THREADS.");
  app.require_subcommand(1);

  std::string scenario = "square";
  std::string out_dir = ".";
  std::string rho_text = "0.02";
  std::string rho_mode_text;
  std::string plan_path;
  std::string vectors_text;
  int s = 2;
  int samples = 20;
  int intervals = 20;
  int jobs = 0;
  double tmax = 0.0;
  double dt_ode = 1e-6;
  double dt_ls = 0.0;
  double eps = 0.0;
  double u0 = 0.0;

  auto* ode = app.add_subcommand("run-ode", "integrate the discrete facet model");
  ode->add_option("--scenario", scenario, "preset name or scenario JSON path");
  ode->add_option("--tmax", tmax, "final time (default: scenario T)");
  ode->add_option("--dt", dt_ode, "RK4 time step")->check(CLI::PositiveNumber);
  ode->add_option("--samples", samples, "number of sample intervals")->check(CLI::PositiveNumber);
  ode->add_option("--out", out_dir, "output directory");

  auto* ls = app.add_subcommand("run-levelset", "run the level-set solver");
  ls->add_option("--scenario", scenario, "preset name or scenario JSON path");
  ls->add_option("--s", s, "grid refinement (dx = 0.02/s)")->check(positive_int_check);
  ls->add_option("--rho", rho_text, "center radius: <float> or scaled:<c>");
  ls->add_option("--tmax", tmax, "final time (default: scenario T)");
  ls->add_option("--samples", samples, "number of snapshot intervals");
  ls->add_option("--eps", eps, "regularization width (default dx)");
  ls->add_option("--dt", dt_ls, "time step (default 0.1 dx^2)");
  auto* u0_opt = ls->add_option("--u0", u0, "initial constant (default phi_0 + 3pi/2)");
  ls->add_option("--out", out_dir, "output directory");

  auto* cmp = app.add_subcommand("compare", "paired run and D(t) series");
  cmp->add_option("--scenario", scenario, "preset name or scenario JSON path");
  cmp->add_option("--s", s, "grid refinement")->check(positive_int_check);
  cmp->add_option("--rho-mode", rho_mode_text, "fixed:<v> or scaled:<c>")->required();
  cmp->add_option("--eps", eps, "regularization width (default dx)");
  cmp->add_option("--ode-dt", dt_ode, "discrete-model time step")->check(CLI::PositiveNumber);
  cmp->add_option("--intervals", intervals, "number of sample intervals")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run a sweep plan");
  sweep->add_option("--plan", plan_path, "sweep plan JSON")->required();
  sweep->add_option("--jobs", jobs, "parallel sweep entries");

  auto* dual_cmd = app.add_subcommand("dual", "print the dual density vectors");
  dual_cmd->add_option("--preset,--scenario", scenario, "preset name or scenario JSON path");

  auto* validate_cmd = app.add_subcommand("validate", "check structural assumptions");
  validate_cmd->add_option("--preset,--scenario", scenario, "preset name or scenario JSON path");
  validate_cmd->add_option("--vectors", vectors_text, "inline list x,y;x,y;... for sector checks");

  try {
    app.parse(argc, argv);
    if (ode->parsed()) return cmd_run_ode(scenario, tmax, dt_ode, samples, out_dir);
    if (ls->parsed())
      return cmd_run_levelset(scenario, s, rho_text, tmax, samples, eps, dt_ls, u0,
                              u0_opt->count() > 0, out_dir);
    if (cmp->parsed())
      return cmd_compare(scenario, s, rho_mode_text, eps, dt_ode, intervals, out_dir);
    if (sweep->parsed()) return cmd_sweep(plan_path, jobs);
    if (dual_cmd->parsed()) return cmd_dual(scenario);
    if (validate_cmd->parsed()) return cmd_validate(scenario, vectors_text);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::system_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("spiralcc");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace spiral::cli
