#include "spiral/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spiral/io.hpp"

namespace spiral {

std::string RhoMode::label() const {
  std::ostringstream os;
  if (kind == Kind::fixed)
    os << "fixed" << value;
  else
    os << "scaled" << value;
  std::string s = os.str();
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

RhoMode RhoMode::parse(const std::string& text, bool bare_is_fixed) {
  auto parse_value = [&](const std::string& body, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(body, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("cannot parse ") + what + ": " + body);
    }
    if (used != body.size())
      throw std::invalid_argument(std::string("trailing characters in ") + what + ": " + body);
    return v;
  };
  if (text.rfind("scaled:", 0) == 0) {
    double c = parse_value(text.substr(7), "rho coefficient");
    if (!(c > 0.0)) throw std::invalid_argument("rho coefficient must be positive");
    return scaled(c);
  }
  if (text.rfind("fixed:", 0) == 0) {
    double v = parse_value(text.substr(6), "rho");
    if (!(v > 0.0)) throw std::invalid_argument("rho must be positive");
    return fixed(v);
  }
  if (!bare_is_fixed)
    throw std::invalid_argument("rho mode must be fixed:<v> or scaled:<c>, got: " + text);
  double v = parse_value(text, "rho");
  if (!(v > 0.0)) throw std::invalid_argument("rho must be positive");
  return fixed(v);
}

double DiffSeries::max_value() const {
  double m = 0.0;
  for (const DiffPoint& p : points) m = std::max(m, p.value);
  return m;
}

std::string DiffSeries::to_csv() const {
  std::ostringstream os;
  os << "t,D\n";
  for (const DiffPoint& p : points)
    os << format_double(p.t) << "," << format_double(p.value) << "\n";
  return os.str();
}

namespace {

std::vector<double> sample_times(double t_end, int intervals) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) out.push_back(t_end * k / intervals);
  return out;
}

}  // namespace

DiffSeries run_comparison(const Scenario& scenario, int s, const RhoMode& mode,
                          const ComparisonOptions& opts) {
  if (s < 1) throw std::invalid_argument("refinement s must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const double t_end = opts.t_end_override > 0.0 ? opts.t_end_override : scenario.t_end;
  const std::vector<double> times = sample_times(t_end, opts.intervals);

  IntegrationOptions ode_opts;
  ode_opts.dt = opts.ode_dt;
  Trajectory traj = simulate(scenario.shape, scenario.params, t_end, times, ode_opts);

  // The paper picks T so the spiral never reaches the outer boundary; check.
  for (const TrajectorySample& sample : traj.samples) {
    for (const Vec2& y : sample.polyline.y) {
      if (std::abs(y.x) >= 1.5 || std::abs(y.y) >= 1.5)
        throw std::runtime_error("spiral vertex left the computational box at t=" +
                                 std::to_string(sample.t));
    }
  }

  LevelSetConfig cfg = LevelSetConfig::make(
      s, mode.resolve(0.02 / s), scenario.params, scenario.xi_form, scenario.density, scenario.u0,
      opts.dt_override, opts.eps_override);
  std::vector<ScalarField> snaps = solve(cfg, initial_field(cfg), t_end, times);

  DiffSeries series;
  series.scenario = scenario.name;
  series.s = s;
  series.mode = mode;
  series.rho = cfg.grid->rho();
  series.dx = cfg.grid->dx();
  series.eps = cfg.eps;
  series.points = diff_series(traj, snaps, scenario.shape);
  series.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return series;
}

SweepPlan plan_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SweepPlan plan;
  plan.scenario = scenario_from_json_text(j.dump());
  if (!j.contains("s")) throw std::invalid_argument("sweep plan needs \"s\": [..]");
  for (const auto& v : j.at("s")) {
    int s = v.get<int>();
    if (s < 1) throw std::invalid_argument("sweep refinement values must be >= 1");
    plan.s_values.push_back(s);
  }
  if (!j.contains("rho_modes")) throw std::invalid_argument("sweep plan needs \"rho_modes\": [..]");
  for (const auto& v : j.at("rho_modes"))
    plan.modes.push_back(RhoMode::parse(v.get<std::string>(), true));
  plan.out_dir = j.value("out", std::string("sweep-out"));
  plan.options.intervals = j.value("intervals", 20);
  plan.options.ode_dt = j.value("ode_dt", 1e-6);
  plan.options.eps_override = j.value("eps", 0.0);
  plan.jobs = j.value("jobs", 1);
  return plan;
}

SweepPlan load_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return plan_from_json_text(buf.str());
}

SweepResult run_sweep(const SweepPlan& plan) {
  ensure_directory(plan.out_dir);

  struct Entry {
    int s;
    RhoMode mode;
  };
  std::vector<Entry> entries;
  for (int s : plan.s_values)
    for (const RhoMode& mode : plan.modes) entries.push_back({s, mode});

  SweepResult result;
  result.series.resize(entries.size());
  std::vector<std::optional<std::string>> errors(entries.size());

  const int jobs = std::max(1, plan.jobs);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t q = cursor.fetch_add(1);
      if (q >= entries.size()) break;
      try {
        result.series[q] = run_comparison(plan.scenario, entries[q].s, entries[q].mode,
                                          plan.options);
      } catch (const std::exception& e) {
        errors[q] = std::string(e.what());
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::future<void>> futures;
    for (int w = 0; w < jobs; ++w) futures.push_back(std::async(std::launch::async, worker));
    for (auto& f : futures) f.get();
  }

  std::ostringstream summary;
  summary << "scenario,s,rho,maxD,runtime_s\n";
  std::vector<DiffSeries> ok;
  for (std::size_t q = 0; q < entries.size(); ++q) {
    const std::string stem = plan.scenario.name + "_s" + std::to_string(entries[q].s) + "_" +
                             entries[q].mode.label();
    if (errors[q]) {
      result.failures.push_back(stem + ": " + *errors[q]);
      continue;
    }
    const DiffSeries& series = result.series[q];
    atomic_write(plan.out_dir + "/diff_" + stem + ".csv", series.to_csv());
    summary << series.scenario << "," << series.s << "," << format_double(series.rho) << ","
            << format_double(series.max_value()) << "," << format_double(series.runtime_seconds)
            << "\n";
    ok.push_back(series);
  }
  atomic_write(plan.out_dir + "/summary.csv", summary.str());
  result.series = std::move(ok);
  return result;
}

}  // namespace spiral
