#pragma once

// Paired ODE / level-set runs and the D(t) tables: one comparison samples
// both models at t_k = k T / 20, builds both height fields per sample, and
// records the normalized area differences.  Sweeps fan out over refinements
// and center-radius modes and emit CSV bundles.

#include <optional>
#include <string>
#include <vector>

#include "spiral/scenario.hpp"
#include "spiral/sheet_height.hpp"

namespace spiral {

struct RhoMode {
  enum class Kind { fixed, scaled };
  Kind kind = Kind::fixed;
  double value = 0.0;  // radius (fixed) or coefficient c with rho = (c - 1e-8) dx

  static RhoMode fixed(double rho) { return {Kind::fixed, rho}; }
  static RhoMode scaled(double c) { return {Kind::scaled, c}; }
  double resolve(double dx) const {
    return kind == Kind::fixed ? value : (value - 1e-8) * dx;
  }
  std::string label() const;
  // Parses "fixed:<v>" / "scaled:<c>" (compare) or "<v>" / "scaled:<c>".
  static RhoMode parse(const std::string& text, bool bare_is_fixed);
};

struct ComparisonOptions {
  int intervals = 20;        // samples at k T / intervals, k = 0..intervals
  double ode_dt = 1e-6;
  double dt_override = 0.0;  // level-set dt, 0 keeps 0.1 dx^2
  double eps_override = 0.0; // regularization width, 0 keeps dx
  double t_end_override = 0.0;
};

struct DiffSeries {
  std::string scenario;
  int s = 0;
  RhoMode mode;
  double rho = 0.0;
  double dx = 0.0;
  double eps = 0.0;
  std::vector<DiffPoint> points;
  double runtime_seconds = 0.0;

  double max_value() const;
  std::string to_csv() const;  // header + t,D rows
};

DiffSeries run_comparison(const Scenario& scenario, int s, const RhoMode& mode,
                          const ComparisonOptions& opts = {});

struct SweepPlan {
  Scenario scenario;
  std::vector<int> s_values;
  std::vector<RhoMode> modes;
  std::string out_dir;
  ComparisonOptions options;
  int jobs = 1;
};

SweepPlan plan_from_json_text(const std::string& text);
SweepPlan load_plan_file(const std::string& path);

struct SweepResult {
  std::vector<DiffSeries> series;
  std::vector<std::string> failures;  // per-entry failure notes
};

// Runs every (s, mode) entry, writes one diff CSV per entry plus summary.csv;
// per-entry failures are isolated and recorded.
SweepResult run_sweep(const SweepPlan& plan);

}  // namespace spiral
