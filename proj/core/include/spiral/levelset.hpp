#pragma once

// Explicit finite-difference solver for the crystalline level-set equation
//
//   u_t = ~gamma(grad(u - theta)) [ rho_c div ~xi(grad(u - theta)) + U ]
//
// on the annulus W = [-1.5, 1.5]^2 \ B_rho, with theta = arg x entering only
// through its single-valued gradient.  Nodes sit at (i dx, j dx) for
// -75s <= i, j <= 75s with dx = 0.02/s; nodes inside B_rho are inactive and a
// one-node ghost ring surrounds the box.  Ghost values enforce a vanishing
// normal difference of u - theta across the boundary.  The divergence is in
// flux form: ~xi evaluated at the four cell faces from one-sided normal and
// averaged tangential differences.

#include <cstdint>
#include <memory>
#include <vector>

#include "spiral/regularizers.hpp"
#include "spiral/spiral_ode.hpp"
#include "spiral/vec2.hpp"
#include "spiral/wulff_energy.hpp"

namespace spiral {

// grad(arg x) = (-x2, x1)/|x|^2; rejects x = 0.
Vec2 theta_gradient(Vec2 x);

class Grid {
 public:
  enum class Node : std::uint8_t { dead = 0, active = 1, ghost = 2 };

  Grid(int s, double rho);

  int s() const { return s_; }
  int n() const { return n_; }          // node indices run -n..n inside the box
  int side() const { return side_; }    // array side including the ghost ring
  double dx() const { return dx_; }
  double rho() const { return rho_; }
  std::size_t size() const { return static_cast<std::size_t>(side_) * side_; }
  std::size_t active_count() const { return active_indices_.size(); }

  // i, j in [-n-1, n+1].
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i + n_ + 1) * side_ + static_cast<std::size_t>(j + n_ + 1);
  }
  double coord(int i) const { return i * dx_; }

  Node node(int i, int j) const { return status_[idx(i, j)]; }
  bool active(int i, int j) const { return node(i, j) == Node::active; }
  const std::vector<Node>& status() const { return status_; }
  const std::vector<std::size_t>& active_indices() const { return active_indices_; }

  bool same_layout(const Grid& other) const {
    return s_ == other.s_ && status_ == other.status_;
  }

  // Ghost fill plan: for ghost node ghost_target[g], average u over the
  // recorded neighbors plus their precomputed theta increments.
  struct GhostPlan {
    std::vector<std::size_t> target;
    std::vector<std::size_t> offset;    // prefix sums into nb/inc, size target+1
    std::vector<std::size_t> nb;
    std::vector<double> inc;            // grad(theta)(midpoint) . (x_g - x_a)
  };
  const GhostPlan& ghost_plan() const { return ghosts_; }

 private:
  int s_, n_, side_;
  double dx_, rho_;
  std::vector<Node> status_;
  std::vector<std::size_t> active_indices_;
  GhostPlan ghosts_;
};

struct ScalarField {
  double t = 0.0;
  std::shared_ptr<const Grid> grid;
  std::vector<double> u;  // NaN on dead nodes
};

struct LevelSetConfig {
  std::shared_ptr<const Grid> grid;
  double dt = 0.0;   // 0.1 dx^2 unless overridden
  double eps = 0.0;  // regularization width, dx unless overridden
  double u0 = 0.0;   // initial constant
  EvolutionParams params;
  XiForm form = XiForm::sector_sum;
  EnergyDensity density;  // used by the sector-sum route

  static LevelSetConfig make(int s, double rho, const EvolutionParams& params, XiForm form,
                             const EnergyDensity& density, double u0, double dt_override = 0.0,
                             double eps_override = 0.0);
};

// u = u0 on active and ghost nodes, NaN elsewhere, t = 0.
ScalarField initial_field(const LevelSetConfig& cfg);

// Fills ghost values in place; idempotent.
void apply_bc(ScalarField& field, const LevelSetConfig& cfg);

// Net outward flux of ~xi(grad(u - theta)) per cell, divided by dx.  Ghost
// values must be current.  NaN off the active set.
ScalarField divergence_term(const ScalarField& field, const LevelSetConfig& cfg);

// One explicit update; ghost values must be current.  Throws on a nonfinite
// result, naming the node.
ScalarField step(const ScalarField& field, const LevelSetConfig& cfg);

// Marches apply_bc + step with the configured dt (partial steps land exactly
// on sample times and t_end); returns snapshots at the sample times.
std::vector<ScalarField> solve(const LevelSetConfig& cfg, const ScalarField& u0, double t_end,
                               const std::vector<double>& sample_times);

// Zero set of (u - theta) mod 2pi as plot-ready polylines, clipped to the
// active region.
std::vector<std::vector<Vec2>> extract_contour(const ScalarField& field, const LevelSetConfig& cfg);

}  // namespace spiral
