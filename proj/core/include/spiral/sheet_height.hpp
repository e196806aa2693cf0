#pragma once

// Step-like branches of arg x whose only discontinuity is the spiral itself,
// their height functions h = theta / 2pi, and the normalized L1 area
// difference between the discrete and level-set spirals.
//
// The discrete branch starts from Theta_k(x) = arg x pinned to the window
// [phi_kbar + 2 pi nrot - pi/2, . + 2 pi) and drops one sheet on each wedge
// R_j = { x . N_{j+1} < s_{j+1}, x . N_j >= s_j } between consecutive facet
// lines (s_j is the support value of the line through facet j).  The
// level-set branch subtracts the wrapped remainder of u - arg x.

#include <memory>
#include <vector>

#include "spiral/levelset.hpp"
#include "spiral/spiral_ode.hpp"
#include "spiral/vec2.hpp"
#include "spiral/wulff_energy.hpp"

namespace spiral {

struct HeightField {
  enum class Source { discrete, levelset };
  double t = 0.0;
  Source source = Source::discrete;
  std::shared_ptr<const Grid> grid;
  std::vector<double> h;  // NaN off the active set
};

// Half-plane data of the sheet-dropping wedges R_0..R_{k-1}.
struct RegionStack {
  int k = 0;
  double window_lo = 0.0;        // phi_kbar + 2 pi nrot - pi/2
  std::vector<Vec2> normals;     // N_{j mod N} for j = 0..k
  std::vector<double> support;   // s_j = y_j . N_{j mod N}
};

RegionStack make_regions(const SpiralState& state, const SpiralPolyline& polyline,
                         const WulffShape& shape);

// Branch value at x (x != 0); discontinuous only across the spiral.
double theta_D(const RegionStack& regions, Vec2 x);

HeightField h_D_field(const SpiralState& state, const SpiralPolyline& polyline,
                      const WulffShape& shape, std::shared_ptr<const Grid> grid);

HeightField h_L_field(const ScalarField& field);

// Normalized L1 distance: mean of |h_D - h_L| over active nodes.
double area_difference(const HeightField& a, const HeightField& b);

struct DiffPoint {
  double t;
  double value;
};

// Pairs trajectory samples with level-set snapshots taken at the same times.
std::vector<DiffPoint> diff_series(const Trajectory& ode, const std::vector<ScalarField>& levelset,
                                   const WulffShape& shape, double time_tol = 1e-9);

}  // namespace spiral
