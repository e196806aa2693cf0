#pragma once

// Discrete facet-dynamics model of a pinned polygonal spiral.  Facet numbers
// run 1..k from the outermost moving facet to the newest one at the center;
// facet 0 is the outgoing half-line.  Facet j inherits Wulff data from index
// j mod N.  Lengths d_j obey a tridiagonal-style ODE; a new zero-length facet
// is inserted at the center each time d_k grows past rho_c * ell_k / U.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spiral/vec2.hpp"
#include "spiral/wulff_energy.hpp"

namespace spiral {

struct EvolutionParams {
  double U = 1.0;      // driving force, > 0
  double rho_c = 0.0;  // capillary coefficient, > 0
};

// b_j, c_j^± per Wulff index: b_j = (cot(phi_{j+1}-phi_j) + cot(phi_j-phi_{j-1}))/beta_j,
// c_j^± = ±1/(beta_{j±1} sin(phi_{j±1}-phi_j)); both c are positive for gaps in (0, pi).
struct CoefficientTable {
  std::vector<double> b;
  std::vector<double> c_plus;
  std::vector<double> c_minus;
};

CoefficientTable coefficients(const WulffShape& shape);

struct SpiralState {
  double t = 0.0;
  std::vector<double> d;                 // d[i] is the length of facet i+1
  std::vector<double> generation_times;  // T_1..T_k

  int k() const { return static_cast<int>(d.size()); }
  double facet_length(int j) const { return d[static_cast<std::size_t>(j - 1)]; }
};

// Initial curve: a single zero-length facet plus the half-line, T_1 = 0.
SpiralState initial_state();

// Time derivatives of d_1..d_k.  Throws std::domain_error when some d_j <= 0
// for j < k (d_k >= 0 is allowed).
std::vector<double> rhs(const SpiralState& state, const CoefficientTable& coeffs,
                        const WulffShape& shape, const EvolutionParams& params);

// Classical RK4 update of the lengths; k is unchanged.
SpiralState rk4_step(const SpiralState& state, double dt, const CoefficientTable& coeffs,
                     const WulffShape& shape, const EvolutionParams& params);

SpiralState euler_step(const SpiralState& state, double dt, const CoefficientTable& coeffs,
                       const WulffShape& shape, const EvolutionParams& params);

// Appends the new center facet (d_{k+1} = 0) at the current time.
SpiralState add_facet(const SpiralState& state);

struct SpiralPolyline {
  double t = 0.0;
  std::vector<Vec2> y;  // y[j] for j = 0..k, y[k] is the pinned center
  Vec2 ray_dir;         // direction of the outgoing half-line L_0

  int k() const { return static_cast<int>(y.size()) - 1; }
  bool simple(double tol = 1e-12) const;  // no self-intersections
};

// y_k = O, y_{j-1} = y_j + d_j T_{j mod N}, plus the ray along T_0.
SpiralPolyline vertices(const SpiralState& state, const WulffShape& shape);

struct GenerationEvent {
  SpiralState state;  // advanced to the crossing time (before add_facet)
  double time;
};

struct IntegrationOptions {
  double dt = 1e-6;
  bool use_euler = false;        // forward Euler instead of RK4 (oracle runs)
  double event_tol = 1e-12;      // bisection tolerance on the crossing time
  double positivity_floor = 1e-14;
};

// Integrates from a state with d_k(T_k) = 0 until d_k first reaches
// rho_c * ell_k / U, then localizes the crossing by bisection within the
// straddling step.  Returns nullopt when no crossing occurs before t_max.
std::optional<GenerationEvent> advance_until_generation(
    const SpiralState& state, const CoefficientTable& coeffs, const WulffShape& shape,
    const EvolutionParams& params, double t_max, const IntegrationOptions& opts = {});

struct TrajectorySample {
  double t;
  SpiralState state;
  SpiralPolyline polyline;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<double> generation_times;
  SpiralState final_state;
};

// Runs the generation loop from the initial curve up to t_end, recording
// linearly interpolated states at the requested sample times.
Trajectory simulate(const WulffShape& shape, const EvolutionParams& params, double t_end,
                    const std::vector<double>& sample_times, const IntegrationOptions& opts = {});

}  // namespace spiral
