#pragma once

// Built-in experiment scenarios and JSON loading.  Each scenario carries the
// support function, its dual density, the Wulff shape, the flow parameters,
// and the level-set evaluation route for xi.

#include <string>

#include "spiral/regularizers.hpp"
#include "spiral/spiral_ode.hpp"
#include "spiral/wulff_energy.hpp"

namespace spiral {

struct Scenario {
  std::string name;
  SupportSpec support;
  EnergyDensity density;
  WulffShape shape;
  EvolutionParams params;
  double t_end = 1.0;
  XiForm xi_form = XiForm::sector_sum;
  // Initial level-set constant.  phi_0 + 3 pi/2 puts the initial ray on the
  // discrete model's half-line (angle phi_0 - pi/2) with matching branch
  // windows, so the height fields agree at t = 0.
  double u0 = 0.0;
};

// name in {square, diagonal, triangle}.
Scenario preset(const std::string& name);

// Either {"preset": "<name>", ...overrides} or a custom geometry
// {"support": [[eta, psi], ...], "U":, "rho_c":, "tmax":, "xi":, "u0":}.
Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

}  // namespace spiral
