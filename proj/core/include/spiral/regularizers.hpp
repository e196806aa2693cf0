#pragma once

// Smoothed sign/characteristic functions and the regularized Cahn-Hoffman
// maps used by the level-set scheme.  The scheme needs the reflected density
// ~gamma(p) = gamma(-p) and its gradient ~xi = D~gamma; three evaluation
// routes are supported:
//
//   smoothed_l1          ~gamma(p) = |p1| + |p2|        (axis-aligned square)
//   smoothed_l1_rotated  same in the pi/4-rotated frame (diagonal square)
//   sector_sum           ~gamma(p) ~= sum_j (~n_j . p) zeta(f_j(p); 1, 0)
//
// The closed forms smooth each sign with sigma(z; p1, p2) evaluated at the
// local gradient components; the sector sum uses zeta(.; 1, 0).

#include "spiral/vec2.hpp"
#include "spiral/wulff_energy.hpp"

namespace spiral {

// z / sqrt(z^2 + eps^2 (|p1|+|p2|)^2), 0 at z = 0; odd in z, |sigma| <= 1.
double sigma(double z, double p1, double p2, double eps);

// (sigma + 1)/2: smoothed characteristic weight in [0, 1].
double zeta(double z, double p1, double p2, double eps);

enum class XiForm { smoothed_l1, smoothed_l1_rotated, sector_sum };

// Evaluates ~xi(p) = D~gamma(p) and ~gamma(p) with smoothing width eps.
// Untilded views xi(p) = -~xi(-p) and gamma(p) = ~gamma(-p) are provided for
// diagnostics and tests.
class XiEvaluator {
 public:
  XiEvaluator(XiForm form, const EnergyDensity& density, double eps);

  Vec2 xi_tilde(Vec2 p) const;
  double gamma_tilde(Vec2 p) const;
  double beta_tilde(Vec2) const { return 1.0; }

  Vec2 xi(Vec2 p) const { return -xi_tilde(-p); }
  double gamma(Vec2 p) const { return gamma_tilde(-p); }

  XiForm form() const { return form_; }
  double eps() const { return eps_; }
  // Reflected density vectors ~n_j = -n_j (sector_sum route).
  const std::vector<Vec2>& reflected_vectors() const { return tilde_vectors_; }

 private:
  XiForm form_;
  double eps_;
  std::vector<Vec2> tilde_vectors_;
};

}  // namespace spiral
