#include <doctest.h>

#include <cmath>

#include "spiral/scenario.hpp"
#include "spiral/spiral_ode.hpp"

using namespace spiral;

namespace {

WulffShape shape_of(const char* name) { return preset(name).shape; }

SupportSpec regular(int count, double psi0) {
  SupportSpec spec;
  for (int j = 0; j < count; ++j) spec.facets.push_back({1.0, psi0 + kTwoPi * j / count});
  return spec;
}

}  // namespace

TEST_CASE("coefficient tables for square, triangle, hexagon") {
  CoefficientTable sq = coefficients(shape_of("square"));
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(sq.b[j]) < 1e-15);
    CHECK(sq.c_plus[j] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sq.c_minus[j] == doctest::Approx(1.0).epsilon(1e-15));
  }

  CoefficientTable tri = coefficients(shape_of("triangle"));
  const double c = 2.0 / std::sqrt(3.0);
  for (int j = 0; j < 3; ++j) {
    CHECK(tri.b[j] == doctest::Approx(-c).epsilon(1e-14));
    CHECK(tri.c_plus[j] == doctest::Approx(c).epsilon(1e-14));
    CHECK(tri.c_minus[j] == doctest::Approx(c).epsilon(1e-14));
  }

  WulffShape hex = wulff_shape_from_support(regular(6, 0.0));
  CoefficientTable hx = coefficients(hex);
  for (int j = 0; j < 6; ++j) {
    CHECK(hx.b[j] == doctest::Approx(c).epsilon(1e-14));
    CHECK(hx.c_plus[j] == doctest::Approx(c).epsilon(1e-14));
    CHECK(hx.c_minus[j] == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("rhs boundary rows and equilibrium") {
  const WulffShape shape = shape_of("square");
  const CoefficientTable coeffs = coefficients(shape);
  const EvolutionParams params{1.0, 0.02};

  SpiralState k1 = initial_state();
  CHECK(rhs(k1, coeffs, shape, params)[0] == doctest::Approx(1.0).epsilon(1e-15));
  k1.d[0] = 0.123;
  CHECK(rhs(k1, coeffs, shape, params)[0] == doctest::Approx(1.0).epsilon(1e-15));

  SpiralState k2;
  k2.d = {0.02, 0.01};
  k2.generation_times = {0.0, 0.01};
  auto dd = rhs(k2, coeffs, shape, params);
  CHECK(dd[1] == doctest::Approx(-1.0).epsilon(1e-14));  // c (1 - 0.04/0.02)

  // equilibrium lengths: every interior row vanishes
  SpiralState eq;
  eq.d.assign(6, 0.04);
  eq.generation_times.assign(6, 0.0);
  auto eqd = rhs(eq, coeffs, shape, params);
  for (int j = 2; j <= 6; ++j) CHECK(std::abs(eqd[j - 1]) < 1e-14);
  CHECK(eqd[0] == doctest::Approx(1.0).epsilon(1e-14));  // row 1 keeps the half-line drive

  const WulffShape tri_shape = shape_of("triangle");
  const CoefficientTable tri_coeffs = coefficients(tri_shape);
  const EvolutionParams tri_params{1.0, 0.01};
  SpiralState tri_eq;
  tri_eq.d.assign(5, 0.01 * 2.0 * std::sqrt(3.0));
  tri_eq.generation_times.assign(5, 0.0);
  auto tri_dd = rhs(tri_eq, tri_coeffs, tri_shape, tri_params);
  for (int j = 2; j <= 5; ++j) CHECK(std::abs(tri_dd[j - 1]) < 1e-14);

  SpiralState bad;
  bad.d = {0.0, 0.1};
  bad.generation_times = {0.0, 0.0};
  CHECK_THROWS_AS(rhs(bad, coeffs, shape, params), std::domain_error);
}

TEST_CASE("rk4 step is exact for the constant-rate first facet") {
  const WulffShape shape = shape_of("square");
  const CoefficientTable coeffs = coefficients(shape);
  const EvolutionParams params{1.0, 0.02};

  SpiralState s = initial_state();
  SpiralState next = rk4_step(s, 1e-6, coeffs, shape, params);
  CHECK(next.d[0] == 1e-6);  // rhs is constant, RK4 reproduces linear growth exactly
  CHECK(next.t == 1e-6);
  CHECK(next.k() == 1);

  // At equilibrium lengths every row but the first vanishes; the half-line
  // drive on row 1 leaks into row 2 only at O(dt^2) through the stages, so
  // rows 3+ stay put over one small step.
  SpiralState eq;
  eq.d.assign(6, 0.04);
  eq.generation_times.assign(6, 0.0);
  SpiralState eq2 = rk4_step(eq, 1e-6, coeffs, shape, params);
  CHECK(std::abs(eq2.d[1] - 0.04) < 1e-10);
  for (int j = 3; j <= 6; ++j) CHECK(std::abs(eq2.d[j - 1] - 0.04) < 1e-15);

  SpiralState frozen = rk4_step(eq, 0.0, coeffs, shape, params);
  for (int i = 0; i < 5; ++i) CHECK(frozen.d[i] == eq.d[i]);
}

TEST_CASE("generation time of the square's second facet is exact") {
  const WulffShape shape = shape_of("square");
  const CoefficientTable coeffs = coefficients(shape);
  const EvolutionParams params{1.0, 0.02};

  // d_1(t) = t crosses rho_c l / U = 0.04 exactly at t = 0.04
  auto event = advance_until_generation(initial_state(), coeffs, shape, params, 1.0);
  REQUIRE(event.has_value());
  CHECK(event->time == doctest::Approx(0.04).epsilon(1e-10));
  CHECK(event->state.d[0] == doctest::Approx(0.04).epsilon(1e-9));

  // crossing level itself
  CHECK(params.rho_c * shape.ell[1] / params.U == doctest::Approx(0.04).epsilon(1e-15));

  // no crossing before a horizon below the generation time
  CHECK_FALSE(advance_until_generation(initial_state(), coeffs, shape, params, 0.02).has_value());
}

TEST_CASE("third generation time matches the closed-form oracle") {
  // After T_2 the square decouples: d_1(T_2 + s) = 0.04 + s, so
  // d_2(s) = s - 0.04 ln(1 + 25 s); the oracle solves d_2(s) = 0.04 by
  // bisection on the closed form.
  const WulffShape shape = shape_of("square");
  const CoefficientTable coeffs = coefficients(shape);
  const EvolutionParams params{1.0, 0.02};

  double lo = 0.0, hi = 0.2;
  auto closed_form = [](double s) { return s - 0.04 * std::log1p(25.0 * s) - 0.04; };
  REQUIRE(closed_form(hi) > 0.0);
  while (hi - lo > 1e-14) {
    double mid = 0.5 * (lo + hi);
    (closed_form(mid) >= 0.0 ? hi : lo) = mid;
  }
  const double oracle_offset = hi;

  Trajectory traj = simulate(shape, params, 0.2, {}, {});
  REQUIRE(traj.generation_times.size() >= 3);
  CHECK(traj.generation_times[1] == doctest::Approx(0.04).epsilon(1e-10));
  CHECK(traj.generation_times[2] ==
        doctest::Approx(0.04 + oracle_offset).epsilon(1e-7));
}

TEST_CASE("add_facet bookkeeping") {
  SpiralState s = initial_state();
  s.t = 0.04;
  s.d[0] = 0.04;
  SpiralState next = add_facet(s);
  CHECK(next.k() == 2);
  CHECK(next.d[1] == 0.0);
  CHECK(next.generation_times.size() == 2);
  CHECK(next.generation_times[1] == 0.04);
}

TEST_CASE("vertex reconstruction") {
  const WulffShape shape = shape_of("square");
  SpiralState s = initial_state();
  s.d[0] = 0.04;
  SpiralPolyline poly = vertices(s, shape);
  CHECK(poly.y[1].x == doctest::Approx(0.0));
  CHECK(poly.y[1].y == doctest::Approx(0.0));
  CHECK(poly.y[0].x == doctest::Approx(0.04).epsilon(1e-15));  // facet 1 runs along T_1 = (1, 0)
  CHECK(std::abs(poly.y[0].y) < 1e-17);

  SpiralState zero = initial_state();
  SpiralPolyline degenerate = vertices(zero, shape);
  CHECK(norm(degenerate.y[0]) == 0.0);
  CHECK(degenerate.ray_dir.x == doctest::Approx(0.0));
  CHECK(degenerate.ray_dir.y == doctest::Approx(-1.0));  // T_0 for phi_0 = 0
}

TEST_CASE("square trajectory over one unit of time") {
  const Scenario sc = preset("square");
  std::vector<double> samples;
  for (int k = 0; k <= 20; ++k) samples.push_back(k * 0.05);
  Trajectory traj = simulate(sc.shape, sc.params, 1.0, samples, {});

  CHECK(traj.samples.size() == 21);
  // exactly one generation by t = 0.04
  int before = 0;
  for (double t : traj.generation_times)
    if (t <= 0.0401) ++before;
  CHECK(before == 2);  // T_1 = 0 and T_2 = 0.04

  // strictly increasing generation times, positive lengths, simple curve
  for (std::size_t i = 1; i < traj.generation_times.size(); ++i)
    CHECK(traj.generation_times[i] > traj.generation_times[i - 1]);
  for (const TrajectorySample& sample : traj.samples) {
    for (int j = 1; j < sample.state.k(); ++j) CHECK(sample.state.facet_length(j) > 0.0);
    CHECK(sample.polyline.simple());
    CHECK(sample.polyline.k() == sample.state.k());
  }

  // outer facet support value grows at speed U/beta_0 = 1
  const Vec2 n0 = sc.shape.normal(0);
  for (const TrajectorySample& sample : traj.samples) {
    const double s0 = dot(sample.polyline.y[0], n0);
    CHECK(s0 == doctest::Approx(sample.t).epsilon(1e-6));
  }

  // t_end = 0: only the initial state
  Trajectory trivial = simulate(sc.shape, sc.params, 0.0, {0.0}, {});
  CHECK(trivial.samples.size() == 1);
  CHECK(trivial.samples[0].state.k() == 1);
}

TEST_CASE("event times are stable under time-step halving") {
  const Scenario sc = preset("square");
  IntegrationOptions coarse;
  coarse.dt = 1e-6;
  IntegrationOptions fine;
  fine.dt = 5e-7;
  Trajectory a = simulate(sc.shape, sc.params, 0.3, {}, coarse);
  Trajectory b = simulate(sc.shape, sc.params, 0.3, {}, fine);
  REQUIRE(a.generation_times.size() == b.generation_times.size());
  for (std::size_t i = 0; i < a.generation_times.size(); ++i)
    CHECK(a.generation_times[i] == doctest::Approx(b.generation_times[i]).epsilon(1e-8));
}

TEST_CASE("forward Euler oracle agrees with RK4 on a short run") {
  const Scenario sc = preset("square");
  std::vector<double> samples = {0.06};
  IntegrationOptions rk;
  rk.dt = 1e-6;
  IntegrationOptions euler;
  euler.dt = 1e-7;
  euler.use_euler = true;
  Trajectory a = simulate(sc.shape, sc.params, 0.06, samples, rk);
  Trajectory b = simulate(sc.shape, sc.params, 0.06, samples, euler);
  REQUIRE(a.samples.size() == 1);
  REQUIRE(b.samples.size() == 1);
  REQUIRE(a.samples[0].state.k() == b.samples[0].state.k());
  for (int j = 1; j <= a.samples[0].state.k(); ++j)
    CHECK(a.samples[0].state.facet_length(j) ==
          doctest::Approx(b.samples[0].state.facet_length(j)).epsilon(1e-5));
}

TEST_CASE("triangle trajectory stays positive and simple") {
  const Scenario sc = preset("triangle");
  std::vector<double> samples;
  for (int k = 0; k <= 8; ++k) samples.push_back(k * 0.05);
  Trajectory traj = simulate(sc.shape, sc.params, 0.4, samples, {});
  for (const TrajectorySample& sample : traj.samples) {
    for (int j = 1; j < sample.state.k(); ++j) CHECK(sample.state.facet_length(j) > 0.0);
    CHECK(sample.polyline.simple());
  }
  for (std::size_t i = 1; i < traj.generation_times.size(); ++i)
    CHECK(traj.generation_times[i] > traj.generation_times[i - 1]);
}
