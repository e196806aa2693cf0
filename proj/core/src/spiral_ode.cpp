#include "spiral/spiral_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spiral {

namespace {

double positive_gap(double lo, double hi) {
  double gap = hi - lo;
  while (gap <= 0.0) gap += kTwoPi;
  while (gap > kTwoPi) gap -= kTwoPi;
  return gap;
}

int wulff_index(int facet, int n) {
  int w = facet % n;
  return w < 0 ? w + n : w;
}

void check_params(const EvolutionParams& params) {
  if (!(params.U > 0.0)) throw std::invalid_argument("driving force U must be positive");
  if (!(params.rho_c > 0.0)) throw std::invalid_argument("rho_c must be positive");
}

}  // namespace

CoefficientTable coefficients(const WulffShape& shape) {
  const int n = shape.count();
  if (n < 3) throw std::invalid_argument("Wulff shape needs at least 3 facets");

  std::vector<double> gap_plus(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double g = positive_gap(shape.phi[static_cast<std::size_t>(j)],
                            shape.phi[static_cast<std::size_t>((j + 1) % n)]);
    if (!(g > 0.0 && g < kPi))
      throw std::invalid_argument("angle gap at facet " + std::to_string(j) +
                                  " is outside (0, pi)");
    gap_plus[static_cast<std::size_t>(j)] = g;
  }

  CoefficientTable table;
  table.b.resize(static_cast<std::size_t>(n));
  table.c_plus.resize(static_cast<std::size_t>(n));
  table.c_minus.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int jm = (j + n - 1) % n;
    const int jp = (j + 1) % n;
    const double gp = gap_plus[static_cast<std::size_t>(j)];
    const double gm = gap_plus[static_cast<std::size_t>(jm)];
    table.b[static_cast<std::size_t>(j)] =
        (std::cos(gp) / std::sin(gp) + std::cos(gm) / std::sin(gm)) /
        shape.beta[static_cast<std::size_t>(j)];
    table.c_plus[static_cast<std::size_t>(j)] =
        1.0 / (shape.beta[static_cast<std::size_t>(jp)] * std::sin(gp));
    table.c_minus[static_cast<std::size_t>(j)] =
        1.0 / (shape.beta[static_cast<std::size_t>(jm)] * std::sin(gm));
  }
  return table;
}

SpiralState initial_state() {
  SpiralState s;
  s.t = 0.0;
  s.d = {0.0};
  s.generation_times = {0.0};
  return s;
}

std::vector<double> rhs(const SpiralState& state, const CoefficientTable& coeffs,
                        const WulffShape& shape, const EvolutionParams& params) {
  check_params(params);
  const int k = state.k();
  const int n = shape.count();
  if (k < 1) throw std::invalid_argument("state has no facets");

  // Driving force on facet m; the half-line has d_0 = infinity, so F_0 = U.
  // Facet k is pinned at the center and does not move, so its own force
  // never enters a row.
  auto force = [&](int m) -> double {
    if (m == 0) return params.U;
    double dm = state.facet_length(m);
    if (!(dm > 0.0))
      throw std::domain_error("facet length d_" + std::to_string(m) + " is not positive");
    return params.U - params.rho_c * shape.ell[static_cast<std::size_t>(wulff_index(m, n))] / dm;
  };

  std::vector<double> out(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const int w = wulff_index(j, n);
    double v = coeffs.c_minus[static_cast<std::size_t>(w)] * force(j - 1);
    if (j < k) {
      v -= coeffs.b[static_cast<std::size_t>(w)] * force(j);
      if (j <= k - 2) v += coeffs.c_plus[static_cast<std::size_t>(w)] * force(j + 1);
    }
    out[static_cast<std::size_t>(j - 1)] = v;
  }
  return out;
}

SpiralState rk4_step(const SpiralState& state, double dt, const CoefficientTable& coeffs,
                     const WulffShape& shape, const EvolutionParams& params) {
  const std::size_t m = state.d.size();
  SpiralState work = state;

  std::vector<double> k1 = rhs(state, coeffs, shape, params);
  for (std::size_t i = 0; i < m; ++i) work.d[i] = state.d[i] + 0.5 * dt * k1[i];
  std::vector<double> k2 = rhs(work, coeffs, shape, params);
  for (std::size_t i = 0; i < m; ++i) work.d[i] = state.d[i] + 0.5 * dt * k2[i];
  std::vector<double> k3 = rhs(work, coeffs, shape, params);
  for (std::size_t i = 0; i < m; ++i) work.d[i] = state.d[i] + dt * k3[i];
  std::vector<double> k4 = rhs(work, coeffs, shape, params);

  SpiralState next = state;
  next.t = state.t + dt;
  for (std::size_t i = 0; i < m; ++i)
    next.d[i] = state.d[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return next;
}

SpiralState euler_step(const SpiralState& state, double dt, const CoefficientTable& coeffs,
                       const WulffShape& shape, const EvolutionParams& params) {
  std::vector<double> k1 = rhs(state, coeffs, shape, params);
  SpiralState next = state;
  next.t = state.t + dt;
  for (std::size_t i = 0; i < state.d.size(); ++i) next.d[i] = state.d[i] + dt * k1[i];
  return next;
}

SpiralState add_facet(const SpiralState& state) {
  SpiralState next = state;
  next.d.push_back(0.0);
  next.generation_times.push_back(state.t);
  return next;
}

SpiralPolyline vertices(const SpiralState& state, const WulffShape& shape) {
  const int k = state.k();
  const int n = shape.count();
  SpiralPolyline poly;
  poly.t = state.t;
  poly.ray_dir = shape.tangent(0);
  poly.y.resize(static_cast<std::size_t>(k) + 1);
  poly.y[static_cast<std::size_t>(k)] = {0.0, 0.0};
  for (int j = k; j >= 1; --j) {
    poly.y[static_cast<std::size_t>(j - 1)] =
        poly.y[static_cast<std::size_t>(j)] +
        state.facet_length(j) * shape.tangent(wulff_index(j, n));
  }
  return poly;
}

namespace {

// Proper/touching intersection test for closed segments, with a tolerance on
// the cross products.  Shared endpoints of adjacent facets are excluded by
// the caller.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol) {
  auto orient = [&](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol)) &&
      ((o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol)))
    return true;
  return false;
}

}  // namespace

bool SpiralPolyline::simple(double tol) const {
  const int kk = k();
  // Segments: facet j runs y[j] -> y[j-1] for j = 1..k; the ray is clipped to
  // a long segment from y[0].
  std::vector<std::pair<Vec2, Vec2>> segs;
  segs.reserve(static_cast<std::size_t>(kk) + 1);
  for (int j = kk; j >= 1; --j)
    segs.push_back({y[static_cast<std::size_t>(j)], y[static_cast<std::size_t>(j - 1)]});
  segs.push_back({y[0], y[0] + 1e3 * ray_dir});

  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 2; j < segs.size(); ++j) {
      if (segments_intersect(segs[i].first, segs[i].second, segs[j].first, segs[j].second, tol))
        return false;
    }
  }
  return true;
}

namespace {

SpiralState take_step(const SpiralState& state, double dt, const CoefficientTable& coeffs,
                      const WulffShape& shape, const EvolutionParams& params, bool euler) {
  return euler ? euler_step(state, dt, coeffs, shape, params)
               : rk4_step(state, dt, coeffs, shape, params);
}

void check_positivity(const SpiralState& state, double floor) {
  for (int j = 1; j < state.k(); ++j) {
    if (state.facet_length(j) < floor)
      throw std::domain_error("facet length d_" + std::to_string(j) +
                              " dropped below the positivity floor at t=" +
                              std::to_string(state.t));
  }
}

}  // namespace

std::optional<GenerationEvent> advance_until_generation(
    const SpiralState& state, const CoefficientTable& coeffs, const WulffShape& shape,
    const EvolutionParams& params, double t_max, const IntegrationOptions& opts) {
  check_params(params);
  const int n = shape.count();
  const double threshold =
      params.rho_c * shape.ell[static_cast<std::size_t>(wulff_index(state.k(), n))] / params.U;
  if (!(state.d.back() < threshold))
    throw std::invalid_argument("newest facet already at or past the critical length");

  SpiralState cur = state;
  while (cur.t < t_max) {
    double dt = std::min(opts.dt, t_max - cur.t);
    if (dt <= 1e-15 * std::max(1.0, std::abs(cur.t))) break;
    SpiralState prev = cur;
    cur = take_step(prev, dt, coeffs, shape, params, opts.use_euler);
    check_positivity(cur, opts.positivity_floor);
    if (cur.d.back() >= threshold) {
      // First crossing inside (prev.t, cur.t]; bisect on the step offset.
      double lo = 0.0, hi = cur.t - prev.t;
      while (hi - lo > opts.event_tol) {
        double mid = 0.5 * (lo + hi);
        SpiralState probe = take_step(prev, mid, coeffs, shape, params, opts.use_euler);
        if (probe.d.back() >= threshold)
          hi = mid;
        else
          lo = mid;
      }
      SpiralState at_event = take_step(prev, hi, coeffs, shape, params, opts.use_euler);
      return GenerationEvent{at_event, at_event.t};
    }
  }
  return std::nullopt;
}

Trajectory simulate(const WulffShape& shape, const EvolutionParams& params, double t_end,
                    const std::vector<double>& sample_times, const IntegrationOptions& opts) {
  check_params(params);
  if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  std::vector<double> samples = sample_times;
  std::sort(samples.begin(), samples.end());
  for (double s : samples)
    if (s < 0.0 || s > t_end + 1e-12)
      throw std::invalid_argument("sample times must lie in [0, t_end]");

  const int n = shape.count();
  const CoefficientTable coeffs = coefficients(shape);

  Trajectory traj;
  SpiralState cur = initial_state();
  traj.generation_times = cur.generation_times;

  std::size_t next_sample = 0;
  auto emit_at = [&](const SpiralState& s) {
    traj.samples.push_back({s.t, s, vertices(s, shape)});
  };
  while (next_sample < samples.size() && samples[next_sample] <= 0.0) {
    emit_at(cur);
    ++next_sample;
  }

  // Samples inside an accepted step are linear interpolants of the two
  // bracketing states (same facet count on both ends).
  auto emit_between = [&](const SpiralState& a, const SpiralState& b) {
    while (next_sample < samples.size() && samples[next_sample] <= b.t) {
      double tau = samples[next_sample];
      double lambda = (b.t > a.t) ? (tau - a.t) / (b.t - a.t) : 1.0;
      SpiralState interp = a;
      interp.t = tau;
      for (std::size_t i = 0; i < a.d.size(); ++i)
        interp.d[i] = a.d[i] + lambda * (b.d[i] - a.d[i]);
      emit_at(interp);
      ++next_sample;
    }
  };

  double t_stop = t_end;
  if (!samples.empty()) t_stop = std::max(t_stop, samples.back());

  while (cur.t < t_stop) {
    const double threshold =
        params.rho_c * shape.ell[static_cast<std::size_t>(wulff_index(cur.k(), n))] / params.U;
    double dt = std::min(opts.dt, t_stop - cur.t);
    if (dt <= 1e-15 * std::max(1.0, std::abs(cur.t))) break;
    SpiralState prev = cur;
    cur = take_step(prev, dt, coeffs, shape, params, opts.use_euler);
    check_positivity(cur, opts.positivity_floor);

    if (cur.d.back() >= threshold) {
      double lo = 0.0, hi = cur.t - prev.t;
      while (hi - lo > opts.event_tol) {
        double mid = 0.5 * (lo + hi);
        SpiralState probe = take_step(prev, mid, coeffs, shape, params, opts.use_euler);
        if (probe.d.back() >= threshold)
          hi = mid;
        else
          lo = mid;
      }
      cur = take_step(prev, hi, coeffs, shape, params, opts.use_euler);
      emit_between(prev, cur);
      cur = add_facet(cur);
      traj.generation_times.push_back(cur.t);
    } else {
      emit_between(prev, cur);
    }
  }

  // Trailing samples within rounding of the stop time.
  while (next_sample < samples.size()) {
    SpiralState s = cur;
    s.t = samples[next_sample];
    emit_at(s);
    ++next_sample;
  }

  traj.final_state = cur;
  return traj;
}

}  // namespace spiral
