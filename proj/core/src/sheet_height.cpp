#include "spiral/sheet_height.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spiral {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

RegionStack make_regions(const SpiralState& state, const SpiralPolyline& polyline,
                         const WulffShape& shape) {
  const int k = state.k();
  const int n = shape.count();
  if (polyline.k() != k) throw std::invalid_argument("polyline and state facet counts differ");

  RegionStack regions;
  regions.k = k;
  const int kbar = k % n;
  const int nrot = k / n;
  regions.window_lo = shape.phi[static_cast<std::size_t>(kbar)] + kTwoPi * nrot - kPi / 2.0;

  regions.normals.resize(static_cast<std::size_t>(k) + 1);
  regions.support.resize(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    const Vec2 nj = shape.normal(j % n);
    regions.normals[static_cast<std::size_t>(j)] = nj;
    regions.support[static_cast<std::size_t>(j)] = dot(polyline.y[static_cast<std::size_t>(j)], nj);
  }
  return regions;
}

double theta_D(const RegionStack& regions, Vec2 x) {
  if (x.x == 0.0 && x.y == 0.0) throw std::domain_error("theta_D undefined at the origin");
  double theta = wrap_into(std::atan2(x.y, x.x), regions.window_lo);
  for (int j = 0; j < regions.k; ++j) {
    const bool below_next = dot(x, regions.normals[static_cast<std::size_t>(j + 1)]) <
                            regions.support[static_cast<std::size_t>(j + 1)];
    const bool above_own = dot(x, regions.normals[static_cast<std::size_t>(j)]) >=
                           regions.support[static_cast<std::size_t>(j)];
    if (below_next && above_own) theta -= kTwoPi;
  }
  return theta;
}

HeightField h_D_field(const SpiralState& state, const SpiralPolyline& polyline,
                      const WulffShape& shape, std::shared_ptr<const Grid> grid) {
  const RegionStack regions = make_regions(state, polyline, shape);
  HeightField field;
  field.t = state.t;
  field.source = HeightField::Source::discrete;
  field.grid = grid;
  field.h.assign(grid->size(), kNaN);

  const Grid& g = *grid;
  const int n = g.n();
  const auto* status = g.status().data();
#pragma omp parallel for schedule(static)
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      const std::size_t c = g.idx(i, j);
      if (status[c] != Grid::Node::active) continue;
      field.h[c] = theta_D(regions, {g.coord(i), g.coord(j)}) / kTwoPi;
    }
  }
  return field;
}

HeightField h_L_field(const ScalarField& field) {
  if (!field.grid) throw std::invalid_argument("scalar field has no grid");
  HeightField out;
  out.t = field.t;
  out.source = HeightField::Source::levelset;
  out.grid = field.grid;
  out.h.assign(field.grid->size(), kNaN);

  const Grid& g = *field.grid;
  const int n = g.n();
  const auto* status = g.status().data();
#pragma omp parallel for schedule(static)
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      const std::size_t c = g.idx(i, j);
      if (status[c] != Grid::Node::active) continue;
      const double u = field.u[c];
      // w is the wrapped remainder above the branch; theta_L = u - w sits on
      // the sheet just below u, with nodes exactly on the curve taking the
      // lower sheet.
      const double w = wrap_2pi(u - std::atan2(g.coord(j), g.coord(i)));
      out.h[c] = (u - w) / kTwoPi;
    }
  }
  return out;
}

double area_difference(const HeightField& a, const HeightField& b) {
  if (!a.grid || !b.grid) throw std::invalid_argument("height field has no grid");
  if (!a.grid->same_layout(*b.grid))
    throw std::invalid_argument("height fields live on different grids");
  double acc = 0.0;
  const auto& idxs = a.grid->active_indices();
  for (std::size_t c : idxs) acc += std::abs(a.h[c] - b.h[c]);
  return acc / static_cast<double>(idxs.size());
}

std::vector<DiffPoint> diff_series(const Trajectory& ode, const std::vector<ScalarField>& levelset,
                                   const WulffShape& shape, double time_tol) {
  if (ode.samples.size() != levelset.size())
    throw std::invalid_argument("sample counts differ: " + std::to_string(ode.samples.size()) +
                                " vs " + std::to_string(levelset.size()));
  std::vector<DiffPoint> out;
  out.reserve(levelset.size());
  for (std::size_t q = 0; q < levelset.size(); ++q) {
    const TrajectorySample& sample = ode.samples[q];
    const ScalarField& snap = levelset[q];
    if (std::abs(sample.t - snap.t) > time_tol)
      throw std::invalid_argument("sample time mismatch at index " + std::to_string(q));
    HeightField hd = h_D_field(sample.state, sample.polyline, shape, snap.grid);
    HeightField hl = h_L_field(snap);
    out.push_back({snap.t, area_difference(hd, hl)});
  }
  return out;
}

}  // namespace spiral
