#include "spiral/wulff_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace spiral {

namespace {

// Angular extent of the cone { p : w . p >= 0 for all w in ws } as an
// interval [lo, hi] on the universal cover.  Each constraint is a closed half
// circle; anchoring the frame at the first constraint makes the circular
// intersection a plain interval intersection.
bool cone_arc(const std::vector<Vec2>& ws, double* lo_out, double* hi_out) {
  bool have = false;
  double lo = 0.0, hi = 0.0, anchor = 0.0;
  for (const Vec2& w : ws) {
    double len = norm(w);
    if (len < 1e-300) continue;  // trivially satisfied
    double c = angle_of(w);
    if (!have) {
      anchor = c;
      lo = c - kPi / 2.0;
      hi = c + kPi / 2.0;
      have = true;
      continue;
    }
    c = wrap_into(c, anchor - kPi);
    lo = std::max(lo, c - kPi / 2.0);
    hi = std::min(hi, c + kPi / 2.0);
  }
  if (!have) {  // no constraints: full circle
    lo = 0.0;
    hi = kTwoPi;
  }
  *lo_out = lo;
  *hi_out = hi;
  return hi - lo > 0.0;
}

std::vector<Vec2> difference_constraints(const std::vector<Vec2>& v, int j,
                                         const std::vector<int>& against) {
  std::vector<Vec2> ws;
  ws.reserve(against.size());
  for (int k : against) ws.push_back(v[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(k)]);
  return ws;
}

}  // namespace

double eval_support(const SupportSpec& spec, Vec2 p) {
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < spec.count(); ++j) best = std::max(best, dot(spec.m(j), p));
  return best;
}

double eval_energy(const EnergyDensity& density, Vec2 p) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& n : density.vectors) best = std::max(best, dot(n, p));
  return best;
}

double EnergyDensity::indicator(int j, Vec2 p) const {
  double gj = gauge(j, p);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count(); ++k) {
    if (k == j) continue;
    worst = std::min(worst, gj - gauge(k, p));
  }
  return worst;
}

SectorReport validate_sectors(const std::vector<Vec2>& vectors, double tol) {
  const int n = static_cast<int>(vectors.size());
  if (n < 3) throw std::invalid_argument("validate_sectors: need at least 3 vectors");

  SectorReport report;
  report.sectors.resize(static_cast<std::size_t>(n));
  report.pass = true;
  for (int j = 0; j < n; ++j) {
    std::vector<int> all;
    for (int k = 0; k < n; ++k)
      if (k != j) all.push_back(k);
    std::vector<int> nb = {(j + n - 1) % n, (j + 1) % n};

    SectorInfo& info = report.sectors[static_cast<std::size_t>(j)];
    double lo_all, hi_all, lo_nb, hi_nb;
    bool ok_all = cone_arc(difference_constraints(vectors, j, all), &lo_all, &hi_all);
    cone_arc(difference_constraints(vectors, j, nb), &lo_nb, &hi_nb);

    info.nonempty = ok_all && (hi_all - lo_all > tol);
    info.lo = lo_all;
    info.hi = hi_all;
    // The two arcs may sit on different branches of the universal cover.
    const double shift = kTwoPi * std::round((lo_all - lo_nb) / kTwoPi);
    info.neighbors_only = info.nonempty && std::abs(lo_all - lo_nb - shift) <= tol &&
                          std::abs(hi_all - hi_nb - shift) <= tol;
    if (!info.nonempty || !info.neighbors_only) report.pass = false;
  }
  return report;
}

void validate_spec(const SupportSpec& spec, double tol) {
  const int n = spec.count();
  if (n < 3) throw AssumptionError("count", n, "support spec needs at least 3 facets");
  for (int j = 0; j < n; ++j) {
    if (!(spec.facets[static_cast<std::size_t>(j)].eta > 0.0))
      throw AssumptionError("eta", j, "eta_" + std::to_string(j) + " must be positive");
  }
  // (γ1): strictly increasing within one period.
  for (int j = 0; j + 1 < n; ++j) {
    if (!(spec.facets[static_cast<std::size_t>(j)].psi <
          spec.facets[static_cast<std::size_t>(j + 1)].psi - tol))
      throw AssumptionError("gamma1", j, "psi must increase strictly at index " + std::to_string(j));
  }
  if (!(spec.facets[static_cast<std::size_t>(n - 1)].psi <
        spec.facets[0].psi + kTwoPi - tol))
    throw AssumptionError("gamma1", n - 1, "psi range exceeds one period");
  // (γ2): cyclic gaps below pi.
  for (int j = 0; j < n; ++j) {
    double a = spec.facets[static_cast<std::size_t>(j)].psi;
    double b = spec.facets[static_cast<std::size_t>((j + 1) % n)].psi;
    double gap = (j + 1 < n) ? b - a : b + kTwoPi - a;
    if (!(gap < kPi - tol))
      throw AssumptionError("gamma2", j, "angle gap at index " + std::to_string(j) +
                                             " is not below pi");
  }
  // (γ3): sector partition by the m-vectors.
  std::vector<Vec2> ms;
  ms.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) ms.push_back(spec.m(j));
  SectorReport sectors = validate_sectors(ms, tol);
  for (int j = 0; j < n; ++j) {
    const SectorInfo& info = sectors.sectors[static_cast<std::size_t>(j)];
    if (!info.nonempty)
      throw AssumptionError("gamma3", j, "sector P_" + std::to_string(j) + " is empty");
    if (!info.neighbors_only)
      throw AssumptionError("gamma3", j,
                            "sector P_" + std::to_string(j) + " is not cut by its neighbors alone");
  }
}

EnergyDensity EnergyDensity::from_vectors(const std::vector<Vec2>& n, double tol) {
  EnergyDensity d;
  const int count = static_cast<int>(n.size());
  if (count < 3) throw std::invalid_argument("energy density needs at least 3 vectors");

  struct Entry {
    double angle, radius;
    Vec2 v;
  };
  std::vector<Entry> entries;
  entries.reserve(n.size());
  for (const Vec2& v : n) {
    double r = norm(v);
    if (!(r > 0.0)) throw std::invalid_argument("energy density vector has zero length");
    entries.push_back({wrap_2pi(angle_of(v)), r, v});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    if (entries[i + 1].angle - entries[i].angle <= tol)
      throw std::invalid_argument("energy density angles must be strictly increasing");
  }
  for (const Entry& e : entries) {
    d.vectors.push_back(e.v);
    d.radii.push_back(e.radius);
    d.angles.push_back(e.angle);
  }
  return d;
}

EnergyDensity dual(const SupportSpec& spec) {
  validate_spec(spec);
  const int n = spec.count();
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const SupportFacet& cur = spec.facets[static_cast<std::size_t>(j)];
    const SupportFacet& prev = spec.facets[static_cast<std::size_t>((j + n - 1) % n)];
    double a = cur.eta * std::cos(cur.psi) - prev.eta * std::cos(prev.psi);
    double b = cur.eta * std::sin(cur.psi) - prev.eta * std::sin(prev.psi);
    if (std::hypot(a, b) < 1e-300)
      throw AssumptionError("gamma2", j, "consecutive support vectors coincide");
    double theta = std::atan2(b, a) + kPi / 2.0;
    double denom = cur.eta * std::cos(theta - cur.psi);
    if (std::abs(denom) < 1e-12)
      throw AssumptionError("gamma2", j,
                            "degenerate dual radius at index " + std::to_string(j));
    double r = 1.0 / denom;
    if (r < 0.0) {  // same vector, positive radius representation
      r = -r;
      theta += kPi;
    }
    out.push_back(r * unit_dir(theta));
  }
  return EnergyDensity::from_vectors(out);
}

SupportSpec as_support(const EnergyDensity& density) {
  SupportSpec spec;
  spec.facets.reserve(density.vectors.size());
  for (int j = 0; j < density.count(); ++j)
    spec.facets.push_back({density.radii[static_cast<std::size_t>(j)],
                           density.angles[static_cast<std::size_t>(j)]});
  return spec;
}

WulffShape wulff_shape_from_support(const SupportSpec& spec, const std::vector<double>& beta) {
  validate_spec(spec);
  const int n = spec.count();
  if (!beta.empty() && static_cast<int>(beta.size()) != n)
    throw std::invalid_argument("mobility table size mismatch");

  WulffShape shape;
  shape.phi.reserve(static_cast<std::size_t>(n));
  shape.beta.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    shape.phi.push_back(spec.facets[static_cast<std::size_t>(j)].psi);
    double bj = beta.empty() ? 1.0 : beta[static_cast<std::size_t>(j)];
    if (!(bj > 0.0)) throw std::invalid_argument("mobility must be positive");
    shape.beta.push_back(bj);
  }

  // Vertex j: intersection of the supporting lines of facets j and j+1.
  shape.vertices.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Vec2 a = spec.m(j);
    Vec2 b = spec.m((j + 1) % n);
    double det = cross(a, b);
    if (std::abs(det) <= 1e-12 * norm(a) * norm(b))
      throw AssumptionError("degenerate-intersection", j,
                            "supporting lines " + std::to_string(j) + " and " +
                                std::to_string((j + 1) % n) + " are nearly parallel");
    shape.vertices[static_cast<std::size_t>(j)] = {(b.y - a.y) / det, (a.x - b.x) / det};
  }
  shape.ell.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Vec2 hi = shape.vertices[static_cast<std::size_t>(j)];
    Vec2 lo = shape.vertices[static_cast<std::size_t>((j + n - 1) % n)];
    double len = norm(hi - lo);
    if (!(len > 0.0))
      throw AssumptionError("degenerate-facet", j, "facet " + std::to_string(j) + " has zero length");
    shape.ell[static_cast<std::size_t>(j)] = len;
  }
  return shape;
}

NormalizationReport normalization_check(const SupportSpec& spec, const WulffShape& shape,
                                        double tol) {
  NormalizationReport report;
  report.pass = true;
  report.residuals.reserve(shape.phi.size());
  for (int j = 0; j < shape.count(); ++j) {
    double r = std::abs(eval_support(spec, shape.normal(j)) - 1.0);
    report.residuals.push_back(r);
    if (r > tol) report.pass = false;
  }
  return report;
}

}  // namespace spiral
